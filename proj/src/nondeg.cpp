#include "bilform/nondeg.hpp"

namespace bilform {

const char* case_name(RiehmCase c) {
    switch (c) {
    case RiehmCase::I_paired: return "I";
    case RiehmCase::IIa: return "IIa";
    case RiehmCase::IIb: return "IIb";
    }
    return "?";
}

Matrix restricted_gram(const Matrix& A, const Subspace& W) {
    Matrix B = W.as_columns();
    return B.transpose() * A * B;
}

AsymmetryData asymmetry(const BilSpace& space) {
    const Matrix& A = space.gram();
    if (rank(A) != space.dim()) fail(Errc::DegenerateForm, "asymmetry needs a non-degenerate form");
    Matrix sigma = inverse(A) * A.transpose();
    if (!(sigma.transpose() * A * sigma == A)) fail(Errc::InternalInconsistency, "asymmetry is not an isometry");
    AsymmetryData d{sigma, min_poly(sigma), {}};
    const bool char2 = space.field().p() == 2;
    for (auto& pc : primary_components(sigma)) {
        d.components.push_back({pc.p, pc.exponent, pc.component, RiehmCase::IIa, std::nullopt, false});
    }
    for (std::size_t i = 0; i < d.components.size(); ++i) {
        AsymComponent& c = d.components[i];
        Poly adj = poly_adjoint(c.p);
        if (adj == c.p) {
            c.kase = (c.p.degree() > 1 || !char2) ? RiehmCase::IIa : RiehmCase::IIb;
            continue;
        }
        c.kase = RiehmCase::I_paired;
        for (std::size_t j = 0; j < d.components.size(); ++j)
            if (d.components[j].p == adj) c.partner = j;
        if (!c.partner || d.components[*c.partner].V.dim() != c.V.dim())
            fail(Errc::InternalInconsistency, "Case I component without a matching partner");
        c.representative = c.p < adj;
    }
    return d;
}

PMData pm_data(const BilSpace& space) {
    const Matrix& A = space.gram();
    const PrimeField& F = space.field();
    const std::size_t n = space.dim();
    if (rank(A) != n) fail(Errc::DegenerateForm, "pm_data needs a non-degenerate form");
    PMData d{A + A.transpose(), A - A.transpose(), false, false, {}, {}, {}, {}};
    d.nondeg_plus = rank(d.phi_plus) == n;
    d.nondeg_minus = rank(d.phi_minus) == n;
    Poly ps = min_poly(inverse(A) * A.transpose());
    if (d.nondeg_plus != (ps.eval(F.neg(1)) != 0) || d.nondeg_minus != (ps.eval(1) != 0))
        fail(Errc::InternalInconsistency, "rank test disagrees with the minimal polynomial criterion");
    if (d.nondeg_plus) {
        Matrix ip = inverse(d.phi_plus);
        d.sigma_pm = ip * d.phi_minus;
        d.sigma_p = ip * A;
    }
    if (d.nondeg_minus) {
        Matrix im = inverse(d.phi_minus);
        d.sigma_mp = im * d.phi_plus;
        d.sigma_m = im * A;
    }
    return d;
}

namespace {

bool in_lie(const Matrix& X, const Matrix& phi) { return (X.transpose() * phi + phi * X).is_zero(); }

const Matrix& part_form(const PMData& pm, Part part) {
    if (part == Part::plus ? !pm.nondeg_plus : !pm.nondeg_minus) fail(Errc::PartDegenerate, "requested part is degenerate");
    return part == Part::plus ? pm.phi_plus : pm.phi_minus;
}

}  // namespace

LieReport lie_checks(const PMData& pm) {
    if (!pm.nondeg_plus && !pm.nondeg_minus) fail(Errc::PartDegenerate, "both symmetric and alternating parts are degenerate");
    LieReport r;
    if (pm.nondeg_plus) {
        r.plus_checked = true;
        r.plus_in_o = in_lie(*pm.sigma_pm, pm.phi_plus);
    }
    if (pm.nondeg_minus) {
        r.minus_checked = true;
        r.minus_in_sp = in_lie(*pm.sigma_mp, pm.phi_minus);
    }
    return r;
}

bool is_in_G(const PMData& pm, const Matrix& g, Part part) {
    const Matrix& phi = part_form(pm, part);
    const Matrix& s = part == Part::plus ? *pm.sigma_p : *pm.sigma_m;
    return g.transpose() * phi * g == phi && g * s == s * g;
}

bool is_in_G_mixed(const PMData& pm, const Matrix& g, Part part) {
    const Matrix& phi = part_form(pm, part);
    const Matrix& s = part == Part::plus ? *pm.sigma_pm : *pm.sigma_mp;
    return g.transpose() * phi * g == phi && g * s == s * g;
}

Matrix canonical_block(const PrimeField& F, BlockKind kind, std::size_t n, std::optional<u32> lambda) {
    if (n == 0) fail(Errc::BadShape, "block size must be positive");
    Matrix M(F, n, n);
    switch (kind) {
    case BlockKind::H: {
        if (n % 2) fail(Errc::BadShape, "H_n needs even n");
        if (!lambda) fail(Errc::BadShape, "H_n needs lambda");
        const std::size_t m = n / 2;
        for (std::size_t k = 0; k < m; ++k) {
            M.at(k, m + k) = 1;
            M.at(m + k, k) = *lambda % F.p();
            if (k + 1 < m) M.at(m + k + 1, k) = 1;
        }
        break;
    }
    case BlockKind::Gamma:
        // row r (1-based) carries (-1)^(n-r) at columns n-r+1 and n-r+2
        for (std::size_t r = 1; r <= n; ++r) {
            u32 v = ((n - r) % 2) ? F.neg(1) : 1;
            M.at(r - 1, n - r) = v;
            if (n - r + 1 < n) M.at(r - 1, n - r + 1) = v;
        }
        break;
    case BlockKind::J:
        if (n % 2 == 0) fail(Errc::BadShape, "J_n(0) as an indecomposable degenerate block needs odd n");
        M = jordan_block(F, n);
        break;
    }
    return M;
}

SvReport sv_check(const BilSpace& space) {
    const PrimeField& F = space.field();
    if (F.p() == 2) fail(Errc::WrongCase, "sv check needs odd characteristic");
    PMData pm = pm_data(space);
    Matrix sigma = inverse(space.gram()) * space.gram().transpose();
    auto facs = poly_factor(min_poly(sigma));
    if (facs.size() != 1 || facs[0].first.degree() != 1) fail(Errc::WrongCase, "minimal polynomial of sigma is not a power of t - 1 or t + 1");
    const u32 root = F.neg(facs[0].first.coeff(0));
    Matrix I = Matrix::identity(F, space.dim());
    SvReport r;
    if (root == 1) {
        if (!pm.nondeg_plus) fail(Errc::InternalInconsistency, "symmetric part degenerate for unipotent sigma");
        r.sign = 1;
        Matrix a = sigma - I;
        r.type_sigma = nilpotent_type(a);
        r.type_mixed = nilpotent_type(*pm.sigma_pm);
        r.similar = similar(a, *pm.sigma_pm);
    } else if (root == F.neg(1)) {
        if (!pm.nondeg_minus) fail(Errc::InternalInconsistency, "alternating part degenerate for -unipotent sigma");
        r.sign = -1;
        Matrix a = sigma + I;
        r.type_sigma = nilpotent_type(a);
        r.type_mixed = nilpotent_type(*pm.sigma_mp);
        r.similar = similar(a, *pm.sigma_mp);
    } else {
        fail(Errc::WrongCase, "minimal polynomial of sigma is not a power of t - 1 or t + 1");
    }
    return r;
}

CaseIResult case_I_reduction(const AsymmetryData& asym, std::size_t component) {
    if (component >= asym.components.size()) fail(Errc::BadParams, "component index out of range");
    const AsymComponent& c = asym.components[component];
    if (c.kase != RiehmCase::I_paired) fail(Errc::NotCaseI, "component is not Case I");
    const PrimeField& F = asym.sigma.field();
    const std::size_t d = c.V.dim();
    Matrix B = c.V.as_columns();
    auto S = solve(B, asym.sigma * B);
    if (!S) fail(Errc::InternalInconsistency, "primary component is not sigma-invariant");
    CaseIResult r{*S, 0, std::nullopt};
    // XS = SX, unknown X[i][j] at i*d + j
    std::vector<Vec> rows;
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            Vec row(d * d, 0);
            for (std::size_t k = 0; k < d; ++k) {
                row[i * d + k] = F.add(row[i * d + k], S->at(k, j));
                row[k * d + j] = F.sub(row[k * d + j], S->at(i, k));
            }
            rows.push_back(row);
        }
    auto basis = kernel_basis(Matrix::from_rows(F, d * d, rows));
    r.system_dim = basis.size();
    BigInt total = big_pow(F.p(), r.system_dim);
    if (total > BigInt(1) << 20) return r;
    // odometer over coefficient vectors
    std::vector<u32> coef(basis.size(), 0);
    BigInt count = 0;
    Vec x(d * d, 0);
    for (;;) {
        Matrix X(F, d, d);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) X.at(i, j) = x[i * d + j];
        if (rank(X) == d) ++count;
        std::size_t pos = 0;
        while (pos < coef.size()) {
            x = vec_axpy(F, x, 1, basis[pos]);
            if (++coef[pos] < F.p()) break;
            coef[pos] = 0;  // wrapped: x already back to its value before this digit moved
            ++pos;
        }
        if (pos == coef.size()) break;
    }
    r.predicted_order = count;
    return r;
}

}  // namespace bilform
