#include "bilform/structure.hpp"

#include <sstream>

namespace bilform {

const char* family_name(GenLabel::Family f) {
    switch (f) {
    case GenLabel::Family::X: return "X";
    case GenLabel::Family::Torus: return "Torus";
    case GenLabel::Family::E_transvection: return "E_transvection";
    case GenLabel::Family::B_basis: return "B_basis";
    case GenLabel::Family::K_lift: return "K_lift";
    case GenLabel::Family::Even: return "Even";
    case GenLabel::Family::Ndeg: return "Ndeg";
    }
    return "?";
}

std::string GenLabel::to_string() const {
    std::ostringstream os;
    os << family_name(family);
    switch (family) {
    case Family::X:
    case Family::E_transvection:
        os << " g^{" << i << ',' << i + j << ',' << p << ',' << q << "}_{" << 2 * k + 1 << ',' << scalar << '}';
        break;
    case Family::Torus: os << " g^{" << i << ',' << p << "}_" << scalar; break;
    default: os << " #" << k; break;
    }
    return os.str();
}

bool is_isometry(const Matrix& A, const Matrix& g) { return g.transpose() * A * g == A; }

Matrix commutator(const Matrix& a, const Matrix& b) { return inverse(a) * inverse(b) * a * b; }

namespace {

void check_range(const BlockSignature& sig, int i, int p) {
    if (i < 1 || i > sig.t) fail(Errc::BadParams, "block family index out of range");
    if (p < 1 || p > sig.m[static_cast<std::size_t>(i - 1)]) fail(Errc::BadParams, "block copy index out of range");
}

Matrix checked(const AdaptedBasis& b, const Matrix& M) {
    if (!is_isometry(b.canonical, M)) fail(Errc::InternalInconsistency, "generator is not an isometry");
    return b.to_original(M);
}

}  // namespace

Matrix gen_x(const AdaptedBasis& b, int i, int j, int p, int q, int k, u32 y) {
    const BlockSignature& sig = b.signature;
    if (j < 0 || k < 0) fail(Errc::BadParams, "negative j or k");
    check_range(sig, i, p);
    check_range(sig, i + j, q);
    if (j == 0 && p == q) fail(Errc::BadParams, "p == q needs j > 0");
    const int s = sig.s[static_cast<std::size_t>(i - 1)];
    const int d = sig.s[static_cast<std::size_t>(i + j - 1)];
    if (k > s - d) fail(Errc::BadParams, "k exceeds s_i - s_{i+j}");
    const PrimeField& F = b.field();
    y %= F.p();
    Matrix M = Matrix::identity(F, b.dim());
    for (int c = 0; c <= d; ++c) {
        std::size_t ecol = b.column(i, p, 2 * (k + c) + 1);
        std::size_t frow = b.column(i + j, q, 2 * c + 1);
        M.at(frow, ecol) = F.add(M.at(frow, ecol), y);
    }
    for (int c = 1; c <= d; ++c) {
        std::size_t fcol = b.column(i + j, q, 2 * c);
        std::size_t erow = b.column(i, p, 2 * (k + c));
        M.at(erow, fcol) = F.sub(M.at(erow, fcol), y);
    }
    return checked(b, M);
}

Matrix gen_torus(const AdaptedBasis& b, int i, int p, u32 x) {
    const PrimeField& F = b.field();
    x %= F.p();
    if (x == 0) fail(Errc::ZeroScalar, "torus parameter must be nonzero");
    check_range(b.signature, i, p);
    const OddBlock& blk = b.block(i, p);
    Matrix M = Matrix::identity(F, b.dim());
    const u32 xi = F.inv(x);
    for (int k = 1; k <= 2 * blk.s + 1; ++k) {
        std::size_t c = blk.first_col + static_cast<std::size_t>(k - 1);
        M.at(c, c) = (k % 2) ? x : xi;
    }
    return checked(b, M);
}

std::vector<LabeledGen> e_generators(const AdaptedBasis& b, int i) {
    const BlockSignature& sig = b.signature;
    if (i < 1 || i > sig.t) fail(Errc::BadParams, "block family index out of range");
    const int m = sig.m[static_cast<std::size_t>(i - 1)];
    std::vector<LabeledGen> out;
    for (int p = 1; p <= m; ++p)
        for (int q = 1; q <= m; ++q)
            if (p != q)
                out.push_back({{GenLabel::Family::E_transvection, i, 0, p, q, 0, 1}, gen_x(b, i, 0, p, q, 0, 1)});
    const u32 root = b.field().primitive_root();
    if (root != 1)
        for (int p = 1; p <= m; ++p) out.push_back({{GenLabel::Family::Torus, i, 0, p, 0, 0, root}, gen_torus(b, i, p, root)});
    return out;
}

std::vector<LabeledGen> x_generators(const AdaptedBasis& b) {
    const BlockSignature& sig = b.signature;
    std::vector<LabeledGen> out;
    for (int i = 1; i <= sig.t; ++i)
        for (int j = 1; i + j <= sig.t; ++j) {
            const int kmax = sig.s[static_cast<std::size_t>(i - 1)] - sig.s[static_cast<std::size_t>(i + j - 1)];
            for (int k = 0; k <= kmax; ++k)
                for (int p = 1; p <= sig.m[static_cast<std::size_t>(i - 1)]; ++p)
                    for (int q = 1; q <= sig.m[static_cast<std::size_t>(i + j - 1)]; ++q)
                        out.push_back({{GenLabel::Family::X, i, j, p, q, k, 1}, gen_x(b, i, j, p, q, k, 1)});
        }
    return out;
}

std::vector<LabeledGen> torus_generators(const AdaptedBasis& b) {
    const u32 root = b.field().primitive_root();
    std::vector<LabeledGen> out;
    for (const auto& blk : b.odd) out.push_back({{GenLabel::Family::Torus, blk.i, 0, blk.p, 0, 0, root}, gen_torus(b, blk.i, blk.p, root)});
    return out;
}

StructureReport dims_report(const AdaptedBasis& b, u64 q) {
    const BlockSignature& sig = b.signature;
    StructureReport r;
    r.signature = sig;
    r.q = q;
    const auto t = static_cast<std::size_t>(sig.t);
    const u64 n = b.dim();
    const u64 summ = static_cast<u64>(sig.sum_m());
    for (std::size_t i = 0; i < t; ++i)
        for (std::size_t j = i + 1; j < t; ++j)
            r.dim_U += static_cast<u64>(sig.s[i] - sig.s[j] + 1) * static_cast<u64>(sig.m[i] * sig.m[j]);
    u64 n_inf = 0;
    for (std::size_t i = 0; i < t; ++i) n_inf += static_cast<u64>(sig.m[i] * (sig.s[i] + 1));
    const u64 n_up = n_inf + sig.even_dim() + sig.ndeg;
    r.dim_K = (n - n_inf) * summ;
    r.dim_B = (n - n_up) * summ;
    r.dim_K_mod_B = (sig.even_dim() + sig.ndeg) * summ;
    if (r.dim_K != r.dim_B + r.dim_K_mod_B) fail(Errc::InternalInconsistency, "dim K != dim B + dim K/B");

    u64 total = 0;
    for (int j = 1; j < sig.t; ++j) {
        int kj = -1;
        for (int k = 0;; ++k) {
            SeriesEntry e{j, k, 0, {}};
            for (int i = 1; i + j <= sig.t; ++i)
                if (k <= sig.s[static_cast<std::size_t>(i - 1)] - sig.s[static_cast<std::size_t>(i + j - 1)]) {
                    e.I.push_back(i);
                    e.d += static_cast<u64>(sig.m[static_cast<std::size_t>(i - 1)] * sig.m[static_cast<std::size_t>(i + j - 1)]);
                }
            if (e.I.empty()) break;
            kj = k;
            total += e.d;
            r.series.push_back(std::move(e));
        }
        r.kj.push_back(kj);
    }
    if (total != r.dim_U) fail(Errc::InternalInconsistency, "series dimensions do not add up to dim U");

    for (std::size_t i = 0; i < t; ++i) {
        for (int k = 0; k <= sig.s[i]; ++k) r.constituents.push_back({'S', static_cast<int>(i + 1), 2 * k + 1, sig.m[i]});
        for (int k = 1; k <= sig.s[i]; ++k) r.constituents.push_back({'Q', static_cast<int>(i + 1), 2 * k, sig.m[i]});
    }
    r.class_N = sig.t > 0 ? sig.t - 1 : 0;

    // [K, K] lies in the central subgroup B, and the commutator of two K/B lifts is the antisymmetrized
    // pairing of their M-components through the Gram of M = V_even + V_ndeg. With a single odd block that
    // pairing vanishes iff the Gram is symmetric; with two or more it never does.
    if (r.dim_K == 0) {
        r.class_K = 0;
    } else if (r.dim_B == 0 || r.dim_K_mod_B == 0) {
        r.class_K = 1;
    } else {
        const std::size_t m0 = n - sig.even_dim() - sig.ndeg;
        bool symmetric = true;
        for (std::size_t i = m0; i < n && symmetric; ++i)
            for (std::size_t j = m0; j < i && symmetric; ++j) symmetric = b.canonical.at(i, j) == b.canonical.at(j, i);
        r.class_K = summ == 1 && symmetric ? 1 : 2;
    }
    return r;
}

GroupOrder order_formula(const StructureReport& r, u64 q, const GroupOrder& even_order, const GroupOrder& ndeg_order) {
    GroupOrder g = GroupOrder::power(q, r.dim_K + r.dim_U);
    for (int m : r.signature.m) g *= GroupOrder::gl(q, static_cast<u64>(m));
    g *= even_order;
    g *= ndeg_order;
    return g;
}

EvenCentralizer even_centralizer_data(const AdaptedBasis& b, u64 q) {
    const PrimeField& F = b.field();
    std::vector<std::size_t> idx;
    for (const auto& blk : b.even)
        for (int k = 0; k < 2 * blk.s; ++k) idx.push_back(blk.first_col + static_cast<std::size_t>(k));
    if (idx.empty()) return {Matrix(F, 0, 0), Partition{}, GroupOrder(q)};
    Matrix G = b.canonical.submatrix(idx, idx);
    BilSpace sub(G);
    const TowerData& T = sub.towers();
    auto yv = T.L_inf.vectors();
    auto zv = T.R_inf.vectors();
    const std::size_t a = yv.size();
    if (zv.size() != a) fail(Errc::InternalInconsistency, "L_inf and R_inf of the even part differ in dimension");
    Matrix MYZ(F, a, a), MZY(F, a, a);
    for (std::size_t i = 0; i < a; ++i)
        for (std::size_t j = 0; j < a; ++j) {
            MYZ.at(i, j) = bilinear(G, yv[i], zv[j]);
            MZY.at(j, i) = bilinear(G, zv[j], yv[i]);
        }
    Matrix u = inverse(MZY) * MYZ.transpose();
    Partition type = nilpotent_type(u);
    return {u, type, centralizer_order_gl(type, q)};
}

std::vector<Matrix> basis_of_B(const AdaptedBasis& b) {
    const PrimeField& F = b.field();
    const Matrix& C = b.canonical;
    std::vector<std::size_t> inf, dag;
    for (const auto& blk : b.odd)
        for (int k = 1; k <= 2 * blk.s + 1; ++k) (k % 2 ? inf : dag).push_back(blk.first_col + static_cast<std::size_t>(k - 1));
    const std::size_t ni = inf.size(), nd = dag.size();
    if (nd == 0) return {};
    // unknown f[c][a]: coefficient of inf[c] in f(dag[a]); index c*nd + a
    const std::size_t nun = ni * nd;
    std::vector<Vec> rows;
    for (std::size_t a = 0; a < nd; ++a)
        for (std::size_t bb = 0; bb < nd; ++bb) {
            // phi(e_a, f e_b) + phi(f e_a, e_b) = 0
            Vec r(nun, 0);
            for (std::size_t c = 0; c < ni; ++c) {
                r[c * nd + bb] = F.add(r[c * nd + bb], C.at(dag[a], inf[c]));
                r[c * nd + a] = F.add(r[c * nd + a], C.at(inf[c], dag[bb]));
            }
            rows.push_back(r);
        }
    std::vector<Matrix> out;
    for (const auto& sol : kernel_basis(Matrix::from_rows(F, nun, rows))) {
        Matrix M = Matrix::identity(F, b.dim());
        for (std::size_t c = 0; c < ni; ++c)
            for (std::size_t a = 0; a < nd; ++a) M.at(inf[c], dag[a]) = sol[c * nd + a];
        out.push_back(checked(b, M));
    }
    return out;
}

KCoordinates k_coordinates(const AdaptedBasis& b) {
    const PrimeField& F = b.field();
    std::vector<std::size_t> inf, mid, dag;
    for (const auto& blk : b.odd)
        for (int k = 1; k <= 2 * blk.s + 1; ++k) (k % 2 ? inf : dag).push_back(blk.first_col + static_cast<std::size_t>(k - 1));
    for (const auto& blk : b.even)
        for (int k = 0; k < 2 * blk.s; ++k) mid.push_back(blk.first_col + static_cast<std::size_t>(k));
    for (std::size_t k = 0; k < b.ndeg_dim; ++k) mid.push_back(b.ndeg_first + k);
    KCoordinates kc{Matrix(F), inf.size(), mid.size(), dag.size(), Matrix(F), Matrix(F), Matrix(F)};
    std::vector<std::size_t> order = inf;
    order.insert(order.end(), mid.begin(), mid.end());
    order.insert(order.end(), dag.begin(), dag.end());
    std::vector<std::size_t> all_rows(b.dim());
    for (std::size_t k = 0; k < b.dim(); ++k) all_rows[k] = k;
    kc.P = b.P.submatrix(all_rows, order);
    kc.A1 = b.canonical.submatrix(inf, dag);
    kc.A2 = b.canonical.submatrix(mid, mid);
    kc.A3 = b.canonical.submatrix(dag, inf);
    return kc;
}

namespace {

Matrix neg(const Matrix& M) { return M.scaled(M.field().neg(1)); }

bool pair_ok(const KCoordinates& kc, const Matrix& Y1, const Matrix& Y2) {
    Matrix t1 = Y1.transpose() * kc.A1 + kc.A2 * Y2;
    Matrix t2 = Y2.transpose() * kc.A2 + kc.A3 * Y1;
    return t1.is_zero() && t2.is_zero();
}

}  // namespace

Matrix lift_pair(const AdaptedBasis& b, const Matrix& Y1, const Matrix& Y2) {
    const PrimeField& F = b.field();
    KCoordinates kc = k_coordinates(b);
    const std::size_t ni = kc.n_inf, nm = kc.n_mid, nd = kc.n_dag;
    if (Y1.rows() != ni || Y1.cols() != nm || Y2.rows() != nm || Y2.cols() != nd)
        fail(Errc::ShapeMismatch, "lift_pair: Y1 must be inf x mid and Y2 mid x dag");
    if (!pair_ok(kc, Y1, Y2)) fail(Errc::ConstraintViolated, "pair does not satisfy the linear conditions");
    // Z^T A1 + A3 Z = -Y2^T A2 Y2, unknown Z (ni x nd), index r*nd + c
    Matrix rhsM = neg(Y2.transpose() * kc.A2 * Y2);
    const std::size_t nun = ni * nd;
    std::vector<Vec> rows;
    Vec rhs;
    for (std::size_t a = 0; a < nd; ++a)
        for (std::size_t c = 0; c < nd; ++c) {
            Vec r(nun, 0);
            // (Z^T A1)[a][c] = sum_r Z[r][a] A1[r][c]; (A3 Z)[a][c] = sum_r A3[a][r] Z[r][c]
            for (std::size_t rr = 0; rr < ni; ++rr) {
                r[rr * nd + a] = F.add(r[rr * nd + a], kc.A1.at(rr, c));
                r[rr * nd + c] = F.add(r[rr * nd + c], kc.A3.at(a, rr));
            }
            rows.push_back(r);
            rhs.push_back(rhsM.at(a, c));
        }
    Matrix Z(F, ni, nd);
    if (nun > 0) {
        auto sol = solve(Matrix::from_rows(F, nun, rows), rhs);
        if (!sol) fail(Errc::InternalInconsistency, "Z equation has no solution");
        for (std::size_t rr = 0; rr < ni; ++rr)
            for (std::size_t c = 0; c < nd; ++c) Z.at(rr, c) = (*sol)[rr * nd + c];
    }
    const std::size_t n = ni + nm + nd;
    Matrix X = Matrix::identity(F, n);
    for (std::size_t r = 0; r < ni; ++r)
        for (std::size_t c = 0; c < nm; ++c) X.at(r, ni + c) = Y1.at(r, c);
    for (std::size_t r = 0; r < nm; ++r)
        for (std::size_t c = 0; c < nd; ++c) X.at(ni + r, ni + nm + c) = Y2.at(r, c);
    for (std::size_t r = 0; r < ni; ++r)
        for (std::size_t c = 0; c < nd; ++c) X.at(r, ni + nm + c) = Z.at(r, c);
    Matrix g = kc.P * X * inverse(kc.P);
    if (!is_isometry(b.gram, g)) fail(Errc::InternalInconsistency, "lifted element is not an isometry");
    return g;
}

std::vector<std::pair<Matrix, Matrix>> y_pairs_basis(const AdaptedBasis& b) {
    const PrimeField& F = b.field();
    KCoordinates kc = k_coordinates(b);
    const std::size_t ni = kc.n_inf, nm = kc.n_mid, nd = kc.n_dag;
    const std::size_t n1 = ni * nm, nun = n1 + nm * nd;
    if (nun == 0) return {};
    // Y1[r][c] at r*nm + c, Y2[r][c] at n1 + r*nd + c
    std::vector<Vec> rows;
    // (Y1^T A1 + A2 Y2)[a][c], a < nm, c < nd
    for (std::size_t a = 0; a < nm; ++a)
        for (std::size_t c = 0; c < nd; ++c) {
            Vec r(nun, 0);
            for (std::size_t k = 0; k < ni; ++k) r[k * nm + a] = F.add(r[k * nm + a], kc.A1.at(k, c));
            for (std::size_t k = 0; k < nm; ++k) r[n1 + k * nd + c] = F.add(r[n1 + k * nd + c], kc.A2.at(a, k));
            rows.push_back(r);
        }
    // (Y2^T A2 + A3 Y1)[a][c], a < nd, c < nm
    for (std::size_t a = 0; a < nd; ++a)
        for (std::size_t c = 0; c < nm; ++c) {
            Vec r(nun, 0);
            for (std::size_t k = 0; k < nm; ++k) r[n1 + k * nd + a] = F.add(r[n1 + k * nd + a], kc.A2.at(k, c));
            for (std::size_t k = 0; k < ni; ++k) r[k * nm + c] = F.add(r[k * nm + c], kc.A3.at(a, k));
            rows.push_back(r);
        }
    std::vector<std::pair<Matrix, Matrix>> out;
    for (const auto& sol : kernel_basis(Matrix::from_rows(F, nun, rows))) {
        Matrix Y1(F, ni, nm), Y2(F, nm, nd);
        for (std::size_t r = 0; r < ni; ++r)
            for (std::size_t c = 0; c < nm; ++c) Y1.at(r, c) = sol[r * nm + c];
        for (std::size_t r = 0; r < nm; ++r)
            for (std::size_t c = 0; c < nd; ++c) Y2.at(r, c) = sol[n1 + r * nd + c];
        out.emplace_back(std::move(Y1), std::move(Y2));
    }
    return out;
}

bool in_N(const TowerData& T, const Matrix& g, int j) {
    const PrimeField& F = g.field();
    const std::size_t n = g.rows();
    const int t = static_cast<int>(T.Vi_chain.size());
    Matrix gm1 = g - Matrix::identity(F, n);
    for (int i = 1; i <= t; ++i) {
        Subspace target = (i + j <= t) ? T.Vi_chain[static_cast<std::size_t>(i + j - 1)] : Subspace(F, n);
        if (!target.contains(T.Vi_chain[static_cast<std::size_t>(i - 1)].image(gm1))) return false;
    }
    return true;
}

bool in_M(const TowerData& T, const Matrix& g, int r) {
    if (!in_N(T, g, 1)) return false;
    if (r < 0) return true;
    Subspace W = T.L(static_cast<std::size_t>(r)).intersect(T.V_inf);
    Matrix gm1 = g - Matrix::identity(g.field(), g.rows());
    return W.image(gm1).dim() == 0;
}

}  // namespace bilform
