#include "bilform/linalg.hpp"

#include <algorithm>

namespace bilform {

u64 Partition::total() const noexcept {
    u64 s = 0;
    for (auto x : parts) s += x;
    return s;
}

Matrix poly_eval(const Poly& f, const Matrix& M) {
    if (!M.is_square()) fail(Errc::ShapeMismatch, "poly_eval on non-square matrix");
    const std::size_t n = M.rows();
    Matrix R(M.field(), n, n);
    const auto& c = f.coeffs();
    for (std::size_t i = c.size(); i-- > 0;) {
        R = R * M;
        for (std::size_t k = 0; k < n; ++k) R.at(k, k) = M.field().add(R.at(k, k), c[i]);
    }
    return R;
}

namespace {

// monic annihilator of v under M
Poly vector_annihilator(const Matrix& M, const Vec& v) {
    const PrimeField& F = M.field();
    const std::size_t n = M.rows();
    std::vector<Vec> krylov{v};
    while (true) {
        Matrix K = Matrix::from_columns(F, n, krylov);
        Vec next = M.apply(krylov.back());
        auto c = solve(K, next);
        if (c) {
            std::vector<u32> coeffs(krylov.size() + 1);
            for (std::size_t i = 0; i < krylov.size(); ++i) coeffs[i] = F.neg((*c)[i]);
            coeffs.back() = 1;
            return Poly(F, std::move(coeffs));
        }
        krylov.push_back(std::move(next));
    }
}

}  // namespace

Poly min_poly(const Matrix& M) {
    if (!M.is_square()) fail(Errc::ShapeMismatch, "min_poly of non-square matrix");
    const PrimeField& F = M.field();
    const std::size_t n = M.rows();
    Poly m = Poly::constant(F, 1);
    for (std::size_t i = 0; i < n; ++i) {
        Vec e = unit_vector(n, i);
        m = poly_lcm(m, vector_annihilator(M, e));
    }
    if (!poly_eval(m, M).is_zero()) fail(Errc::InternalInconsistency, "minimal polynomial does not annihilate");
    for (auto& [p, e] : poly_factor(m)) {
        (void)e;
        if (poly_eval(m / p, M).is_zero()) fail(Errc::InternalInconsistency, "minimal polynomial not minimal");
    }
    return m;
}

std::vector<PrimaryComponent> primary_components(const Matrix& M) {
    std::vector<PrimaryComponent> out;
    Poly m = min_poly(M);
    for (auto& [p, e] : poly_factor(m)) {
        Poly pe = Poly::constant(M.field(), 1);
        for (int i = 0; i < e; ++i) pe = pe * p;
        out.push_back({p, e, kernel(poly_eval(pe, M))});
    }
    return out;
}

Partition nilpotent_type(const Matrix& M) {
    if (!M.is_square()) fail(Errc::ShapeMismatch, "nilpotent_type of non-square matrix");
    const std::size_t n = M.rows();
    if (!M.pow(n).is_zero()) fail(Errc::NotNilpotent, "matrix is not nilpotent");
    // k[i] = dim ker M^i; blocks of size >= i number k[i] - k[i-1]
    std::vector<std::size_t> k{0};
    Matrix P = Matrix::identity(M.field(), n);
    while (k.back() < n) {
        P = P * M;
        k.push_back(n - rank(P));
    }
    Partition out;
    for (std::size_t i = 1; i < k.size(); ++i) {
        std::size_t ge_i = k[i] - k[i - 1];
        std::size_t ge_next = i + 1 < k.size() ? k[i + 1] - k[i] : 0;
        for (std::size_t c = 0; c < ge_i - ge_next; ++c) out.parts.push_back(i);
    }
    std::sort(out.parts.rbegin(), out.parts.rend());
    return out;
}

bool similar(const Matrix& M1, const Matrix& M2) {
    if (!M1.is_square() || !M2.is_square() || M1.rows() != M2.rows()) fail(Errc::ShapeMismatch, "similar");
    if (M1.field() != M2.field()) fail(Errc::FieldMismatch, "similar");
    const std::size_t n = M1.rows();
    std::vector<Poly> factors;
    for (const Matrix* M : {&M1, &M2})
        for (auto& [p, e] : poly_factor(min_poly(*M))) {
            (void)e;
            if (std::find(factors.begin(), factors.end(), p) == factors.end()) factors.push_back(p);
        }
    for (const Poly& p : factors) {
        Matrix A = poly_eval(p, M1), B = poly_eval(p, M2);
        Matrix Ak = A, Bk = B;
        for (std::size_t k = 1; k <= n; ++k) {
            if (rank(Ak) != rank(Bk)) return false;
            Ak = Ak * A;
            Bk = Bk * B;
        }
    }
    return true;
}

u64 centralizer_dim(const Partition& type) {
    u64 d = 0;
    for (auto a : type.parts)
        for (auto b : type.parts) d += std::min(a, b);
    return d;
}

GroupOrder centralizer_order_gl(const Partition& type, u64 q) {
    std::map<u64, u64> mult;
    for (auto x : type.parts) ++mult[x];
    u64 sq = 0;
    for (auto& [part, m] : mult) sq += m * m;
    GroupOrder g = GroupOrder::power(q, centralizer_dim(type) - sq);
    for (auto& [part, m] : mult) g *= GroupOrder::gl(q, m);
    return g;
}

std::vector<std::pair<Vec, std::size_t>> jordan_chains(const Matrix& u) {
    const PrimeField& F = u.field();
    const std::size_t n = u.rows();
    if (n == 0) return {};
    if (!u.pow(n).is_zero()) fail(Errc::NotNilpotent, "jordan_chains needs a nilpotent operator");
    std::vector<Subspace> ker{Subspace(F, n)};
    Matrix P = Matrix::identity(F, n);
    while (ker.back().dim() < n) {
        P = P * u;
        ker.push_back(kernel(P));
    }
    const std::size_t top = ker.size() - 1;
    std::vector<std::pair<Vec, std::size_t>> chains;
    for (std::size_t k = top; k >= 1; --k) {
        // vectors already at level k: u^(r-k) g for chains of size r > k
        std::vector<Vec> level;
        for (auto& [g, r] : chains) {
            Vec v = g;
            for (std::size_t i = 0; i < r - k; ++i) v = u.apply(v);
            level.push_back(v);
        }
        Subspace T = ker[k - 1] + Subspace::span(F, n, level);
        for (auto& g : T.complement_in(ker[k])) chains.emplace_back(g, k);
    }
    return chains;
}

}  // namespace bilform
