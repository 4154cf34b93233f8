#pragma once

// Reference computations for tests. Everything here is deliberately naive: plain
// enumeration over GF(p) with no use of the library's search or structure code.

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "bilform/matrix.hpp"

namespace testsupport {

using bilform::i64;
using bilform::Matrix;
using bilform::PrimeField;
using bilform::u32;
using bilform::u64;

// Block-diagonal sum of lower nilpotent Jordan blocks.
inline Matrix jordan_sum(const PrimeField& F, const std::vector<int>& sizes) {
    int n = 0;
    for (int r : sizes) n += r;
    Matrix A(F, static_cast<std::size_t>(n), static_cast<std::size_t>(n));
    int pos = 0;
    for (int r : sizes) {
        for (int k = 0; k + 1 < r; ++k) A.at(static_cast<std::size_t>(pos + k + 1), static_cast<std::size_t>(pos + k)) = 1;
        pos += r;
    }
    return A;
}

inline Matrix direct_sum(const Matrix& X, const Matrix& Y) {
    const std::size_t n = X.rows() + Y.rows();
    Matrix A(X.field(), n, n);
    for (std::size_t i = 0; i < X.rows(); ++i)
        for (std::size_t j = 0; j < X.cols(); ++j) A.at(i, j) = X.at(i, j);
    for (std::size_t i = 0; i < Y.rows(); ++i)
        for (std::size_t j = 0; j < Y.cols(); ++j) A.at(X.rows() + i, X.cols() + j) = Y.at(i, j);
    return A;
}

inline Matrix mat(const PrimeField& F, std::vector<std::vector<i64>> rows) { return Matrix(F, rows); }

// Gaussian elimination rank, written out independently of the library's rref.
inline std::size_t naive_rank(const Matrix& M) {
    const PrimeField& F = M.field();
    std::vector<std::vector<u32>> a(M.rows(), std::vector<u32>(M.cols()));
    for (std::size_t i = 0; i < M.rows(); ++i)
        for (std::size_t j = 0; j < M.cols(); ++j) a[i][j] = M.at(i, j);
    std::size_t r = 0;
    for (std::size_t c = 0; c < M.cols() && r < M.rows(); ++c) {
        std::size_t piv = r;
        while (piv < M.rows() && a[piv][c] == 0) ++piv;
        if (piv == M.rows()) continue;
        std::swap(a[piv], a[r]);
        const u32 inv = F.inv(a[r][c]);
        for (std::size_t i = 0; i < M.rows(); ++i) {
            if (i == r || a[i][c] == 0) continue;
            const u32 f = F.mul(a[i][c], inv);
            for (std::size_t j = c; j < M.cols(); ++j) a[i][j] = F.sub(a[i][j], F.mul(f, a[r][j]));
        }
        ++r;
    }
    return r;
}

inline Matrix random_matrix(const PrimeField& F, std::size_t r, std::size_t c, std::mt19937_64& rng) {
    Matrix M(F, r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) M.at(i, j) = static_cast<u32>(rng() % F.p());
    return M;
}

inline Matrix random_invertible(const PrimeField& F, std::size_t n, std::mt19937_64& rng) {
    for (;;) {
        Matrix M = random_matrix(F, n, n, rng);
        if (naive_rank(M) == n) return M;
    }
}

// Visits every n x n matrix over GF(p) whose columns are chosen one at a time;
// `partial(g, j)` may reject a prefix after column j has been placed.
inline void for_each_matrix(const PrimeField& F, std::size_t n, const std::function<bool(const Matrix&, std::size_t)>& partial,
                            const std::function<void(const Matrix&)>& leaf) {
    Matrix g(F, n, n);
    std::function<void(std::size_t)> rec = [&](std::size_t j) {
        if (j == n) {
            leaf(g);
            return;
        }
        u64 total = 1;
        for (std::size_t i = 0; i < n; ++i) total *= F.p();
        for (u64 code = 0; code < total; ++code) {
            u64 c = code;
            for (std::size_t i = 0; i < n; ++i) {
                g.at(i, j) = static_cast<u32>(c % F.p());
                c /= F.p();
            }
            if (partial(g, j)) rec(j + 1);
        }
    };
    rec(0);
}

// #{g in GL_n : g^T A g = A} by checking the Gram entries of each new column against
// the placed ones; invertibility is checked at the leaves.
inline u64 brute_isometries(const Matrix& A, const std::function<bool(const Matrix&)>& extra = nullptr) {
    const PrimeField& F = A.field();
    const std::size_t n = A.rows();
    u64 count = 0;
    auto phi = [&](const Matrix& g, std::size_t a, std::size_t b) {
        u32 s = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k) s = F.add(s, F.mul(F.mul(g.at(i, a), A.at(i, k)), g.at(k, b)));
        return s;
    };
    for_each_matrix(
        F, n,
        [&](const Matrix& g, std::size_t j) {
            for (std::size_t a = 0; a <= j; ++a)
                if (phi(g, a, j) != A.at(a, j) || phi(g, j, a) != A.at(j, a)) return false;
            return true;
        },
        [&](const Matrix& g) {
            if (naive_rank(g) == n && (!extra || extra(g))) ++count;
        });
    return count;
}

// #{g in GL_n : g M = M g} for lower-triangular M. Columns are placed last to first so
// column c of gM - Mg only involves placed columns.
inline u64 brute_centralizer(const Matrix& M) {
    const PrimeField& F = M.field();
    const std::size_t n = M.rows();
    Matrix g(F, n, n);
    u64 count = 0, total = 1;
    for (std::size_t i = 0; i < n; ++i) total *= F.p();
    std::function<void(std::size_t)> rec = [&](std::size_t left) {
        if (left == 0) {
            if (naive_rank(g) == n) ++count;
            return;
        }
        const std::size_t c = left - 1;
        for (u64 code = 0; code < total; ++code) {
            u64 x = code;
            for (std::size_t i = 0; i < n; ++i) {
                g.at(i, c) = static_cast<u32>(x % F.p());
                x /= F.p();
            }
            bool ok = true;
            for (std::size_t i = 0; i < n && ok; ++i) {
                u32 gm = 0, mg = 0;
                for (std::size_t k = c; k < n; ++k) gm = F.add(gm, F.mul(g.at(i, k), M.at(k, c)));
                for (std::size_t k = 0; k < n; ++k) mg = F.add(mg, F.mul(M.at(i, k), g.at(k, c)));
                ok = gm == mg;
            }
            if (ok) rec(c);
        }
    };
    rec(n);
    return count;
}

// some Q in GL_n with Q^T X Q = Y, by enumeration
inline bool brute_congruent(const Matrix& X, const Matrix& Y) {
    const PrimeField& F = X.field();
    const std::size_t n = X.rows();
    bool found = false;
    for_each_matrix(
        F, n,
        [&](const Matrix& g, std::size_t j) {
            if (found) return false;
            for (std::size_t a = 0; a <= j; ++a) {
                u32 s1 = 0, s2 = 0;
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t k = 0; k < n; ++k) {
                        s1 = F.add(s1, F.mul(F.mul(g.at(i, a), X.at(i, k)), g.at(k, j)));
                        s2 = F.add(s2, F.mul(F.mul(g.at(i, j), X.at(i, k)), g.at(k, a)));
                    }
                if (s1 != Y.at(a, j) || s2 != Y.at(j, a)) return false;
            }
            return true;
        },
        [&](const Matrix& g) {
            if (naive_rank(g) == n) found = true;
        });
    return found;
}

// |GL_m(q)| as a plain product
inline u64 gl_order(u64 q, u64 m) {
    u64 qm = 1;
    for (u64 i = 0; i < m; ++i) qm *= q;
    u64 r = 1, qi = 1;
    for (u64 i = 0; i < m; ++i) {
        r *= qm - qi;
        qi *= q;
    }
    return r;
}

inline u64 upow(u64 b, u64 e) {
    u64 r = 1;
    while (e--) r *= b;
    return r;
}

}  // namespace testsupport
