#include <doctest.h>

#include <random>

#include "bilform/linalg.hpp"
#include "bilform/matrix.hpp"
#include "support.hpp"

using namespace bilform;
using namespace testsupport;

TEST_CASE("kernel, rank and inverse examples") {
    PrimeField F2(2), F5(5);
    Subspace k = kernel(jordan_sum(F2, {3}));
    CHECK(k == Subspace::span(F2, 3, {unit_vector(3, 2)}));
    CHECK(rank(Matrix(F5, 2, 2)) == 0);
    Matrix A = mat(F5, {{0, 1}, {2, 0}});
    Matrix Ai = inverse(A);
    CHECK(Ai == mat(F5, {{0, 3}, {1, 0}}));
    CHECK((A * Ai).is_identity());
    CHECK_THROWS_AS(inverse(jordan_sum(F5, {2})), Error);
    CHECK_THROWS_AS(Matrix(F5, 2, 3) * Matrix(F5, 2, 3), Error);
}

TEST_CASE("linear algebra agrees with naive elimination") {
    std::mt19937_64 rng(3);
    for (u64 p : {2ULL, 3ULL, 7ULL}) {
        PrimeField F(p);
        for (int it = 0; it < 100; ++it) {
            const std::size_t r = 1 + rng() % 6, c = 1 + rng() % 6;
            Matrix M = random_matrix(F, r, c, rng);
            CHECK(rank(M) == naive_rank(M));
            auto kb = kernel_basis(M);
            CHECK(kb.size() == c - naive_rank(M));
            for (const auto& v : kb) CHECK(vec_is_zero(M.apply(v)));
            Vec b(r);
            for (auto& x : b) x = static_cast<u32>(rng() % p);
            auto x = solve(M, b);
            const bool consistent = naive_rank(M) == naive_rank(M.hstack(Matrix::from_columns(F, r, {b})));
            CHECK(x.has_value() == consistent);
            if (x) CHECK(M.apply(*x) == b);
        }
    }
}

TEST_CASE("subspace operations") {
    PrimeField F(3);
    std::mt19937_64 rng(5);
    for (int it = 0; it < 50; ++it) {
        Matrix X = random_matrix(F, 2, 5, rng), Y = random_matrix(F, 3, 5, rng);
        Subspace U = Subspace::row_space(X), W = Subspace::row_space(Y);
        Subspace S = U + W, I = U.intersect(W);
        CHECK(S.dim() + I.dim() == U.dim() + W.dim());
        CHECK(S.contains(U));
        CHECK(U.contains(I));
        CHECK(W.contains(I));
        CHECK(S.dim() == naive_rank(X.vstack(Y)));
        auto comp = U.complement_in(S);
        CHECK(comp.size() == S.dim() - U.dim());
        CHECK((U + Subspace::span(F, 5, comp)) == S);
    }
}

TEST_CASE("min_poly examples") {
    PrimeField F3(3), F5(5), F2(2);
    CHECK(min_poly(Matrix::identity(F3, 3)) == Poly(F3, {-1, 1}));
    // (t - 3)(t - 2) = t^2 - 5t + 6 = t^2 + 1 over GF(5)
    CHECK(min_poly(mat(F5, {{3, 0}, {0, 2}})) == Poly(F5, {1, 0, 1}));
    CHECK(min_poly(jordan_sum(F2, {3})) == Poly::monomial(F2, 3));
}

TEST_CASE("min_poly annihilates and is minimal") {
    std::mt19937_64 rng(9);
    for (u64 p : {2ULL, 3ULL, 5ULL}) {
        PrimeField F(p);
        for (int it = 0; it < 40; ++it) {
            Matrix M = random_matrix(F, 1 + rng() % 5, 0, rng);
            M = random_matrix(F, M.rows(), M.rows(), rng);
            Poly mp = min_poly(M);
            CHECK(mp.is_monic());
            CHECK(poly_eval(mp, M).is_zero());
            // no lower-degree combination of powers vanishes: I, M, ..., M^(d-1) are independent
            const std::size_t n = M.rows();
            Matrix stack(F, 0, n * n);
            Matrix P = Matrix::identity(F, n);
            for (int d = 0; d < mp.degree(); ++d) {
                Matrix row(F, 1, n * n);
                for (std::size_t i = 0; i < n * n; ++i) row.at(0, i) = P.data()[i];
                stack = stack.vstack(row);
                P = P * M;
            }
            CHECK(naive_rank(stack) == static_cast<std::size_t>(mp.degree()));
        }
    }
}

TEST_CASE("primary_components examples") {
    PrimeField F5(5), F3(3);
    auto pc = primary_components(mat(F5, {{3, 0}, {0, 2}}));
    REQUIRE(pc.size() == 2);
    // sorted by coefficients: t - 3 = t + 2 comes before t - 2 = t + 3
    CHECK(pc[0].p == Poly(F5, {-3, 1}));
    CHECK(pc[0].component == Subspace::span(F5, 2, {unit_vector(2, 0)}));
    CHECK(pc[1].p == Poly(F5, {-2, 1}));
    CHECK(pc[1].component == Subspace::span(F5, 2, {unit_vector(2, 1)}));

    auto id = primary_components(Matrix::identity(F3, 4));
    REQUIRE(id.size() == 1);
    CHECK(id[0].p == Poly(F3, {-1, 1}));
    CHECK(id[0].component.dim() == 4);

    // Gamma_2 over GF(5): A^-1 A^T computed by hand
    Matrix G = mat(F5, {{0, -1}, {1, 1}});
    Matrix sigma = inverse(G) * G.transpose();
    CHECK(sigma == mat(F5, {{4, 2}, {0, 4}}));
    auto g = primary_components(sigma);
    REQUIRE(g.size() == 1);
    CHECK(g[0].p == Poly(F5, {1, 1}));
    CHECK(g[0].component.dim() == 2);
}

TEST_CASE("primary components are invariant and span") {
    std::mt19937_64 rng(13);
    for (u64 p : {2ULL, 3ULL, 5ULL}) {
        PrimeField F(p);
        for (int it = 0; it < 40; ++it) {
            const std::size_t n = 1 + rng() % 6;
            Matrix M = random_matrix(F, n, n, rng);
            auto pcs = primary_components(M);
            Subspace sum(F, n);
            std::size_t dims = 0;
            for (const auto& c : pcs) {
                dims += c.component.dim();
                sum = sum + c.component;
                Poly pe = Poly::constant(F, 1);
                for (int e = 0; e < c.exponent; ++e) pe = pe * c.p;
                Matrix annihilator = poly_eval(pe, M);
                for (const auto& v : c.component.vectors()) {
                    CHECK(vec_is_zero(annihilator.apply(v)));
                    CHECK(c.component.contains(M.apply(v)));
                }
            }
            CHECK(dims == n);
            CHECK(sum.dim() == n);
        }
    }
}

TEST_CASE("nilpotent_type examples") {
    PrimeField F2(2), F3(3);
    CHECK(nilpotent_type(Matrix(F3, 3, 3)).parts == std::vector<u64>{1, 1, 1});
    CHECK(nilpotent_type(jordan_sum(F2, {3})).parts == std::vector<u64>{3});
    CHECK(nilpotent_type(jordan_sum(F3, {2, 2, 1})).parts == std::vector<u64>{2, 2, 1});
    CHECK_THROWS_AS(nilpotent_type(Matrix::identity(F3, 2)), Error);
}

TEST_CASE("nilpotent_type and similar are conjugation invariant") {
    std::mt19937_64 rng(17);
    for (u64 p : {2ULL, 3ULL, 5ULL}) {
        PrimeField F(p);
        for (int it = 0; it < 40; ++it) {
            std::vector<int> sizes;
            int n = 0;
            while (n < 6) {
                const int r = 1 + static_cast<int>(rng() % 3);
                sizes.push_back(r);
                n += r;
            }
            Matrix N = jordan_sum(F, sizes);
            Matrix P = random_invertible(F, N.rows(), rng);
            Matrix C = inverse(P) * N * P;
            CHECK(nilpotent_type(C) == nilpotent_type(N));
            CHECK(similar(N, C));
            Matrix M = random_matrix(F, 4, 4, rng);
            Matrix Q = random_invertible(F, 4, rng);
            CHECK(similar(M, inverse(Q) * M * Q));
            CHECK(similar(M, M.transpose()));
        }
    }
}

TEST_CASE("similar examples") {
    PrimeField F2(2), F3(3);
    Matrix J3 = jordan_sum(F2, {3});
    CHECK(similar(J3, J3.transpose()));
    CHECK(!similar(jordan_sum(F3, {2, 2}), jordan_sum(F3, {3, 1})));
    CHECK(!similar(Matrix::identity(F3, 2), Matrix::identity(F3, 2).scaled(2)));
    CHECK_THROWS_AS(similar(J3, jordan_sum(F2, {2})), Error);
}

TEST_CASE("centralizer examples") {
    CHECK(centralizer_order_gl(Partition{{1}}, 2).value() == 1);
    CHECK(centralizer_dim(Partition{{1}}) == 1);
    CHECK(centralizer_order_gl(Partition{{1, 1}}, 2).value() == 6);
    CHECK(centralizer_dim(Partition{{1, 1}}) == 4);
    CHECK(centralizer_dim(Partition{{2, 1}}) == 5);
    CHECK(centralizer_order_gl(Partition{{2, 1}}, 2).value() == 8);
    PrimeField F2(2);
    CHECK(brute_centralizer(jordan_sum(F2, {2, 1})) == 8);
}

TEST_CASE("centralizer order matches enumeration for all partitions of n <= 4") {
    const std::vector<std::vector<int>> parts = {{1},          {2},          {1, 1},    {3},       {2, 1},
                                                 {1, 1, 1},    {4},          {3, 1},    {2, 2},    {2, 1, 1},
                                                 {1, 1, 1, 1}};
    for (u64 q : {2ULL, 3ULL}) {
        PrimeField F(q);
        for (const auto& pt : parts) {
            int n = 0;
            for (int r : pt) n += r;
            // the all-ones type over GF(3) is all of GL_4(3): 3^16 leaves, checked by the product below
            if (q == 3 && n == 4 && pt.size() == 4) continue;
            Partition P;
            for (int r : pt) P.parts.push_back(static_cast<u64>(r));
            CAPTURE(q);
            CAPTURE(pt.size());
            CHECK(centralizer_order_gl(P, q).value() == brute_centralizer(jordan_sum(F, pt)));
        }
    }
    CHECK(centralizer_order_gl(Partition{{1, 1, 1, 1}}, 3).value() == gl_order(3, 4));
}

TEST_CASE("jordan chains form a basis") {
    PrimeField F(3);
    std::mt19937_64 rng(19);
    Matrix N = jordan_sum(F, {3, 2, 2, 1});
    Matrix P = random_invertible(F, 8, rng);
    Matrix u = inverse(P) * N * P;
    auto chains = jordan_chains(u);
    std::vector<Vec> all;
    for (const auto& [g, r] : chains) {
        Vec v = g;
        for (std::size_t k = 0; k < r; ++k) {
            all.push_back(v);
            v = u.apply(v);
        }
        CHECK(vec_is_zero(v));
    }
    CHECK(all.size() == 8);
    CHECK(Subspace::span(F, 8, all).dim() == 8);
    CHECK(chains[0].second == 3);
}
