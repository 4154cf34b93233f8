// Constructive adapted basis: odd blocks by pencil chains, J_1 blocks from the
// two-sided radical, even blocks from the Jordan form of u on L_inf, the rest is ndeg.
#include <random>

#include "bilform/bilspace.hpp"
#include "bilform/linalg.hpp"

namespace bilform {

namespace {

struct Work {
    const PrimeField& F;
    Matrix A;   // original Gram
    Matrix Bw;  // columns: basis of the current subspace W (original coordinates)

    Matrix gram_w() const { return Bw.transpose() * A * Bw; }
    std::size_t w() const { return Bw.cols(); }
};

Vec slice(const Vec& v, std::size_t block, std::size_t w) {
    return Vec(v.begin() + static_cast<std::ptrdiff_t>(block * w), v.begin() + static_cast<std::ptrdiff_t>((block + 1) * w));
}

// Try to complete a chain x_0..x_s (W-coordinates) to a J_{2s+1} summand.
// Returns the block in order e_1..e_{2s+1} or nothing.
std::optional<std::vector<Vec>> complete_block(const Matrix& G, const std::vector<Vec>& x, int s) {
    const PrimeField& F = G.field();
    const std::size_t w = G.rows();
    const std::size_t S = static_cast<std::size_t>(s);
    auto phi = [&](const Vec& a, const Vec& b) { return bilinear(G, a, b); };
    for (std::size_t a = 0; a <= S; ++a)
        for (std::size_t b = 0; b <= S; ++b)
            if (phi(x[a], x[b])) return std::nullopt;

    // y_1..y_s: phi(x_a, y_b) = [a == b], phi(y_b, x_a) = [a == b - 1], G y_k = G^T y_{k+1}
    const std::size_t nun = S * w;
    std::vector<Vec> rows;
    Vec rhs;
    Matrix GT = G.transpose();
    for (std::size_t b = 1; b <= S; ++b) {
        for (std::size_t a = 0; a <= S; ++a) {
            Vec r(nun, 0);
            Vec xa_G = GT.apply(x[a]);  // x_a^T G as a column
            for (std::size_t j = 0; j < w; ++j) r[(b - 1) * w + j] = xa_G[j];
            rows.push_back(r);
            rhs.push_back(a == b ? 1 : 0);
            Vec r2(nun, 0);
            Vec G_xa = G.apply(x[a]);
            for (std::size_t j = 0; j < w; ++j) r2[(b - 1) * w + j] = G_xa[j];
            rows.push_back(r2);
            rhs.push_back(a + 1 == b ? 1 : 0);
        }
    }
    for (std::size_t k = 1; k < S; ++k)
        for (std::size_t i = 0; i < w; ++i) {
            Vec r(nun, 0);
            for (std::size_t j = 0; j < w; ++j) {
                r[(k - 1) * w + j] = G.at(i, j);
                r[k * w + j] = F.neg(GT.at(i, j));
            }
            rows.push_back(r);
            rhs.push_back(0);
        }
    auto ysol = solve(Matrix::from_rows(F, nun, rows), rhs);
    if (!ysol) return std::nullopt;
    std::vector<Vec> y(S + 1);
    for (std::size_t b = 1; b <= S; ++b) y[b] = slice(*ysol, b - 1, w);

    // isotropy: y'_a = y_a + sum_c c[a][c] x_c, keeping the chain relations
    const std::size_t nc = S * (S + 1);
    auto cidx = [&](std::size_t a, std::size_t c) { return (a - 1) * (S + 1) + c; };
    rows.clear();
    rhs.clear();
    for (std::size_t k = 1; k < S; ++k)
        for (std::size_t c = 1; c <= S; ++c) {
            Vec r(nc, 0);
            r[cidx(k + 1, c)] = 1;
            r[cidx(k, c - 1)] = F.neg(1);
            rows.push_back(r);
            rhs.push_back(0);
        }
    for (std::size_t a = 1; a <= S; ++a)
        for (std::size_t b = 1; b <= S; ++b) {
            Vec r(nc, 0);
            for (std::size_t c = 0; c <= S; ++c) {
                r[cidx(b, c)] = F.add(r[cidx(b, c)], phi(y[a], x[c]));
                r[cidx(a, c)] = F.add(r[cidx(a, c)], phi(x[c], y[b]));
            }
            rows.push_back(r);
            rhs.push_back(F.neg(phi(y[a], y[b])));
        }
    if (nc > 0) {
        auto csol = solve(Matrix::from_rows(F, nc, rows), rhs);
        if (!csol) return std::nullopt;
        for (std::size_t a = 1; a <= S; ++a)
            for (std::size_t c = 0; c <= S; ++c) y[a] = vec_axpy(F, y[a], (*csol)[cidx(a, c)], x[c]);
    }

    std::vector<Vec> blk;
    for (std::size_t k = 0; k <= S; ++k) {
        if (k >= 1) blk.push_back(y[k]);
        blk.push_back(x[k]);
    }
    // Gram of the block must be J_{2s+1}
    for (std::size_t a = 0; a < blk.size(); ++a)
        for (std::size_t b = 0; b < blk.size(); ++b)
            if (phi(blk[a], blk[b]) != (a == b + 1 ? 1u : 0u)) return std::nullopt;
    // summand: W = U + (L(U) meet R(U))
    BilSpace sub(G);
    Subspace U = Subspace::span(F, w, blk);
    Subspace rest = orth(sub, U, Side::left).intersect(orth(sub, U, Side::right));
    if (U.dim() != blk.size() || rest.dim() + U.dim() != w || (U + rest).dim() != w) return std::nullopt;
    return blk;
}

// One odd block of size 2s+1 (s >= 1) inside W; returns its vectors and the complement basis.
bool extract_odd(Work& W, int s, std::mt19937_64& rng, std::vector<Vec>& block_out) {
    const PrimeField& F = W.F;
    const Matrix G = W.gram_w();
    const std::size_t w = W.w();
    const std::size_t S = static_cast<std::size_t>(s);
    Matrix GT = G.transpose();
    // chain system in (x_0..x_s)
    const std::size_t nun = (S + 1) * w;
    std::vector<Vec> rows;
    for (std::size_t i = 0; i < w; ++i) {
        Vec r(nun, 0);
        for (std::size_t j = 0; j < w; ++j) r[j] = GT.at(i, j);
        rows.push_back(r);
        Vec r2(nun, 0);
        for (std::size_t j = 0; j < w; ++j) r2[S * w + j] = G.at(i, j);
        rows.push_back(r2);
    }
    for (std::size_t k = 1; k <= S; ++k)
        for (std::size_t i = 0; i < w; ++i) {
            Vec r(nun, 0);
            for (std::size_t j = 0; j < w; ++j) {
                r[(k - 1) * w + j] = G.at(i, j);
                r[k * w + j] = F.neg(GT.at(i, j));
            }
            rows.push_back(r);
        }
    auto K = kernel_basis(Matrix::from_rows(F, nun, rows));
    if (K.empty()) return false;
    BilSpace sub(G);
    const Subspace& Lbelow = sub.towers().L(2 * S - 1);

    auto attempt = [&](const Vec& kv) -> bool {
        std::vector<Vec> x(S + 1);
        for (std::size_t k = 0; k <= S; ++k) x[k] = slice(kv, k, w);
        if (Lbelow.contains(x[S])) return false;
        auto blk = complete_block(G, x, s);
        if (!blk) return false;
        Subspace U = Subspace::span(F, w, *blk);
        Subspace rest = orth(sub, U, Side::left).intersect(orth(sub, U, Side::right));
        block_out.clear();
        for (auto& v : *blk) block_out.push_back(W.Bw.apply(v));
        std::vector<Vec> rb = rest.vectors();
        Matrix R = Matrix::from_columns(F, w, rb);
        W.Bw = W.Bw * R;
        return true;
    };

    for (const auto& kv : K)
        if (attempt(kv)) return true;
    for (std::size_t a = 0; a < K.size(); ++a)
        for (std::size_t b = a + 1; b < K.size(); ++b)
            if (attempt(vec_add(F, K[a], K[b]))) return true;
    std::uniform_int_distribution<u32> d(0, F.p() - 1);
    for (int trial = 0; trial < 256; ++trial) {
        Vec kv(nun, 0);
        for (const auto& k : K) kv = vec_axpy(F, kv, d(rng), k);
        if (attempt(kv)) return true;
    }
    return false;
}

bool is_canonical_layout(const Matrix& A, const BlockSignature& sig) {
    const std::size_t deg = sig.odd_dim() + sig.even_dim();
    std::vector<std::size_t> idx;
    for (std::size_t k = deg; k < A.rows(); ++k) idx.push_back(k);
    Matrix nd = A.submatrix(idx, idx);
    if (rank(nd) != nd.rows()) return false;
    return canonical_gram(sig, nd) == A;
}

void fill_index(AdaptedBasis& B) {
    const BlockSignature& sig = B.signature;
    std::size_t pos = 0;
    int i = 0;
    for (auto it = sig.odd.rbegin(); it != sig.odd.rend(); ++it) {
        ++i;
        for (int p = 1; p <= it->second; ++p) {
            B.odd.push_back({i, p, it->first, pos});
            pos += static_cast<std::size_t>(2 * it->first + 1);
        }
    }
    for (auto it = sig.even.rbegin(); it != sig.even.rend(); ++it)
        for (int c = 0; c < it->second; ++c) {
            B.even.push_back({it->first, pos});
            pos += static_cast<std::size_t>(2 * it->first);
        }
    B.ndeg_first = pos;
    B.ndeg_dim = sig.ndeg;
}

}  // namespace

AdaptedBasis gabriel_basis(const BilSpace& space, u64 seed) {
    const PrimeField& F = space.field();
    const std::size_t n = space.dim();
    const BlockSignature sig = block_signature(space);
    AdaptedBasis out{.gram = space.gram(), .P = Matrix::identity(F, n), .canonical = space.gram(), .signature = sig,
                     .odd = {}, .even = {}, .ndeg_first = 0, .ndeg_dim = 0};
    fill_index(out);
    if (is_canonical_layout(space.gram(), sig)) return out;

    std::mt19937_64 rng(seed);
    Work W{F, space.gram(), Matrix::identity(F, n)};
    std::vector<Vec> cols;

    for (auto it = sig.odd.rbegin(); it != sig.odd.rend(); ++it) {
        const int s = it->first;
        if (s == 0) continue;
        for (int c = 0; c < it->second; ++c) {
            std::vector<Vec> blk;
            if (!extract_odd(W, s, rng, blk))
                fail(Errc::DecompositionFailure, "could not extract a block N" + std::to_string(2 * s + 1));
            for (auto& v : blk) cols.push_back(std::move(v));
        }
    }
    if (auto it = sig.odd.find(0); it != sig.odd.end()) {
        BilSpace sub(W.gram_w());
        const TowerData& T = sub.towers();
        Subspace rad = T.L(1).intersect(T.R(1));
        if (rad.dim() != static_cast<std::size_t>(it->second)) fail(Errc::DecompositionFailure, "radical size mismatch");
        for (auto& v : rad.vectors()) cols.push_back(W.Bw.apply(v));
        Matrix C = Matrix::from_columns(F, W.w(), rad.complement_units());
        W.Bw = W.Bw * C;
    }

    // even + ndeg remainder
    {
        const std::size_t w = W.w();
        const Matrix G = W.gram_w();
        BilSpace sub(G);
        const TowerData& T = sub.towers();
        const Subspace& Y = T.L_inf;
        const Subspace& Z = T.R_inf;
        Subspace D = T.L_sup.intersect(T.R_sup);
        if (Y.dim() != Z.dim() || Y.dim() + Z.dim() + D.dim() != w || Y.dim() != sig.even_dim() / 2)
            fail(Errc::DecompositionFailure, "even/ndeg split has the wrong dimensions");
        const std::size_t a = Y.dim();
        if (a > 0) {
            auto yv = Y.vectors();
            auto zv = Z.vectors();
            Matrix MYZ(F, a, a), MZY(F, a, a);
            for (std::size_t i = 0; i < a; ++i)
                for (std::size_t j = 0; j < a; ++j) {
                    MYZ.at(i, j) = bilinear(G, yv[i], zv[j]);
                    MZY.at(j, i) = bilinear(G, zv[j], yv[i]);
                }
            Matrix U = inverse(MZY) * MYZ.transpose();
            Matrix Ycols = Matrix::from_columns(F, w, yv);
            std::vector<std::vector<Vec>> chains;  // l_1..l_r per block
            std::vector<Vec> ls;
            for (auto& [g, r] : jordan_chains(U)) {
                std::vector<Vec> ch(r);
                Vec cur = g;
                for (std::size_t j = r; j-- > 0;) {
                    ch[j] = Ycols.apply(cur);
                    cur = U.apply(cur);
                }
                for (auto& v : ch) ls.push_back(v);
                chains.push_back(std::move(ch));
            }
            // duals r_j in Z with phi(r_j, l_k) = delta
            Matrix N(F, a, a);
            for (std::size_t i = 0; i < a; ++i)
                for (std::size_t k = 0; k < a; ++k) N.at(i, k) = bilinear(G, zv[i], ls[k]);
            Matrix C = inverse(N).transpose();
            Matrix Zcols = Matrix::from_columns(F, w, zv);
            Matrix Rcols = Zcols * C;
            std::size_t k = 0;
            for (auto& ch : chains)
                for (std::size_t j = 0; j < ch.size(); ++j, ++k) {
                    cols.push_back(W.Bw.apply(ch[j]));
                    cols.push_back(W.Bw.apply(Rcols.col(k)));
                }
        }
        for (auto& v : D.vectors()) cols.push_back(W.Bw.apply(v));
    }

    if (cols.size() != n) fail(Errc::DecompositionFailure, "basis has the wrong size");
    out.P = Matrix::from_columns(F, n, cols);
    if (rank(out.P) != n) fail(Errc::DecompositionFailure, "adapted vectors are dependent");
    out.canonical = out.P.transpose() * space.gram() * out.P;
    std::vector<std::size_t> idx;
    for (std::size_t k = out.ndeg_first; k < n; ++k) idx.push_back(k);
    if (out.canonical != canonical_gram(sig, out.canonical.submatrix(idx, idx)))
        fail(Errc::DecompositionFailure, "P^T A P is not canonical");
    return out;
}

}  // namespace bilform
