#include "bilform/bilspace.hpp"

#include <algorithm>
#include <sstream>

namespace bilform {

BilSpace::BilSpace(Matrix gram) : A_(std::move(gram)), cache_(std::make_shared<Cache>()) {
    if (!A_.is_square()) fail(Errc::ShapeMismatch, "Gram matrix must be square");
}

const TowerData& BilSpace::towers() const {
    std::call_once(cache_->once, [this] { cache_->data = std::make_unique<TowerData>(compute_towers(*this)); });
    return *cache_->data;
}

Subspace orth(const BilSpace& space, const Subspace& U, Side side) {
    const std::size_t n = space.dim();
    if (U.ambient() != n) fail(Errc::AmbientMismatch, "orth: subspace lives in a different space");
    if (U.dim() == 0) return Subspace::full(space.field(), n);
    // left: rows (A u)^T; right: rows u^T A
    Matrix Ub = U.basis();
    Matrix rows = side == Side::left ? (space.gram() * Ub.transpose()).transpose() : Ub * space.gram();
    return kernel(rows);
}

// ------------------------------------------------------------ signature

std::size_t BlockSignature::odd_dim() const noexcept {
    std::size_t d = 0;
    for (auto& [s, m] : odd) d += static_cast<std::size_t>(m) * (2 * s + 1);
    return d;
}

std::size_t BlockSignature::even_dim() const noexcept {
    std::size_t d = 0;
    for (auto& [s, m] : even) d += static_cast<std::size_t>(m) * 2 * s;
    return d;
}

int BlockSignature::sum_m() const noexcept {
    int r = 0;
    for (int x : m) r += x;
    return r;
}

void BlockSignature::derive() {
    s.clear();
    m.clear();
    for (auto it = odd.rbegin(); it != odd.rend(); ++it) {
        s.push_back(it->first);
        m.push_back(it->second);
    }
    t = static_cast<int>(s.size());
    tbar = (t > 0 && s.back() == 0) ? t - 1 : t;
}

std::string BlockSignature::to_string() const {
    std::ostringstream os;
    bool first = true;
    for (auto it = odd.rbegin(); it != odd.rend(); ++it) {
        os << (first ? "" : " + ") << (it->second > 1 ? std::to_string(it->second) + "*" : "") << "N" << 2 * it->first + 1;
        first = false;
    }
    for (auto it = even.rbegin(); it != even.rend(); ++it) {
        os << (first ? "" : " + ") << (it->second > 1 ? std::to_string(it->second) + "*" : "") << "N" << 2 * it->first;
        first = false;
    }
    if (ndeg) {
        os << (first ? "" : " + ") << "ndeg(" << ndeg << ")";
        first = false;
    }
    if (first) os << "0";
    return os.str();
}

const Subspace& TowerData::L(std::size_t k) const {
    if (k % 2) return L_odd[std::min(k / 2, L_odd.size() - 1)];
    return L_even[std::min(k / 2, L_even.size() - 1)];
}

const Subspace& TowerData::R(std::size_t k) const {
    if (k % 2) return R_odd[std::min(k / 2, R_odd.size() - 1)];
    return R_even[std::min(k / 2, R_even.size() - 1)];
}

namespace {

// L^0, L^1, ... until both parities repeat
std::vector<Subspace> iterate(const BilSpace& space, Side side) {
    std::vector<Subspace> seq{Subspace::full(space.field(), space.dim())};
    while (true) {
        seq.push_back(orth(space, seq.back(), side));
        const std::size_t k = seq.size() - 1;
        if (k >= 3 && seq[k] == seq[k - 2] && seq[k - 1] == seq[k - 3]) break;
    }
    return seq;
}

void split_parity(const std::vector<Subspace>& seq, std::vector<Subspace>& odd, std::vector<Subspace>& even) {
    for (std::size_t k = 0; k < seq.size(); ++k) {
        auto& dst = (k % 2) ? odd : even;
        if (dst.empty() || dst.back() != seq[k]) dst.push_back(seq[k]);
    }
}

}  // namespace

TowerData compute_towers(const BilSpace& space) {
    const PrimeField& F = space.field();
    const std::size_t n = space.dim();
    auto Ls = iterate(space, Side::left);
    auto Rs = iterate(space, Side::right);
    TowerData T{.L_odd = {}, .R_odd = {}, .L_even = {}, .R_even = {},
                .L_inf = Subspace(F, n), .R_inf = Subspace(F, n), .L_sup = Subspace(F, n), .R_sup = Subspace(F, n),
                .V_inf = Subspace(F, n), .up_inf = Subspace(F, n), .V_sup = Subspace(F, n), .low_inf = Subspace(F, n),
                .Vi_chain = {}, .signature = {}};
    split_parity(Ls, T.L_odd, T.L_even);
    split_parity(Rs, T.R_odd, T.R_even);
    T.L_inf = T.L_odd.back();
    T.R_inf = T.R_odd.back();
    T.L_sup = T.L_even.back();
    T.R_sup = T.R_even.back();
    T.V_inf = T.L_inf.intersect(T.R_inf);
    T.up_inf = T.L_sup + T.R_sup;
    T.V_sup = T.L_sup.intersect(T.R_sup);
    T.low_inf = T.L_inf + T.R_inf;

    // signature from tower dimensions
    BlockSignature sig;
    sig.n = n;
    const int K = static_cast<int>(n) + 2;
    std::vector<long> f(K + 1);
    for (int k = 0; k <= K; ++k) f[k] = static_cast<long>(T.L(2 * k + 1).intersect(T.R_inf).dim());
    auto fd = [&](int k) { return k < 0 ? 0L : f[k]; };
    std::map<int, long> mu;
    for (int k = 0; k < K; ++k) {
        long v = (fd(k) - fd(k - 1)) - (fd(k + 1) - fd(k));
        if (v < 0) fail(Errc::InternalInconsistency, "negative odd multiplicity");
        if (v > 0) mu[k] = v;
    }
    std::vector<long> g(K + 1);
    for (int k = 0; k <= K; ++k) {
        long sub = 0;
        for (auto& [s, m] : mu) sub += m * std::min(k + 1, s + 1);
        g[k] = static_cast<long>(T.L(2 * k + 1).dim()) - sub;
    }
    auto h = [&](int k) { return k < 0 ? 0L : g[k] - (k >= 1 ? g[k - 1] : 0L); };  // even blocks with s >= k+1
    std::map<int, long> nu;
    for (int s = 1; s <= K; ++s) {
        long v = h(s - 1) - h(s);
        if (v < 0) fail(Errc::InternalInconsistency, "negative even multiplicity");
        if (v > 0) nu[s] = v;
    }
    for (auto& [s, m] : mu) sig.odd[s] = static_cast<int>(m);
    for (auto& [s, m] : nu) sig.even[s] = static_cast<int>(m);
    std::size_t deg = sig.odd_dim() + sig.even_dim();
    if (deg > n) fail(Errc::InternalInconsistency, "block dimensions exceed the space");
    sig.ndeg = n - deg;
    sig.derive();
    if (T.V_sup.dim() != T.V_inf.dim() + sig.ndeg) fail(Errc::InternalInconsistency, "V^inf does not split as V_inf + ndeg");
    T.signature = sig;

    for (int i = 0; i < sig.t; ++i) {
        const std::size_t si = static_cast<std::size_t>(sig.s[i]);
        Subspace Vi(F, n);
        for (std::size_t k = 0; k <= si; ++k) Vi = Vi + T.L(2 * k + 1).intersect(T.R(2 * (si - k) + 1));
        T.Vi_chain.push_back(Vi);
    }
    return T;
}

const TowerData& towers(const BilSpace& space) { return space.towers(); }

BlockSignature block_signature(const BilSpace& space) { return space.towers().signature; }

// ------------------------------------------------------------ adapted basis helpers

const OddBlock& AdaptedBasis::block(int i, int p) const {
    for (const auto& b : odd)
        if (b.i == i && b.p == p) return b;
    fail(Errc::BadParams, "no odd block (" + std::to_string(i) + "," + std::to_string(p) + ")");
}

std::size_t AdaptedBasis::column(int i, int p, int k) const {
    const OddBlock& b = block(i, p);
    if (k < 1 || k > 2 * b.s + 1) fail(Errc::BadParams, "position out of range in block");
    return b.first_col + static_cast<std::size_t>(k - 1);
}

Matrix AdaptedBasis::to_original(const Matrix& M) const { return P * M * inverse(P); }
Matrix AdaptedBasis::from_original(const Matrix& g) const { return inverse(P) * g * P; }

Matrix jordan_block(const PrimeField& F, std::size_t r) {
    Matrix J(F, r, r);
    for (std::size_t k = 0; k + 1 < r; ++k) J.at(k + 1, k) = 1;
    return J;
}

Matrix canonical_gram(const BlockSignature& sig, const Matrix& ndeg_block) {
    const PrimeField& F = ndeg_block.field();
    const std::size_t n = sig.odd_dim() + sig.even_dim() + ndeg_block.rows();
    Matrix C(F, n, n);
    std::size_t pos = 0;
    auto put = [&](std::size_t r) {
        for (std::size_t k = 0; k + 1 < r; ++k) C.at(pos + k + 1, pos + k) = 1;
        pos += r;
    };
    for (auto it = sig.odd.rbegin(); it != sig.odd.rend(); ++it)
        for (int c = 0; c < it->second; ++c) put(2 * it->first + 1);
    for (auto it = sig.even.rbegin(); it != sig.even.rend(); ++it)
        for (int c = 0; c < it->second; ++c) put(2 * it->first);
    for (std::size_t i = 0; i < ndeg_block.rows(); ++i)
        for (std::size_t j = 0; j < ndeg_block.cols(); ++j) C.at(pos + i, pos + j) = ndeg_block.at(i, j);
    return C;
}

SplitParts split_parts(const AdaptedBasis& b) {
    const PrimeField& F = b.field();
    const std::size_t n = b.dim();
    std::vector<Vec> odd, even, nd, dag;
    for (const auto& blk : b.odd)
        for (int k = 1; k <= 2 * blk.s + 1; ++k) {
            Vec v = b.P.col(blk.first_col + k - 1);
            odd.push_back(v);
            if (k % 2 == 0) dag.push_back(v);
        }
    for (const auto& blk : b.even)
        for (int k = 0; k < 2 * blk.s; ++k) even.push_back(b.P.col(blk.first_col + k));
    for (std::size_t k = 0; k < b.ndeg_dim; ++k) nd.push_back(b.P.col(b.ndeg_first + k));
    return {Subspace::span(F, n, odd), Subspace::span(F, n, even), Subspace::span(F, n, nd), Subspace::span(F, n, dag)};
}

std::vector<std::vector<Vec>> asym_radical(const BilSpace& space, const AdaptedBasis& b) {
    const PrimeField& F = space.field();
    std::vector<std::vector<Vec>> out(static_cast<std::size_t>(b.signature.t));
    std::vector<Vec> odd_vecs;
    for (const auto& blk : b.odd)
        for (int k = 0; k < 2 * blk.s + 1; ++k) odd_vecs.push_back(b.P.col(blk.first_col + k));
    for (const auto& blk : b.odd) {
        Vec E(space.dim(), 0);
        for (int k = 0; k <= blk.s; ++k) E = vec_add(F, E, b.P.col(blk.first_col + 2 * k));
        for (const auto& v : odd_vecs)
            if (space.phi(v, E) != space.phi(E, v)) fail(Errc::InternalInconsistency, "E vector not in the radical of phi - phi'");
        out[static_cast<std::size_t>(blk.i - 1)].push_back(E);
    }
    return out;
}

BilSpace reduce_step(const BilSpace& space) {
    const TowerData& T = space.towers();
    const Subspace& L1 = T.L(1);
    const Subspace& L2 = T.L(2);
    auto q = L1.complement_in(L2);
    Matrix B = Matrix::from_columns(space.field(), space.dim(), q);
    return BilSpace(B.transpose() * space.gram() * B);
}

BlockSignature shrink(const BlockSignature& sig) {
    BlockSignature r;
    for (auto& [s, m] : sig.odd)
        if (s >= 1) r.odd[s - 1] += m;
    for (auto& [s, m] : sig.even)
        if (s >= 2) r.even[s - 1] += m;
    r.ndeg = sig.ndeg;
    r.n = r.odd_dim() + r.even_dim() + r.ndeg;
    r.derive();
    return r;
}

}  // namespace bilform
