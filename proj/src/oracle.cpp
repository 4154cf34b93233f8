#include "bilform/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <atomic>
#include <exception>
#include <mutex>
#include <random>
#include <string>
#include <thread>
#include <tuple>
#include <type_traits>
#include <unordered_set>

#include "bilform/linalg.hpp"

namespace bilform {

namespace {

// Subspaces every isometry maps onto themselves.
std::vector<Subspace> invariant_family(const BilSpace& space) {
    const TowerData& T = space.towers();
    std::vector<Subspace> out;
    auto add = [&](const Subspace& W) {
        if (std::find(out.begin(), out.end(), W) == out.end()) out.push_back(W);
    };
    std::vector<Subspace> Ls = T.L_odd, Rs = T.R_odd;
    Ls.insert(Ls.end(), T.L_even.begin(), T.L_even.end());
    Rs.insert(Rs.end(), T.R_even.begin(), T.R_even.end());
    for (const auto& l : Ls) add(l);
    for (const auto& r : Rs) add(r);
    for (const auto& l : Ls)
        for (const auto& r : Rs) add(l.intersect(r));
    for (const auto* W : {&T.V_inf, &T.up_inf, &T.V_sup, &T.low_inf}) add(*W);
    for (const auto& W : T.Vi_chain) add(W);
    const Matrix& A = space.gram();
    if (space.dim() > 0 && rank(A) == space.dim()) {
        // sigma is central in the isometry group, so kernels of polynomials in sigma are invariant
        Matrix sigma = inverse(A) * A.transpose();
        for (const auto& pc : primary_components(sigma)) {
            Matrix ps = poly_eval(pc.p, sigma);
            Matrix pw = ps;
            for (int k = 1; k <= pc.exponent; ++k) {
                add(Subspace::span(space.field(), space.dim(), kernel_basis(pw)));
                pw = pw * ps;
            }
        }
    }
    add(Subspace::full(space.field(), space.dim()));
    return out;
}

using u8 = unsigned char;
constexpr std::size_t kMaxDim = 32;

// sum_k M_k v_k = 0 over working columns k
struct CommuteEq {
    std::vector<std::pair<std::size_t, Matrix>> terms;
};

struct ColumnPlan {
    Vec base;
    std::vector<Vec> S;  // candidate direction basis
};

struct Plan {
    PrimeField F;
    std::size_t n = 0;
    Matrix A, At, Bsym;  // gram, transpose, A + A^T
    Matrix B, Binv, Aw;  // working basis columns, inverse, working gram
    std::vector<ColumnPlan> cols;
    std::vector<CommuteEq> eqs;
};

Plan make_plan(const BilSpace& space, const ConstraintSet& cs) {
    const PrimeField& F = space.field();
    const std::size_t n = space.dim();
    Plan P{F, n, space.gram(), space.gram().transpose(), space.gram() + space.gram().transpose(), Matrix(F), Matrix(F), Matrix(F), {}, {}};
    auto check_amb = [&](const Subspace& W) {
        if (W.ambient() != n) fail(Errc::AmbientMismatch, "constraint subspace has the wrong ambient dimension");
    };
    std::optional<Subspace> Y, W1, W2;
    if (cs.fixed_pointwise) {
        check_amb(*cs.fixed_pointwise);
        Y = cs.fixed_pointwise;
    }
    if (cs.trivial_on_quotient) {
        W1 = cs.trivial_on_quotient->first;
        W2 = cs.trivial_on_quotient->second;
        check_amb(*W1);
        check_amb(*W2);
        if (!W1->contains(*W2)) fail(Errc::BadParams, "trivial_on_quotient needs W2 inside W1");
    }
    if (cs.extra_commute && (cs.extra_commute->rows() != n || cs.extra_commute->cols() != n))
        fail(Errc::ShapeMismatch, "extra_commute matrix has the wrong shape");

    std::vector<Subspace> fam = invariant_family(space);
    std::sort(fam.begin(), fam.end(), [](const Subspace& a, const Subspace& b) { return a.dim() < b.dim(); });

    // working basis: Y first, then vectors of W1, then the rest; each phase refines along the invariant family
    enum Phase { fixed, quotient, free };
    std::vector<Vec> basis;
    std::vector<Phase> phase;
    Subspace S(F, n);
    auto extend = [&](const Subspace& src, Phase ph) {
        std::vector<Subspace> pieces;
        for (const auto& W : fam) pieces.push_back(W.intersect(src));
        pieces.push_back(src);
        for (const auto& W : pieces) {
            for (const auto& v : S.intersect(W).complement_in(W)) {
                basis.push_back(v);
                phase.push_back(ph);
            }
            S = S + W;
        }
    };
    if (Y) extend(*Y, fixed);
    if (W1) extend(*W1, quotient);
    extend(Subspace::full(F, n), free);
    if (basis.size() != n) fail(Errc::InternalInconsistency, "working basis construction failed");

    P.B = Matrix::from_columns(F, n, basis);
    P.Binv = inverse(P.B);
    P.Aw = P.B.transpose() * P.A * P.B;
    P.cols.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        Subspace T = Subspace::full(F, n);
        for (const auto& W : fam)
            if (W.contains(basis[j])) T = T.intersect(W);
        ColumnPlan& c = P.cols[j];
        switch (phase[j]) {
        case fixed: c.base = basis[j]; break;
        case quotient:
            c.base = basis[j];
            c.S = W2->intersect(T).vectors();
            break;
        case free:
            c.base = Vec(n, 0);
            c.S = T.vectors();
            break;
        }
    }

    if (cs.extra_commute) {
        const Matrix& C = *cs.extra_commute;
        Matrix Cw = P.Binv * C * P.B;
        Matrix I = Matrix::identity(F, n);
        // g(C b_j) = C g(b_j): sum_k Cw[k][j] v_k - C v_j = 0
        for (std::size_t j = 0; j < n; ++j) {
            CommuteEq eq;
            for (std::size_t k = 0; k < n; ++k) {
                Matrix M = I.scaled(Cw.at(k, j));
                if (k == j) M = M - C;
                if (!M.is_zero()) eq.terms.emplace_back(k, std::move(M));
            }
            if (!eq.terms.empty()) P.eqs.push_back(std::move(eq));
        }
    }
    return P;
}

struct Stop {};

struct Shared {
    u64 budget = 0;
    std::atomic<u64> nodes{0};
    std::atomic<bool> stop{false};
    std::atomic<u64> found{0};
    std::size_t cap = 0;
    bool collect = false;
};

// Search state at one depth. Every unplaced column j ranges over the affine space
// v0_j + span(w_j[0..e_j)) cut out by all linear constraints against placed columns.
struct Frame {
    std::size_t n = 0;
    std::vector<u8> placed;
    std::vector<u32> e;
    std::vector<u32> v0;     // n x n, row j = v0 of column j (its value once placed)
    std::vector<u32> w;      // n x n x n
    std::vector<u32> ech;    // echelon rows of the placed span, n x n, fully reduced
    std::vector<u32> piv;    // pivot positions, size nech
    std::size_t nech = 0;
    std::vector<u8> eq_done;
    std::size_t nplaced = 0;

    void init(std::size_t n_, std::size_t neqs) {
        n = n_;
        placed.assign(n, 0);
        e.assign(n, 0);
        v0.assign(n * n, 0);
        w.assign(n * n * n, 0);
        ech.assign(n * n, 0);
        piv.assign(n, 0);
        eq_done.assign(neqs, 0);
    }
    u32* V0(std::size_t j) { return v0.data() + j * n; }
    u32* W(std::size_t j, std::size_t k) { return w.data() + (j * n + k) * n; }
    u32* E(std::size_t i) { return ech.data() + i * n; }
};

class Worker {
public:
    Worker(const Plan& P, Shared& sh)
        : P_(P), F_(P.F), p_(P.F.p()), n_(P.n), sh_(sh), frames_(P.n + 2), sA_(compress(P.A)), sAt_(compress(P.At)) {
        if (p_ <= (1u << 16)) {
            inv_.assign(p_, 0);
            for (u32 a = 1; a < p_; ++a) inv_[a] = F_.inv(a);
            if (p_ > 2) {
                qr_.assign(p_, -1);
                for (u32 a = 1; a < p_; ++a) qr_[static_cast<u64>(a) * a % p_] = 1;
            }
        }
        for (auto& f : frames_) f.init(n_, P_.eqs.size());
        // the closed-form pair count ignores commutation equations linking the two last columns
        pair_ok_ = !sh_.collect && P_.eqs.empty();
        Frame& f = frames_[0];
        for (std::size_t j = 0; j < n_; ++j) {
            const ColumnPlan& c = P_.cols[j];
            std::copy(c.base.begin(), c.base.end(), f.V0(j));
            f.e[j] = static_cast<u32>(c.S.size());
            for (std::size_t k = 0; k < c.S.size(); ++k) std::copy(c.S[k].begin(), c.S[k].end(), f.W(j, k));
        }
    }

    u64 count = 0;
    std::vector<Matrix> found;

    void flush() {
        if (local_) {
            sh_.nodes.fetch_add(local_);
            local_ = 0;
        }
    }

    // Propagates forced columns at depth d; false on a dead end.
    bool settle(std::size_t d) {
        Frame& f = frames_[d];
        for (;;) {
            std::size_t j = n_;
            for (std::size_t k = 0; k < n_; ++k)
                if (!f.placed[k] && f.e[k] == 0) {
                    j = k;
                    break;
                }
            if (j == n_) return true;
            add_nodes(1);
            const u32* v = f.V0(j);
            if (quad(v) != P_.Aw.at(j, j) || !independent(f, v)) return false;
            Vec vv(v, v + n_);
            if (!place(f, j, vv.data())) return false;
        }
    }

    // First level with more than one choice: returns (column, matching candidates).
    std::pair<std::size_t, std::vector<Vec>> branch_candidates(std::size_t d) {
        Frame& f = frames_[d];
        std::size_t j = pick(f);
        std::vector<Vec> out;
        enumerate(f, j, [&](const u32* v) { out.emplace_back(v, v + n_); });
        return {j, std::move(out)};
    }

    // Child of depth d with column j set to v; false when propagation fails.
    bool descend(std::size_t d, std::size_t j, const u32* v) {
        Frame& c = frames_[d + 1];
        c = frames_[d];
        return place(c, j, v) && settle(d + 1);
    }

    // One random root-to-leaf walk below depth d (Knuth's estimator): returns the nodes a full search
    // of that subtree would examine if every sibling looked like the chosen child.
    double probe(std::size_t d, std::mt19937_64& rng) {
        Frame& f = frames_[d];
        if (f.nplaced == n_) return 0;
        if (pair_ok_ && f.nplaced + 2 == n_) {
            std::size_t x = pick(f);
            return space_size(f.e[x]) + static_cast<double>(enumerate(f, x, nullptr));
        }
        const std::size_t j = pick(f);
        const double here = space_size(f.e[j]);
        u64 seen = 0;
        Vec pick_v;
        enumerate(f, j, [&](const u32* v) {
            if (std::uniform_int_distribution<u64>(0, seen++)(rng) == 0) pick_v.assign(v, v + n_);
        });
        if (seen == 0 || f.nplaced + 1 == n_) return here;
        if (!descend(d, j, pick_v.data())) return here + static_cast<double>(seen);
        return here + static_cast<double>(seen) * (1 + probe(d + 1, rng));
    }

    double space_size(u32 e) const { return std::pow(static_cast<double>(p_), e); }

    void run(std::size_t d) {
        Frame& f = frames_[d];
        if (f.nplaced == n_) {
            leaf(f);
            return;
        }
        if (pair_ok_ && f.nplaced + 2 == n_) {
            count += count_pair(f);
            return;
        }
        const std::size_t j = pick(f);
        if (f.nplaced + 1 == n_) {
            if (!sh_.collect) {
                count += enumerate(f, j, nullptr);
                return;
            }
            enumerate(f, j, [&](const u32* v) {
                Frame& c = frames_[d + 1];
                c = f;
                std::copy(v, v + n_, c.V0(j));
                c.placed[j] = 1;
                ++c.nplaced;
                leaf(c);
            });
            return;
        }
        enumerate(f, j, [&](const u32* v) {
            if (descend(d, j, v)) run(d + 1);
        });
    }

    Frame& frame(std::size_t d) { return frames_[d]; }

private:
    u32 add(u32 a, u32 b) const {
        const u32 s = a + b;
        return s >= p_ ? s - p_ : s;
    }
    u32 sub(u32 a, u32 b) const { return a >= b ? a - b : a + p_ - b; }
    u32 mulm(u32 a, u32 b) const { return static_cast<u32>(static_cast<u64>(a) * b % p_); }
    u32 finv(u32 a) const { return a < inv_.size() ? inv_[a] : F_.inv(a); }

    u32 dot(const u32* x, const u32* y) const {
        u64 s = 0;
        for (std::size_t k = 0; k < n_; ++k) s += static_cast<u64>(x[k]) * y[k];
        return static_cast<u32>(s % p_);
    }
    u32 quad(const u32* v) const {
        u32 av[kMaxDim];
        mul(sA_, v, av);
        return dot(v, av);
    }

    void add_nodes(u64 k) {
        if (sh_.stop.load(std::memory_order_relaxed)) throw Stop{};
        local_ += k;
        if (local_ > (1u << 16)) {
            const u64 tot = sh_.nodes.fetch_add(local_) + local_;
            local_ = 0;
            if (tot > sh_.budget) fail(Errc::BudgetExceeded, "search exceeded the node budget of " + std::to_string(sh_.budget));
        }
    }

    // residual of v modulo the placed span, at non-pivot coordinates
    void residual(Frame& f, const u32* v, u32* out) const {
        std::copy(v, v + n_, out);
        for (std::size_t i = 0; i < f.nech; ++i) {
            const u32 c = out[f.piv[i]];
            if (!c) continue;
            const u32 nc = p_ - c;
            const u32* r = f.E(i);
            for (std::size_t t = 0; t < n_; ++t)
                if (r[t]) out[t] = static_cast<u32>((out[t] + static_cast<u64>(nc) * r[t]) % p_);
        }
    }
    bool independent(Frame& f, const u32* v) const {
        u32 r[kMaxDim];
        residual(f, v, r);
        for (std::size_t t = 0; t < n_; ++t)
            if (r[t]) return true;
        return false;
    }

    // a . v_j = alpha on column j's affine space
    bool restrict(Frame& f, std::size_t j, const u32* a, u32 alpha) {
        u32& e = f.e[j];
        u32* v0 = f.V0(j);
        const u32 gamma = sub(alpha, dot(a, v0));
        std::size_t ks = e;
        u32 beta[kMaxDim];
        for (std::size_t k = 0; k < e; ++k) {
            beta[k] = dot(a, f.W(j, k));
            if (beta[k]) ks = k;
        }
        if (ks == e) return gamma == 0;
        const u32 inv = finv(beta[ks]);
        const u32* ws = f.W(j, ks);
        const u32 sc = mulm(gamma, inv);
        if (sc)
            for (std::size_t t = 0; t < n_; ++t) v0[t] = static_cast<u32>((v0[t] + static_cast<u64>(sc) * ws[t]) % p_);
        for (std::size_t k = 0; k < e; ++k) {
            if (k == ks || !beta[k]) continue;
            const u32 m = p_ - mulm(beta[k], inv);
            u32* wk = f.W(j, k);
            for (std::size_t t = 0; t < n_; ++t) wk[t] = static_cast<u32>((wk[t] + static_cast<u64>(m) * ws[t]) % p_);
        }
        if (ks != e - 1) std::copy(f.W(j, e - 1), f.W(j, e - 1) + n_, f.W(j, ks));
        --e;
        return true;
    }

    bool place(Frame& f, std::size_t j, const u32* v) {
        std::copy(v, v + n_, f.V0(j));
        f.placed[j] = 1;
        f.e[j] = 0;
        ++f.nplaced;
        // echelon update
        u32 r[kMaxDim];
        residual(f, v, r);
        std::size_t pc = n_;
        for (std::size_t t = 0; t < n_; ++t)
            if (r[t]) {
                pc = t;
                break;
            }
        if (pc == n_) return false;
        const u32 inv = finv(r[pc]);
        for (std::size_t t = 0; t < n_; ++t) r[t] = mulm(r[t], inv);
        for (std::size_t i = 0; i < f.nech; ++i) {
            u32* row = f.E(i);
            const u32 c = row[pc];
            if (!c) continue;
            const u32 nc = p_ - c;
            for (std::size_t t = 0; t < n_; ++t)
                if (r[t]) row[t] = static_cast<u32>((row[t] + static_cast<u64>(nc) * r[t]) % p_);
        }
        std::copy(r, r + n_, f.E(f.nech));
        f.piv[f.nech++] = static_cast<u32>(pc);
        // Gram constraints on the unplaced columns
        u32 at[kMaxDim], av[kMaxDim];
        mul(sAt_, v, at);
        mul(sA_, v, av);
        for (std::size_t k = 0; k < n_; ++k) {
            if (f.placed[k]) continue;
            if (!restrict(f, k, at, P_.Aw.at(j, k)) || !restrict(f, k, av, P_.Aw.at(k, j))) return false;
        }
        // commutation equations with a single unplaced column left
        for (std::size_t q = 0; q < P_.eqs.size(); ++q) {
            if (f.eq_done[q]) continue;
            const CommuteEq& eq = P_.eqs[q];
            std::size_t open = n_, nopen = 0;
            for (const auto& [k, M] : eq.terms)
                if (!f.placed[k]) {
                    open = k;
                    ++nopen;
                }
            if (nopen > 1) continue;
            f.eq_done[q] = 1;
            Vec rhs(n_, 0);
            const Matrix* Mx = nullptr;
            for (const auto& [k, M] : eq.terms) {
                if (k == open) {
                    Mx = &M;
                    continue;
                }
                for (std::size_t r2 = 0; r2 < n_; ++r2) rhs[r2] = sub(rhs[r2], dot(M.row_ptr(r2), f.V0(k)));
            }
            if (!Mx) {
                for (u32 x : rhs)
                    if (x) return false;
                continue;
            }
            for (std::size_t r2 = 0; r2 < n_; ++r2)
                if (!restrict(f, open, Mx->row_ptr(r2), rhs[r2])) return false;
        }
        return true;
    }

    std::size_t pick(const Frame& f) const {
        std::size_t best = n_;
        for (std::size_t k = 0; k < n_; ++k)
            if (!f.placed[k] && (best == n_ || f.e[k] < f.e[best])) best = k;
        return best;
    }

    // Calls emit(v) for each v in column j's affine space with phi(v, v) right and v independent of the
    // placed span; with a null emit it only counts them. With Coeffs, emit gets the coordinates of v
    // along the column's directions instead.
    template <bool Coeffs = false, class Emit>
    u64 enumerate(Frame& f, std::size_t j, Emit&& emit) {
        const std::size_t e = f.e[j];
        u64 total = 1;
        for (std::size_t k = 0; k < e; ++k) {
            if (total > sh_.budget / p_ + 1) fail(Errc::BudgetExceeded, "candidate space exceeds the node budget");
            total *= p_;
        }
        add_nodes(total);
        const u32 target = P_.Aw.at(j, j);
        const u32* v0 = f.V0(j);
        if (e == 0) {
            if (quad(v0) == target && independent(f, v0)) {
                if constexpr (Coeffs) emit(static_cast<const u32*>(nullptr));
                else if constexpr (!std::is_same_v<std::decay_t<Emit>, std::nullptr_t>) emit(v0);
                return 1;
            }
            return 0;
        }
        // the residual is tracked only at non-pivot coordinates
        std::size_t np[kMaxDim];
        std::size_t nr = 0;
        {
            u8 isp[kMaxDim] = {};
            for (std::size_t i = 0; i < f.nech; ++i) isp[f.piv[i]] = 1;
            for (std::size_t t = 0; t < n_; ++t)
                if (!isp[t]) np[nr++] = t;
        }
        u32 tmp[kMaxDim], res[kMaxDim], cur[kMaxDim], v[kMaxDim];
        u32 rw[kMaxDim][kMaxDim], qw[kMaxDim], bk[kMaxDim], bw[kMaxDim][kMaxDim], digit[kMaxDim] = {};
        u32 Aw[kMaxDim][kMaxDim], Atw[kMaxDim][kMaxDim];  // A w_k and A^T w_k
        residual(f, v0, tmp);
        for (std::size_t t = 0; t < nr; ++t) res[t] = tmp[np[t]];
        u32 q = quad(v0);
        for (std::size_t k = 0; k < e; ++k) {
            const u32* wk = f.W(j, k);
            mul(sA_, wk, Aw[k]);
            mul(sAt_, wk, Atw[k]);
            residual(f, wk, tmp);
            for (std::size_t t = 0; t < nr; ++t) rw[k][t] = tmp[np[t]];
            qw[k] = dot(wk, Aw[k]);
            bk[k] = add(dot(v0, Aw[k]), dot(v0, Atw[k]));
        }
        for (std::size_t k = 0; k < e; ++k)
            for (std::size_t l = 0; l < e; ++l) bw[k][l] = add(dot(f.W(j, k), Aw[l]), dot(f.W(j, k), Atw[l]));
        u64 hits = 0;
        for (;;) {
            u32 cq = q, cb = bk[0];
            std::copy(res, res + nr, cur);
            for (u32 t0 = 0; t0 < p_; ++t0) {
                if (cq == target) {
                    bool nz = false;
                    for (std::size_t t = 0; t < nr && !nz; ++t) nz = cur[t] != 0;
                    if (nz) {
                        ++hits;
                        if constexpr (Coeffs) {
                            digit[0] = t0;
                            emit(static_cast<const u32*>(digit));
                            digit[0] = 0;
                        } else if constexpr (!std::is_same_v<std::decay_t<Emit>, std::nullptr_t>) {
                            std::copy(v0, v0 + n_, v);
                            for (std::size_t k = 0; k < e; ++k) {
                                const u32 dk = k == 0 ? t0 : digit[k];
                                if (!dk) continue;
                                const u32* wk = f.W(j, k);
                                for (std::size_t t = 0; t < n_; ++t) v[t] = static_cast<u32>((v[t] + static_cast<u64>(dk) * wk[t]) % p_);
                            }
                            emit(static_cast<const u32*>(v));
                        }
                    }
                }
                cq = add(cq, add(cb, qw[0]));
                cb = add(cb, bw[0][0]);
                for (std::size_t t = 0; t < nr; ++t) cur[t] = add(cur[t], rw[0][t]);
            }
            std::size_t l = 1;
            for (; l < e; ++l) {
                q = add(q, add(bk[l], qw[l]));
                for (std::size_t k = 0; k < e; ++k) bk[k] = add(bk[k], bw[l][k]);
                for (std::size_t t = 0; t < nr; ++t) res[t] = add(res[t], rw[l][t]);
                if (++digit[l] < p_) break;
                digit[l] = 0;
            }
            if (l >= e) break;
        }
        return hits;
    }

    // Two columns left: enumerate the one with fewer directions, count the other in closed form.
    u64 count_pair(Frame& f) {
        std::size_t x = n_, y = n_;
        for (std::size_t k = 0; k < n_; ++k)
            if (!f.placed[k]) (x == n_ ? x : y) = k;
        if (f.e[y] < f.e[x]) std::swap(x, y);
        const std::size_t ey = f.e[y];
        const u32* y0 = f.V0(y);
        std::size_t np[2], nr = 0;
        {
            u8 isp[kMaxDim] = {};
            for (std::size_t i = 0; i < f.nech; ++i) isp[f.piv[i]] = 1;
            for (std::size_t t = 0; t < n_; ++t)
                if (!isp[t]) np[nr++] = t;
        }
        auto res2 = [&](const u32* z, u32* out) {
            for (std::size_t t = 0; t < 2; ++t) {
                u64 acc = z[np[t]];
                for (std::size_t i = 0; i < f.nech; ++i)
                    acc += static_cast<u64>(p_ - z[f.piv[i]]) * f.E(i)[np[t]];
                out[t] = static_cast<u32>(acc % p_);
            }
        };
        // y = y0 + sum s_k w_k; Q(y) = c0 + sum lin_k s_k + sum_{k<=l} H_kl s_k s_l
        u32 Ay0[kMaxDim], Aty0[kMaxDim], U[kMaxDim][kMaxDim], Ut[kMaxDim][kMaxDim], AW[kMaxDim][kMaxDim], AtW[kMaxDim][kMaxDim];
        u32 lin[kMaxDim], H[kMaxDim][kMaxDim] = {}, ry0[2], ryw[kMaxDim][2];
        mul(sA_, y0, Ay0);
        mul(sAt_, y0, Aty0);
        const u32 c0 = dot(y0, Ay0);
        res2(y0, ry0);
        for (std::size_t k = 0; k < ey; ++k) {
            const u32* wk = f.W(y, k);
            mul(sA_, wk, AW[k]);
            mul(sAt_, wk, AtW[k]);
            std::copy(AW[k], AW[k] + n_, U[k]);     // x . (A w_k) = phi(x, w_k)
            std::copy(AtW[k], AtW[k] + n_, Ut[k]);  // x . (A^T w_k) = phi(w_k, x)
            lin[k] = add(dot(y0, AW[k]), dot(y0, AtW[k]));
            res2(wk, ryw[k]);
        }
        for (std::size_t k = 0; k < ey; ++k) {
            H[k][k] = dot(f.W(y, k), AW[k]);
            for (std::size_t l = k + 1; l < ey; ++l) H[k][l] = add(dot(f.W(y, k), AW[l]), dot(f.W(y, k), AtW[l]));
        }
        u32 Pol[kMaxDim][kMaxDim];  // symmetric polar matrix of the s-quadric
        for (std::size_t k = 0; k < ey; ++k) {
            Pol[k][k] = add(H[k][k], H[k][k]);
            for (std::size_t l = k + 1; l < ey; ++l) Pol[k][l] = Pol[l][k] = H[k][l];
        }
        const u32 cy = P_.Aw.at(y, y), axy = P_.Aw.at(x, y), ayx = P_.Aw.at(y, x);
        // everything the inner step needs is affine in the coordinates of x
        const std::size_t ex = f.e[x], w = ey + 3;
        u32 X0[kMaxDim + 3][2], XW[kMaxDim][kMaxDim + 3][2];
        auto lin_x = [&](const u32* xv, u32 (*out)[2]) {
            for (std::size_t k = 0; k < ey; ++k) {
                out[k][0] = dot(xv, U[k]);
                out[k][1] = dot(xv, Ut[k]);
            }
            out[ey][0] = dot(xv, Ay0);
            out[ey][1] = dot(xv, Aty0);
            res2(xv, out[ey + 1]);
        };
        lin_x(f.V0(x), X0);
        for (std::size_t d = 0; d < ex; ++d) lin_x(f.W(x, d), XW[d]);
        u64 total = 0;
        enumerate<true>(f, x, [&](const u32* cf) {
            add_nodes(1);
            u32 L[kMaxDim + 3][2];
            for (std::size_t k = 0; k + 1 < w; ++k)
                for (std::size_t h = 0; h < 2; ++h) {
                    u64 acc = X0[k][h];
                    if (cf)
                        for (std::size_t d = 0; d < ex; ++d) acc += static_cast<u64>(cf[d]) * XW[d][k][h];
                    L[k][h] = static_cast<u32>(acc % p_);
                }
            // phi(x, y) = axy and phi(y, x) = ayx as equations in s
            u32 rows[2][kMaxDim + 1];
            for (std::size_t k = 0; k < ey; ++k) {
                rows[0][k] = L[k][0];
                rows[1][k] = L[k][1];
            }
            rows[0][ey] = sub(axy, L[ey][0]);
            rows[1][ey] = sub(ayx, L[ey][1]);
            std::size_t pv[2], rk = 0;
            for (std::size_t c = 0; c < ey && rk < 2; ++c) {
                std::size_t sel = 2;
                for (std::size_t i = rk; i < 2; ++i)
                    if (rows[i][c]) {
                        sel = i;
                        break;
                    }
                if (sel == 2) continue;
                if (sel != rk) std::swap(rows[sel], rows[rk]);
                const u32 inv = finv(rows[rk][c]);
                for (std::size_t t = 0; t <= ey; ++t) rows[rk][t] = mulm(rows[rk][t], inv);
                for (std::size_t i = 0; i < 2; ++i) {
                    if (i == rk || !rows[i][c]) continue;
                    const u32 m = rows[i][c];
                    for (std::size_t t = 0; t <= ey; ++t) rows[i][t] = sub(rows[i][t], mulm(m, rows[rk][t]));
                }
                pv[rk++] = c;
            }
            for (std::size_t i = rk; i < 2; ++i)
                if (rows[i][ey]) return;
            const u32 rx[2] = {L[ey + 1][0], L[ey + 1][1]};
            // l(y) = rx0 * r(y)_1 - rx1 * r(y)_0 must be nonzero
            auto ell = [&](const u32* r) { return sub(mulm(rx[0], r[1]), mulm(rx[1], r[0])); };
            u8 isp[kMaxDim] = {};
            for (std::size_t i = 0; i < rk; ++i) isp[pv[i]] = 1;
            std::size_t fr[kMaxDim], nf = 0;
            for (std::size_t c = 0; c < ey; ++c)
                if (!isp[c]) fr[nf++] = c;
            // y = s0 + D z over the free coordinates z
            Quad g;
            g.k = nf;
            u32 s0[kMaxDim] = {}, D[kMaxDim][kMaxDim];
            for (std::size_t i = 0; i < rk; ++i) s0[pv[i]] = rows[i][ey];
            for (std::size_t m = 0; m < nf; ++m) {
                for (std::size_t c = 0; c < ey; ++c) D[m][c] = 0;
                D[m][fr[m]] = 1;
                for (std::size_t i = 0; i < rk; ++i) D[m][pv[i]] = (p_ - rows[i][fr[m]]) % p_;
            }
            auto qs = [&](const u32* a, const u32* pb) {  // polar form, pb = P b
                u64 acc = 0;
                for (std::size_t k = 0; k < ey; ++k) acc += static_cast<u64>(a[k]) * pb[k];
                return static_cast<u32>(acc % p_);
            };
            auto qh = [&](const u32* a) {
                u64 acc = 0;
                for (std::size_t k = 0; k < ey; ++k) {
                    if (!a[k]) continue;
                    u64 t = 0;
                    for (std::size_t l = k; l < ey; ++l) t += static_cast<u64>(H[k][l]) * a[l];
                    acc += (t % p_) * a[k];
                }
                return static_cast<u32>(acc % p_);
            };
            u32 PD[kMaxDim][kMaxDim];
            for (std::size_t m = 0; m < nf; ++m)
                for (std::size_t k = 0; k < ey; ++k) {
                    u64 t = 0;
                    for (std::size_t l = 0; l < ey; ++l) t += static_cast<u64>(Pol[k][l]) * D[m][l];
                    PD[m][k] = static_cast<u32>(t % p_);
                }
            u64 c = c0, l0 = ell(ry0);
            for (std::size_t k = 0; k < ey; ++k) {
                c += static_cast<u64>(lin[k]) * s0[k];
                l0 += static_cast<u64>(ell(ryw[k])) * s0[k];
            }
            g.c = sub(static_cast<u32>((c + qh(s0)) % p_), cy);
            u32 lz[kMaxDim];
            for (std::size_t m = 0; m < nf; ++m) {
                u64 a = qs(s0, PD[m]), b = 0;
                for (std::size_t k = 0; k < ey; ++k) {
                    a += static_cast<u64>(lin[k]) * D[m][k];
                    b += static_cast<u64>(ell(ryw[k])) * D[m][k];
                }
                g.l[m] = static_cast<u32>(a % p_);
                lz[m] = static_cast<u32>(b % p_);
                g.M[m][m] = qh(D[m]);
                for (std::size_t m2 = m + 1; m2 < nf; ++m2) g.M[m][m2] = qs(D[m], PD[m2]);
            }
            const u32 lc = static_cast<u32>(l0 % p_);
            u64 all = count_zeros(g), on = 0;
            std::size_t ms = nf;
            for (std::size_t m = 0; m < nf && ms == nf; ++m)
                if (lz[m]) ms = m;
            if (ms == nf) {
                if (lc == 0) on = all;
            } else {
                // z_ms = -(lc + sum_{m != ms} lz_m z_m) / lz_ms
                const u32 iv = p_ - finv(lz[ms]);
                u32 a[kMaxDim] = {}, E[kMaxDim][kMaxDim];
                a[ms] = mulm(lc, iv);
                std::size_t u = 0;
                for (std::size_t m = 0; m < nf; ++m) {
                    if (m == ms) continue;
                    std::fill(E[u], E[u] + nf, 0u);
                    E[u][m] = 1;
                    E[u][ms] = mulm(lz[m], iv);
                    ++u;
                }
                on = count_zeros(compose(g, a, E, u));
            }
            total += all - on;
        });
        return total;
    }

    struct Quad {  // sum_{i<=j} M_ij z_i z_j + l . z + c in k variables
        std::size_t k;
        u32 M[kMaxDim][kMaxDim];  // upper triangle of the leading k x k block
        u32 l[kMaxDim];
        u32 c;
    };

    // g(a + sum_u t_u E_u) as a quadric in t
    Quad compose(const Quad& g, const u32* a, const u32 (*E)[kMaxDim], std::size_t k2) const {
        auto polar = [&](const u32* x, const u32* y) {
            u64 acc = 0;
            for (std::size_t i = 0; i < g.k; ++i)
                for (std::size_t j = i; j < g.k; ++j) {
                    if (!g.M[i][j]) continue;
                    const u64 t = (static_cast<u64>(x[i]) * y[j] + static_cast<u64>(x[j]) * y[i]) % p_;
                    acc += t * g.M[i][j];
                }
            return static_cast<u32>(acc % p_);
        };
        auto value = [&](const u32* x) {
            u64 acc = 0;
            for (std::size_t i = 0; i < g.k; ++i) {
                if (!x[i]) continue;
                u64 t = g.l[i];
                for (std::size_t j = i; j < g.k; ++j) t += static_cast<u64>(g.M[i][j]) * x[j];
                acc += (t % p_) * x[i];
            }
            return static_cast<u32>(acc % p_);
        };
        Quad h;
        h.k = k2;
        h.c = add(g.c, value(a));
        for (std::size_t u = 0; u < k2; ++u) {
            u64 t = polar(a, E[u]);
            for (std::size_t i = 0; i < g.k; ++i) t += static_cast<u64>(g.l[i]) * E[u][i];
            const u32 gl = static_cast<u32>(t % p_);
            u64 d = 0;  // quadratic part of g at E_u
            for (std::size_t i = 0; i < g.k; ++i) {
                if (!E[u][i]) continue;
                u64 s = 0;
                for (std::size_t j = i; j < g.k; ++j) s += static_cast<u64>(g.M[i][j]) * E[u][j];
                d += (s % p_) * E[u][i];
            }
            h.l[u] = gl;
            h.M[u][u] = static_cast<u32>(d % p_);
            for (std::size_t w = u + 1; w < k2; ++w) h.M[u][w] = polar(E[u], E[w]);
        }
        return h;
    }

    int eta(u32 a) const {
        if (!a) return 0;
        if (!qr_.empty()) return qr_[a];
        return F_.pow(a, (p_ - 1) / 2) == 1 ? 1 : -1;
    }

    // number of zeros of g in F_p^k
    u64 count_zeros(Quad g) const {
        const std::size_t k = g.k;
        if (p_ == 2) {
            if (k > 24) fail(Errc::BudgetExceeded, "quadric too large to count");
            u64 hits = 0;
            for (u64 z = 0; z < (u64{1} << k); ++z) {
                u32 v = g.c;
                for (std::size_t i = 0; i < k; ++i) {
                    if (!(z >> i & 1)) continue;
                    v ^= g.l[i];
                    for (std::size_t j = i; j < k; ++j)
                        if (z >> j & 1) v ^= g.M[i][j];
                }
                hits += v == 0;
            }
            return hits;
        }
        // symmetric matrix and congruence diagonalisation, z = T u
        const u32 half = finv(2);
        u32 S[kMaxDim][kMaxDim], T[kMaxDim][kMaxDim];
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t j = 0; j < k; ++j) T[i][j] = i == j;
            S[i][i] = g.M[i][i];
            for (std::size_t j = i + 1; j < k; ++j) S[i][j] = S[j][i] = mulm(g.M[i][j], half);
        }
        auto colop = [&](std::size_t dst, std::size_t src, u32 m) {  // var dst += m * var src
            for (std::size_t r = 0; r < k; ++r) T[r][dst] = add(T[r][dst], mulm(m, T[r][src]));
            for (std::size_t r = 0; r < k; ++r) S[r][dst] = add(S[r][dst], mulm(m, S[r][src]));
            for (std::size_t c = 0; c < k; ++c) S[dst][c] = add(S[dst][c], mulm(m, S[src][c]));
        };
        for (std::size_t i = 0; i < k; ++i) {
            if (!S[i][i]) {
                std::size_t j = i + 1;
                while (j < k && !S[j][j]) ++j;
                if (j < k) {
                    colop(i, j, 1);
                    if (!S[i][i]) colop(i, j, p_ - 2);  // S_ii + 2S_ij + S_jj vanished; use -1 instead
                } else {
                    j = i + 1;
                    while (j < k && !S[i][j]) ++j;
                    if (j == k) continue;
                    colop(i, j, 1);
                }
            }
            const u32 iv = finv(S[i][i]);
            for (std::size_t j = i + 1; j < k; ++j)
                if (S[i][j]) colop(j, i, p_ - mulm(S[i][j], iv));
        }
        int r = 0;
        u32 D = 1;
        u64 cst = g.c;
        for (std::size_t i = 0; i < k; ++i) {
            u64 t = 0;
            for (std::size_t r2 = 0; r2 < k; ++r2) t += static_cast<u64>(T[r2][i]) * g.l[r2];
            const u32 li = static_cast<u32>(t % p_);
            if (!S[i][i]) {
                if (li) return ipow(k - 1);
                continue;
            }
            ++r;
            D = mulm(D, S[i][i]);
            // d u^2 + l u = d (u + l/2d)^2 - l^2/4d
            cst += p_ - mulm(mulm(li, li), finv(mulm(4 % p_, S[i][i])));
        }
        const u32 a = (p_ - static_cast<u32>(cst % p_)) % p_;  // sum d_i x_i^2 = a
        const u64 rest = ipow(k - r);
        if (r == 0) return a == 0 ? rest : 0;
        const u32 m1 = p_ - 1;
        i64 n;
        if (r % 2 == 0) {
            const int e = eta(mulm((r / 2) % 2 ? m1 : 1, D));
            const i64 nu = a == 0 ? static_cast<i64>(p_) - 1 : -1;
            n = static_cast<i64>(ipow(r - 1)) + nu * static_cast<i64>(ipow((r - 2) / 2)) * e;
        } else {
            const int e = eta(mulm(mulm(((r - 1) / 2) % 2 ? m1 : 1, a), D));
            n = static_cast<i64>(ipow(r - 1)) + static_cast<i64>(ipow((r - 1) / 2)) * e;
        }
        return static_cast<u64>(n) * rest;
    }

    u64 ipow(std::size_t e) const {
        u64 r = 1;
        for (std::size_t i = 0; i < e; ++i) {
            if (r > (u64{1} << 62) / p_) fail(Errc::BudgetExceeded, "quadric count exceeds 64 bits");
            r *= p_;
        }
        return r;
    }

    struct Sparse {  // row-compressed Gram matrix; corpus forms are mostly zero
        std::vector<u32> start, col, val;
    };
    static Sparse compress(const Matrix& M) {
        Sparse S;
        for (std::size_t r = 0; r < M.rows(); ++r) {
            S.start.push_back(static_cast<u32>(S.col.size()));
            for (std::size_t c = 0; c < M.cols(); ++c)
                if (M.at(r, c)) {
                    S.col.push_back(static_cast<u32>(c));
                    S.val.push_back(M.at(r, c));
                }
        }
        S.start.push_back(static_cast<u32>(S.col.size()));
        return S;
    }
    void mul(const Sparse& M, const u32* x, u32* out) const {
        for (std::size_t r = 0; r < n_; ++r) {
            u64 s = 0;
            for (u32 i = M.start[r]; i < M.start[r + 1]; ++i) s += static_cast<u64>(M.val[i]) * x[M.col[i]];
            out[r] = static_cast<u32>(s % p_);
        }
    }

    void leaf(Frame& f) {
        if (!sh_.collect) {
            ++count;
            return;
        }
        if (sh_.found.fetch_add(1) + 1 > sh_.cap) fail(Errc::CapExceeded, "more isometries than the enumeration cap");
        Matrix Vm(F_, n_, n_);
        for (std::size_t j = 0; j < n_; ++j)
            for (std::size_t t = 0; t < n_; ++t) Vm.at(t, j) = f.V0(j)[t];
        found.push_back(Vm * P_.Binv);
    }

    const Plan& P_;
    const PrimeField& F_;
    u32 p_;
    std::size_t n_;
    Shared& sh_;
    u64 local_ = 0;
    bool pair_ok_ = false;
    std::vector<Frame> frames_;
    std::vector<u32> inv_;
    std::vector<int> qr_;
    Sparse sA_, sAt_;
};

struct Outcome {
    u64 count = 0;
    u64 nodes = 0;
    double estimate = 0;
    std::vector<Matrix> found;
};

Outcome drive(const BilSpace& space, const ConstraintSet& cs, const SearchOptions& opt, bool collect, std::size_t cap) {
    Outcome out;
    const std::size_t n = space.dim();
    if (n == 0) {
        out.count = 1;
        if (collect) out.found.push_back(Matrix(space.field(), 0, 0));
        return out;
    }
    if (n > kMaxDim) fail(Errc::BudgetExceeded, "oracle supports dimension at most " + std::to_string(kMaxDim));
    Plan P = make_plan(space, cs);
    Shared sh;
    sh.budget = opt.node_budget;
    sh.collect = collect;
    sh.cap = cap;
    Worker root(P, sh);
    auto finish = [&](Worker& w) {
        w.flush();
        out.count += w.count;
        for (auto& g : w.found) out.found.push_back(std::move(g));
        w.found.clear();
    };
    // descend through forced choices; split the first real branching across workers
    if (!root.settle(0)) {
        root.flush();
        out.nodes = sh.nodes.load();
        return out;
    }
    std::size_t d = 0;
    std::size_t col = 0;
    std::vector<Vec> cands;
    for (;;) {
        Frame& f = root.frame(d);
        if (f.nplaced + 1 >= n) {
            root.run(d);
            finish(root);
            out.nodes = sh.nodes.load();
            return out;
        }
        std::tie(col, cands) = root.branch_candidates(d);
        if (cands.size() != 1) break;
        if (!root.descend(d, col, cands[0].data())) {
            root.flush();
            out.nodes = sh.nodes.load();
            return out;
        }
        ++d;
    }
    root.flush();
    if (opt.probes && cands.size() > 1) {
        Shared psh;  // probes are metered separately
        psh.budget = sh.budget;
        Worker pw(P, psh);
        pw.frame(d) = root.frame(d);
        std::mt19937_64 rng(opt.seed);
        double sum = 0;
        unsigned done = 0;
        const double base = static_cast<double>(sh.nodes.load());
        while (done < opt.probes) {
            const std::size_t idx = std::uniform_int_distribution<std::size_t>(0, cands.size() - 1)(rng);
            if (pw.descend(d, col, cands[idx].data())) sum += 1 + pw.probe(d + 1, rng);
            ++done;
            pw.flush();
            out.estimate = base + static_cast<double>(cands.size()) * sum / done;
            // stop once probing costs more than the search it predicts
            if (done >= 64 && static_cast<double>(psh.nodes.load()) > out.estimate) break;
        }
        if (out.estimate > static_cast<double>(sh.budget))
            fail(Errc::BudgetExceeded, "estimated " + std::to_string(static_cast<u64>(out.estimate)) + " search nodes exceed the node budget of " +
                                           std::to_string(sh.budget));
    }
    const unsigned nt = std::max(1u, std::min<unsigned>(opt.threads, static_cast<unsigned>(std::max<std::size_t>(1, cands.size()))));
    std::atomic<std::size_t> next{0};
    std::mutex mu;
    std::exception_ptr err;
    std::vector<Worker> workers(nt, root);
    auto job = [&](Worker& w) {
        try {
            for (;;) {
                const std::size_t idx = next.fetch_add(1);
                if (idx >= cands.size()) break;
                if (w.descend(d, col, cands[idx].data())) w.run(d + 1);
            }
            w.flush();
        } catch (const Stop&) {
        } catch (...) {
            std::lock_guard<std::mutex> lk(mu);
            if (!err) err = std::current_exception();
            sh.stop = true;
        }
    };
    if (nt == 1) {
        job(workers[0]);
    } else {
        std::vector<std::thread> th;
        for (unsigned t = 0; t < nt; ++t) th.emplace_back(job, std::ref(workers[t]));
        for (auto& t : th) t.join();
    }
    if (err) std::rethrow_exception(err);
    for (auto& w : workers) finish(w);
    out.nodes = sh.nodes.load();
    if (out.nodes > sh.budget) fail(Errc::BudgetExceeded, "search exceeded the node budget of " + std::to_string(sh.budget));
    return out;
}

}  // namespace

SearchResult search_isometries(const BilSpace& space, const ConstraintSet& cs, const SearchOptions& opt) {
    Outcome o = drive(space, cs, opt, false, 0);
    return {BigInt(o.count), o.nodes, o.estimate};
}

BigInt count_isometries(const BilSpace& space, const ConstraintSet& cs, const SearchOptions& opt) {
    return search_isometries(space, cs, opt).count;
}

std::vector<Matrix> enumerate_isometries(const BilSpace& space, const ConstraintSet& cs, std::size_t cap, const SearchOptions& opt) {
    Outcome o = drive(space, cs, opt, true, cap);
    auto key = [](const Matrix& g) { return g.transpose().data(); };
    std::sort(o.found.begin(), o.found.end(), [&](const Matrix& x, const Matrix& y) { return key(x) < key(y); });
    return std::move(o.found);
}

namespace {

std::string mat_key(const Matrix& g) {
    std::string s;
    s.reserve(g.data().size() * 4);
    for (u32 x : g.data()) s.append(reinterpret_cast<const char*>(&x), sizeof x);
    return s;
}

}  // namespace

ClosureResult group_closure(const std::vector<Matrix>& gens, std::size_t cap, bool keep_elements) {
    if (gens.empty()) return {BigInt(1), keep_elements ? std::optional<std::vector<Matrix>>(std::vector<Matrix>{}) : std::nullopt};
    const PrimeField& F = gens[0].field();
    const std::size_t n = gens[0].rows();
    for (const auto& g : gens) {
        if (!(g.field() == F) || g.rows() != n || g.cols() != n) fail(Errc::ShapeMismatch, "generators differ in size or field");
        if (rank(g) != n) fail(Errc::Singular, "generator is not invertible");
    }
    std::unordered_set<std::string> seen;
    std::vector<Matrix> elems{Matrix::identity(F, n)};
    seen.insert(mat_key(elems[0]));
    for (std::size_t head = 0; head < elems.size(); ++head) {
        for (const auto& g : gens) {
            Matrix h = elems[head] * g;
            if (seen.insert(mat_key(h)).second) {
                if (elems.size() >= cap) fail(Errc::CapExceeded, "group closure exceeds the cap");
                elems.push_back(std::move(h));
            }
        }
    }
    ClosureResult r{BigInt(elems.size()), std::nullopt};
    if (keep_elements) r.elements = std::move(elems);
    return r;
}

}  // namespace bilform
