#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "bilform/matrix.hpp"
#include "bilform/poly.hpp"

namespace bilform {

struct TowerData;

// (V, phi) with phi(x, y) = x^T A y.
class BilSpace {
public:
    explicit BilSpace(Matrix gram);

    const PrimeField& field() const noexcept { return A_.field(); }
    std::size_t dim() const noexcept { return A_.rows(); }
    const Matrix& gram() const noexcept { return A_; }
    u32 phi(const Vec& x, const Vec& y) const { return bilinear(A_, x, y); }

    // lazily computed, idempotent
    const TowerData& towers() const;

private:
    Matrix A_;
    struct Cache {
        std::once_flag once;
        std::unique_ptr<TowerData> data;
    };
    std::shared_ptr<Cache> cache_;
};

enum class Side { left, right };

// left: {v : phi(v, U) = 0}; right: {v : phi(U, v) = 0}
Subspace orth(const BilSpace& space, const Subspace& U, Side side);

struct BlockSignature {
    std::map<int, int> odd;   // s -> multiplicity of N_{2s+1}
    std::map<int, int> even;  // s -> multiplicity of N_{2s}
    std::size_t ndeg = 0;
    std::size_t n = 0;
    // derived
    int t = 0;
    std::vector<int> s;  // s_1 > s_2 > ... > s_t
    std::vector<int> m;  // m_1, ..., m_t
    int tbar = 0;

    std::size_t odd_dim() const noexcept;
    std::size_t even_dim() const noexcept;
    int sum_m() const noexcept;
    void derive();

    friend bool operator==(const BlockSignature& a, const BlockSignature& b) noexcept {
        return a.odd == b.odd && a.even == b.even && a.ndeg == b.ndeg && a.n == b.n;
    }
    std::string to_string() const;
};

struct TowerData {
    std::vector<Subspace> L_odd, R_odd;    // L^1, L^3, ... up to stabilization
    std::vector<Subspace> L_even, R_even;  // L^0, L^2, ... up to stabilization
    Subspace L_inf, R_inf;                 // odd limits
    Subspace L_sup, R_sup;                 // even limits
    Subspace V_inf;                        // L_inf meet R_inf
    Subspace up_inf;                       // L_sup + R_sup
    Subspace V_sup;                        // L_sup meet R_sup
    Subspace low_inf;                      // L_inf + R_inf
    std::vector<Subspace> Vi_chain;        // V(1) >= ... >= V(t)
    BlockSignature signature;

    // L^k / R^k for any k >= 0 (stabilized values past the stored range)
    const Subspace& L(std::size_t k) const;
    const Subspace& R(std::size_t k) const;
};

// uncached computation; BilSpace::towers() memoizes it
TowerData compute_towers(const BilSpace& space);
const TowerData& towers(const BilSpace& space);
BlockSignature block_signature(const BilSpace& space);

struct OddBlock {
    int i, p, s;
    std::size_t first_col;  // column of e^{i,p}_1
};
struct EvenBlock {
    int s;  // size 2s
    std::size_t first_col;
};

struct AdaptedBasis {
    Matrix gram;       // original Gram A
    Matrix P;          // columns = adapted basis
    Matrix canonical;  // P^T A P
    BlockSignature signature;
    std::vector<OddBlock> odd;  // i ascending, then p
    std::vector<EvenBlock> even;
    std::size_t ndeg_first = 0, ndeg_dim = 0;

    std::size_t dim() const noexcept { return gram.rows(); }
    const PrimeField& field() const noexcept { return gram.field(); }
    const OddBlock& block(int i, int p) const;
    // position of e^{i,p}_k, all indices 1-based
    std::size_t column(int i, int p, int k) const;
    Vec vector(int i, int p, int k) const { return P.col(column(i, p, k)); }
    // adapted-coordinate matrix M to original basis: P M P^-1
    Matrix to_original(const Matrix& M) const;
    Matrix from_original(const Matrix& g) const;
};

// Canonical Gram for a signature: odd blocks (largest first), even blocks (largest first), then `ndeg_block`.
Matrix canonical_gram(const BlockSignature& sig, const Matrix& ndeg_block);
Matrix jordan_block(const PrimeField& F, std::size_t r);  // lower J_r(0)

AdaptedBasis gabriel_basis(const BilSpace& space, u64 seed = kDefaultSeed);

struct SplitParts {
    Subspace V_odd, V_even, V_ndeg, V_odd_dag;
};
SplitParts split_parts(const AdaptedBasis& basis);

// per i (outer), per p (inner): E^{i,p} = sum_k e^{i,p}_{2k+1}
std::vector<std::vector<Vec>> asym_radical(const BilSpace& space, const AdaptedBasis& basis);

// Form induced on L^2(V)/L^1(V).
BilSpace reduce_step(const BilSpace& space);
// every block size r -> r - 2 (sizes <= 2 vanish), ndeg kept
BlockSignature shrink(const BlockSignature& sig);

}  // namespace bilform
