#pragma once

#include <optional>
#include <vector>

#include "bilform/bilspace.hpp"
#include "bilform/group_order.hpp"
#include "bilform/linalg.hpp"

namespace bilform {

enum class RiehmCase { I_paired, IIa, IIb };
const char* case_name(RiehmCase c);

struct AsymComponent {
    Poly p;
    int exponent;
    Subspace V;
    RiehmCase kase;
    std::optional<std::size_t> partner;  // index of V_{p*} for I-paired components
    bool representative;                 // chosen member of an I pair (lexicographically least monic)
};

struct AsymmetryData {
    Matrix sigma;  // A^-1 A^T
    Poly min_poly;
    std::vector<AsymComponent> components;
};

// throws DegenerateForm
AsymmetryData asymmetry(const BilSpace& space);

struct PMData {
    Matrix phi_plus, phi_minus;
    bool nondeg_plus, nondeg_minus;
    std::optional<Matrix> sigma_pm;  // (A+A')^-1 (A-A')
    std::optional<Matrix> sigma_mp;  // (A-A')^-1 (A+A')
    std::optional<Matrix> sigma_p;   // (A+A')^-1 A
    std::optional<Matrix> sigma_m;   // (A-A')^-1 A
};

PMData pm_data(const BilSpace& space);

struct LieReport {
    bool plus_checked = false, plus_in_o = false;     // sigma^{+-} in o(phi+)
    bool minus_checked = false, minus_in_sp = false;  // sigma^{-+} in sp(phi-)
};

// throws PartDegenerate when both parts are degenerate
LieReport lie_checks(const PMData& pm);

enum class Part { plus, minus };
// g^T phi_s g = phi_s and g commutes with sigma^s; throws PartDegenerate
bool is_in_G(const PMData& pm, const Matrix& g, Part part);
// g^T phi_s g = phi_s and g commutes with sigma^{+-} (resp. sigma^{-+})
bool is_in_G_mixed(const PMData& pm, const Matrix& g, Part part);

enum class BlockKind { H, Gamma, J };
// H_n(lambda) = [[0, I_m], [J_m(lambda), 0]], Gamma_n, J_n(0); throws BadShape
Matrix canonical_block(const PrimeField& F, BlockKind kind, std::size_t n, std::optional<u32> lambda = std::nullopt);

struct SvReport {
    int sign = 0;  // +1 checks sigma - 1 against sigma^{+-}, -1 checks sigma + 1 against sigma^{-+}
    Partition type_sigma, type_mixed;
    bool similar = false;
};
// throws WrongCase unless char != 2 and p_sigma is a power of t - 1 or t + 1
SvReport sv_check(const BilSpace& space);

struct CaseIResult {
    Matrix sigma_restricted;  // on V_p, in the basis of V_p
    std::size_t system_dim = 0;
    std::optional<BigInt> predicted_order;  // present when q^system_dim <= 2^20
};
// throws NotCaseI
CaseIResult case_I_reduction(const AsymmetryData& asym, std::size_t component);

// Gram of the form restricted to a subspace, in the subspace's basis
Matrix restricted_gram(const Matrix& A, const Subspace& W);

}  // namespace bilform
