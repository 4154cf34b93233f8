#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bilform/bilspace.hpp"
#include "bilform/group_order.hpp"
#include "bilform/nondeg.hpp"
#include "bilform/oracle.hpp"
#include "bilform/structure.hpp"

namespace bilform {

struct TowerDims {
    std::vector<std::size_t> L_odd, R_odd, L_even, R_even;
    std::size_t V_inf = 0, up_inf = 0, V_sup = 0, low_inf = 0;
    std::vector<std::size_t> Vi;
};

struct NdegComponentReport {
    Poly p;
    int exponent;
    std::size_t dim;
    RiehmCase kase;
    std::optional<std::size_t> partner;
    bool representative;
    std::optional<BigInt> order;  // |G(V_p + V_p*)| on representatives, |G(V_p)| in Case II
    std::string source;           // "centralizer", "oracle", or why it is missing
};

struct NdegReport {
    std::size_t dim = 0;
    std::optional<Poly> min_poly;
    std::vector<NdegComponentReport> components;
    bool nondeg_plus = false, nondeg_minus = false;
    std::optional<BigInt> order;
};

struct LayerCheck {
    std::string name;
    BigInt expected;
    std::optional<BigInt> observed;
    std::string verdict;  // MATCH, MISMATCH, SKIPPED, BUDGET
    std::string note;
};

struct OracleReport {
    std::optional<BigInt> value;
    u64 nodes = 0;
    std::string verdict;  // MATCH, MISMATCH, ORACLE-ONLY, BUDGET
    std::string note;
};

struct Report {
    u64 p = 0;
    std::size_t n = 0;
    BlockSignature signature;
    TowerDims towers;
    StructureReport structure;
    Partition even_type;
    GroupOrder even_order{2};
    NdegReport ndeg;
    std::optional<GroupOrder> predicted;  // absent: "requires --verify"
    std::optional<OracleReport> oracle;
    std::vector<LayerCheck> layers;
    std::vector<std::string> predicate_checks;  // centralizer-predicate cross-checks on the ndeg part

    std::string order_text() const;
};

struct AnalyzeOptions {
    u64 seed = kDefaultSeed;
    u64 ndeg_budget = 10'000'000;  // oracle budget for Case IIa components during analysis
};

struct VerifyOptions {
    SearchOptions search;
    std::size_t closure_cap = kDefaultCap;
};

Report analyze(const BilSpace& space, const AnalyzeOptions& opt = {});
// Adds oracle counts and per-layer verdicts; budget failures are recorded, not thrown.
void verify(Report& r, const BilSpace& space, const AnalyzeOptions& aopt = {}, const VerifyOptions& opt = {});

// Gram of the non-degenerate part in the adapted basis.
Matrix ndeg_gram(const AdaptedBasis& b);

// X, torus, E_i, B basis and K-lifts of a basis of the pair space, in that order
std::vector<LabeledGen> all_generators(const AdaptedBasis& b);

std::string render_text(const Report& r);
std::string render_json(const Report& r, int indent = 2);

}  // namespace bilform
