#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "bilform/bilspace.hpp"
#include "bilform/group_order.hpp"

namespace bilform {

struct ConstraintSet {
    std::optional<Subspace> fixed_pointwise;                        // g y = y on it
    std::optional<std::pair<Subspace, Subspace>> trivial_on_quotient;  // (W1, W2), W2 within W1: (g-1)W1 within W2
    std::optional<Matrix> extra_commute;                            // gC = Cg
};

inline constexpr u64 kDefaultNodeBudget = 1'000'000'000ULL;
inline constexpr std::size_t kDefaultCap = 1'000'000;

struct SearchOptions {
    u64 node_budget = kDefaultNodeBudget;
    unsigned threads = 1;
    u64 seed = 1;          // random probes of the size estimate
    unsigned probes = 20000;  // 0 skips the estimate; the running count still enforces the budget
};

struct SearchResult {
    BigInt count;
    u64 nodes = 0;  // candidate vectors examined
    double estimate = 0;  // probe estimate of nodes, taken before the search
};

// Exact number of isometries satisfying the constraints; throws BudgetExceeded.
SearchResult search_isometries(const BilSpace& space, const ConstraintSet& cs = {}, const SearchOptions& opt = {});
BigInt count_isometries(const BilSpace& space, const ConstraintSet& cs = {}, const SearchOptions& opt = {});
// Sorted lexicographically by column vectors; throws CapExceeded, BudgetExceeded.
std::vector<Matrix> enumerate_isometries(const BilSpace& space, const ConstraintSet& cs = {}, std::size_t cap = kDefaultCap,
                                         const SearchOptions& opt = {});

struct ClosureResult {
    BigInt order;
    std::optional<std::vector<Matrix>> elements;
};
// Breadth-first closure; throws CapExceeded, ShapeMismatch, Singular.
ClosureResult group_closure(const std::vector<Matrix>& gens, std::size_t cap = kDefaultCap, bool keep_elements = false);

}  // namespace bilform
