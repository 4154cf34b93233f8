#pragma once

#include <utility>
#include <vector>

#include "bilform/group_order.hpp"
#include "bilform/matrix.hpp"
#include "bilform/poly.hpp"

namespace bilform {

// Weakly decreasing positive parts.
struct Partition {
    std::vector<u64> parts;
    u64 total() const noexcept;
    friend bool operator==(const Partition& a, const Partition& b) noexcept { return a.parts == b.parts; }
};

Matrix poly_eval(const Poly& f, const Matrix& M);
Poly min_poly(const Matrix& M);

struct PrimaryComponent {
    Poly p;
    int exponent;  // multiplicity of p in the minimal polynomial
    Subspace component;
};
std::vector<PrimaryComponent> primary_components(const Matrix& M);

Partition nilpotent_type(const Matrix& M);
bool similar(const Matrix& M1, const Matrix& M2);

u64 centralizer_dim(const Partition& type);
GroupOrder centralizer_order_gl(const Partition& type, u64 q);

// Jordan chains of a nilpotent operator: each entry is (generator g, size r) with
// u^r g = 0 and g, ug, ..., u^(r-1) g independent; all chains together form a basis.
// Sorted by size, largest first.
std::vector<std::pair<Vec, std::size_t>> jordan_chains(const Matrix& u);

}  // namespace bilform
