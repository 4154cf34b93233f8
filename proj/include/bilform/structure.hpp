#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bilform/bilspace.hpp"
#include "bilform/group_order.hpp"
#include "bilform/linalg.hpp"

namespace bilform {

struct GenLabel {
    enum class Family { X, Torus, E_transvection, B_basis, K_lift, Even, Ndeg };
    Family family;
    int i = 0, j = 0, p = 0, q = 0, k = 0;
    u32 scalar = 0;
    std::string to_string() const;
};
const char* family_name(GenLabel::Family f);

struct LabeledGen {
    GenLabel label;
    Matrix g;  // original basis
};

// g^{i,i+j,p,q}_{2k+1,y}; all indices 1-based except k >= 0
Matrix gen_x(const AdaptedBasis& b, int i, int j, int p, int q, int k, u32 y);
// g^{i,p}_x
Matrix gen_torus(const AdaptedBasis& b, int i, int p, u32 x);

// generators of E_i: transvections g^{i,i,p,q}_{1,1} (p != q) and tori at a primitive root (none over GF(2))
std::vector<LabeledGen> e_generators(const AdaptedBasis& b, int i);
// all X-parameter directions at y = 1
std::vector<LabeledGen> x_generators(const AdaptedBasis& b);
// one torus per (i, p) at a primitive root
std::vector<LabeledGen> torus_generators(const AdaptedBasis& b);

struct SeriesEntry {
    int j, k;  // d_{j,2k-1}
    u64 d;
    std::vector<int> I;
};

struct Constituent {
    char kind;  // 'S' for S^i_{2k+1}, 'Q' for Q^i_{2k}
    int i, index;  // index = 2k+1 or 2k
    int dim;
};

struct StructureReport {
    BlockSignature signature;
    u64 q = 0;
    u64 dim_U = 0, dim_K = 0, dim_B = 0, dim_K_mod_B = 0;
    std::vector<SeriesEntry> series;
    std::vector<int> kj;  // k(j) for j = 1..t-1
    std::vector<Constituent> constituents;
    int class_N = 0;  // nilpotency class of N/G[V_inf]
    int class_K = 0;  // 0 trivial, 1 abelian, 2 non-abelian
};

StructureReport dims_report(const AdaptedBasis& b, u64 q);
GroupOrder order_formula(const StructureReport& r, u64 q, const GroupOrder& even_order, const GroupOrder& ndeg_order);

struct EvenCentralizer {
    Matrix u;
    Partition type;
    GroupOrder order;
};
EvenCentralizer even_centralizer_data(const AdaptedBasis& b, u64 q);

std::vector<Matrix> basis_of_B(const AdaptedBasis& b);

// Block coordinates (V_inf, M = V_even + V_ndeg, V_odd^dag).
struct KCoordinates {
    Matrix P;  // columns: V_inf, M, V_dag (adapted basis columns, original coordinates)
    std::size_t n_inf = 0, n_mid = 0, n_dag = 0;
    Matrix A1, A2, A3;  // phi(V_inf, V_dag), Gram of M, phi(V_dag, V_inf)
};
KCoordinates k_coordinates(const AdaptedBasis& b);

Matrix lift_pair(const AdaptedBasis& b, const Matrix& Y1, const Matrix& Y2);
// basis of the pairs (Y1, Y2) satisfying both linear conditions
std::vector<std::pair<Matrix, Matrix>> y_pairs_basis(const AdaptedBasis& b);

bool is_isometry(const Matrix& A, const Matrix& g);
// [a, b] = a^-1 b^-1 a b
Matrix commutator(const Matrix& a, const Matrix& b);
// (g - 1) V(i) within V(i + j) for all i
bool in_N(const TowerData& T, const Matrix& g, int j);
// M_r for odd r >= -1: fixes L^r meet V_inf pointwise and lies in N; M_{-1} = N
bool in_M(const TowerData& T, const Matrix& g, int r);

}  // namespace bilform
