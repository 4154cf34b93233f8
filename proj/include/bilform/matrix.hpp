#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bilform/field.hpp"

namespace bilform {

using Vec = std::vector<u32>;

class Subspace;

// Dense row-major matrix over GF(p).
class Matrix {
public:
    explicit Matrix(const PrimeField& f) : f_(f), rows_(0), cols_(0) {}
    Matrix(const PrimeField& f, std::size_t rows, std::size_t cols) : f_(f), rows_(rows), cols_(cols), a_(rows * cols, 0) {}
    // entries are reduced mod p
    Matrix(const PrimeField& f, const std::vector<std::vector<i64>>& rows);

    static Matrix identity(const PrimeField& f, std::size_t n);
    static Matrix from_columns(const PrimeField& f, std::size_t n, const std::vector<Vec>& cols);
    static Matrix from_rows(const PrimeField& f, std::size_t n, const std::vector<Vec>& rows);

    const PrimeField& field() const noexcept { return f_; }
    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool is_square() const noexcept { return rows_ == cols_; }

    u32& at(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    u32 at(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }
    u32* row_ptr(std::size_t i) { return a_.data() + i * cols_; }
    const u32* row_ptr(std::size_t i) const { return a_.data() + i * cols_; }
    const std::vector<u32>& data() const noexcept { return a_; }

    Vec row(std::size_t i) const;
    Vec col(std::size_t j) const;
    void set_col(std::size_t j, const Vec& v);
    void set_row(std::size_t i, const Vec& v);

    Matrix transpose() const;
    Matrix operator*(const Matrix& o) const;
    Matrix operator+(const Matrix& o) const;
    Matrix operator-(const Matrix& o) const;
    Matrix scaled(u32 s) const;
    Vec apply(const Vec& v) const;
    Matrix pow(u64 e) const;
    Matrix submatrix(const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) const;
    Matrix hstack(const Matrix& o) const;
    Matrix vstack(const Matrix& o) const;

    bool is_zero() const noexcept;
    bool is_identity() const noexcept;

    friend bool operator==(const Matrix& a, const Matrix& b) noexcept {
        return a.f_ == b.f_ && a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
    }
    friend bool operator!=(const Matrix& a, const Matrix& b) noexcept { return !(a == b); }
    friend bool operator<(const Matrix& a, const Matrix& b) noexcept { return a.a_ < b.a_; }

    std::string to_string() const;

private:
    PrimeField f_;
    std::size_t rows_, cols_;
    std::vector<u32> a_;
};

struct RrefResult {
    Matrix R;
    std::vector<std::size_t> pivots;  // pivot column of each nonzero row
    std::size_t rank() const noexcept { return pivots.size(); }
};

// Reduced row echelon form; the first `ncols` columns are eligible as pivots (default: all).
RrefResult rref(const Matrix& M, std::size_t ncols = std::size_t(-1));
std::size_t rank(const Matrix& M);
// {x : M x = 0}
Subspace kernel(const Matrix& M);
// basis of {x : M x = 0} as vectors, one per free column
std::vector<Vec> kernel_basis(const Matrix& M);
// some x with M x = b, or nullopt
std::optional<Vec> solve(const Matrix& M, const Vec& b);
// some X with M X = B, or nullopt
std::optional<Matrix> solve(const Matrix& M, const Matrix& B);
Matrix inverse(const Matrix& M);
u32 determinant(const Matrix& M);

// vector helpers
Vec vec_add(const PrimeField& F, const Vec& a, const Vec& b);
Vec vec_sub(const PrimeField& F, const Vec& a, const Vec& b);
Vec vec_scale(const PrimeField& F, const Vec& a, u32 s);
Vec vec_axpy(const PrimeField& F, const Vec& y, u32 a, const Vec& x);  // y + a x
bool vec_is_zero(const Vec& a);
Vec unit_vector(std::size_t n, std::size_t i);
// x^T A y
u32 bilinear(const Matrix& A, const Vec& x, const Vec& y);

// Subspace of GF(p)^n stored as an RREF row basis (canonical).
class Subspace {
public:
    Subspace(const PrimeField& f, std::size_t n);  // zero subspace
    static Subspace span(const PrimeField& f, std::size_t n, const std::vector<Vec>& vecs);
    static Subspace row_space(const Matrix& M);
    static Subspace column_space(const Matrix& M);
    static Subspace full(const PrimeField& f, std::size_t n);

    const PrimeField& field() const noexcept { return basis_.field(); }
    std::size_t ambient() const noexcept { return n_; }
    std::size_t dim() const noexcept { return basis_.rows(); }
    const Matrix& basis() const noexcept { return basis_; }
    std::vector<Vec> vectors() const;
    // columns = basis vectors
    Matrix as_columns() const { return basis_.transpose(); }

    bool contains(const Vec& v) const;
    bool contains(const Subspace& o) const;
    Subspace operator+(const Subspace& o) const;
    Subspace intersect(const Subspace& o) const;
    // unit vectors at non-pivot positions; they span a complement
    std::vector<Vec> complement_units() const;
    const std::vector<std::size_t>& pivots() const noexcept { return pivots_; }
    // coordinates of v in the stored basis; v must lie in the subspace
    Vec coordinates(const Vec& v) const;
    // basis of a complement of *this inside `outer` (which must contain *this), taken from outer's RREF rows
    std::vector<Vec> complement_in(const Subspace& outer) const;
    // image under a linear map given by a matrix (n' x n)
    Subspace image(const Matrix& M) const;

    friend bool operator==(const Subspace& a, const Subspace& b) noexcept { return a.n_ == b.n_ && a.basis_ == b.basis_; }
    friend bool operator!=(const Subspace& a, const Subspace& b) noexcept { return !(a == b); }

private:
    std::size_t n_;
    Matrix basis_;
    std::vector<std::size_t> pivots_;
};

}  // namespace bilform
