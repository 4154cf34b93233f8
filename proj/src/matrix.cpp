#include "bilform/matrix.hpp"

#include <sstream>

namespace bilform {

Matrix::Matrix(const PrimeField& f, const std::vector<std::vector<i64>>& rows)
    : f_(f), rows_(rows.size()), cols_(rows.empty() ? 0 : rows[0].size()) {
    a_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) fail(Errc::ShapeMismatch, "ragged matrix rows");
        for (i64 v : r) a_.push_back(f_.reduce(v));
    }
}

Matrix Matrix::identity(const PrimeField& f, std::size_t n) {
    Matrix I(f, n, n);
    for (std::size_t i = 0; i < n; ++i) I.at(i, i) = 1;
    return I;
}

Matrix Matrix::from_columns(const PrimeField& f, std::size_t n, const std::vector<Vec>& cols) {
    Matrix M(f, n, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
        if (cols[j].size() != n) fail(Errc::ShapeMismatch, "column length");
        for (std::size_t i = 0; i < n; ++i) M.at(i, j) = cols[j][i] % f.p();
    }
    return M;
}

Matrix Matrix::from_rows(const PrimeField& f, std::size_t n, const std::vector<Vec>& rows) {
    Matrix M(f, rows.size(), n);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != n) fail(Errc::ShapeMismatch, "row length");
        for (std::size_t j = 0; j < n; ++j) M.at(i, j) = rows[i][j] % f.p();
    }
    return M;
}

Vec Matrix::row(std::size_t i) const { return Vec(row_ptr(i), row_ptr(i) + cols_); }

Vec Matrix::col(std::size_t j) const {
    Vec v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = at(i, j);
    return v;
}

void Matrix::set_col(std::size_t j, const Vec& v) {
    if (v.size() != rows_) fail(Errc::ShapeMismatch, "set_col");
    for (std::size_t i = 0; i < rows_; ++i) at(i, j) = v[i];
}

void Matrix::set_row(std::size_t i, const Vec& v) {
    if (v.size() != cols_) fail(Errc::ShapeMismatch, "set_row");
    for (std::size_t j = 0; j < cols_; ++j) at(i, j) = v[j];
}

Matrix Matrix::transpose() const {
    Matrix T(f_, cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) T.at(j, i) = at(i, j);
    return T;
}

Matrix Matrix::operator*(const Matrix& o) const {
    if (f_ != o.f_) fail(Errc::FieldMismatch, "matrix product");
    if (cols_ != o.rows_) fail(Errc::ShapeMismatch, "matrix product");
    Matrix R(f_, rows_, o.cols_);
    const u64 p = f_.p();
    // accumulate in u64, reducing often enough to avoid overflow
    const std::size_t chunk = p < (1u << 16) ? 1u << 30 : 1;
    std::vector<u64> acc(o.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
        std::fill(acc.begin(), acc.end(), 0);
        std::size_t cnt = 0;
        for (std::size_t k = 0; k < cols_; ++k) {
            u64 a = at(i, k);
            if (a == 0) continue;
            const u32* orow = o.row_ptr(k);
            for (std::size_t j = 0; j < o.cols_; ++j) acc[j] += a * orow[j];
            if (++cnt >= chunk) {
                for (auto& x : acc) x %= p;
                cnt = 0;
            }
        }
        for (std::size_t j = 0; j < o.cols_; ++j) R.at(i, j) = static_cast<u32>(acc[j] % p);
    }
    return R;
}

Matrix Matrix::operator+(const Matrix& o) const {
    if (f_ != o.f_) fail(Errc::FieldMismatch, "matrix sum");
    if (rows_ != o.rows_ || cols_ != o.cols_) fail(Errc::ShapeMismatch, "matrix sum");
    Matrix R(f_, rows_, cols_);
    for (std::size_t k = 0; k < a_.size(); ++k) R.a_[k] = f_.add(a_[k], o.a_[k]);
    return R;
}

Matrix Matrix::operator-(const Matrix& o) const {
    if (f_ != o.f_) fail(Errc::FieldMismatch, "matrix difference");
    if (rows_ != o.rows_ || cols_ != o.cols_) fail(Errc::ShapeMismatch, "matrix difference");
    Matrix R(f_, rows_, cols_);
    for (std::size_t k = 0; k < a_.size(); ++k) R.a_[k] = f_.sub(a_[k], o.a_[k]);
    return R;
}

Matrix Matrix::scaled(u32 s) const {
    Matrix R(*this);
    for (auto& x : R.a_) x = f_.mul(x, s);
    return R;
}

Vec Matrix::apply(const Vec& v) const {
    if (v.size() != cols_) fail(Errc::ShapeMismatch, "matrix-vector product");
    Vec r(rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        u64 acc = 0;
        const u32* rp = row_ptr(i);
        for (std::size_t j = 0; j < cols_; ++j) acc = (acc + u64(rp[j]) * v[j]) % f_.p();
        r[i] = static_cast<u32>(acc);
    }
    return r;
}

Matrix Matrix::pow(u64 e) const {
    if (!is_square()) fail(Errc::ShapeMismatch, "power of non-square matrix");
    Matrix r = identity(f_, rows_), b = *this;
    while (e) {
        if (e & 1) r = r * b;
        b = b * b;
        e >>= 1;
    }
    return r;
}

Matrix Matrix::submatrix(const std::vector<std::size_t>& rs, const std::vector<std::size_t>& cs) const {
    Matrix R(f_, rs.size(), cs.size());
    for (std::size_t i = 0; i < rs.size(); ++i)
        for (std::size_t j = 0; j < cs.size(); ++j) R.at(i, j) = at(rs[i], cs[j]);
    return R;
}

Matrix Matrix::hstack(const Matrix& o) const {
    if (rows_ != o.rows_) fail(Errc::ShapeMismatch, "hstack");
    Matrix R(f_, rows_, cols_ + o.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) R.at(i, j) = at(i, j);
        for (std::size_t j = 0; j < o.cols_; ++j) R.at(i, cols_ + j) = o.at(i, j);
    }
    return R;
}

Matrix Matrix::vstack(const Matrix& o) const {
    if (cols_ != o.cols_) fail(Errc::ShapeMismatch, "vstack");
    Matrix R(f_, rows_ + o.rows_, cols_);
    std::copy(a_.begin(), a_.end(), R.a_.begin());
    std::copy(o.a_.begin(), o.a_.end(), R.a_.begin() + static_cast<std::ptrdiff_t>(a_.size()));
    return R;
}

bool Matrix::is_zero() const noexcept {
    for (u32 x : a_)
        if (x) return false;
    return true;
}

bool Matrix::is_identity() const noexcept {
    if (!is_square()) return false;
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            if (at(i, j) != (i == j ? 1u : 0u)) return false;
    return true;
}

std::string Matrix::to_string() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < rows_; ++i) {
        os << '[';
        for (std::size_t j = 0; j < cols_; ++j) os << (j ? " " : "") << at(i, j);
        os << "]\n";
    }
    return os.str();
}

RrefResult rref(const Matrix& M, std::size_t ncols) {
    const PrimeField& F = M.field();
    Matrix R = M;
    std::vector<std::size_t> piv;
    const std::size_t rows = R.rows(), cols = R.cols();
    if (ncols > cols) ncols = cols;
    std::size_t r = 0;
    for (std::size_t c = 0; c < ncols && r < rows; ++c) {
        std::size_t sel = rows;
        for (std::size_t i = r; i < rows; ++i)
            if (R.at(i, c)) {
                sel = i;
                break;
            }
        if (sel == rows) continue;
        if (sel != r)
            for (std::size_t j = 0; j < cols; ++j) std::swap(R.at(sel, j), R.at(r, j));
        u32 inv = F.inv(R.at(r, c));
        u32* rr = R.row_ptr(r);
        for (std::size_t j = c; j < cols; ++j) rr[j] = F.mul(rr[j], inv);
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r) continue;
            u32 f = R.at(i, c);
            if (!f) continue;
            u32 nf = F.neg(f);
            u32* ri = R.row_ptr(i);
            for (std::size_t j = c; j < cols; ++j)
                if (rr[j]) ri[j] = F.add(ri[j], F.mul(nf, rr[j]));
        }
        piv.push_back(c);
        ++r;
    }
    // drop zero rows
    Matrix out(F, r, cols);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < cols; ++j) out.at(i, j) = R.at(i, j);
    return {std::move(out), std::move(piv)};
}

std::size_t rank(const Matrix& M) { return rref(M).rank(); }

std::vector<Vec> kernel_basis(const Matrix& M) {
    const PrimeField& F = M.field();
    auto rr = rref(M);
    const std::size_t n = M.cols();
    std::vector<char> is_piv(n, 0);
    for (auto c : rr.pivots) is_piv[c] = 1;
    std::vector<Vec> out;
    for (std::size_t f = 0; f < n; ++f) {
        if (is_piv[f]) continue;
        Vec x(n, 0);
        x[f] = 1;
        for (std::size_t r = 0; r < rr.pivots.size(); ++r) x[rr.pivots[r]] = F.neg(rr.R.at(r, f));
        out.push_back(std::move(x));
    }
    return out;
}

Subspace kernel(const Matrix& M) { return Subspace::span(M.field(), M.cols(), kernel_basis(M)); }

std::optional<Vec> solve(const Matrix& M, const Vec& b) {
    if (b.size() != M.rows()) fail(Errc::ShapeMismatch, "solve: rhs length");
    Matrix B(M.field(), b.size(), 1);
    B.set_col(0, b);
    auto X = solve(M, B);
    if (!X) return std::nullopt;
    return X->col(0);
}

std::optional<Matrix> solve(const Matrix& M, const Matrix& B) {
    if (B.rows() != M.rows()) fail(Errc::ShapeMismatch, "solve: rhs rows");
    const std::size_t n = M.cols();
    auto rr = rref(M.hstack(B));
    for (auto c : rr.pivots)
        if (c >= n) return std::nullopt;
    Matrix X(M.field(), n, B.cols());
    for (std::size_t i = 0; i < rr.rank(); ++i)
        for (std::size_t j = 0; j < B.cols(); ++j) X.at(rr.pivots[i], j) = rr.R.at(i, n + j);
    return X;
}

Matrix inverse(const Matrix& M) {
    if (!M.is_square()) fail(Errc::ShapeMismatch, "inverse of non-square matrix");
    const std::size_t n = M.rows();
    auto rr = rref(M.hstack(Matrix::identity(M.field(), n)), n);
    if (rr.rank() < n || (n > 0 && rr.pivots.back() >= n)) fail(Errc::Singular, "matrix is singular");
    Matrix X(M.field(), n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) X.at(i, j) = rr.R.at(i, n + j);
    return X;
}

u32 determinant(const Matrix& M) {
    if (!M.is_square()) fail(Errc::ShapeMismatch, "determinant of non-square matrix");
    const PrimeField& F = M.field();
    Matrix R = M;
    const std::size_t n = R.rows();
    u32 det = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t sel = n;
        for (std::size_t i = c; i < n; ++i)
            if (R.at(i, c)) {
                sel = i;
                break;
            }
        if (sel == n) return 0;
        if (sel != c) {
            for (std::size_t j = 0; j < n; ++j) std::swap(R.at(sel, j), R.at(c, j));
            det = F.neg(det);
        }
        det = F.mul(det, R.at(c, c));
        u32 inv = F.inv(R.at(c, c));
        for (std::size_t i = c + 1; i < n; ++i) {
            u32 f = F.mul(R.at(i, c), inv);
            if (!f) continue;
            for (std::size_t j = c; j < n; ++j) R.at(i, j) = F.sub(R.at(i, j), F.mul(f, R.at(c, j)));
        }
    }
    return det;
}

Vec vec_add(const PrimeField& F, const Vec& a, const Vec& b) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = F.add(a[i], b[i]);
    return r;
}
Vec vec_sub(const PrimeField& F, const Vec& a, const Vec& b) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = F.sub(a[i], b[i]);
    return r;
}
Vec vec_scale(const PrimeField& F, const Vec& a, u32 s) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = F.mul(a[i], s);
    return r;
}
Vec vec_axpy(const PrimeField& F, const Vec& y, u32 a, const Vec& x) {
    Vec r(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) r[i] = F.add(y[i], F.mul(a, x[i]));
    return r;
}
bool vec_is_zero(const Vec& a) {
    for (u32 x : a)
        if (x) return false;
    return true;
}
Vec unit_vector(std::size_t n, std::size_t i) {
    Vec v(n, 0);
    v[i] = 1;
    return v;
}

u32 bilinear(const Matrix& A, const Vec& x, const Vec& y) {
    const PrimeField& F = A.field();
    Vec Ay = A.apply(y);
    u64 acc = 0;
    for (std::size_t i = 0; i < x.size(); ++i) acc = (acc + u64(x[i]) * Ay[i]) % F.p();
    return static_cast<u32>(acc);
}

// ---------------------------------------------------------------- Subspace

Subspace::Subspace(const PrimeField& f, std::size_t n) : n_(n), basis_(f, 0, n) {}

Subspace Subspace::row_space(const Matrix& M) {
    Subspace S(M.field(), M.cols());
    auto rr = rref(M);
    S.basis_ = std::move(rr.R);
    S.pivots_ = std::move(rr.pivots);
    return S;
}

Subspace Subspace::span(const PrimeField& f, std::size_t n, const std::vector<Vec>& vecs) {
    return row_space(Matrix::from_rows(f, n, vecs));
}

Subspace Subspace::column_space(const Matrix& M) { return row_space(M.transpose()); }

Subspace Subspace::full(const PrimeField& f, std::size_t n) { return row_space(Matrix::identity(f, n)); }

std::vector<Vec> Subspace::vectors() const {
    std::vector<Vec> out;
    for (std::size_t i = 0; i < dim(); ++i) out.push_back(basis_.row(i));
    return out;
}

Vec Subspace::coordinates(const Vec& v) const {
    Vec c(dim());
    for (std::size_t r = 0; r < dim(); ++r) c[r] = v[pivots_[r]];
    Vec back(n_, 0);
    for (std::size_t r = 0; r < dim(); ++r) back = vec_axpy(field(), back, c[r], basis_.row(r));
    if (back != v) fail(Errc::AmbientMismatch, "vector not in subspace");
    return c;
}

bool Subspace::contains(const Vec& v) const {
    if (v.size() != n_) fail(Errc::AmbientMismatch, "vector length");
    const PrimeField& F = field();
    Vec w = v;
    for (std::size_t r = 0; r < dim(); ++r) {
        u32 c = w[pivots_[r]];
        if (c) w = vec_axpy(F, w, F.neg(c), basis_.row(r));
    }
    return vec_is_zero(w);
}

bool Subspace::contains(const Subspace& o) const {
    if (o.n_ != n_) fail(Errc::AmbientMismatch, "subspace ambient");
    for (std::size_t r = 0; r < o.dim(); ++r)
        if (!contains(o.basis_.row(r))) return false;
    return true;
}

Subspace Subspace::operator+(const Subspace& o) const {
    if (o.n_ != n_) fail(Errc::AmbientMismatch, "subspace sum");
    return row_space(basis_.vstack(o.basis_));
}

Subspace Subspace::intersect(const Subspace& o) const {
    if (o.n_ != n_) fail(Errc::AmbientMismatch, "subspace intersection");
    if (dim() == 0 || o.dim() == 0) return Subspace(field(), n_);
    // annihilators
    auto a1 = kernel_basis(basis_);
    auto a2 = kernel_basis(o.basis_);
    for (auto& v : a2) a1.push_back(std::move(v));
    if (a1.empty()) return *this;
    return kernel(Matrix::from_rows(field(), n_, a1));
}

std::vector<Vec> Subspace::complement_units() const {
    std::vector<char> is_piv(n_, 0);
    for (auto c : pivots_) is_piv[c] = 1;
    std::vector<Vec> out;
    for (std::size_t j = 0; j < n_; ++j)
        if (!is_piv[j]) out.push_back(unit_vector(n_, j));
    return out;
}

std::vector<Vec> Subspace::complement_in(const Subspace& outer) const {
    if (!outer.contains(*this)) fail(Errc::AmbientMismatch, "complement_in: not a subspace of outer");
    std::vector<Vec> out;
    Subspace cur = *this;
    for (std::size_t r = 0; r < outer.dim() && cur.dim() < outer.dim(); ++r) {
        Vec v = outer.basis_.row(r);
        if (!cur.contains(v)) {
            out.push_back(v);
            cur = cur + span(field(), n_, {v});
        }
    }
    return out;
}

Subspace Subspace::image(const Matrix& M) const {
    if (M.cols() != n_) fail(Errc::ShapeMismatch, "image");
    std::vector<Vec> vs;
    for (std::size_t r = 0; r < dim(); ++r) vs.push_back(M.apply(basis_.row(r)));
    return span(field(), M.rows(), vs);
}

}  // namespace bilform
