#pragma once

// Small dense real/complex linear algebra used throughout liespec.
// Everything here is sized for desk-scale problems (m <= 8 for Lie algebra
// work, d <= a few hundred for representation matrices), so the routines are
// plain cyclic Jacobi sweeps with no blocking.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "liespec/errors.hpp"

namespace liespec {

using Complex = std::complex<double>;
using Vector = std::vector<double>;

/// Row-major dense matrix.
template <typename T>
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols, T fill = T{})
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    DenseMatrix(std::initializer_list<std::initializer_list<T>> rows);

    static DenseMatrix identity(std::size_t n);
    static DenseMatrix diagonal(std::span<const T> d);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<T> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
    std::span<const T> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
    std::vector<T> column(std::size_t j) const;
    void set_column(std::size_t j, std::span<const T> v);

    const std::vector<T>& data() const { return data_; }
    std::vector<T>& data() { return data_; }

    DenseMatrix transpose() const;

    DenseMatrix& operator+=(const DenseMatrix& o);
    DenseMatrix& operator-=(const DenseMatrix& o);
    DenseMatrix& operator*=(T s);

    friend DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b) { return a += b; }
    friend DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b) { return a -= b; }
    friend DenseMatrix operator*(DenseMatrix a, T s) { return a *= s; }
    friend DenseMatrix operator*(T s, DenseMatrix a) { return a *= s; }
    friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using Matrix = DenseMatrix<double>;
using CMatrix = DenseMatrix<Complex>;

Matrix operator*(const Matrix& a, const Matrix& b);
CMatrix operator*(const CMatrix& a, const CMatrix& b);
Vector operator*(const Matrix& a, std::span<const double> x);

CMatrix to_complex(const Matrix& a);
CMatrix adjoint(const CMatrix& a);
/// Kronecker product a ⊗ b.
CMatrix kron(const CMatrix& a, const CMatrix& b);

double frobenius_norm(const Matrix& a);
double frobenius_norm(const CMatrix& a);
double max_abs(const Matrix& a);
double max_abs(const CMatrix& a);
double trace(const Matrix& a);
Complex trace(const CMatrix& a);

double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> a);
/// xᵀ M y
double quadratic_form(const Matrix& m, std::span<const double> x, std::span<const double> y);
double quadratic_form(const Matrix& m, std::span<const double> x);

bool is_symmetric(const Matrix& a, double tol);
bool is_hermitian(const CMatrix& a, double tol);
/// ‖QᵀQ − I‖_max ≤ tol
bool is_orthogonal(const Matrix& q, double tol);

double determinant(const Matrix& a);
/// Gauss-Jordan with partial pivoting. Throws SingularMatrixError.
Matrix inverse(const Matrix& a);
/// Lower-triangular L with a = L Lᵀ. Throws ComputationError if a is not positive definite.
Matrix cholesky(const Matrix& a);

struct SymmetricEigen {
    Vector values;  // in the order produced by the solver unless sorted
    Matrix vectors; // column k pairs with values[k]
    int sweeps = 0;
};

/// Cyclic Jacobi for real symmetric matrices. Iterates until the off-diagonal
/// Frobenius mass is at most rel_tol × ‖a‖_F.
SymmetricEigen jacobi_eigen(const Matrix& a, double rel_tol = 1e-13, int max_sweeps = 100);

/// Same, then reorders eigenpairs by descending eigenvalue. Ties keep solver order.
SymmetricEigen jacobi_eigen_descending(const Matrix& a, double rel_tol = 1e-13);

/// Complex Hermitian Jacobi; eigenvalues are real, in solver order.
Vector hermitian_eigenvalues(const CMatrix& a, double rel_tol = 1e-14, int max_sweeps = 100);

/// Smallest eigenvalue of a hermitian matrix. Throws ValidationError when
/// ‖a − a*‖ exceeds 1e-10 × max(1, ‖a‖).
double lambda_min_hermitian(const CMatrix& a);

/// True iff a − shift·I admits a complex Cholesky factorization (a is hermitian).
bool is_positive_definite_shifted(const CMatrix& a, double shift);

struct SingularValues {
    Vector values; // descending
    Matrix right;  // columns = right singular vectors, paired with values
};

/// One-sided (Hestenes) Jacobi SVD. Works for any shape.
SingularValues singular_values(const Matrix& a);

/// Number of singular values above rel_tol × largest. Zero matrix has rank 0.
std::size_t numerical_rank(const Matrix& a, double rel_tol);
/// Complex rank via the realified [[Re, −Im], [Im, Re]] form.
std::size_t numerical_rank(const CMatrix& a, double rel_tol);

/// Orthonormal basis (as columns) of span of the given vectors, rank decided
/// with relative singular-value threshold rel_tol.
std::vector<Vector> orthonormal_span(std::span<const Vector> vectors, double rel_tol);

/// Householder QR of a square matrix; returns Q with the sign convention
/// diag(R) ≥ 0.
Matrix qr_orthogonal_factor(const Matrix& a);

// --- template member definitions ------------------------------------------

template <typename T>
DenseMatrix<T>::DenseMatrix(std::initializer_list<std::initializer_list<T>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) throw ValidationError("ragged matrix initializer");
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

template <typename T>
DenseMatrix<T> DenseMatrix<T>::identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T{1};
    return m;
}

template <typename T>
DenseMatrix<T> DenseMatrix<T>::diagonal(std::span<const T> d) {
    DenseMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

template <typename T>
std::vector<T> DenseMatrix<T>::column(std::size_t j) const {
    std::vector<T> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
}

template <typename T>
void DenseMatrix<T>::set_column(std::size_t j, std::span<const T> v) {
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
}

template <typename T>
DenseMatrix<T> DenseMatrix<T>::transpose() const {
    DenseMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

template <typename T>
DenseMatrix<T>& DenseMatrix<T>::operator+=(const DenseMatrix& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw ValidationError("matrix shape mismatch in +");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
}

template <typename T>
DenseMatrix<T>& DenseMatrix<T>::operator-=(const DenseMatrix& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw ValidationError("matrix shape mismatch in -");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
}

template <typename T>
DenseMatrix<T>& DenseMatrix<T>::operator*=(T s) {
    for (auto& x : data_) x *= s;
    return *this;
}

} // namespace liespec
