#pragma once

// Small dense linear algebra and order statistics. Dimensions here are tiny
// (d <= a few hundred), so everything is plain row-major storage.

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace fstest {

using Vector = std::vector<double>;

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t d);
  static Matrix diagonal(std::span<const double> diag);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<const double> values() const { return data_; }

  Matrix transpose() const;
  double trace() const;
  Matrix scaled(double c) const;

  friend Matrix operator*(const Matrix& a, const Matrix& b);
  friend Vector operator*(const Matrix& a, std::span<const double> x);
  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Largest |a_ij - b_ij| relative to the largest |a_ij| (absolute when a is zero).
double max_relative_difference(const Matrix& a, const Matrix& b);

/// Lower-triangular L with L L^T = m. Throws NotSpdError.
Matrix cholesky(const Matrix& m);

/// Eigenvalues of a symmetric matrix in descending order (cyclic Jacobi).
/// Throws NotSymmetricError.
Vector sym_eigenvalues(const Matrix& m);

/// A validated symmetric positive-definite matrix with cached factorizations.
class SpdMatrix {
 public:
  /// Throws NotSymmetricError / NotSpdError.
  explicit SpdMatrix(Matrix m);
  static SpdMatrix identity(std::size_t d) { return SpdMatrix(Matrix::identity(d)); }

  std::size_t dim() const { return m_.rows(); }
  const Matrix& matrix() const { return m_; }
  const Matrix& cholesky_factor() const { return chol_; }
  const Matrix& inverse() const { return inv_; }
  const Vector& eigenvalues() const { return eig_; }
  double determinant() const { return det_; }
  double log_determinant() const { return log_det_; }

  /// x' M^{-1} x.
  double inverse_quadratic_form(std::span<const double> x) const;
  /// M^{-1} x.
  Vector solve(std::span<const double> x) const;
  SpdMatrix scaled(double c) const;

 private:
  Matrix m_;
  Matrix chol_;
  Matrix inv_;
  Vector eig_;
  double det_ = 1.0;
  double log_det_ = 0.0;
};

/// (y - mu0)' Sigma^{-1} (y - mu0).
double mahalanobis_sq(std::span<const double> y, std::span<const double> mu0,
                      const SpdMatrix& sigma);

/// m = max(1, floor(n * gamma)); the size of the forward-search subset.
std::size_t trimmed_count(std::size_t n, double gamma);

/// m-th smallest of `distances` with m = trimmed_count(n, gamma).
double empirical_quantile_sq_distance(std::span<const double> distances, double gamma);

/// Median with the average-of-two-middle rule for even sizes. Reorders `values`.
double median_inplace(std::span<double> values);

/// Orthonormal Q from Gram-Schmidt on the columns of m.
Matrix orthonormalize(const Matrix& m);

}  // namespace fstest
