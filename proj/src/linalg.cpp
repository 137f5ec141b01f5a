#include "fstest/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "fstest/error.hpp"

namespace fstest {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw DimensionMismatchError("ragged matrix initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(std::size_t d) {
  Matrix m(d, d);
  for (std::size_t i = 0; i < d; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(std::span<const double> diag) {
  Matrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

double Matrix::trace() const {
  double s = 0.0;
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) s += (*this)(i, i);
  return s;
}

Matrix Matrix::scaled(double c) const {
  Matrix out = *this;
  for (auto& v : out.data_) v *= c;
  return out;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols_ != b.rows_) throw DimensionMismatchError("matrix product shape mismatch");
  Matrix out(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

Vector operator*(const Matrix& a, std::span<const double> x) {
  if (a.cols_ != x.size()) throw DimensionMismatchError("matrix-vector shape mismatch");
  Vector out(a.rows_, 0.0);
  for (std::size_t i = 0; i < a.rows_; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.cols_; ++j) s += a(i, j) * x[j];
    out[i] = s;
  }
  return out;
}

double max_relative_difference(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionMismatchError("matrix shape mismatch");
  double scale = 0.0;
  double diff = 0.0;
  for (std::size_t i = 0; i < a.values().size(); ++i) {
    scale = std::max(scale, std::abs(a.values()[i]));
    diff = std::max(diff, std::abs(a.values()[i] - b.values()[i]));
  }
  return scale > 0.0 ? diff / scale : diff;
}

namespace {

void require_square(const Matrix& m, const char* what) {
  if (!m.square() || m.rows() == 0)
    throw DimensionMismatchError(std::string(what) + ": matrix must be square and non-empty");
}

void require_symmetric(const Matrix& m) {
  double scale = 0.0;
  for (double v : m.values()) scale = std::max(scale, std::abs(v));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i + 1; j < m.cols(); ++j)
      if (std::abs(m(i, j) - m(j, i)) > 1e-12 * scale)
        throw NotSymmetricError("matrix is not symmetric at (" + std::to_string(i) + "," +
                                std::to_string(j) + ")");
}

}  // namespace

Matrix cholesky(const Matrix& m) {
  require_square(m, "cholesky");
  const std::size_t d = m.rows();
  Matrix l(d, d);
  for (std::size_t j = 0; j < d; ++j) {
    double diag = m(j, j);
    for (std::size_t k = 0; k < j; ++k) diag -= l(j, k) * l(j, k);
    if (!(diag > 0.0) || !std::isfinite(diag))
      throw NotSpdError("matrix is not positive definite (pivot " + std::to_string(j) + ")");
    const double ljj = std::sqrt(diag);
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < d; ++i) {
      double s = m(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / ljj;
    }
  }
  return l;
}

Vector sym_eigenvalues(const Matrix& m) {
  require_square(m, "sym_eigenvalues");
  require_symmetric(m);
  const std::size_t d = m.rows();
  Matrix a = m;
  double frob = 0.0;
  for (double v : a.values()) frob += v * v;
  frob = std::sqrt(frob);

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = i + 1; j < d; ++j) s += 2.0 * a(i, j) * a(i, j);
    return std::sqrt(s);
  };

  for (int sweep = 0; sweep < 100 && off_norm() > 1e-12 * frob; ++sweep) {
    for (std::size_t p = 0; p + 1 < d; ++p) {
      for (std::size_t q = p + 1; q < d; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < d; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < d; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
    }
  }

  Vector eig(d);
  for (std::size_t i = 0; i < d; ++i) eig[i] = a(i, i);
  std::sort(eig.begin(), eig.end(), std::greater<>());
  return eig;
}

SpdMatrix::SpdMatrix(Matrix m) : m_(std::move(m)) {
  require_square(m_, "SpdMatrix");
  require_symmetric(m_);
  // Symmetrize exactly so downstream quadratic forms see one matrix.
  for (std::size_t i = 0; i < m_.rows(); ++i)
    for (std::size_t j = i + 1; j < m_.cols(); ++j) {
      const double avg = 0.5 * (m_(i, j) + m_(j, i));
      m_(i, j) = m_(j, i) = avg;
    }
  for (double v : m_.values())
    if (!std::isfinite(v)) throw NotSpdError("matrix has non-finite entries");

  chol_ = cholesky(m_);
  const std::size_t d = m_.rows();
  log_det_ = 0.0;
  for (std::size_t i = 0; i < d; ++i) log_det_ += 2.0 * std::log(chol_(i, i));
  det_ = std::exp(log_det_);

  // Inverse column by column from the factor.
  inv_ = Matrix(d, d);
  Vector e(d);
  for (std::size_t c = 0; c < d; ++c) {
    std::fill(e.begin(), e.end(), 0.0);
    e[c] = 1.0;
    const Vector col = solve(e);
    for (std::size_t r = 0; r < d; ++r) inv_(r, c) = col[r];
  }
  eig_ = sym_eigenvalues(m_);
  if (eig_.back() <= 0.0) throw NotSpdError("matrix has a non-positive eigenvalue");
}

Vector SpdMatrix::solve(std::span<const double> x) const {
  const std::size_t d = dim();
  if (x.size() != d) throw DimensionMismatchError("solve: dimension mismatch");
  Vector z(x.begin(), x.end());
  for (std::size_t i = 0; i < d; ++i) {
    double s = z[i];
    for (std::size_t k = 0; k < i; ++k) s -= chol_(i, k) * z[k];
    z[i] = s / chol_(i, i);
  }
  for (std::size_t i = d; i-- > 0;) {
    double s = z[i];
    for (std::size_t k = i + 1; k < d; ++k) s -= chol_(k, i) * z[k];
    z[i] = s / chol_(i, i);
  }
  return z;
}

double SpdMatrix::inverse_quadratic_form(std::span<const double> x) const {
  const std::size_t d = dim();
  if (x.size() != d) throw DimensionMismatchError("quadratic form: dimension mismatch");
  // ||L^{-1} x||^2 by forward substitution.
  double acc = 0.0;
  Vector z(d);
  for (std::size_t i = 0; i < d; ++i) {
    double s = x[i];
    for (std::size_t k = 0; k < i; ++k) s -= chol_(i, k) * z[k];
    z[i] = s / chol_(i, i);
    acc += z[i] * z[i];
  }
  return acc;
}

SpdMatrix SpdMatrix::scaled(double c) const {
  if (!(c > 0.0) || !std::isfinite(c)) throw NotSpdError("scale factor must be positive and finite");
  return SpdMatrix(m_.scaled(c));
}

double mahalanobis_sq(std::span<const double> y, std::span<const double> mu0,
                      const SpdMatrix& sigma) {
  if (y.size() != mu0.size() || y.size() != sigma.dim())
    throw DimensionMismatchError("mahalanobis_sq: dimension mismatch");
  Vector diff(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) diff[i] = y[i] - mu0[i];
  return sigma.inverse_quadratic_form(diff);
}

std::size_t trimmed_count(std::size_t n, double gamma) {
  if (!(gamma > 0.0 && gamma <= 1.0)) throw ConfigError("gamma must lie in (0, 1]");
  // The small slack keeps floor(20 * 0.7) == 14 despite 0.7 not being representable.
  const auto m = static_cast<std::size_t>(std::floor(static_cast<double>(n) * gamma + 1e-9));
  return std::clamp<std::size_t>(m, 1, n);
}

double empirical_quantile_sq_distance(std::span<const double> distances, double gamma) {
  if (distances.empty()) throw EmptyDataError("empirical_quantile_sq_distance: empty input");
  if (!(gamma > 0.0 && gamma < 1.0)) throw ConfigError("gamma must lie in (0, 1)");
  const std::size_t m = trimmed_count(distances.size(), gamma);
  Vector sorted(distances.begin(), distances.end());
  std::stable_sort(sorted.begin(), sorted.end());
  return sorted[m - 1];
}

double median_inplace(std::span<double> values) {
  if (values.empty()) throw EmptyDataError("median of empty sequence");
  const std::size_t n = values.size();
  const auto mid = values.begin() + static_cast<long>(n / 2);
  std::nth_element(values.begin(), mid, values.end());
  if (n % 2 == 1) return *mid;
  return 0.5 * (*std::max_element(values.begin(), mid) + *mid);
}

Matrix orthonormalize(const Matrix& m) {
  require_square(m, "orthonormalize");
  const std::size_t d = m.rows();
  Matrix q = m;
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t k = 0; k < j; ++k) {
      double dot = 0.0;
      for (std::size_t i = 0; i < d; ++i) dot += q(i, j) * q(i, k);
      for (std::size_t i = 0; i < d; ++i) q(i, j) -= dot * q(i, k);
    }
    double norm = 0.0;
    for (std::size_t i = 0; i < d; ++i) norm += q(i, j) * q(i, j);
    norm = std::sqrt(norm);
    if (norm == 0.0) throw NotSpdError("orthonormalize: rank-deficient input");
    for (std::size_t i = 0; i < d; ++i) q(i, j) /= norm;
  }
  return q;
}

}  // namespace fstest
