#include "fstest/observations.hpp"

#include "fstest/error.hpp"

namespace fstest {

Observations::Observations(std::size_t n, std::size_t d, std::vector<double> values)
    : n_(n), d_(d), values_(std::move(values)) {
  if (values_.size() != n * d) throw DimensionMismatchError("Observations: size != n * d");
}

Observations Observations::from_rows(const std::vector<Vector>& rows) {
  if (rows.empty()) return {};
  Observations out(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != out.d_) throw DimensionMismatchError("Observations: ragged rows");
    std::copy(rows[i].begin(), rows[i].end(), out.row(i).begin());
  }
  return out;
}

Observations Observations::translated(std::span<const double> shift) const {
  if (shift.size() != d_) throw DimensionMismatchError("translate: dimension mismatch");
  Observations out = *this;
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < d_; ++j) out(i, j) += shift[j];
  return out;
}

Observations Observations::transformed(const Matrix& a) const {
  if (a.cols() != d_) throw DimensionMismatchError("transform: dimension mismatch");
  Observations out(n_, a.rows());
  for (std::size_t i = 0; i < n_; ++i) {
    const Vector y = a * row(i);
    std::copy(y.begin(), y.end(), out.row(i).begin());
  }
  return out;
}

}  // namespace fstest
