#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fstest/linalg.hpp"

namespace fstest {

/// n observations of dimension d, stored row-major.
class Observations {
 public:
  Observations() = default;
  Observations(std::size_t n, std::size_t d) : n_(n), d_(d), values_(n * d, 0.0) {}
  Observations(std::size_t n, std::size_t d, std::vector<double> values);
  static Observations from_rows(const std::vector<Vector>& rows);

  std::size_t size() const { return n_; }
  std::size_t dim() const { return d_; }
  bool empty() const { return n_ == 0; }

  std::span<const double> row(std::size_t i) const { return {values_.data() + i * d_, d_}; }
  std::span<double> row(std::size_t i) { return {values_.data() + i * d_, d_}; }
  double operator()(std::size_t i, std::size_t j) const { return values_[i * d_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return values_[i * d_ + j]; }
  std::span<const double> values() const { return values_; }

  /// Adds `shift` to every row.
  Observations translated(std::span<const double> shift) const;
  /// Replaces every row y with a * y.
  Observations transformed(const Matrix& a) const;

  friend bool operator==(const Observations&, const Observations&) = default;

 private:
  std::size_t n_ = 0;
  std::size_t d_ = 0;
  std::vector<double> values_;
};

}  // namespace fstest
