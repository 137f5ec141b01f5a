#pragma once

#include <cmath>
#include <cstdint>

#include "fstest/linalg.hpp"
#include "fstest/observations.hpp"
#include "fstest/rng.hpp"

namespace fstest::testing {

inline Matrix random_matrix(std::size_t r, std::size_t c, RandomStream& s) {
  Matrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = s.normal();
  return m;
}

// B B^T + 0.1 I keeps the condition number moderate.
inline Matrix random_spd(std::size_t d, RandomStream& s) {
  const Matrix b = random_matrix(d, d, s);
  Matrix a = b * b.transpose();
  for (std::size_t i = 0; i < d; ++i) a(i, i) += 0.1;
  return a;
}

inline Observations normal_data(std::size_t n, std::size_t d, RandomStream& s) {
  Observations o(n, d);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) o(i, j) = s.normal();
  return o;
}

inline Matrix random_orthogonal(std::size_t d, RandomStream& s) {
  return orthonormalize(random_matrix(d, d, s));
}

inline double rel_err(double a, double b) {
  return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

}  // namespace fstest::testing
