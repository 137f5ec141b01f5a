#pragma once

#include <cstddef>
#include <string_view>

#include "fstest/linalg.hpp"
#include "fstest/observations.hpp"

namespace fstest {

enum class EstimatorKind { forward_search, mean, cw_median, hodges_lehmann };

std::string_view estimator_name(EstimatorKind kind);

struct Estimate {
  Vector value;
  EstimatorKind kind = EstimatorKind::mean;
  double gamma = 1.0;       ///< forward search step; 1 for the others
  std::size_t n_used = 0;   ///< S_{gamma,n} for forward search, else n
};

struct ForwardSearchConfig {
  double gamma = 0.5;  ///< in (0, 1]
  Vector mu0;          ///< anchor: the hypothesized location
  SpdMatrix sigma;     ///< known scatter
};

/// Mean of the floor(n gamma) observations closest to mu0 in squared
/// Mahalanobis distance under sigma. Ties are broken by input order.
Estimate forward_search(const Observations& data, const ForwardSearchConfig& cfg);

Estimate sample_mean(const Observations& data);

/// Coordinatewise median; even n averages the two middle order statistics.
Estimate cw_median(const Observations& data);

/// Coordinatewise median of the Walsh averages (y_ik + y_jk) / 2, i <= j.
Estimate hodges_lehmann(const Observations& data);

/// Dispatches on `kind`; `cfg` is only read for forward search.
Estimate estimate(EstimatorKind kind, const Observations& data, const ForwardSearchConfig& cfg);

}  // namespace fstest
