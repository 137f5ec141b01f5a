#pragma once

// Finite-sample robustness and efficiency experiments for the location
// estimators, plus a Monte Carlo oracle for the forward-search limit
// covariance.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fstest/elliptical.hpp"
#include "fstest/estimators.hpp"
#include "fstest/linalg.hpp"

namespace fstest {

struct BreakdownResult {
  double gamma = 0.5;
  std::size_t n = 0;
  std::size_t d = 0;
  std::vector<double> magnitudes;        ///< 10^k for k in the ladder
  std::vector<std::size_t> corrupted;    ///< n* = 1..n-1, strictly increasing
  std::vector<double> fractions;         ///< n*/n
  std::vector<std::vector<double>> deviations;  ///< [n*][rung] ||estimate - clean estimate||
  std::vector<bool> broke;               ///< per contamination level
  /// Smallest n*/n that breaks; 1 when no level up to n-1 breaks.
  double contamination_fraction_at_break = 1.0;
};

/// Replaces the first n* points of a clean Gaussian sample (mu0 = 0,
/// Sigma = I) by random unit directions scaled to 10^k, for every k in
/// `ladder_exponents`. A level breaks when the deviation at the top rung
/// exceeds 10^{k_max - 2} and grows strictly over the last three rungs.
BreakdownResult breakdown_experiment(double gamma, std::size_t n, std::size_t d,
                                     std::span<const int> ladder_exponents, std::uint64_t seed);

/// Default ladder 10^3 .. 10^12.
BreakdownResult breakdown_experiment(double gamma, std::size_t n, std::size_t d,
                                     std::uint64_t seed);

struct EfficiencyResult {
  EstimatorKind numerator = EstimatorKind::mean;
  EstimatorKind denominator = EstimatorKind::forward_search;
  Family family = Family::gaussian;
  std::size_t n = 0;
  std::size_t d = 0;
  std::size_t reps = 0;
  double gamma = 0.5;
  double value = 0.0;            ///< (|COV numerator| / |COV denominator|)^{1/d}
  double standard_error = 0.0;   ///< grouped jackknife, 10 groups
};

/// Both estimators are applied to the same `reps` data sets drawn from the
/// standard model of `family`; covariances use the 1/reps normalization.
/// Throws SingularCovarianceError when either covariance is not positive
/// definite.
EfficiencyResult finite_sample_efficiency(EstimatorKind numerator, EstimatorKind denominator,
                                          Family family, std::size_t n, std::size_t d,
                                          std::size_t reps, double gamma, std::uint64_t seed);

struct LimitCovariance {
  Matrix covariance;       ///< sample covariance of sqrt(n) (forward search - mu0)
  Matrix standard_errors;  ///< entrywise Monte Carlo standard errors
  double c1 = 0.0;         ///< closed-form scalar from the limit theorem (may be +inf)
  double trimmed_oracle = 0.0;
};

/// Standard model (mu0 = 0, Sigma = I); reps >= 5000.
LimitCovariance empirical_limit_covariance(Family family, double gamma, std::size_t n,
                                           std::size_t d, std::size_t reps, std::uint64_t seed);

/// Asymptotic variance per coordinate of the mean of the gamma fraction of
/// points with smallest squared radius: E[R^2 1{R^2 <= q_gamma}] / (d gamma^2),
/// with q_gamma the gamma quantile of R^2. By quadrature and root finding.
double trimmed_second_moment_oracle(Family family, std::size_t d, double gamma);

/// gamma quantile of the squared radius R^2 under the standard model.
double squared_radius_quantile(Family family, std::size_t d, double gamma);

}  // namespace fstest
