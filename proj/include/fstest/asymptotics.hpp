#pragma once

// Asymptotic efficiencies of the forward-search estimator and asymptotic
// power under contiguous alternatives mu_n = mu0 + delta / sqrt(n).

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fstest/elliptical.hpp"
#include "fstest/linalg.hpp"
#include "fstest/test_engine.hpp"

namespace fstest {

/// e1, e2, e3: forward search relative to the mean, the coordinatewise
/// median and the Hodges-Lehmann estimator.
enum class EfficiencyKind { e1, e2, e3 };

std::string_view efficiency_name(EfficiencyKind which);

/// Published closed form for the family (e1 is +inf for Cauchy).
double efficiency(Family family, EfficiencyKind which, std::size_t d, double gamma);

/// The defining ratio sigma^2 / c1 evaluated with quadrature for every
/// ingredient. Throws DivergentIntegralError when c1 diverges.
double efficiency_quadrature(const DensityGenerator& generator, EfficiencyKind which,
                             std::size_t d, double gamma);

struct EfficiencyTable {
  Family family;
  double gamma;
  std::vector<std::size_t> d_grid;
  /// [which][d] = efficiency^{1/d} (+inf stays +inf).
  std::vector<std::vector<double>> values;
};

EfficiencyTable efficiency_table4(Family family, std::span<const std::size_t> d_grid,
                                  double gamma);

struct LimitBehavior {
  Family family;
  EfficiencyKind which;
  std::vector<std::size_t> d_values;
  std::vector<double> values;
  bool expects_zero = false;    ///< Gaussian: e -> 0
  bool limit_confirmed = false; ///< below 1e-6 by d = 40, or above 1e3 by d = 60
  bool monotone_tail = false;   ///< monotone over d in [10, d_max]
};

/// Evaluates the closed form for d = 1..d_max and checks the stated limit.
LimitBehavior limit_behavior_check(Family family, EfficiencyKind which, std::size_t d_max,
                                   double gamma = 0.5);

/// Standard null model (mu0 = 0, Sigma = I) with a local shift.
struct ContiguousSpec {
  Family family = Family::gaussian;
  Vector delta;
  std::size_t n = 100;
  double gamma = 0.5;
};

/// Per-replication ingredients of the offsets: the four estimates and the
/// whole-sample score S = sum_k grad_mu log f(y_k, mu0), from `reps` null
/// data sets. Offsets are linear in delta, so one set serves every delta.
class ScoreCrossMoments {
 public:
  ScoreCrossMoments(Family family, std::size_t d, std::size_t n, double gamma, std::size_t reps,
                    std::uint64_t seed);

  Family family() const { return family_; }
  std::size_t dim() const { return d_; }
  std::size_t n() const { return n_; }
  std::size_t reps() const { return reps_; }
  double gamma() const { return gamma_; }

  struct Offsets {
    Vector values;
    Vector standard_errors;
  };
  /// a_i = mean over replications of (estimate_i - mu0_i) * (delta . S).
  Offsets offsets(StatisticKind kind, std::span<const double> delta) const;

  /// Sample covariance of sqrt(n) (estimate - mu0).
  Matrix estimate_covariance(StatisticKind kind) const;

 private:
  Family family_;
  std::size_t d_;
  std::size_t n_;
  std::size_t reps_;
  double gamma_;
  std::vector<double> estimates_;  // [rep][kind][coord]
  std::vector<double> scores_;     // [rep][coord]
};

ScoreCrossMoments::Offsets estimate_offsets(const ContiguousSpec& spec, StatisticKind kind,
                                            std::size_t reps, std::uint64_t seed);

enum class WeightSource { formula, empirical_covariance, zero_by_rule };
std::string_view weight_source_name(WeightSource source);

struct ContiguousPower {
  double power = 0.0;
  double standard_error = 0.0;
  double critical_value = 0.0;
  LimitSpec limit;
  WeightSource weight_source = WeightSource::formula;
};

struct ContiguousConfig {
  std::size_t n = 100;
  double gamma = 0.5;
  std::size_t reps = 5000;
  std::size_t mc_samples = 200000;
  std::uint64_t seed = 0;
};

/// P[sum w_i (Z_i + a_i)^2 > c_alpha] with c_alpha the (1 - alpha) quantile of
/// the central law. Weights come from the formula constants; when those
/// diverge (T1 under Cauchy) the eigenvalues of the simulated estimator
/// covariance are used instead. T2 under Cauchy is 0 by rule.
ContiguousPower contiguous_power(StatisticKind kind, const ScoreCrossMoments& moments,
                                 std::span<const double> delta, double alpha,
                                 std::size_t mc_samples, std::uint64_t seed);

ContiguousPower contiguous_power(StatisticKind kind, Family family, std::span<const double> delta,
                                 double alpha, const ContiguousConfig& cfg);

struct InformationDiagnostic {
  Matrix information;  ///< Monte Carlo mean of -Hessian of log f in mu
  bool finite = false;
};

/// Checks that the expected second derivatives of log f in mu are finite,
/// using central differences of the score at `reps` null draws.
InformationDiagnostic information_diagnostic(const EllipticalModel& model, std::size_t reps,
                                             std::uint64_t seed);

}  // namespace fstest
