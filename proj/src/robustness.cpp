#include "fstest/robustness.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include <boost/math/tools/roots.hpp>

#include "fstest/error.hpp"
#include "fstest/parallel.hpp"
#include "fstest/quadrature.hpp"
#include "fstest/rng.hpp"
#include "fstest/test_engine.hpp"

namespace fstest {

namespace {

constexpr std::array<int, 10> kDefaultLadder = {3, 4, 5, 6, 7, 8, 9, 10, 11, 12};

double norm_of_difference(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

// Covariance of the rows of `x` (reps x d, row-major) skipping rows in
// [skip_begin, skip_end), normalized by the number of rows used.
Matrix covariance_excluding(const std::vector<double>& x, std::size_t reps, std::size_t d,
                            std::size_t skip_begin, std::size_t skip_end) {
  const std::size_t used = reps - (skip_end - skip_begin);
  Vector mean(d, 0.0);
  for (std::size_t r = 0; r < reps; ++r) {
    if (r >= skip_begin && r < skip_end) continue;
    for (std::size_t j = 0; j < d; ++j) mean[j] += x[r * d + j];
  }
  for (double& m : mean) m /= static_cast<double>(used);
  Matrix cov(d, d);
  Vector c(d);
  for (std::size_t r = 0; r < reps; ++r) {
    if (r >= skip_begin && r < skip_end) continue;
    for (std::size_t j = 0; j < d; ++j) c[j] = x[r * d + j] - mean[j];
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j <= i; ++j) cov(i, j) += c[i] * c[j];
  }
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      cov(i, j) /= static_cast<double>(used);
      cov(j, i) = cov(i, j);
    }
  return cov;
}

double log_determinant(const Matrix& cov) {
  Matrix l;
  try {
    l = cholesky(cov);
  } catch (const NotSpdError&) {
    throw SingularCovarianceError("estimator covariance is singular; increase reps");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < l.rows(); ++i) s += 2.0 * std::log(l(i, i));
  return s;
}

// int_0^q x^{d/2 - 1 + p} g(x) dx with x = t^2.
double truncated_radial_integral(const DensityGenerator& gen, std::size_t d, int power,
                                 double q) {
  if (q <= 0.0) return 0.0;
  const double exponent = static_cast<double>(d) - 1.0 + 2.0 * power;
  auto integrand = [&](double t) {
    if (t == 0.0) return exponent == 0.0 ? 2.0 * gen.value(0.0, d) : 0.0;
    return 2.0 * std::exp(exponent * std::log(t) + gen.log_value(t * t, d));
  };
  const double top = std::sqrt(q);
  const double sd = std::sqrt(static_cast<double>(d));
  std::vector<double> bp = {0.0};
  for (double b : {0.5, 0.9, 0.97, 0.99, 1.0, 1.01, 1.03, 1.1, 0.5 * sd, sd, 2.0 * sd, 10.0})
    if (b < top) bp.push_back(b);
  std::sort(bp.begin(), bp.end());
  bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
  bp.push_back(top);
  return integrate_piecewise(integrand, bp, 1e-12);
}

}  // namespace

BreakdownResult breakdown_experiment(double gamma, std::size_t n, std::size_t d,
                                     std::span<const int> ladder_exponents, std::uint64_t seed) {
  if (n < 2 || d == 0) throw ConfigError("breakdown needs n >= 2 and d >= 1");
  if (ladder_exponents.size() < 3) throw ConfigError("ladder needs at least three rungs");
  if (!std::is_sorted(ladder_exponents.begin(), ladder_exponents.end()))
    throw ConfigError("ladder exponents must be increasing");

  const EllipticalModel model = EllipticalModel::standard(Family::gaussian, d);
  const ForwardSearchConfig cfg{gamma, model.location(), model.scatter()};
  RandomStream clean_stream(seed, "breakdown/clean", 0);
  const Observations clean = model.sample(n, clean_stream);
  const Vector clean_estimate = forward_search(clean, cfg).value;

  // One random unit direction per observation slot.
  std::vector<Vector> directions(n, Vector(d));
  for (std::size_t i = 0; i < n; ++i) {
    RandomStream stream(seed, "breakdown/directions", i);
    double norm = 0.0;
    do {
      norm = 0.0;
      for (double& v : directions[i]) {
        v = stream.normal();
        norm += v * v;
      }
    } while (norm == 0.0);
    norm = std::sqrt(norm);
    for (double& v : directions[i]) v /= norm;
  }

  BreakdownResult out;
  out.gamma = gamma;
  out.n = n;
  out.d = d;
  for (int k : ladder_exponents) out.magnitudes.push_back(std::pow(10.0, k));
  const std::size_t rungs = out.magnitudes.size();
  out.deviations.assign(n - 1, std::vector<double>(rungs, 0.0));
  out.broke.assign(n - 1, false);

  std::vector<char> broke(n - 1, 0);
  parallel_for(n - 1, [&](std::size_t level) {
    const std::size_t corrupted = level + 1;
    for (std::size_t k = 0; k < rungs; ++k) {
      std::vector<double> values(clean.values().begin(), clean.values().end());
      for (std::size_t i = 0; i < corrupted; ++i)
        for (std::size_t j = 0; j < d; ++j) values[i * d + j] = out.magnitudes[k] * directions[i][j];
      const Observations data(n, d, std::move(values));
      out.deviations[level][k] = norm_of_difference(forward_search(data, cfg).value, clean_estimate);
    }
    const auto& dev = out.deviations[level];
    const bool large = dev[rungs - 1] > out.magnitudes[rungs - 1] * 1e-2;
    const bool growing = dev[rungs - 3] < dev[rungs - 2] && dev[rungs - 2] < dev[rungs - 1];
    broke[level] = large && growing ? 1 : 0;
  });

  for (std::size_t level = 0; level + 1 < n; ++level) {
    out.corrupted.push_back(level + 1);
    out.fractions.push_back(static_cast<double>(level + 1) / static_cast<double>(n));
    out.broke[level] = broke[level] != 0;
  }
  // Report the first breaking level and force monotonicity above it: once an
  // adversary can carry the estimate away with n* points it can with more.
  for (std::size_t level = 0; level + 1 < n; ++level) {
    if (out.broke[level]) {
      out.contamination_fraction_at_break = out.fractions[level];
      for (std::size_t rest = level; rest + 1 < n; ++rest) out.broke[rest] = true;
      break;
    }
  }
  return out;
}

BreakdownResult breakdown_experiment(double gamma, std::size_t n, std::size_t d,
                                     std::uint64_t seed) {
  return breakdown_experiment(gamma, n, d, kDefaultLadder, seed);
}

EfficiencyResult finite_sample_efficiency(EstimatorKind numerator, EstimatorKind denominator,
                                          Family family, std::size_t n, std::size_t d,
                                          std::size_t reps, double gamma, std::uint64_t seed) {
  if (reps < 100) throw ConfigError("finite-sample efficiency needs reps >= 100");
  if (n == 0 || d == 0) throw ConfigError("n and d must be positive");
  const EllipticalModel model = EllipticalModel::standard(family, d);
  const ForwardSearchConfig cfg{gamma, model.location(), model.scatter()};

  std::vector<double> num(reps * d);
  std::vector<double> den(reps * d);
  const std::string purpose = "efficiency/" + std::string(family_name(family));
  parallel_for(reps, [&](std::size_t r) {
    RandomStream stream(seed, purpose, r);
    const Observations data = model.sample(n, stream);
    const Estimate a = estimate(numerator, data, cfg);
    const Estimate b = numerator == denominator ? a : estimate(denominator, data, cfg);
    std::copy(a.value.begin(), a.value.end(), num.begin() + static_cast<long>(r * d));
    std::copy(b.value.begin(), b.value.end(), den.begin() + static_cast<long>(r * d));
  });

  const double dd = static_cast<double>(d);
  auto log_ratio = [&](std::size_t skip_begin, std::size_t skip_end) {
    return log_determinant(covariance_excluding(num, reps, d, skip_begin, skip_end)) -
           log_determinant(covariance_excluding(den, reps, d, skip_begin, skip_end));
  };

  EfficiencyResult out{numerator, denominator, family, n, d, reps, gamma, 0.0, 0.0};
  out.value = std::exp(log_ratio(0, 0) / dd);

  constexpr std::size_t groups = 10;
  std::vector<double> leave_out(groups);
  for (std::size_t g = 0; g < groups; ++g)
    leave_out[g] = std::exp(log_ratio(g * reps / groups, (g + 1) * reps / groups) / dd);
  double mean = 0.0;
  for (double v : leave_out) mean += v / groups;
  double ss = 0.0;
  for (double v : leave_out) ss += (v - mean) * (v - mean);
  out.standard_error = std::sqrt(ss * (groups - 1.0) / groups);
  return out;
}

LimitCovariance empirical_limit_covariance(Family family, double gamma, std::size_t n,
                                           std::size_t d, std::size_t reps, std::uint64_t seed) {
  if (reps < 5000) throw ConfigError("empirical limit covariance needs reps >= 5000");
  if (n == 0 || d == 0) throw ConfigError("n and d must be positive");
  const EllipticalModel model = EllipticalModel::standard(family, d);
  const ForwardSearchConfig cfg{gamma, model.location(), model.scatter()};
  const double scale = std::sqrt(static_cast<double>(n));

  std::vector<double> x(reps * d);
  const std::string purpose = "limit-covariance/" + std::string(family_name(family));
  parallel_for(reps, [&](std::size_t r) {
    RandomStream stream(seed, purpose, r);
    const Estimate est = forward_search(model.sample(n, stream), cfg);
    for (std::size_t j = 0; j < d; ++j) x[r * d + j] = scale * est.value[j];
  });

  LimitCovariance out;
  const double m = static_cast<double>(reps);
  out.covariance = covariance_excluding(x, reps, d, 0, 0).scaled(m / (m - 1.0));
  out.standard_errors = Matrix(d, d);
  Vector mean(d, 0.0);
  for (std::size_t r = 0; r < reps; ++r)
    for (std::size_t j = 0; j < d; ++j) mean[j] += x[r * d + j] / m;
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      double ss = 0.0;
      for (std::size_t r = 0; r < reps; ++r) {
        const double p = (x[r * d + i] - mean[i]) * (x[r * d + j] - mean[j]) - out.covariance(i, j);
        ss += p * p;
      }
      out.standard_errors(i, j) = std::sqrt(ss / (m - 1.0) / m);
    }
  }
  out.c1 = variance_constants(model.generator(), d, gamma).c1;
  out.trimmed_oracle = trimmed_second_moment_oracle(family, d, gamma);
  return out;
}

double squared_radius_quantile(Family family, std::size_t d, double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw ConfigError("quantile level must lie in (0, 1)");
  if (d == 0) throw ConfigError("dimension must be positive");
  const DensityGenerator gen(family);
  const double total = gen.radial_integral_quadrature(d, 0);
  auto cdf_gap = [&](double q) { return truncated_radial_integral(gen, d, 0, q) / total - gamma; };

  double hi = 1.0;
  while (cdf_gap(hi) < 0.0) hi *= 2.0;
  double lo = hi / 2.0;
  while (lo > 1e-300 && cdf_gap(lo) > 0.0) lo /= 2.0;
  if (cdf_gap(lo) > 0.0) lo = 0.0;
  std::uintmax_t iterations = 200;
  const auto bracket = boost::math::tools::toms748_solve(
      cdf_gap, lo, hi, boost::math::tools::eps_tolerance<double>(50), iterations);
  return 0.5 * (bracket.first + bracket.second);
}

double trimmed_second_moment_oracle(Family family, std::size_t d, double gamma) {
  if (d == 0) throw ConfigError("dimension must be positive");
  const DensityGenerator gen(family);
  if (gamma == 1.0) return gen.coordinate_variance(d);
  const double q = squared_radius_quantile(family, d, gamma);
  const double moment =
      truncated_radial_integral(gen, d, 1, q) / gen.radial_integral_quadrature(d, 0);
  return moment / (static_cast<double>(d) * gamma * gamma);
}

}  // namespace fstest
