#include "fstest/elliptical.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <utility>

#include "fstest/error.hpp"
#include "fstest/quadrature.hpp"

namespace fstest {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

// pi^{m/2} / Gamma(m/2): the factor turning a radial integral over R^m in
// s = |z|^2 into a one-dimensional one.
double sphere_factor(double m) { return std::exp(0.5 * m * std::log(kPi) - std::lgamma(0.5 * m)); }

// Breakpoints in t for integrands of the form h(t^2), where g has its
// features at x = t^2.
std::vector<double> radial_breakpoints(Family family, double scale) {
  switch (family) {
    case Family::gaussian:
      return {0.0, 0.5 * scale, scale, 2.0 * scale, kInf};
    case Family::cauchy:
      return {0.0, 1.0, 10.0, kInf};
    case Family::light_tail100:
      // exp(-x^100) drops from ~1 to ~0 between x = 0.95 and x = 1.04 and is
      // exactly zero in double precision beyond x = 1.44.
      return {0.0, 0.9, 0.97, 0.99, 1.0, 1.01, 1.03, 1.1, 1.2};
  }
  return {0.0, kInf};
}

std::mutex& cache_mutex() {
  static std::mutex m;
  return m;
}

std::map<std::pair<std::size_t, int>, double>& light_cache() {
  static std::map<std::pair<std::size_t, int>, double> cache;
  return cache;
}

}  // namespace

std::string_view family_name(Family family) {
  switch (family) {
    case Family::gaussian:
      return "gaussian";
    case Family::cauchy:
      return "cauchy";
    case Family::light_tail100:
      return "light100";
  }
  return "unknown";
}

Family parse_family(std::string_view name) {
  if (name == "gaussian") return Family::gaussian;
  if (name == "cauchy") return Family::cauchy;
  if (name == "light100") return Family::light_tail100;
  throw ConfigError("unknown family '" + std::string(name) +
                    "' (expected gaussian, cauchy or light100)");
}

double DensityGenerator::value(double x, std::size_t d) const {
  return std::exp(log_value(x, d));
}

double DensityGenerator::log_value(double x, std::size_t d) const {
  switch (family_) {
    case Family::gaussian:
      return -0.5 * x;
    case Family::cauchy:
      return -0.5 * (static_cast<double>(d) + 1.0) * std::log1p(x);
    case Family::light_tail100:
      return -std::pow(x, 100.0);
  }
  return 0.0;
}

double DensityGenerator::log_derivative(double x, std::size_t d) const {
  switch (family_) {
    case Family::gaussian:
      return -0.5;
    case Family::cauchy:
      return -0.5 * (static_cast<double>(d) + 1.0) / (1.0 + x);
    case Family::light_tail100:
      return -100.0 * std::pow(x, 99.0);
  }
  return 0.0;
}

double DensityGenerator::radial_integral(std::size_t d, int power) const {
  if (d == 0) throw ConfigError("dimension must be positive");
  if (power != 0 && power != 1) throw ConfigError("radial integral power must be 0 or 1");
  const double half = 0.5 * static_cast<double>(d);
  switch (family_) {
    case Family::gaussian:
      return std::pow(2.0, half + power) * std::tgamma(half + power);
    case Family::light_tail100:
      // t = x^100 turns the integral into Gamma((d/2 + p) / 100) / 100.
      return std::tgamma((half + power) / 100.0) / 100.0;
    case Family::cauchy:
      if (power == 0) return std::tgamma(half) * std::sqrt(kPi) / std::tgamma(half + 0.5);
      return radial_integral_quadrature(d, power);  // throws: x^{-1/2} tail
  }
  return 0.0;
}

double DensityGenerator::radial_integral_quadrature(std::size_t d, int power) const {
  if (d == 0) throw ConfigError("dimension must be positive");
  const double a = 0.5 * static_cast<double>(d) - 1.0 + power;

  // Power-law tail test on x^a g(x): the integral diverges when the local
  // log-log slope at large x is >= -1.
  const double x1 = 1e8;
  const double x2 = 1e12;
  const double lh1 = a * std::log(x1) + log_value(x1, d);
  const double lh2 = a * std::log(x2) + log_value(x2, d);
  if (std::isfinite(lh1) && std::isfinite(lh2)) {
    const double slope = (lh2 - lh1) / (std::log(x2) - std::log(x1));
    if (slope >= -1.0 - 1e-9)
      throw DivergentIntegralError("radial integral I_" + std::to_string(power) + "(" +
                                   std::to_string(d) + ") diverges for the " +
                                   std::string(family_name(family_)) + " family");
  }

  // x = t^2 removes the x^{-1/2} endpoint singularity at d = 1.
  const double exponent = 2.0 * a + 1.0;
  auto integrand = [&](double t) {
    if (t == 0.0) return exponent == 0.0 ? 2.0 * value(0.0, d) : 0.0;
    return 2.0 * std::exp(exponent * std::log(t) + log_value(t * t, d));
  };
  const auto bp = radial_breakpoints(family_, std::sqrt(static_cast<double>(d) + 2.0 * power));
  return integrate_piecewise(integrand, bp, 1e-13);
}

double DensityGenerator::normalizing_constant(std::size_t d) const {
  return 1.0 / (sphere_factor(static_cast<double>(d)) * radial_integral(d, 0));
}

double DensityGenerator::coordinate_variance(std::size_t d) const {
  try {
    return radial_integral(d, 1) / (static_cast<double>(d) * radial_integral(d, 0));
  } catch (const DivergentIntegralError&) {
    return kInf;
  }
}

double DensityGenerator::marginal_density(double t, std::size_t d) const {
  switch (family_) {
    case Family::gaussian:
      return std::exp(-0.5 * t * t) / std::sqrt(2.0 * kPi);
    case Family::cauchy:
      return 1.0 / (kPi * (1.0 + t * t));
    case Family::light_tail100:
      return marginal_density_quadrature(t, d);
  }
  return 0.0;
}

double DensityGenerator::marginal_density_quadrature(double t, std::size_t d) const {
  const double k = normalizing_constant(d);
  const double t2 = t * t;
  if (d == 1) return k * value(t2, d);
  if (family_ == Family::light_tail100 && t2 >= 1.44) return 0.0;

  // g_1(t) = k c_{d-1} int_0^inf 2 v^{d-2} g(t^2 + v^2) dv.
  const double m = static_cast<double>(d) - 1.0;
  const double exponent = static_cast<double>(d) - 2.0;
  auto integrand = [&](double v) {
    if (v == 0.0) return exponent == 0.0 ? 2.0 * value(t2, d) : 0.0;
    return 2.0 * std::exp(exponent * std::log(v) + log_value(t2 + v * v, d));
  };

  std::vector<double> bp;
  if (family_ == Family::light_tail100) {
    bp.push_back(0.0);
    for (double r : {0.9, 0.97, 0.99, 1.0, 1.01, 1.03, 1.1, 1.44}) {
      const double v = std::sqrt(std::max(0.0, r - t2));
      if (v > bp.back()) bp.push_back(v);
    }
  } else {
    bp = radial_breakpoints(family_, std::sqrt(static_cast<double>(d)));
  }
  return k * sphere_factor(m) * integrate_piecewise(integrand, bp, 1e-13);
}

double DensityGenerator::marginal_density_at_zero(std::size_t d) const {
  switch (family_) {
    case Family::gaussian:
      return 1.0 / std::sqrt(2.0 * kPi);
    case Family::cauchy:
      return 1.0 / kPi;
    case Family::light_tail100: {
      std::lock_guard lock(cache_mutex());
      auto [it, fresh] = light_cache().try_emplace({d, 0}, 0.0);
      if (fresh) it->second = marginal_density_at_zero_quadrature(d);
      return it->second;
    }
  }
  return 0.0;
}

double DensityGenerator::marginal_density_sq_integral(std::size_t d) const {
  switch (family_) {
    case Family::gaussian:
      return 0.5 / std::sqrt(kPi);
    case Family::cauchy:
      return 0.5 / kPi;
    case Family::light_tail100: {
      std::lock_guard lock(cache_mutex());
      auto [it, fresh] = light_cache().try_emplace({d, 1}, 0.0);
      if (fresh) it->second = marginal_density_sq_integral_quadrature(d);
      return it->second;
    }
  }
  return 0.0;
}

double DensityGenerator::marginal_density_at_zero_quadrature(std::size_t d) const {
  return marginal_density_quadrature(0.0, d);
}

double DensityGenerator::marginal_density_sq_integral_quadrature(std::size_t d) const {
  auto integrand = [&](double t) {
    const double g1 = marginal_density_quadrature(t, d);
    return g1 * g1;
  };
  std::vector<double> bp;
  switch (family_) {
    case Family::gaussian:
      bp = {0.0, 1.0, 3.0, kInf};
      break;
    case Family::cauchy:
      bp = {0.0, 1.0, 10.0, kInf};
      break;
    case Family::light_tail100:
      bp = {0.0, 0.9, 0.97, 0.99, 1.0, 1.01, 1.03, 1.1, 1.2};
      break;
  }
  return 2.0 * integrate_piecewise(integrand, bp, 1e-11);
}

void DensityGenerator::draw_standard(std::span<double> out, RandomStream& stream) const {
  for (double& z : out) z = stream.normal();
  switch (family_) {
    case Family::gaussian:
      return;
    case Family::cauchy: {
      const double w = std::abs(stream.normal());
      for (double& z : out) z /= w;
      return;
    }
    case Family::light_tail100: {
      double norm_sq = 0.0;
      for (double z : out) norm_sq += z * z;
      // R^2 = T^{1/100}, T ~ Gamma(d/200). Drawn on the log scale as
      // log T = log Gamma(a+1) + log(U)/a, which stays accurate for tiny a.
      const double a = static_cast<double>(out.size()) / 200.0;
      const double log_t = std::log(stream.gamma(a + 1.0)) + std::log(stream.uniform()) / a;
      const double radius = std::exp(log_t / 200.0);
      const double scale = radius / std::sqrt(norm_sq);
      for (double& z : out) z *= scale;
      return;
    }
  }
}

EllipticalModel::EllipticalModel(Family family, Vector mu, SpdMatrix sigma)
    : generator_(family), mu_(std::move(mu)), sigma_(std::move(sigma)) {
  if (mu_.empty()) throw DimensionMismatchError("model dimension must be positive");
  if (sigma_.dim() != mu_.size())
    throw DimensionMismatchError("location and scatter dimensions differ");
  for (double v : mu_)
    if (!std::isfinite(v)) throw ConfigError("location must be finite");
  k_ = generator_.normalizing_constant(dim());
  log_normalizer_ = std::log(k_) - 0.5 * sigma_.log_determinant();
}

EllipticalModel EllipticalModel::standard(Family family, std::size_t d) {
  return EllipticalModel(family, Vector(d, 0.0), SpdMatrix::identity(d));
}

EllipticalModel EllipticalModel::relocated(Vector mu) const {
  return EllipticalModel(family(), std::move(mu), sigma_);
}

double EllipticalModel::log_density(std::span<const double> y) const {
  const double u = mahalanobis_sq(y, mu_, sigma_);
  return log_normalizer_ + generator_.log_value(u, dim());
}

Vector EllipticalModel::location_score(std::span<const double> y) const {
  if (y.size() != dim()) throw DimensionMismatchError("location_score: dimension mismatch");
  Vector diff(dim());
  for (std::size_t i = 0; i < dim(); ++i) diff[i] = y[i] - mu_[i];
  const double u = sigma_.inverse_quadratic_form(diff);
  Vector score = sigma_.solve(diff);
  const double factor = -2.0 * generator_.log_derivative(u, dim());
  for (double& s : score) s *= factor;
  return score;
}

void EllipticalModel::draw(std::span<double> out, RandomStream& stream) const {
  const std::size_t d = dim();
  Vector z(d);
  generator_.draw_standard(z, stream);
  const Matrix& l = sigma_.cholesky_factor();
  for (std::size_t i = 0; i < d; ++i) {
    double s = mu_[i];
    for (std::size_t k = 0; k <= i; ++k) s += l(i, k) * z[k];
    out[i] = s;
  }
}

Observations EllipticalModel::sample(std::size_t n, RandomStream& stream) const {
  Observations out(n, dim());
  for (std::size_t i = 0; i < n; ++i) draw(out.row(i), stream);
  return out;
}

MixtureModel::MixtureModel(double beta, EllipticalModel base, std::span<const double> shift)
    : beta_(beta), base_(base), shifted_(std::move(base)) {
  if (!(beta >= 0.0 && beta <= 1.0)) throw ConfigError("mixture weight beta must be in [0, 1]");
  if (shift.size() != base_.dim()) throw DimensionMismatchError("shift dimension mismatch");
  Vector mu = base_.location();
  for (std::size_t i = 0; i < mu.size(); ++i) mu[i] += shift[i];
  shifted_ = base_.relocated(std::move(mu));
}

Observations MixtureModel::sample(std::size_t n, RandomStream& stream) const {
  Observations out(n, base_.dim());
  for (std::size_t i = 0; i < n; ++i) {
    const bool from_shifted = stream.uniform() < beta_;
    (from_shifted ? shifted_ : base_).draw(out.row(i), stream);
  }
  return out;
}

}  // namespace fstest
