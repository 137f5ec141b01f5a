#pragma once

// Elliptical location models: density k |Sigma|^{-1/2} g((y-mu)' Sigma^{-1} (y-mu)).

#include <cstddef>
#include <span>
#include <string>
#include <string_view>

#include "fstest/linalg.hpp"
#include "fstest/observations.hpp"
#include "fstest/rng.hpp"

namespace fstest {

enum class Family { gaussian, cauchy, light_tail100 };

/// "gaussian", "cauchy", "light100".
std::string_view family_name(Family family);
/// Inverse of family_name(). Throws ConfigError.
Family parse_family(std::string_view name);

/// Density generator g for one of the shipped families:
///   gaussian:  g(x) = exp(-x/2)
///   cauchy:    g(x) = (1+x)^{-(d+1)/2}   (multivariate t, one degree of freedom)
///   light100:  g(x) = exp(-x^100)
/// Quantities that depend on the dimension take it explicitly.
class DensityGenerator {
 public:
  explicit DensityGenerator(Family family) : family_(family) {}

  Family family() const { return family_; }

  double value(double x, std::size_t d) const;
  double log_value(double x, std::size_t d) const;
  /// g'(x) / g(x).
  double log_derivative(double x, std::size_t d) const;

  /// I_p(d) = int_0^inf x^{d/2-1+p} g(x) dx for p in {0, 1}. Closed form when
  /// one exists, quadrature otherwise. Throws DivergentIntegralError.
  double radial_integral(std::size_t d, int power) const;
  /// Same integral, always by adaptive quadrature (with a power-law tail test).
  double radial_integral_quadrature(std::size_t d, int power) const;

  /// k = Gamma(d/2) pi^{-d/2} / I_0(d).
  double normalizing_constant(std::size_t d) const;

  /// Var(Y_1) for the standard (Sigma = I) law: I_1 / (d I_0), or +inf.
  double coordinate_variance(std::size_t d) const;

  /// Marginal density g_1 of the first coordinate of the standard law at t.
  double marginal_density(double t, std::size_t d) const;
  /// g_1(0): closed form for gaussian/cauchy, quadrature for light100.
  double marginal_density_at_zero(std::size_t d) const;
  /// int g_1(t)^2 dt: closed form for gaussian/cauchy, quadrature for light100.
  double marginal_density_sq_integral(std::size_t d) const;
  /// Quadrature-only routes for the two marginal quantities (oracle use).
  double marginal_density_at_zero_quadrature(std::size_t d) const;
  double marginal_density_sq_integral_quadrature(std::size_t d) const;

  /// Draws a standard (mu = 0, Sigma = I) observation into `out`.
  void draw_standard(std::span<double> out, RandomStream& stream) const;

 private:
  double marginal_density_quadrature(double t, std::size_t d) const;

  Family family_;
};

class EllipticalModel {
 public:
  /// Throws DimensionMismatchError if mu and sigma disagree.
  EllipticalModel(Family family, Vector mu, SpdMatrix sigma);
  /// Standard model: mu = 0, Sigma = I.
  static EllipticalModel standard(Family family, std::size_t d);

  const DensityGenerator& generator() const { return generator_; }
  Family family() const { return generator_.family(); }
  std::size_t dim() const { return mu_.size(); }
  const Vector& location() const { return mu_; }
  const SpdMatrix& scatter() const { return sigma_; }
  double normalizing_constant() const { return k_; }

  /// Same family and scatter, location moved to `mu`.
  EllipticalModel relocated(Vector mu) const;

  double log_density(std::span<const double> y) const;
  /// Gradient of log f(y, mu) with respect to mu: -2 (g'/g)(u) Sigma^{-1} (y - mu).
  Vector location_score(std::span<const double> y) const;

  /// y = mu + L z with z a standard draw and L the Cholesky factor of Sigma.
  void draw(std::span<double> out, RandomStream& stream) const;
  Observations sample(std::size_t n, RandomStream& stream) const;

 private:
  DensityGenerator generator_;
  Vector mu_;
  SpdMatrix sigma_;
  double k_;
  double log_normalizer_;
};

/// (1 - beta) F + beta G where G is F moved by `shift`.
class MixtureModel {
 public:
  /// Throws ConfigError unless beta is in [0, 1].
  MixtureModel(double beta, EllipticalModel base, std::span<const double> shift);

  double beta() const { return beta_; }
  const EllipticalModel& base() const { return base_; }
  const EllipticalModel& shifted() const { return shifted_; }

  Observations sample(std::size_t n, RandomStream& stream) const;

 private:
  double beta_;
  EllipticalModel base_;
  EllipticalModel shifted_;
};

/// Convenience wrappers with the operation names used throughout the docs.
inline Observations sample(const EllipticalModel& model, std::size_t n, RandomStream& stream) {
  return model.sample(n, stream);
}
inline Observations sample_mixture(const MixtureModel& mix, std::size_t n,
                                   RandomStream& stream) {
  return mix.sample(n, stream);
}
inline double log_density(const EllipticalModel& model, std::span<const double> y) {
  return model.log_density(y);
}
inline Vector location_score(const EllipticalModel& model, std::span<const double> y) {
  return model.location_score(y);
}
inline double radial_integral(const DensityGenerator& g, std::size_t d, int power) {
  return g.radial_integral(d, power);
}

}  // namespace fstest
