#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/beta.hpp>

#include "doctest.h"
#include "fstest/elliptical.hpp"
#include "fstest/error.hpp"
#include "helpers.hpp"

using namespace fstest;
using namespace fstest::testing;

namespace {

constexpr double kPi = std::numbers::pi;

struct Moments {
  double mean = 0.0;
  double se = 0.0;
};

template <class F>
Moments mc_mean(std::size_t n, F&& draw) {
  double s = 0.0;
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = draw();
    s += v;
    ss += v * v;
  }
  const double m = s / static_cast<double>(n);
  const double var = ss / static_cast<double>(n) - m * m;
  return {m, std::sqrt(var / static_cast<double>(n))};
}

}  // namespace

TEST_CASE("radial integrals: closed forms and examples") {
  const DensityGenerator gauss(Family::gaussian);
  CHECK(gauss.radial_integral(2, 1) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(gauss.radial_integral(2, 0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(gauss.radial_integral_quadrature(2, 1) == doctest::Approx(4.0).epsilon(1e-10));
  CHECK(gauss.radial_integral_quadrature(2, 0) == doctest::Approx(2.0).epsilon(1e-10));
  const DensityGenerator light(Family::light_tail100);
  CHECK(light.radial_integral(4, 0) == doctest::Approx(std::tgamma(1.0 / 50.0) / 100.0));
}

TEST_CASE("radial integrals: quadrature agrees with closed forms") {
  for (Family f : {Family::gaussian, Family::light_tail100}) {
    const DensityGenerator g(f);
    for (std::size_t d : {1, 2, 3, 4, 7, 10, 20, 50, 100}) {
      for (int p : {0, 1}) {
        CAPTURE(family_name(f));
        CAPTURE(d);
        CAPTURE(p);
        CHECK(rel_err(g.radial_integral_quadrature(d, p), g.radial_integral(d, p)) < 1e-9);
      }
    }
  }
  const DensityGenerator cauchy(Family::cauchy);
  for (std::size_t d : {1, 2, 4, 10}) {
    const double beta = boost::math::beta(0.5 * d, 0.5);
    CHECK(rel_err(cauchy.radial_integral(d, 0), beta) < 1e-12);
    CHECK(rel_err(cauchy.radial_integral_quadrature(d, 0), beta) < 1e-9);
  }
}

TEST_CASE("Cauchy I_1 diverges") {
  const DensityGenerator cauchy(Family::cauchy);
  for (std::size_t d : {1, 2, 4, 10})
    CHECK_THROWS_AS(cauchy.radial_integral(d, 1), DivergentIntegralError);
  CHECK(std::isinf(cauchy.coordinate_variance(4)));
}

TEST_CASE("normalizing constants") {
  for (std::size_t d : {1, 2, 4, 10})
    CHECK(rel_err(DensityGenerator(Family::gaussian).normalizing_constant(d),
                  std::pow(2.0 * kPi, -0.5 * d)) < 1e-12);
  // Multivariate Cauchy: Gamma((d+1)/2) / (pi^{(d+1)/2})
  for (std::size_t d : {1, 2, 4, 10})
    CHECK(rel_err(DensityGenerator(Family::cauchy).normalizing_constant(d),
                  std::tgamma(0.5 * (d + 1.0)) / std::pow(kPi, 0.5 * (d + 1.0))) < 1e-12);
}

TEST_CASE("densities integrate to one (Monte Carlo, d <= 3)") {
  for (auto [family, half_width] : {std::pair{Family::gaussian, 8.0},
                                    std::pair{Family::light_tail100, 1.5}}) {
    for (std::size_t d : {1, 2, 3}) {
      const EllipticalModel model = EllipticalModel::standard(family, d);
      RandomStream s(7, "test/integrates", d);
      Vector y(d);
      const Moments m = mc_mean(200000, [&] {
        for (double& v : y) v = half_width * (2.0 * s.uniform() - 1.0);
        return std::exp(model.log_density(y)) * std::pow(2.0 * half_width, double(d));
      });
      CAPTURE(family_name(family));
      CAPTURE(d);
      CHECK(std::abs(m.mean - 1.0) < 4.0 * m.se + 1e-3);
    }
  }
}

TEST_CASE("log_density examples") {
  CHECK(EllipticalModel::standard(Family::gaussian, 2).log_density(Vector{0, 0}) ==
        doctest::Approx(-std::log(2.0 * kPi)));
  CHECK(EllipticalModel::standard(Family::cauchy, 4).log_density(Vector(4, 0.0)) ==
        doctest::Approx(std::log(std::tgamma(2.5) / (kPi * kPi * std::tgamma(0.5)))));
  CHECK(EllipticalModel::standard(Family::gaussian, 1).log_density(Vector{1.0}) ==
        doctest::Approx(-0.5 * std::log(2.0 * kPi) - 0.5));
}

TEST_CASE("Gaussian log_density matches the multivariate normal formula") {
  RandomStream s(8, "test/logdens", 0);
  for (int rep = 0; rep < 30; ++rep) {
    const std::size_t d = 1 + rep % 5;
    const SpdMatrix sigma(random_spd(d, s));
    Vector mu(d);
    Vector y(d);
    for (std::size_t i = 0; i < d; ++i) {
      mu[i] = s.normal();
      y[i] = s.normal();
    }
    // Oracle through the inverse directly rather than the Cholesky solve.
    Vector diff(d);
    for (std::size_t i = 0; i < d; ++i) diff[i] = y[i] - mu[i];
    const Vector w = sigma.inverse() * diff;
    double q = 0.0;
    for (std::size_t i = 0; i < d; ++i) q += diff[i] * w[i];
    double log_det = 0.0;
    for (double e : sigma.eigenvalues()) log_det += std::log(e);
    const double expected = -0.5 * d * std::log(2.0 * kPi) - 0.5 * log_det - 0.5 * q;
    const EllipticalModel model(Family::gaussian, mu, sigma);
    CHECK(std::abs(model.log_density(y) - expected) < 1e-10 * std::max(1.0, std::abs(expected)));
  }
}

TEST_CASE("location_score examples") {
  const EllipticalModel g = EllipticalModel::standard(Family::gaussian, 3);
  const Vector y = {0.3, -1.2, 2.0};
  const Vector s = g.location_score(y);
  for (std::size_t i = 0; i < 3; ++i) CHECK(s[i] == doctest::Approx(y[i]));
  const EllipticalModel c = EllipticalModel::standard(Family::cauchy, 1);
  CHECK(c.location_score(Vector{1.0})[0] == doctest::Approx(1.0));
  for (Family f : {Family::gaussian, Family::cauchy, Family::light_tail100}) {
    const Vector z = EllipticalModel::standard(f, 4).location_score(Vector(4, 0.0));
    for (double v : z) CHECK(v == 0.0);
  }
}

TEST_CASE("location_score matches central finite differences") {
  RandomStream s(9, "test/score", 0);
  int cases = 0;
  for (Family f : {Family::gaussian, Family::cauchy, Family::light_tail100}) {
    for (int rep = 0; rep < 34; ++rep, ++cases) {
      const std::size_t d = 1 + rep % 4;
      const SpdMatrix sigma(random_spd(d, s));
      Vector mu(d);
      for (double& v : mu) v = s.normal();
      const EllipticalModel model(f, mu, sigma);
      Vector y(d);
      // Keep light-tailed points inside the bulk where log f is well scaled.
      do {
        for (std::size_t i = 0; i < d; ++i) y[i] = mu[i] + s.normal();
      } while (f == Family::light_tail100 && mahalanobis_sq(y, mu, sigma) > 1.5);

      const Vector score = model.location_score(y);
      const double h = 1e-6;
      for (std::size_t j = 0; j < d; ++j) {
        Vector up = mu;
        Vector down = mu;
        up[j] += h;
        down[j] -= h;
        const double fd = (EllipticalModel(f, up, sigma).log_density(y) -
                           EllipticalModel(f, down, sigma).log_density(y)) /
                          (2.0 * h);
        CAPTURE(family_name(f));
        CAPTURE(d);
        CHECK(std::abs(fd - score[j]) <= 1e-5 * std::max(1.0, std::abs(score[j])));
      }
    }
  }
  CHECK(cases >= 100);
}

TEST_CASE("Gaussian sampler moments") {
  const EllipticalModel m4 = EllipticalModel::standard(Family::gaussian, 4);
  RandomStream s(10, "test/gauss", 0);
  const Observations x = m4.sample(100000, s);
  for (std::size_t j = 0; j < 4; ++j) {
    double mean = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) mean += x(i, j);
    CHECK(std::abs(mean / x.size()) < 0.02);
  }
  const EllipticalModel m2 = EllipticalModel::standard(Family::gaussian, 2);
  RandomStream s2(10, "test/gauss", 1);
  const Observations y = m2.sample(100000, s2);
  double md = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) md += mahalanobis_sq(y.row(i), m2.location(), m2.scatter());
  CHECK(std::abs(md / y.size() - 2.0) < 0.05);
}

TEST_CASE("E[Md^2] matches the radial-integral oracle") {
  for (Family f : {Family::gaussian, Family::light_tail100}) {
    const DensityGenerator gen(f);
    for (std::size_t d : {1, 2, 4, 10}) {
      const double oracle = gen.radial_integral_quadrature(d, 1) / gen.radial_integral_quadrature(d, 0);
      // Same oracle through k and the sphere factor.
      const double via_k = gen.normalizing_constant(d) * std::pow(kPi, 0.5 * d) /
                           std::tgamma(0.5 * d) * gen.radial_integral_quadrature(d, 1);
      CHECK(rel_err(via_k, oracle) < 1e-9);
      const EllipticalModel model = EllipticalModel::standard(f, d);
      RandomStream s(11, "test/md2", d);
      Vector y(d);
      const Moments m = mc_mean(100000, [&] {
        model.draw(y, s);
        return mahalanobis_sq(y, model.location(), model.scatter());
      });
      CAPTURE(family_name(f));
      CAPTURE(d);
      CHECK(std::abs(m.mean - oracle) < 3.0 * m.se + 1e-12);
    }
  }
}

TEST_CASE("Cauchy sampler has standard Cauchy marginals") {
  const EllipticalModel model = EllipticalModel::standard(Family::cauchy, 4);
  RandomStream s(12, "test/cauchy", 0);
  const std::size_t n = 100000;
  const Observations x = model.sample(n, s);
  for (std::size_t j = 0; j < 4; ++j) {
    std::size_t inside = 0;
    for (std::size_t i = 0; i < n; ++i) inside += std::abs(x(i, j)) < 1.0 ? 1 : 0;
    // P(|C| < 1) = 1/2 for a standard Cauchy variable.
    CHECK(std::abs(double(inside) / n - 0.5) < 3.0 * std::sqrt(0.25 / n));
  }
}

TEST_CASE("samplers are reproducible") {
  for (Family f : {Family::gaussian, Family::cauchy, Family::light_tail100}) {
    const EllipticalModel m = EllipticalModel::standard(f, 3);
    RandomStream a(5, "repro", 9);
    RandomStream b(5, "repro", 9);
    CHECK(m.sample(50, a) == m.sample(50, b));
  }
}

TEST_CASE("mixture sampling") {
  const EllipticalModel base = EllipticalModel::standard(Family::gaussian, 4);
  const Vector shift(4, 5.0);

  SUBCASE("beta = 0 reproduces the base law (KS on the first coordinate)") {
    const MixtureModel mix(0.0, base, shift);
    RandomStream s(13, "test/mix0", 0);
    const std::size_t n = 10000;
    const Observations x = mix.sample(n, s);
    Vector first(n);
    for (std::size_t i = 0; i < n; ++i) first[i] = x(i, 0);
    std::sort(first.begin(), first.end());
    const boost::math::normal_distribution<double> z;
    double ks = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double c = boost::math::cdf(z, first[i]);
      ks = std::max({ks, std::abs(c - double(i) / n), std::abs(c - double(i + 1) / n)});
    }
    CHECK(ks < 1.63 / std::sqrt(double(n)));  // 1% critical value
  }
  SUBCASE("beta = 1 draws only from the shifted component") {
    const MixtureModel mix(1.0, base, shift);
    RandomStream s(13, "test/mix1", 0);
    const Observations x = mix.sample(20000, s);
    double mean = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) mean += x(i, 2);
    CHECK(std::abs(mean / x.size() - 5.0) < 0.05);
  }
  SUBCASE("beta = 0.5 mixture mean") {
    const MixtureModel mix(0.5, base, shift);
    RandomStream s(13, "test/mixhalf", 0);
    const Observations x = mix.sample(100000, s);
    double mean = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) mean += x(i, 0);
    CHECK(std::abs(mean / x.size() - 2.5) < 0.05);
  }
  CHECK_THROWS_AS(MixtureModel(1.5, base, shift), ConfigError);
}

TEST_CASE("marginal quantities: quadrature against closed forms") {
  for (std::size_t d : {2, 3, 4, 10}) {
    const DensityGenerator g(Family::gaussian);
    CHECK(rel_err(g.marginal_density_at_zero_quadrature(d), 1.0 / std::sqrt(2.0 * kPi)) < 1e-9);
    CHECK(rel_err(g.marginal_density_sq_integral_quadrature(d), 0.5 / std::sqrt(kPi)) < 1e-8);
    const DensityGenerator c(Family::cauchy);
    CHECK(rel_err(c.marginal_density_at_zero_quadrature(d), 1.0 / kPi) < 1e-9);
    CHECK(rel_err(c.marginal_density_sq_integral_quadrature(d), 0.5 / kPi) < 1e-8);
  }
}

TEST_CASE("light-tailed marginal density integrates to one") {
  const DensityGenerator g(Family::light_tail100);
  for (std::size_t d : {1, 2, 4}) {
    double total = 0.0;
    const int steps = 4000;
    const double h = 1.2 / steps;
    for (int i = 0; i < steps; ++i) total += 2.0 * h * g.marginal_density((i + 0.5) * h, d);
    CHECK(std::abs(total - 1.0) < 1e-4);
  }
  // d = 1: the marginal is the density itself, k exp(-t^200).
  const double k = g.normalizing_constant(1);
  CHECK(rel_err(g.marginal_density_at_zero(1), k) < 1e-12);
}

TEST_CASE("family names round trip") {
  for (Family f : {Family::gaussian, Family::cauchy, Family::light_tail100})
    CHECK(parse_family(family_name(f)) == f);
  CHECK_THROWS_AS(parse_family("student"), ConfigError);
}
