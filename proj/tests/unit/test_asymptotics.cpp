#include <cmath>
#include <cstdio>
#include <numbers>

#include <boost/math/special_functions/gamma.hpp>

#include "doctest.h"
#include "fstest/asymptotics.hpp"
#include "fstest/error.hpp"

using namespace fstest;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr EfficiencyKind kAllEff[] = {EfficiencyKind::e1, EfficiencyKind::e2, EfficiencyKind::e3};

}  // namespace

TEST_CASE("closed-form efficiency examples") {
  CHECK(efficiency(Family::gaussian, EfficiencyKind::e2, 2, 0.5) == doctest::Approx(0.125).epsilon(1e-14));
  CHECK(efficiency(Family::gaussian, EfficiencyKind::e1, 4, 0.5) ==
        doctest::Approx(0.5 / std::pow(2.0 * kPi, 2.0)).epsilon(1e-14));
  CHECK(efficiency(Family::gaussian, EfficiencyKind::e1, 4, 0.5) == doctest::Approx(0.012665).epsilon(1e-4));
  for (std::size_t d : {1, 2, 5, 30}) CHECK(std::isinf(efficiency(Family::cauchy, EfficiencyKind::e1, d, 0.5)));
  CHECK_THROWS_AS(efficiency(Family::gaussian, EfficiencyKind::e1, 0, 0.5), ConfigError);
  CHECK_THROWS_AS(efficiency(Family::gaussian, EfficiencyKind::e1, 2, 0.0), ConfigError);
}

TEST_CASE("Gaussian closed forms agree with the quadrature route") {
  const DensityGenerator g(Family::gaussian);
  for (std::size_t d : {2, 4, 10})
    for (double gamma : {0.3, 0.5, 1.0})
      for (auto which : kAllEff) {
        CAPTURE(d);
        CAPTURE(gamma);
        const double closed = efficiency(Family::gaussian, which, d, gamma);
        const double quad = efficiency_quadrature(g, which, d, gamma);
        CHECK(std::abs(quad / closed - 1.0) < 1e-8);
      }
}

TEST_CASE("Cauchy e2 and e3 closed forms agree with the quadrature route") {
  const DensityGenerator g(Family::cauchy);
  for (std::size_t d : {2, 4, 10})
    for (auto which : {EfficiencyKind::e2, EfficiencyKind::e3}) {
      CAPTURE(d);
      // c1 diverges for Cauchy, so the quadrature ratio must refuse.
      CHECK_THROWS_AS(efficiency_quadrature(g, which, d, 0.5), DivergentIntegralError);
    }
}

TEST_CASE("light-tail quadrature ingredients") {
  // g = exp(-x^100) is close to the uniform law on the unit ball.
  const DensityGenerator g(Family::light_tail100);
  for (std::size_t d : {2, 4, 10}) {
    const double dd = static_cast<double>(d);
    CHECK(g.radial_integral_quadrature(d, 0) ==
          doctest::Approx(std::tgamma(dd / 200.0) / 100.0).epsilon(1e-9));
    CHECK(g.radial_integral_quadrature(d, 1) ==
          doctest::Approx(std::tgamma((dd + 2.0) / 200.0) / 100.0).epsilon(1e-9));
    CHECK(g.coordinate_variance(d) == doctest::Approx(1.0 / (dd + 2.0)).epsilon(0.01));
  }
  CHECK(g.marginal_density_at_zero(2) == doctest::Approx(2.0 / kPi).epsilon(0.01));
}

TEST_CASE("light-tail printed e1 and e2 differ from the defining ratio by a known factor") {
  // The printed e1 equals 1 / c1, i.e. the ratio with Var(Y1) replaced by 1,
  // and the printed e2 uses sigma3^2 = Gamma(1/200)^2 / 40000 for every d.
  // Both are kept as printed; these checks pin the discrepancy exactly.
  const DensityGenerator g(Family::light_tail100);
  const double printed_sigma3_sq = std::pow(std::tgamma(1.0 / 200.0), 2.0) / 40000.0;
  for (std::size_t d : {2, 4, 10}) {
    CAPTURE(d);
    const double p1 = efficiency(Family::light_tail100, EfficiencyKind::e1, d, 0.5);
    const double q1 = efficiency_quadrature(g, EfficiencyKind::e1, d, 0.5);
    CHECK(q1 / (p1 * g.coordinate_variance(d)) == doctest::Approx(1.0).epsilon(1e-8));
    const double p2 = efficiency(Family::light_tail100, EfficiencyKind::e2, d, 0.5);
    const double q2 = efficiency_quadrature(g, EfficiencyKind::e2, d, 0.5);
    const double g10 = g.marginal_density_at_zero(d);
    const double sigma3_sq = 1.0 / (4.0 * g10 * g10);
    CHECK(p2 / q2 == doctest::Approx(printed_sigma3_sq / sigma3_sq).epsilon(1e-8));
    MESSAGE("light100 d=" << d << " e1 printed/quadrature=" << p1 / q1
                          << " e2 printed/quadrature=" << p2 / q2);
  }
}

TEST_CASE("light-tail e3 printed constant versus quadrature") {
  // The printed constant is kept; the independent value is only reported.
  const DensityGenerator g(Family::light_tail100);
  for (std::size_t d : {2, 4}) {
    const double closed = efficiency(Family::light_tail100, EfficiencyKind::e3, d, 0.5);
    const double quad = efficiency_quadrature(g, EfficiencyKind::e3, d, 0.5);
    MESSAGE("light100 e3 d=" << d << " printed=" << closed << " quadrature=" << quad
                             << " relative deviation=" << quad / closed - 1.0);
    CHECK(std::isfinite(quad));
    CHECK(quad > 0.0);
  }
}

TEST_CASE("efficiency table takes the d-th root") {
  const std::size_t grid[] = {2, 4};
  const EfficiencyTable t = efficiency_table4(Family::gaussian, grid, 0.5);
  CHECK(t.values[0][0] == doctest::Approx(std::sqrt(0.5 / (2.0 * kPi))));
  CHECK(t.values[0][0] == doctest::Approx(0.28).epsilon(0.01));
  CHECK(t.values[1][1] == doctest::Approx(std::pow(0.5 / (8.0 * kPi), 0.25)));
  CHECK(t.values[1][1] == doctest::Approx(0.38).epsilon(0.015));
  CHECK(t.values[2][0] == doctest::Approx(std::sqrt(0.5 / 6.0)));
  const EfficiencyTable c = efficiency_table4(Family::cauchy, grid, 0.5);
  CHECK(std::isinf(c.values[0][0]));
}

TEST_CASE("limits in high dimension") {
  CHECK(efficiency(Family::gaussian, EfficiencyKind::e1, 40, 0.5) < 1e-6);
  for (auto which : kAllEff) {
    const LimitBehavior b = limit_behavior_check(Family::gaussian, which, 40);
    CHECK(b.expects_zero);
    CHECK(b.limit_confirmed);
    CHECK(b.monotone_tail);
  }
  for (auto which : {EfficiencyKind::e2, EfficiencyKind::e3}) {
    const LimitBehavior b = limit_behavior_check(Family::cauchy, which, 60);
    CHECK_FALSE(b.expects_zero);
    CHECK(b.limit_confirmed);
    CHECK(b.monotone_tail);
  }
  for (auto which : kAllEff) {
    const LimitBehavior b = limit_behavior_check(Family::light_tail100, which, 100);
    CHECK(b.limit_confirmed);
    CHECK(b.monotone_tail);
  }
  CHECK_THROWS_AS(limit_behavior_check(Family::gaussian, EfficiencyKind::e1, 9), ConfigError);
}

TEST_CASE("Cauchy e2 ratio grows like sqrt(d)") {
  // e2(d+1)/e2(d) = (d+1)/d * Gamma(d/2+1)/Gamma(d/2+1/2) / sqrt(pi) ~ sqrt(d/(2 pi)).
  for (std::size_t d : {50, 100}) {
    const double ratio = efficiency(Family::cauchy, EfficiencyKind::e2, d + 1, 0.5) /
                         efficiency(Family::cauchy, EfficiencyKind::e2, d, 0.5);
    const double dd = static_cast<double>(d);
    const double oracle =
        (dd + 1.0) / dd * boost::math::tgamma_ratio(dd / 2.0 + 1.0, dd / 2.0 + 0.5) / std::sqrt(kPi);
    CHECK(ratio == doctest::Approx(oracle).epsilon(1e-10));
    CHECK(ratio / std::sqrt(dd / (2.0 * kPi)) == doctest::Approx(1.0).epsilon(0.03));
  }
}

TEST_CASE("offsets") {
  const ScoreCrossMoments m(Family::gaussian, 3, 100, 0.5, 2000, 41);
  const Vector zero(3, 0.0);
  for (auto k : kAllStatistics)
    for (double a : m.offsets(k, zero).values) CHECK(a == 0.0);

  const Vector e1 = {1.0, 0.0, 0.0};
  for (auto k : kAllStatistics) {
    const auto off = m.offsets(k, e1);
    for (std::size_t i = 1; i < 3; ++i) CHECK(std::abs(off.values[i]) < 3.0 * off.standard_errors[i]);
  }
  const Vector delta = {0.5, -1.0, 2.0};
  const auto mean_off = m.offsets(StatisticKind::t2, delta);
  for (std::size_t i = 0; i < 3; ++i)
    CHECK(std::abs(mean_off.values[i] - delta[i]) < 3.0 * mean_off.standard_errors[i]);

  // Linear in delta.
  const Vector twice = {1.0, -2.0, 4.0};
  const auto a1 = m.offsets(StatisticKind::t1, delta);
  const auto a2 = m.offsets(StatisticKind::t1, twice);
  for (std::size_t i = 0; i < 3; ++i) CHECK(a2.values[i] == doctest::Approx(2.0 * a1.values[i]));

  ContiguousSpec spec;
  spec.delta = delta;
  CHECK_THROWS_AS(estimate_offsets(spec, StatisticKind::t1, 999, 1), ConfigError);
}

TEST_CASE("mean estimator covariance is the identity for the Gaussian") {
  const ScoreCrossMoments m(Family::gaussian, 2, 100, 0.5, 4000, 42);
  const Matrix c = m.estimate_covariance(StatisticKind::t2);
  // Var of a sample variance from 4000 normal draws: sqrt(2/4000) ~ 0.022.
  CHECK(std::abs(c(0, 0) - 1.0) < 0.1);
  CHECK(std::abs(c(1, 1) - 1.0) < 0.1);
  CHECK(std::abs(c(0, 1)) < 0.07);
}

TEST_CASE("contiguous power") {
  const ScoreCrossMoments m(Family::gaussian, 4, 100, 0.5, 1000, 43);
  const Vector zero(4, 0.0);
  for (auto k : kAllStatistics) {
    const ContiguousPower p = contiguous_power(k, m, zero, 0.05, 200000, 5);
    CHECK(std::abs(p.power - 0.05) < 4.0 * std::sqrt(0.05 * 0.95 / 200000.0) + 1e-12);
  }
  const Vector plus(4, 0.5);
  const Vector minus(4, -0.5);
  for (auto k : kAllStatistics) {
    const ContiguousPower p = contiguous_power(k, m, plus, 0.05, 200000, 5);
    const ContiguousPower q = contiguous_power(k, m, minus, 0.05, 200000, 5);
    // a(-delta) = -a(delta), and the law of (Z + a)^2 is symmetric in a.
    CHECK(std::abs(p.power - q.power) < 3.0 * std::hypot(p.standard_error, q.standard_error));
  }
  for (auto k : kAllStatistics) {
    double previous = 0.0;
    for (double c : {0.0, 0.5, 1.0, 2.0}) {
      const Vector delta(4, c);
      const ContiguousPower p = contiguous_power(k, m, delta, 0.05, 200000, 5);
      CHECK(p.power >= previous - 2.0 * p.standard_error);
      previous = p.power;
    }
  }
}

TEST_CASE("contiguous power under Cauchy") {
  const ScoreCrossMoments m(Family::cauchy, 4, 100, 0.5, 1000, 44);
  const Vector delta(4, 2.5);
  const ContiguousPower t2 = contiguous_power(StatisticKind::t2, m, delta, 0.05, 200000, 5);
  CHECK(t2.power == 0.0);
  CHECK(t2.weight_source == WeightSource::zero_by_rule);
  const ContiguousPower t1 = contiguous_power(StatisticKind::t1, m, delta, 0.05, 200000, 5);
  CHECK(t1.weight_source == WeightSource::empirical_covariance);
  CHECK(t1.power > 0.05);
  const ContiguousPower t3 = contiguous_power(StatisticKind::t3, m, delta, 0.05, 200000, 5);
  CHECK(t3.weight_source == WeightSource::formula);
}

TEST_CASE("information diagnostic is finite for the shipped families") {
  for (Family f : {Family::gaussian, Family::cauchy, Family::light_tail100}) {
    const InformationDiagnostic info = information_diagnostic(EllipticalModel::standard(f, 3), 2000, 7);
    CHECK(info.finite);
    for (std::size_t i = 0; i < 3; ++i) CHECK(info.information(i, i) > 0.0);
  }
  // Gaussian information is the identity.
  const InformationDiagnostic g =
      information_diagnostic(EllipticalModel::standard(Family::gaussian, 2), 2000, 8);
  CHECK(g.information(0, 0) == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(std::abs(g.information(0, 1)) < 1e-4);
}
