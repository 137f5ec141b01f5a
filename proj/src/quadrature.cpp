#include "fstest/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace fstest {

namespace {

using Rule = boost::math::quadrature::gauss_kronrod<double, 31>;

constexpr int kMaxDepth = 30;

struct Panel {
  double value;
  double error;
};

// One 31-point Kronrod panel with its embedded 15-point Gauss error. The rule
// is applied on [-1, 1] (max_depth 0) and rescaled here, so the error refers
// to the same interval as the value.
Panel panel(const std::function<double(double)>& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double err = 0.0;
  const double v = Rule::integrate([&](double x) { return f(mid + half * x); }, -1.0, 1.0, 0,
                                   0.0, &err);
  return {half * v, std::abs(half) * err};
}

struct Budget {
  long panels = 200000;
};

double adapt(const std::function<double(double)>& f, double a, double b, const Panel& whole,
             double abs_tol, int depth, double& error_sum, Budget& budget) {
  if (whole.error <= abs_tol || depth >= kMaxDepth || budget.panels <= 0 ||
      !std::isfinite(whole.value)) {
    error_sum += whole.error;
    return whole.value;
  }
  budget.panels -= 2;
  const double mid = 0.5 * (a + b);
  const Panel left = panel(f, a, mid);
  const Panel right = panel(f, mid, b);
  return adapt(f, a, mid, left, 0.5 * abs_tol, depth + 1, error_sum, budget) +
         adapt(f, mid, b, right, 0.5 * abs_tol, depth + 1, error_sum, budget);
}

// A finite-interval view of f on [a, b]; [a, inf) maps to [0, 1) through
// x = a + t / (1 - t).
struct Mapped {
  std::function<double(double)> g;
  double lo;
  double hi;
};

Mapped map_interval(const std::function<double(double)>& f, double a, double b) {
  if (!std::isinf(b)) return {f, a, b};
  return {[&f, a](double t) {
            const double s = 1.0 - t;
            return f(a + t / s) / (s * s);
          },
          0.0, 1.0};
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol,
                 double* error_estimate) {
  const double bp[] = {a, b};
  return integrate_piecewise(f, bp, rel_tol, error_estimate);
}

double integrate_piecewise(const std::function<double(double)>& f,
                           std::span<const double> breakpoints, double rel_tol,
                           double* error_estimate) {
  const double tol = std::max(rel_tol, kMinRelTol);
  std::vector<Mapped> pieces;
  std::vector<Panel> first;
  double scale = 0.0;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    if (breakpoints[i] == breakpoints[i + 1]) continue;
    pieces.push_back(map_interval(f, breakpoints[i], breakpoints[i + 1]));
    first.push_back(panel(pieces.back().g, pieces.back().lo, pieces.back().hi));
    scale += std::abs(first.back().value);
  }
  // One absolute tolerance for the whole integral, shared across pieces, so
  // negligible tail pieces are not refined to their own relative precision.
  const double abs_tol =
      std::max(tol * scale, std::numeric_limits<double>::min()) / std::max<double>(1, pieces.size());
  double total = 0.0;
  double error_sum = 0.0;
  Budget budget;
  for (std::size_t i = 0; i < pieces.size(); ++i)
    total += adapt(pieces[i].g, pieces[i].lo, pieces[i].hi, first[i], abs_tol, 0, error_sum, budget);
  if (error_estimate) *error_estimate = error_sum;
  return total;
}

}  // namespace fstest
