#include "fstest/estimators.hpp"

#include <algorithm>
#include <numeric>
#include <utility>

#include "fstest/error.hpp"

namespace fstest {

namespace {

void require_nonempty(const Observations& data) {
  if (data.empty() || data.dim() == 0) throw EmptyDataError("estimator: empty data");
}

}  // namespace

std::string_view estimator_name(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::forward_search:
      return "forward_search";
    case EstimatorKind::mean:
      return "mean";
    case EstimatorKind::cw_median:
      return "cw_median";
    case EstimatorKind::hodges_lehmann:
      return "hodges_lehmann";
  }
  return "unknown";
}

Estimate forward_search(const Observations& data, const ForwardSearchConfig& cfg) {
  require_nonempty(data);
  const std::size_t n = data.size();
  const std::size_t d = data.dim();
  if (cfg.mu0.size() != d || cfg.sigma.dim() != d)
    throw DimensionMismatchError("forward_search: data, mu0 and sigma dimensions differ");
  const std::size_t m = trimmed_count(n, cfg.gamma);

  std::vector<std::pair<double, std::size_t>> order(n);
  Vector diff(d);
  for (std::size_t i = 0; i < n; ++i) {
    const auto y = data.row(i);
    for (std::size_t j = 0; j < d; ++j) diff[j] = y[j] - cfg.mu0[j];
    order[i] = {cfg.sigma.inverse_quadratic_form(diff), i};
  }
  // Lexicographic (distance, index) makes the selection deterministic under ties.
  if (m < n) std::nth_element(order.begin(), order.begin() + static_cast<long>(m), order.end());

  std::vector<char> kept(n, 0);
  for (std::size_t r = 0; r < m; ++r) kept[order[r].second] = 1;

  Vector sum(d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (!kept[i]) continue;
    const auto y = data.row(i);
    for (std::size_t j = 0; j < d; ++j) sum[j] += y[j];
  }
  for (double& s : sum) s /= static_cast<double>(m);
  return {std::move(sum), EstimatorKind::forward_search, cfg.gamma, m};
}

Estimate sample_mean(const Observations& data) {
  require_nonempty(data);
  const std::size_t d = data.dim();
  Vector sum(d, 0.0);
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto y = data.row(i);
    for (std::size_t j = 0; j < d; ++j) sum[j] += y[j];
  }
  for (double& s : sum) s /= static_cast<double>(data.size());
  return {std::move(sum), EstimatorKind::mean, 1.0, data.size()};
}

Estimate cw_median(const Observations& data) {
  require_nonempty(data);
  const std::size_t n = data.size();
  Vector value(data.dim());
  Vector column(n);
  for (std::size_t j = 0; j < data.dim(); ++j) {
    for (std::size_t i = 0; i < n; ++i) column[i] = data(i, j);
    value[j] = median_inplace(column);
  }
  return {std::move(value), EstimatorKind::cw_median, 1.0, n};
}

Estimate hodges_lehmann(const Observations& data) {
  require_nonempty(data);
  const std::size_t n = data.size();
  Vector value(data.dim());
  Vector walsh(n * (n + 1) / 2);
  for (std::size_t j = 0; j < data.dim(); ++j) {
    std::size_t w = 0;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a; b < n; ++b) walsh[w++] = 0.5 * (data(a, j) + data(b, j));
    value[j] = median_inplace(walsh);
  }
  return {std::move(value), EstimatorKind::hodges_lehmann, 1.0, n};
}

Estimate estimate(EstimatorKind kind, const Observations& data, const ForwardSearchConfig& cfg) {
  switch (kind) {
    case EstimatorKind::forward_search:
      return forward_search(data, cfg);
    case EstimatorKind::mean:
      return sample_mean(data);
    case EstimatorKind::cw_median:
      return cw_median(data);
    case EstimatorKind::hodges_lehmann:
      return hodges_lehmann(data);
  }
  throw ConfigError("unknown estimator kind");
}

}  // namespace fstest
