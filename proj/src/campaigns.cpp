#include "fstest/campaigns.hpp"

#include <cmath>
#include <string>

#include "fstest/robustness.hpp"

namespace fstest {

namespace {

constexpr EfficiencyKind kEfficiencyKinds[] = {EfficiencyKind::e1, EfficiencyKind::e2,
                                               EfficiencyKind::e3};
constexpr EstimatorKind kComparisons[] = {EstimatorKind::mean, EstimatorKind::cw_median,
                                          EstimatorKind::hodges_lehmann};

std::string count_text(std::size_t v) { return std::to_string(v); }

}  // namespace

std::string_view comparison_estimator_name(EfficiencyKind which) {
  switch (which) {
    case EfficiencyKind::e1:
      return estimator_name(EstimatorKind::mean);
    case EfficiencyKind::e2:
      return estimator_name(EstimatorKind::cw_median);
    case EfficiencyKind::e3:
      return estimator_name(EstimatorKind::hodges_lehmann);
  }
  return "unknown";
}

CsvTable power_table(const PowerTableConfig& cfg) {
  CsvTable table;
  table.header = {"statistic", "family"};
  for (double b : cfg.beta_grid) table.header.push_back(format_number(b));

  std::vector<PowerCurve> curves;
  for (Family family : cfg.families) {
    PowerCurveConfig pc;
    pc.family = family;
    pc.d = cfg.d;
    pc.n = cfg.n;
    pc.gamma = cfg.gamma;
    pc.alpha = cfg.alpha;
    pc.beta_grid = cfg.beta_grid;
    pc.shift = cfg.shift;
    pc.reps = cfg.reps;
    pc.calibration = cfg.calibration;
    pc.mc = cfg.mc;
    curves.push_back(power_curve(kAllStatistics, pc));
  }
  for (auto kind : kAllStatistics) {
    for (std::size_t f = 0; f < cfg.families.size(); ++f) {
      std::vector<std::string> row = {std::string(statistic_name(kind)),
                                      std::string(family_name(cfg.families[f]))};
      for (double p : curves[f].power[statistic_index(kind)]) row.push_back(format_number(p));
      table.rows.push_back(std::move(row));
    }
  }
  return table;
}

CsvTable table2(const Table2Config& cfg) {
  CsvTable table;
  table.header = {"family", "delta_norm", "delta_component"};
  for (auto kind : kAllStatistics) {
    table.header.emplace_back(statistic_name(kind));
    table.header.push_back(std::string(statistic_name(kind)) + "_se");
  }
  const auto& cc = cfg.contiguous;
  for (Family family : cfg.families) {
    const ScoreCrossMoments moments(family, cfg.d, cc.n, cc.gamma, cc.reps, cc.seed);
    for (double c : cfg.components) {
      const Vector delta(cfg.d, c);
      std::vector<std::string> row = {
          std::string(family_name(family)),
          format_number(std::abs(c) * std::sqrt(static_cast<double>(cfg.d))), format_number(c)};
      for (auto kind : kAllStatistics) {
        const ContiguousPower p =
            contiguous_power(kind, moments, delta, cfg.alpha, cc.mc_samples, cc.seed);
        row.push_back(format_number(p.power));
        row.push_back(format_number(p.standard_error));
      }
      table.rows.push_back(std::move(row));
    }
  }
  return table;
}

CsvTable table3(const Table3Config& cfg) {
  CsvTable table;
  table.header = {"family", "n", "estimator"};
  for (std::size_t d : cfg.d_grid) {
    table.header.push_back("d=" + count_text(d));
    table.header.push_back("d=" + count_text(d) + "_se");
  }
  for (Family family : cfg.families) {
    for (std::size_t n : cfg.n_values) {
      for (EstimatorKind other : kComparisons) {
        std::vector<std::string> row = {std::string(family_name(family)), count_text(n),
                                        std::string(estimator_name(other))};
        for (std::size_t d : cfg.d_grid) {
          const EfficiencyResult r = finite_sample_efficiency(
              other, EstimatorKind::forward_search, family, n, d, cfg.reps, cfg.gamma, cfg.seed);
          row.push_back(format_number(r.value));
          row.push_back(format_number(r.standard_error));
        }
        table.rows.push_back(std::move(row));
      }
    }
  }
  return table;
}

CsvTable table4(const Table4Config& cfg) {
  CsvTable table;
  table.header = {"family", "estimator"};
  for (std::size_t d : cfg.d_grid) table.header.push_back("d=" + count_text(d));
  for (Family family : cfg.families) {
    const EfficiencyTable t = efficiency_table4(family, cfg.d_grid, cfg.gamma);
    for (std::size_t w = 0; w < 3; ++w) {
      std::vector<std::string> row = {std::string(family_name(family)),
                                      std::string(comparison_estimator_name(kEfficiencyKinds[w]))};
      for (double v : t.values[w]) row.push_back(format_number(v));
      table.rows.push_back(std::move(row));
    }
  }
  return table;
}

CsvTable breakdown_table(const BreakdownTableConfig& cfg) {
  CsvTable table;
  table.header = {"gamma", "n", "d", "break_fraction", "one_minus_gamma", "corrupted_at_break"};
  for (double gamma : cfg.gammas) {
    const BreakdownResult r = breakdown_experiment(gamma, cfg.n, cfg.d, cfg.seed);
    const double at_break = r.contamination_fraction_at_break * static_cast<double>(cfg.n);
    table.rows.push_back({format_number(gamma), count_text(cfg.n), count_text(cfg.d),
                          format_number(r.contamination_fraction_at_break),
                          format_number(1.0 - gamma), format_number(std::round(at_break))});
  }
  return table;
}

}  // namespace fstest
