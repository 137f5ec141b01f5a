#pragma once

// Table builders shared by the command-line tool and the acceptance suite.
// Each returns a CsvTable whose layout mirrors the corresponding study.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "fstest/asymptotics.hpp"
#include "fstest/elliptical.hpp"
#include "fstest/io.hpp"
#include "fstest/test_engine.hpp"

namespace fstest {

inline const std::vector<Family> kAllFamilies = {Family::gaussian, Family::cauchy,
                                                 Family::light_tail100};

struct PowerTableConfig {
  std::vector<Family> families = kAllFamilies;
  std::size_t d = 4;
  std::size_t n = 100;
  double gamma = 0.5;
  double alpha = 0.05;
  std::vector<double> beta_grid = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  double shift = 5.0;
  std::size_t reps = 1000;
  Calibration calibration = Calibration::empirical;
  McConfig mc;
};

/// Rows: statistic x family. Columns: statistic, family, then one rejection
/// rate per beta (header is the beta value).
CsvTable power_table(const PowerTableConfig& cfg);

struct Table2Config {
  std::vector<Family> families = kAllFamilies;
  std::size_t d = 4;
  /// Each entry c gives delta = c * (1, ..., 1).
  std::vector<double> components = {0.5, -0.5, 5.0, -5.0};
  double alpha = 0.05;
  ContiguousConfig contiguous;
};

/// Rows: family x delta. Columns: family, delta_norm, delta_component, then
/// T_k and T_k_se for k = 1..4.
CsvTable table2(const Table2Config& cfg);

struct Table3Config {
  std::vector<Family> families = kAllFamilies;
  std::vector<std::size_t> n_values = {10, 100};
  std::vector<std::size_t> d_grid = {2, 4, 10, 20, 50, 100};
  std::size_t reps = 1000;
  double gamma = 0.5;
  std::uint64_t seed = 0;
};

/// Rows: family x n x comparison estimator. Columns: family, n, estimator,
/// then d=<d> and d=<d>_se for every d. Values are
/// (|COV estimator| / |COV forward search|)^{1/d}.
CsvTable table3(const Table3Config& cfg);

struct Table4Config {
  std::vector<Family> families = kAllFamilies;
  std::vector<std::size_t> d_grid = {2, 4, 10, 20, 50, 100};
  double gamma = 0.5;
};

/// Rows: family x comparison estimator. Columns: family, estimator, then
/// d=<d>: asymptotic efficiency raised to 1/d.
CsvTable table4(const Table4Config& cfg);

struct BreakdownTableConfig {
  std::vector<double> gammas = {0.3, 0.5, 0.7};
  std::size_t n = 20;
  std::size_t d = 4;
  std::uint64_t seed = 0;
};

/// Rows: one per gamma. Columns: gamma, n, d, break_fraction, one_minus_gamma,
/// corrupted_at_break.
CsvTable breakdown_table(const BreakdownTableConfig& cfg);

/// Label used for the comparison estimator of an efficiency kind.
std::string_view comparison_estimator_name(EfficiencyKind which);

}  // namespace fstest
