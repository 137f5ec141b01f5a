// fstest: command-line front end for the forward-search location tests.
//
// Every campaign command requires --seed; results depend only on the
// configuration and the seed, never on FSTEST_THREADS.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fstest/asymptotics.hpp"
#include "fstest/campaigns.hpp"
#include "fstest/error.hpp"
#include "fstest/io.hpp"
#include "fstest/test_engine.hpp"

using namespace fstest;

namespace {

struct Output {
  std::string path;
  std::string format = "csv";
};

void add_output(CLI::App* cmd, Output& out) {
  cmd->add_option("--out", out.path, "Output file (default: stdout)");
  cmd->add_option("--format", out.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
}

void emit_text(const Output& out, const std::string& text) {
  if (out.path.empty()) {
    std::cout << text;
  } else {
    write_file_atomic(out.path, text);
  }
}

void emit_table(const Output& out, const CsvTable& table) {
  emit_text(out, out.format == "json" ? table_to_json(table).dump(2) + "\n" : to_csv(table));
}

std::vector<Family> families_from(const std::string& text) {
  if (text == "all") return kAllFamilies;
  std::vector<Family> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = text.find(',', start);
    out.push_back(parse_family(text.substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

template <class T>
std::vector<T> counts_from(const std::string& text, const char* flag) {
  std::vector<T> out;
  for (double v : parse_number_list(text)) {
    if (v < 1.0 || v != static_cast<double>(static_cast<T>(v)))
      throw ConfigError(std::string(flag) + ": expected positive integers, got '" + text + "'");
    out.push_back(static_cast<T>(v));
  }
  return out;
}

Vector broadcast(const std::vector<double>& values, std::size_t d, const char* flag) {
  if (values.size() == 1) return Vector(d, values[0]);
  if (values.size() != d)
    throw DimensionMismatchError(std::string(flag) + " has " + std::to_string(values.size()) +
                                 " entries, data has dimension " + std::to_string(d));
  return values;
}

const auto kGamma = CLI::Range(0.0, 1.0);
const auto kAlpha = CLI::Range(1e-6, 0.5);

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Forward-search location tests for elliptical families"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  std::string family = "all";
  std::size_t d = 4;
  std::size_t n = 100;
  double gamma = 0.5;
  double alpha = 0.05;
  std::size_t reps = 1000;
  std::size_t mc_samples = 200000;
  std::size_t null_reps = 2000;
  std::string beta_grid = "0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1";
  std::string delta = "0.5,-0.5,5,-5";
  std::string calibration = "empirical";
  std::string d_grid = "2,4,10,20,50,100";
  Output out;

  auto seed_option = [&](CLI::App* cmd) {
    cmd->add_option("--seed", seed, "64-bit master seed")->required();
  };
  auto family_option = [&](CLI::App* cmd, const std::string& def) {
    family = def;
    cmd->add_option("--family", family, "gaussian, cauchy, light100, a comma list or all")
        ->capture_default_str();
  };

  // power-table
  auto* power = app.add_subcommand("power-table", "Rejection rates under mixture alternatives");
  seed_option(power);
  family_option(power, "all");
  power->add_option("--d", d)->check(CLI::PositiveNumber)->capture_default_str();
  power->add_option("--n", n)->check(CLI::PositiveNumber)->capture_default_str();
  power->add_option("--gamma", gamma)->check(kGamma)->capture_default_str();
  power->add_option("--alpha", alpha)->check(kAlpha)->capture_default_str();
  power->add_option("--reps", reps, "Data sets per beta")->check(CLI::PositiveNumber)
      ->capture_default_str();
  power->add_option("--mc-samples", mc_samples, "Weighted chi-squared draws (formula)")
      ->capture_default_str();
  power->add_option("--null-reps", null_reps, "Null data sets (empirical)")->capture_default_str();
  power->add_option("--beta-grid", beta_grid)->capture_default_str();
  power->add_option("--calibration", calibration)
      ->check(CLI::IsMember({"formula", "empirical"}))
      ->capture_default_str();
  add_output(power, out);

  // test
  std::string data_path;
  std::vector<std::string> kinds = {"T1"};
  std::string mu0_text = "0";
  std::string sigma_spec = "identity";
  std::size_t bootstrap = 0;
  std::string null_family = "gaussian";
  auto* test = app.add_subcommand("test", "Test H0: mu = mu0 on a CSV data set");
  seed_option(test);
  test->add_option("--data", data_path, "CSV file, one observation per row")->required();
  test->add_option("--kind", kinds, "T1..T4 (repeatable)")->capture_default_str();
  test->add_option("--mu0", mu0_text, "Comma list or one value for every coordinate")
      ->capture_default_str();
  test->add_option("--sigma", sigma_spec, "identity or a d x d CSV file")->capture_default_str();
  test->add_option("--family", null_family, "Null family for calibration")
      ->capture_default_str();
  test->add_option("--gamma", gamma)->check(kGamma)->capture_default_str();
  test->add_option("--alpha", alpha)->check(kAlpha)->capture_default_str();
  test->add_option("--calibration", calibration)
      ->check(CLI::IsMember({"formula", "empirical"}))
      ->capture_default_str();
  test->add_option("--mc-samples", mc_samples)->capture_default_str();
  test->add_option("--reps", null_reps, "Null data sets (empirical calibration)")
      ->capture_default_str();
  test->add_option("--bootstrap", bootstrap, "Bootstrap resamples (0 = none)")
      ->capture_default_str();
  add_output(test, out);

  // table2
  std::size_t table2_reps = 5000;
  auto* t2 = app.add_subcommand("table2", "Asymptotic power under contiguous alternatives");
  seed_option(t2);
  family_option(t2, "all");
  t2->add_option("--d", d)->check(CLI::PositiveNumber)->capture_default_str();
  t2->add_option("--n", n)->check(CLI::PositiveNumber)->capture_default_str();
  t2->add_option("--gamma", gamma)->check(kGamma)->capture_default_str();
  t2->add_option("--alpha", alpha)->check(kAlpha)->capture_default_str();
  t2->add_option("--reps", table2_reps, "Null data sets for the offsets")->capture_default_str();
  t2->add_option("--mc-samples", mc_samples)->capture_default_str();
  t2->add_option("--delta", delta, "Common delta components, one row each")
      ->capture_default_str();
  add_output(t2, out);

  // table3
  std::string n_values = "10,100";
  auto* t3 = app.add_subcommand("table3", "Finite-sample efficiencies");
  seed_option(t3);
  family_option(t3, "all");
  t3->add_option("--n", n_values, "Comma list of sample sizes")->capture_default_str();
  t3->add_option("--d-grid", d_grid)->capture_default_str();
  t3->add_option("--gamma", gamma)->check(kGamma)->capture_default_str();
  t3->add_option("--reps", reps)->capture_default_str();
  add_output(t3, out);

  // table4
  auto* t4 = app.add_subcommand("table4", "Asymptotic efficiencies (closed forms, 1/d power)");
  family_option(t4, "all");
  t4->add_option("--d-grid", d_grid)->capture_default_str();
  t4->add_option("--gamma", gamma)->check(kGamma)->capture_default_str();
  add_output(t4, out);

  // breakdown
  std::string gammas = "0.3,0.5,0.7";
  std::size_t breakdown_n = 20;
  auto* bd = app.add_subcommand("breakdown", "Empirical breakdown fractions");
  seed_option(bd);
  bd->add_option("--gamma", gammas, "Comma list")->capture_default_str();
  bd->add_option("--n", breakdown_n)->check(CLI::Range(2, 1000000))->capture_default_str();
  bd->add_option("--d", d)->check(CLI::PositiveNumber)->capture_default_str();
  add_output(bd, out);

  // critical-value
  std::string cv_kind = "T1";
  auto* cv = app.add_subcommand("critical-value", "Upper quantile of the limiting null law");
  seed_option(cv);
  cv->add_option("--family", null_family)->capture_default_str();
  cv->add_option("--kind", cv_kind)->capture_default_str();
  cv->add_option("--d", d)->check(CLI::PositiveNumber)->capture_default_str();
  cv->add_option("--gamma", gamma)->check(kGamma)->capture_default_str();
  cv->add_option("--alpha", alpha)->check(kAlpha)->capture_default_str();
  cv->add_option("--mc-samples", mc_samples)->capture_default_str();
  add_output(cv, out);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*power) {
      PowerTableConfig cfg;
      cfg.families = families_from(family);
      cfg.d = d;
      cfg.n = n;
      cfg.gamma = gamma;
      cfg.alpha = alpha;
      cfg.beta_grid = parse_number_list(beta_grid);
      cfg.reps = reps;
      cfg.calibration = parse_calibration(calibration);
      cfg.mc = {mc_samples, null_reps, seed};
      emit_table(out, power_table(cfg));
    } else if (*test) {
      const Dataset ds = read_dataset(data_path);
      const std::size_t dim = ds.data.dim();
      const Vector mu0 = broadcast(parse_number_list(mu0_text), dim, "--mu0");
      const EllipticalModel null_model(parse_family(null_family), mu0,
                                       read_sigma(sigma_spec, dim));
      const McConfig mc{mc_samples, null_reps, seed};
      nlohmann::json reports = nlohmann::json::array();
      for (const auto& k : kinds) {
        const StatisticKind kind = parse_statistic(k);
        TestReport report =
            run_test(kind, ds.data, null_model, gamma, alpha, parse_calibration(calibration), mc);
        if (bootstrap > 0)
          report.p_value = bootstrap_p_value(kind, ds.data, mu0, null_model.scatter(), gamma,
                                             bootstrap, seed);
        reports.push_back(report_to_json(report));
      }
      const nlohmann::json body = reports.size() == 1 ? reports[0] : reports;
      emit_text(out, body.dump(2) + "\n");
    } else if (*t2) {
      Table2Config cfg;
      cfg.families = families_from(family);
      cfg.d = d;
      cfg.components = parse_number_list(delta);
      cfg.alpha = alpha;
      cfg.contiguous = {n, gamma, table2_reps, mc_samples, seed};
      emit_table(out, table2(cfg));
    } else if (*t3) {
      Table3Config cfg;
      cfg.families = families_from(family);
      cfg.n_values = counts_from<std::size_t>(n_values, "--n");
      cfg.d_grid = counts_from<std::size_t>(d_grid, "--d-grid");
      cfg.reps = reps;
      cfg.gamma = gamma;
      cfg.seed = seed;
      emit_table(out, table3(cfg));
    } else if (*t4) {
      Table4Config cfg;
      cfg.families = families_from(family);
      cfg.d_grid = counts_from<std::size_t>(d_grid, "--d-grid");
      cfg.gamma = gamma;
      emit_table(out, table4(cfg));
    } else if (*bd) {
      BreakdownTableConfig cfg;
      cfg.gammas = parse_number_list(gammas);
      for (double g : cfg.gammas)
        if (!(g > 0.0 && g <= 1.0)) throw ConfigError("--gamma values must lie in (0, 1]");
      cfg.n = breakdown_n;
      cfg.d = d;
      cfg.seed = seed;
      emit_table(out, breakdown_table(cfg));
    } else if (*cv) {
      const StatisticKind kind = parse_statistic(cv_kind);
      const Family fam = parse_family(null_family);
      const LimitSpec spec = limit_weights(kind, EllipticalModel::standard(fam, d), gamma);
      const CriticalValue c = critical_value(spec, alpha, mc_samples, seed);
      CsvTable table;
      table.header = {"statistic", "family", "d",           "gamma",     "alpha",
                      "critical_value", "standard_error", "mc_samples", "seed"};
      table.rows.push_back({std::string(statistic_name(kind)), std::string(family_name(fam)),
                            std::to_string(d), format_number(gamma), format_number(alpha),
                            format_number(c.value), format_number(c.standard_error),
                            std::to_string(c.mc_samples), std::to_string(seed)});
      emit_table(out, table);
    }
  } catch (const Error& e) {
    std::cerr << "fstest: error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "fstest: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
