#include "unmix/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <iostream>
#include <limits>
#include <sstream>

#include "unmix/matrix_io.hpp"
#include "unmix/solvers.hpp"

namespace unmix::cli {

Beta parse_beta(const std::string& text) {
  if (text == "inf" || text == "Inf" || text == "INF" || text == "infinite") {
    return Beta::infinite();
  }
  std::size_t pos = 0;
  double value;
  try {
    value = std::stod(text, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("--beta: expected a positive number or \"inf\", got \"" + text + "\"");
  }
  if (pos != text.size() || !(value > 0)) {
    throw std::invalid_argument("--beta: expected a positive number or \"inf\", got \"" + text + "\"");
  }
  return Beta(value);
}

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) parts.push_back(item);
  return parts;
}

}  // namespace

std::vector<Beta> parse_beta_list(const std::string& text) {
  std::vector<Beta> out;
  for (const auto& part : split(text, ',')) out.push_back(parse_beta(part));
  if (out.empty()) throw std::invalid_argument("--betas: empty list");
  return out;
}

std::vector<Index> parse_index_list(const std::string& text) {
  std::vector<Index> out;
  for (const auto& part : split(text, ',')) {
    std::size_t pos = 0;
    long long value;
    try {
      value = std::stoll(part, &pos);
    } catch (const std::exception&) {
      throw std::invalid_argument("--support: expected comma-separated indices, got \"" + text + "\"");
    }
    if (pos != part.size() || value < 0) {
      throw std::invalid_argument("--support: expected comma-separated indices, got \"" + text + "\"");
    }
    out.push_back(static_cast<Index>(value));
  }
  if (out.empty()) throw std::invalid_argument("--support: empty list");
  return out;
}

GeometricGrid parse_grid(const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.size() != 3) {
    throw std::invalid_argument("grid: expected base,ratio,count, got \"" + text + "\"");
  }
  GeometricGrid grid;
  try {
    grid.base = std::stod(parts[0]);
    grid.ratio = std::stod(parts[1]);
    grid.count = std::stoi(parts[2]);
  } catch (const std::exception&) {
    throw std::invalid_argument("grid: expected base,ratio,count, got \"" + text + "\"");
  }
  if (!(grid.base > 0) || !(grid.ratio > 0) || grid.count < 1) {
    throw std::invalid_argument("grid: base and ratio must be positive, count >= 1");
  }
  return grid;
}

namespace {

constexpr int kPrintDigits = 12;
constexpr int kEchoDigits = 17;

std::string fmt(double v) { return format_value(v, kPrintDigits); }
std::string echo_num(double v) { return format_value(v, kEchoDigits); }

std::string beta_text(const Beta& beta) {
  return beta.finite() ? echo_num(beta.value()) : "inf";
}

std::string beta_cell(const Beta& beta) {
  return beta.finite() ? CsvWriter::cell(beta.value()) : "inf";
}

std::string betas_text(const std::vector<Beta>& betas) {
  std::string out;
  for (std::size_t i = 0; i < betas.size(); ++i) {
    if (i) out += ',';
    out += beta_text(betas[i]);
  }
  return out;
}

void print_kv(const std::string& key, const std::string& value) {
  std::cout << key << '=' << value << '\n';
}

struct CertifyConfig {
  std::string matrix_path, beta, support;
  double c = 0, d = 0;
  double cond_limit = kGramConditionLimit;
};

int run_certify(const CertifyConfig& cfg) {
  const Beta beta = parse_beta(cfg.beta);
  const std::vector<Index> indices = parse_index_list(cfg.support);
  const Matrix a = read_matrix_file(cfg.matrix_path);
  const IndexSet support(indices, a.cols());
  if (support.size() > a.rows()) {
    throw std::invalid_argument("--support: size exceeds the number of measurements");
  }
  const auto cert = certificate(a, beta, support, cfg.cond_limit);
  print_kv("support", cert.support.to_string());
  print_kv("beta", beta.finite() ? fmt(beta.value()) : "inf");
  print_kv("condition_value", fmt(cert.condition_value));
  print_kv("satisfiable", cert.satisfiable ? "true" : "false");
  print_kv("cd_bound", fmt(cert.cd_bound));
  print_kv("alpha_min_per_d", fmt(cert.alpha_min_per_d));
  print_kv("s_value", fmt(cert.s_value));
  print_kv("sigma_value", fmt(cert.sigma_value));
  if (cfg.c > 0 || cfg.d > 0) {
    if (!(cfg.c > cfg.d && cfg.d > 0)) throw std::invalid_argument("--c/--d: need c > d > 0");
    const auto interval = alpha_interval(cert, cfg.c, cfg.d);
    print_kv("c", fmt(cfg.c));
    print_kv("d", fmt(cfg.d));
    print_kv("alpha_interval_empty", interval.empty ? "true" : "false");
    if (!interval.empty) {
      print_kv("alpha_lo", fmt(interval.lo));
      print_kv("alpha_hi", fmt(interval.hi));
    }
  }
  return cert.satisfiable ? 0 : 1;
}

struct RegionConfig {
  std::string matrix_path, beta;
  Index k = 3;
  std::string theta_samples_path;
  int theta_count = 65;
  bool include_smaller = false;
  double cap = 1e7;
};

int run_region(const RegionConfig& cfg) {
  const Beta beta = parse_beta(cfg.beta);
  const Matrix a = read_matrix_file(cfg.matrix_path);
  RegionOptions opts;
  opts.include_smaller = cfg.include_smaller;
  opts.enumeration_cap = cfg.cap;
  const auto summary = region_summary(a, beta, cfg.k, opts);
  print_kv("beta", beta.finite() ? fmt(beta.value()) : "inf");
  print_kv("k", std::to_string(cfg.k));
  print_kv("r_value", fmt(summary.r_value));
  print_kv("sigma_value", fmt(summary.sigma_value));
  print_kv("theta_min", fmt(summary.theta_min));
  print_kv("worst_support", summary.worst_support.to_string());
  print_kv("failure_fraction", fmt(summary.failure_fraction));
  print_kv("subsets", std::to_string(summary.subsets));

  if (!cfg.theta_samples_path.empty()) {
    std::ostringstream echo;
    echo << "region --matrix " << cfg.matrix_path << " --beta " << beta_text(beta) << " --k "
         << cfg.k << " --theta-count " << cfg.theta_count << " --include-smaller "
         << (cfg.include_smaller ? "true" : "false") << " --cap " << echo_num(cfg.cap);
    CsvWriter csv(cfg.theta_samples_path, echo.str(), {"theta", "theta_max"});
    if (std::isfinite(summary.r_value)) {
      std::vector<double> thetas;
      for (int i = 0; i < cfg.theta_count; ++i) {
        thetas.push_back(summary.r_value *
                         (1.0 + 3.0 * static_cast<double>(i) /
                                    static_cast<double>(std::max(cfg.theta_count - 1, 1))));
      }
      const auto values = theta_max_samples(a, beta, cfg.k, thetas, opts);
      for (std::size_t i = 0; i < thetas.size(); ++i) {
        csv.row({CsvWriter::cell(thetas[i]), CsvWriter::cell(values[i])});
      }
    }
  }
  return 0;
}

struct SolveConfig {
  std::string matrix_path, data_path, beta;
  double alpha = 0;
  std::string mode = "reduced";
  Index outer = 50, inner = 50;
  Index max_iters = 100000;
  double tol = 1e-10;
  double zero_tol = 1e-10;
  std::string out_u = "u.txt", out_v = "v.txt";
};

int run_solve(const SolveConfig& cfg) {
  const Beta beta = parse_beta(cfg.beta);
  const PenaltyParams<double> params(cfg.alpha, beta);
  if (cfg.mode != "reduced" && cfg.mode != "alternating") {
    throw std::invalid_argument("--mode: expected reduced or alternating");
  }
  const Matrix a = read_matrix_file(cfg.matrix_path);
  const Vector y = read_vector_file(cfg.data_path);

  SolveResult<double> res;
  if (cfg.mode == "reduced") {
    res = solve_multi_reduced(a, y, params, cfg.max_iters, cfg.tol);
  } else {
    res = solve_multi_alternating(a, y, params, cfg.outer, cfg.inner, cfg.tol);
  }

  write_vector_file(cfg.out_u, res.u);
  write_vector_file(cfg.out_v, res.v);
  print_kv("mode", cfg.mode);
  print_kv("iterations", std::to_string(res.iterations));
  print_kv("objective", fmt(multi_objective(a, y, cfg.alpha, beta, res.u, res.v)));
  print_kv("optimality_residual", fmt(res.optimality_residual));
  print_kv("support", support(res.u, cfg.zero_tol).to_string());
  return 0;
}

struct McCommonConfig {
  Index m = 0, n = 0, k = 3;
  int matrices = 20;
  std::uint64_t seed = kDefaultMasterSeed;
  double entry_std = 0;  // <= 0: 1/sqrt(m)
  double cap = 1e7;
  bool include_smaller = false;
  std::string out;
};

void append_summary_rows(CsvWriter& csv, const std::string& beta,
                         const std::vector<std::pair<std::string, const StatSummary*>>& stats,
                         std::size_t value_columns,
                         const std::vector<std::string>& labels = {"median", "mean", "std_dev",
                                                                   "minimum", "maximum"}) {
  auto pick = [](const StatSummary& s, const std::string& label) {
    if (label == "median") return s.median;
    if (label == "mean") return s.mean;
    if (label == "std_dev") return s.std_dev;
    if (label == "minimum") return s.minimum;
    return s.maximum;
  };
  for (const auto& label : labels) {
    std::vector<std::string> cells{beta, label};
    for (const auto& [name, summary] : stats) {
      (void)name;
      cells.push_back(summary ? CsvWriter::cell(pick(*summary, label)) : "");
    }
    while (cells.size() < value_columns) cells.push_back("");
    csv.row(cells);
  }
}

struct McConditionsConfig : McCommonConfig {
  std::string betas = "0.1,1,10,inf";
  std::string std_mode = "population";
};

StdMode parse_std_mode(const std::string& text) {
  if (text == "population") return StdMode::Population;
  if (text == "sample") return StdMode::Sample;
  throw std::invalid_argument("--std-mode: expected population or sample");
}

int run_mc_conditions(const McConditionsConfig& cfg) {
  const auto betas = parse_beta_list(cfg.betas);
  EnsembleSpec spec{cfg.m, cfg.n, cfg.matrices, cfg.entry_std, cfg.seed};
  RegionOptions opts;
  opts.include_smaller = cfg.include_smaller;
  opts.enumeration_cap = cfg.cap;
  const auto report =
      condition_failure_study(spec, cfg.k, betas, opts, parse_std_mode(cfg.std_mode));

  std::ostringstream echo;
  echo << "mc-conditions --m " << cfg.m << " --n " << cfg.n << " --k " << cfg.k << " --betas "
       << betas_text(betas) << " --matrices " << cfg.matrices << " --seed " << cfg.seed
       << " --entry-std " << echo_num(spec.resolved_entry_std()) << " --cap " << echo_num(cfg.cap)
       << " --include-smaller " << (cfg.include_smaller ? "true" : "false") << " --std-mode "
       << cfg.std_mode;
  CsvWriter csv(cfg.out, echo.str(), {"beta", "matrix", "failure_fraction"});
  for (std::size_t b = 0; b < betas.size(); ++b) {
    const std::string beta = beta_cell(betas[b]);
    for (std::size_t i = 0; i < report.failure_fractions[b].size(); ++i) {
      csv.row({beta, std::to_string(i), CsvWriter::cell(report.failure_fractions[b][i])});
    }
    append_summary_rows(csv, beta, {{"failure_fraction", &report.summary[b]}}, 3);
  }
  return 0;
}

struct McRegionConfig : McCommonConfig {
  std::string betas = "0.1,0.3,0.5,1,5";
  std::string curves;
  int curve_samples = 65;
};

int run_mc_region(const McRegionConfig& cfg) {
  const auto betas = parse_beta_list(cfg.betas);
  EnsembleSpec spec{cfg.m, cfg.n, cfg.matrices, cfg.entry_std, cfg.seed};
  RegionOptions opts;
  opts.include_smaller = cfg.include_smaller;
  opts.enumeration_cap = cfg.cap;
  const auto report = region_study(spec, cfg.k, betas, opts);

  std::ostringstream echo;
  echo << "mc-region --m " << cfg.m << " --n " << cfg.n << " --k " << cfg.k << " --betas "
       << betas_text(betas) << " --matrices " << cfg.matrices << " --seed " << cfg.seed
       << " --entry-std " << echo_num(spec.resolved_entry_std()) << " --cap " << echo_num(cfg.cap)
       << " --include-smaller " << (cfg.include_smaller ? "true" : "false") << " --curve-samples "
       << cfg.curve_samples;
  CsvWriter csv(cfg.out, echo.str(),
                {"beta", "matrix", "r_value", "sigma_value", "theta_min", "failure_fraction"});
  for (std::size_t b = 0; b < betas.size(); ++b) {
    const std::string beta = beta_cell(betas[b]);
    for (std::size_t i = 0; i < report.rows[b].size(); ++i) {
      const auto& row = report.rows[b][i];
      csv.row({beta, std::to_string(i), CsvWriter::cell(row.r_value),
               CsvWriter::cell(row.sigma_value), CsvWriter::cell(row.theta_min),
               CsvWriter::cell(row.failure_fraction)});
    }
    const StatSummary* r_stats = report.r_summary[b] ? &*report.r_summary[b] : nullptr;
    append_summary_rows(csv, beta, {{"r", r_stats}, {"sigma", &report.sigma_summary[b]}}, 6);
    csv.row({beta, "excluded_infinite_r", std::to_string(report.infinite_r_counts[b]), "", "", ""});
  }

  if (!cfg.curves.empty()) {
    CsvWriter curves(cfg.curves, echo.str(), {"beta", "matrix", "theta", "theta_max"});
    for (std::size_t b = 0; b < betas.size(); ++b) {
      for (std::size_t i = 0; i < report.rows[b].size(); ++i) {
        const double r = report.rows[b][i].r_value;
        if (!std::isfinite(r)) continue;
        std::vector<double> thetas;
        for (int t = 0; t < cfg.curve_samples; ++t) {
          thetas.push_back(r * (1.0 + 3.0 * static_cast<double>(t) /
                                          static_cast<double>(std::max(cfg.curve_samples - 1, 1))));
        }
        const Matrix a = gaussian_matrix(spec, static_cast<int>(i));
        const auto values = theta_max_samples(a, betas[b], cfg.k, thetas, opts);
        for (std::size_t t = 0; t < thetas.size(); ++t) {
          curves.row({beta_cell(betas[b]), std::to_string(i), CsvWriter::cell(thetas[t]),
                      CsvWriter::cell(values[t])});
        }
      }
    }
  }
  return 0;
}

struct McRecoveryConfig {
  int problems = 30;
  Index m = 50, n = 100, k = 7;
  double c = 1.5, d = 0.3, ceiling = 0;
  std::string alpha_grid = "0.0002,1.25,51";
  std::string beta_grid = "0.01,1.15,31";
  std::uint64_t seed = kDefaultMasterSeed;
  double entry_std = 0;
  Index inner = 50, outer = 50;
  std::string select = "ae";
  std::string std_mode = "population";
  std::string noise = "exact";
  bool include_single_beta_column = false;
  double zero_tol = 1e-10;
  std::string out;
};

int run_mc_recovery(const McRecoveryConfig& cfg) {
  const GeometricGrid alpha_grid = parse_grid(cfg.alpha_grid);
  const GeometricGrid beta_grid = parse_grid(cfg.beta_grid);
  std::vector<Beta> betas;
  for (double b : beta_grid.values()) betas.push_back(Beta(b));

  SignalSpec signal{cfg.n, cfg.k, cfg.c, cfg.ceiling, cfg.d};
  EnsembleSpec ensemble{cfg.m, cfg.n, cfg.problems, cfg.entry_std, cfg.seed};
  RecoveryOptions opts;
  opts.inner_iters = cfg.inner;
  opts.outer_iters = cfg.outer;
  opts.zero_tol = cfg.zero_tol;
  opts.include_infinite_beta_in_multi = cfg.include_single_beta_column;
  opts.std_mode = parse_std_mode(cfg.std_mode);
  if (cfg.select == "ae") {
    opts.selection = SelectionRule::AeFirst;
  } else if (cfg.select == "sd") {
    opts.selection = SelectionRule::SdFirst;
  } else {
    throw std::invalid_argument("--select: expected ae or sd");
  }
  if (cfg.noise == "exact") {
    opts.noise = NoiseMode::ExactNorm;
  } else if (cfg.noise == "strict") {
    opts.noise = NoiseMode::StrictlyBelow;
  } else {
    throw std::invalid_argument("--noise: expected exact or strict");
  }

  const auto report = grid_search_recovery(cfg.problems, signal, ensemble, alpha_grid.values(),
                                           betas, opts);

  std::ostringstream echo;
  echo << "mc-recovery --problems " << cfg.problems << " --m " << cfg.m << " --n " << cfg.n
       << " --k " << cfg.k << " --c " << echo_num(cfg.c) << " --d " << echo_num(cfg.d)
       << " --ceiling " << echo_num(signal.resolved_ceiling()) << " --alpha-grid "
       << cfg.alpha_grid << " --beta-grid " << cfg.beta_grid << " --seed " << cfg.seed
       << " --entry-std " << echo_num(ensemble.resolved_entry_std()) << " --inner " << cfg.inner
       << " --outer " << cfg.outer << " --select " << cfg.select << " --std-mode " << cfg.std_mode
       << " --noise " << cfg.noise << " --include-single-beta-column "
       << (cfg.include_single_beta_column ? "true" : "false") << " --zero-tol "
       << echo_num(cfg.zero_tol);
  CsvWriter csv(cfg.out, echo.str(), {"method", "trial", "ae", "sd", "alpha", "beta"});

  auto emit = [&](const std::string& method, const std::vector<TrialRecord>& records,
                  const MethodSummary& summary) {
    for (const auto& r : records) {
      csv.row({method, std::to_string(r.trial_id), CsvWriter::cell(r.ae), std::to_string(r.sd),
               CsvWriter::cell(r.chosen_alpha), beta_cell(r.chosen_beta)});
    }
    const StatSummary* beta_stats = summary.beta ? &*summary.beta : nullptr;
    append_summary_rows(csv, method,
                        {{"ae", &summary.ae}, {"sd", &summary.sd}, {"alpha", &summary.alpha},
                         {"beta", beta_stats}},
                        6);
  };
  emit("single", report.single, report.single_summary);
  emit("multi", report.multi, report.multi_summary);
  return 0;
}

struct GenMatrixConfig {
  Index m = 0, n = 0;
  double entry_std = 0;
  std::uint64_t seed = kDefaultMasterSeed;
  int index = 0;
  std::string out;
};

int run_gen_matrix(const GenMatrixConfig& cfg) {
  EnsembleSpec spec{cfg.m, cfg.n, cfg.index + 1, cfg.entry_std, cfg.seed};
  write_matrix_file(cfg.out, gaussian_matrix(spec, cfg.index));
  return 0;
}

struct GenSignalConfig {
  Index n = 0, k = 0;
  double c = 0, d = 0, ceiling = 0;
  std::string mode = "exact";
  std::uint64_t seed = kDefaultMasterSeed;
  int index = 0;
  std::string support;
  std::string out_u = "u.txt", out_v = "v.txt";
};

int run_gen_signal(const GenSignalConfig& cfg) {
  SignalSpec spec{cfg.n, cfg.k, cfg.c, cfg.ceiling, cfg.d};
  NoiseMode mode;
  if (cfg.mode == "exact") {
    mode = NoiseMode::ExactNorm;
  } else if (cfg.mode == "strict") {
    mode = NoiseMode::StrictlyBelow;
  } else {
    throw std::invalid_argument("--mode: expected exact or strict");
  }
  Rng rng(cfg.seed, stream::kSignal, static_cast<std::uint64_t>(cfg.index));
  std::optional<IndexSet> forced;
  if (!cfg.support.empty()) forced = IndexSet(parse_index_list(cfg.support), cfg.n);
  const auto sample = sample_signal(spec, rng, mode, forced ? &*forced : nullptr);
  write_vector_file(cfg.out_u, sample.u);
  write_vector_file(cfg.out_v, sample.v);
  print_kv("support", sample.support.to_string());
  return 0;
}

void add_common_mc_options(CLI::App* sub, McCommonConfig& cfg) {
  sub->add_option("--m", cfg.m, "measurement count")->required();
  sub->add_option("--n", cfg.n, "signal dimension")->required();
  sub->add_option("--k", cfg.k, "support size");
  sub->add_option("--matrices", cfg.matrices, "ensemble size");
  sub->add_option("--seed", cfg.seed, "master seed");
  sub->add_option("--entry-std", cfg.entry_std, "Gaussian entry std; 0 selects 1/sqrt(m)");
  sub->add_option("--cap", cfg.cap, "enumeration cap");
  sub->add_flag("--include-smaller", cfg.include_smaller, "enumerate supports of size 1..k");
  sub->add_option("--out", cfg.out, "report CSV path")->required();
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"multi-penalty sparse unmixing: solvers, recovery certificates, experiments"};
  app.require_subcommand(1);

  CertifyConfig certify_cfg;
  auto* certify = app.add_subcommand("certify", "support-recovery certificate for one support");
  certify->add_option("--matrix", certify_cfg.matrix_path)->required();
  certify->add_option("--beta", certify_cfg.beta, "positive value or inf")->required();
  certify->add_option("--support", certify_cfg.support, "comma-separated indices")->required();
  certify->add_option("--c", certify_cfg.c, "signal magnitude floor");
  certify->add_option("--d", certify_cfg.d, "noise sup-norm bound");
  certify->add_option("--cond-limit", certify_cfg.cond_limit);

  RegionConfig region_cfg;
  auto* region = app.add_subcommand("region", "worst-case certificate over all size-k supports");
  region->add_option("--matrix", region_cfg.matrix_path)->required();
  region->add_option("--beta", region_cfg.beta)->required();
  region->add_option("--k", region_cfg.k)->required();
  region->add_option("--theta-samples", region_cfg.theta_samples_path, "CSV of the upper boundary");
  region->add_option("--theta-count", region_cfg.theta_count);
  region->add_flag("--include-smaller", region_cfg.include_smaller);
  region->add_option("--cap", region_cfg.cap);

  SolveConfig solve_cfg;
  auto* solve = app.add_subcommand("solve", "solve one unmixing problem");
  solve->add_option("--matrix", solve_cfg.matrix_path)->required();
  solve->add_option("--data", solve_cfg.data_path)->required();
  solve->add_option("--alpha", solve_cfg.alpha)->required();
  solve->add_option("--beta", solve_cfg.beta)->required();
  solve->add_option("--mode", solve_cfg.mode, "reduced or alternating");
  solve->add_option("--outer", solve_cfg.outer);
  solve->add_option("--inner", solve_cfg.inner);
  solve->add_option("--max-iters", solve_cfg.max_iters, "iteration cap for reduced mode");
  solve->add_option("--tol", solve_cfg.tol, "stationarity tolerance");
  solve->add_option("--zero-tol", solve_cfg.zero_tol);
  solve->add_option("--out-u", solve_cfg.out_u);
  solve->add_option("--out-v", solve_cfg.out_v);

  McConditionsConfig conditions_cfg;
  auto* conditions = app.add_subcommand("mc-conditions", "condition-failure statistics");
  add_common_mc_options(conditions, conditions_cfg);
  conditions->add_option("--betas", conditions_cfg.betas, "comma-separated, may include inf");
  conditions->add_option("--std-mode", conditions_cfg.std_mode, "population or sample");

  McRegionConfig region_study_cfg;
  auto* mc_region = app.add_subcommand("mc-region", "R / Sigma statistics and boundary curves");
  add_common_mc_options(mc_region, region_study_cfg);
  mc_region->add_option("--betas", region_study_cfg.betas);
  mc_region->add_option("--curves", region_study_cfg.curves, "upper-boundary sample CSV");
  mc_region->add_option("--curve-samples", region_study_cfg.curve_samples);

  McRecoveryConfig recovery_cfg;
  auto* recovery = app.add_subcommand("mc-recovery", "grid-search solver comparison");
  recovery->add_option("--problems", recovery_cfg.problems);
  recovery->add_option("--m", recovery_cfg.m);
  recovery->add_option("--n", recovery_cfg.n);
  recovery->add_option("--k", recovery_cfg.k);
  recovery->add_option("--c", recovery_cfg.c);
  recovery->add_option("--d", recovery_cfg.d);
  recovery->add_option("--ceiling", recovery_cfg.ceiling, "magnitude ceiling; 0 selects 2c");
  recovery->add_option("--alpha-grid", recovery_cfg.alpha_grid, "base,ratio,count");
  recovery->add_option("--beta-grid", recovery_cfg.beta_grid, "base,ratio,count");
  recovery->add_option("--seed", recovery_cfg.seed);
  recovery->add_option("--entry-std", recovery_cfg.entry_std);
  recovery->add_option("--inner", recovery_cfg.inner);
  recovery->add_option("--outer", recovery_cfg.outer);
  recovery->add_option("--select", recovery_cfg.select, "ae or sd");
  recovery->add_option("--std-mode", recovery_cfg.std_mode);
  recovery->add_option("--noise", recovery_cfg.noise, "exact or strict");
  recovery->add_flag("--include-single-beta-column", recovery_cfg.include_single_beta_column);
  recovery->add_option("--zero-tol", recovery_cfg.zero_tol);
  recovery->add_option("--out", recovery_cfg.out)->required();

  GenMatrixConfig gen_matrix_cfg;
  auto* gen_matrix = app.add_subcommand("gen-matrix", "write a Gaussian matrix in text format");
  gen_matrix->add_option("--m", gen_matrix_cfg.m)->required();
  gen_matrix->add_option("--n", gen_matrix_cfg.n)->required();
  gen_matrix->add_option("--entry-std", gen_matrix_cfg.entry_std);
  gen_matrix->add_option("--seed", gen_matrix_cfg.seed);
  gen_matrix->add_option("--index", gen_matrix_cfg.index, "stream index within the ensemble");
  gen_matrix->add_option("--out", gen_matrix_cfg.out)->required();

  GenSignalConfig gen_signal_cfg;
  auto* gen_signal = app.add_subcommand("gen-signal", "write a sparse signal and noise pair");
  gen_signal->add_option("--n", gen_signal_cfg.n)->required();
  gen_signal->add_option("--k", gen_signal_cfg.k)->required();
  gen_signal->add_option("--c", gen_signal_cfg.c)->required();
  gen_signal->add_option("--d", gen_signal_cfg.d)->required();
  gen_signal->add_option("--ceiling", gen_signal_cfg.ceiling);
  gen_signal->add_option("--mode", gen_signal_cfg.mode, "exact or strict noise norm");
  gen_signal->add_option("--seed", gen_signal_cfg.seed);
  gen_signal->add_option("--index", gen_signal_cfg.index);
  gen_signal->add_option("--support", gen_signal_cfg.support, "force this support");
  gen_signal->add_option("--out-u", gen_signal_cfg.out_u);
  gen_signal->add_option("--out-v", gen_signal_cfg.out_v);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*certify) return run_certify(certify_cfg);
    if (*region) return run_region(region_cfg);
    if (*solve) return run_solve(solve_cfg);
    if (*conditions) return run_mc_conditions(conditions_cfg);
    if (*mc_region) return run_mc_region(region_study_cfg);
    if (*recovery) return run_mc_recovery(recovery_cfg);
    if (*gen_matrix) return run_gen_matrix(gen_matrix_cfg);
    if (*gen_signal) return run_gen_signal(gen_signal_cfg);
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args);
}

}  // namespace unmix::cli
