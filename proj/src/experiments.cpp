#include "unmix/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "unmix/solvers.hpp"

namespace unmix {

double EnsembleSpec::resolved_entry_std() const {
  return entry_std > 0 ? entry_std : 1.0 / std::sqrt(static_cast<double>(rows));
}

Matrix gaussian_matrix(const EnsembleSpec& spec, int index) {
  if (spec.rows < 1 || spec.cols < 1) throw std::invalid_argument("gaussian_matrix: bad dimensions");
  if (index < 0 || index >= spec.matrix_count) {
    throw std::invalid_argument("gaussian_matrix: index out of range");
  }
  Rng rng(spec.master_seed, stream::kMatrix, static_cast<std::uint64_t>(index));
  const double sd = spec.resolved_entry_std();
  Matrix a(spec.rows, spec.cols);
  for (Index i = 0; i < spec.rows; ++i) {
    for (Index j = 0; j < spec.cols; ++j) {
      a(i, j) = rng.normal(0.0, sd);
    }
  }
  return a;
}

double SignalSpec::resolved_ceiling() const {
  return magnitude_ceiling > 0 ? magnitude_ceiling : 2.0 * magnitude_floor;
}

SampledSignal sample_signal(const SignalSpec& spec, Rng& rng, NoiseMode mode,
                            const IndexSet* forced_support) {
  if (spec.sparsity < 1 || spec.sparsity > spec.n) {
    throw std::invalid_argument("sample_signal: sparsity out of range");
  }
  if (!(spec.magnitude_floor > 0) || !(spec.noise_linf > 0)) {
    throw std::invalid_argument("sample_signal: magnitude floor and noise level must be positive");
  }
  const double ceiling = spec.resolved_ceiling();
  if (!(ceiling > spec.magnitude_floor)) {
    throw std::invalid_argument("sample_signal: ceiling must exceed the magnitude floor");
  }

  IndexSet support;
  if (forced_support) {
    if (forced_support->ambient() != spec.n || forced_support->size() != spec.sparsity) {
      throw std::invalid_argument("sample_signal: forced support inconsistent with spec");
    }
    support = *forced_support;
  } else {
    std::vector<Index> idx;
    while (static_cast<Index>(idx.size()) < spec.sparsity) {
      const Index cand = static_cast<Index>(rng.below(static_cast<std::uint64_t>(spec.n)));
      if (std::find(idx.begin(), idx.end(), cand) == idx.end()) idx.push_back(cand);
    }
    support = IndexSet(std::move(idx), spec.n);
  }

  SampledSignal out;
  out.support = support;
  out.u = Vector::Zero(spec.n);
  for (Index i : support.indices()) {
    const double sign = rng.uniform01() < 0.5 ? -1.0 : 1.0;
    const double mag =
        spec.magnitude_floor + (ceiling - spec.magnitude_floor) * rng.uniform01_open_low();
    out.u(i) = sign * mag;
  }

  out.v = Vector(spec.n);
  for (Index i = 0; i < spec.n; ++i) out.v(i) = rng.uniform(-1.0, 1.0);
  Index argmax = 0;
  const double vmax = out.v.cwiseAbs().maxCoeff(&argmax);
  if (vmax == 0.0) {
    out.v(0) = 1.0;  // unreachable in practice
  }
  const double d = spec.noise_linf;
  if (mode == NoiseMode::ExactNorm) {
    out.v *= d / out.v.cwiseAbs().maxCoeff();
    out.v = out.v.cwiseMax(-d).cwiseMin(d);
    out.v(argmax) = out.v(argmax) > 0 ? d : -d;  // pin the max entry to exactly d
  } else {
    const double target = d * 0.99 * rng.uniform01_open_low();
    out.v *= target / out.v.cwiseAbs().maxCoeff();
  }
  return out;
}

ConditionStudyReport condition_failure_study(const std::vector<Matrix>& matrices, Index k,
                                             const std::vector<Beta>& betas,
                                             const RegionOptions& opts, StdMode std_mode) {
  if (matrices.empty() || betas.empty()) {
    throw std::invalid_argument("condition_failure_study: empty input");
  }
  ConditionStudyReport report;
  report.betas = betas;
  for (const Beta& beta : betas) {
    std::vector<double> fractions;
    fractions.reserve(matrices.size());
    for (const Matrix& a : matrices) {
      fractions.push_back(region_summary(a, beta, k, opts).failure_fraction);
    }
    report.summary.push_back(summarize(fractions, std_mode));
    report.failure_fractions.push_back(std::move(fractions));
  }
  return report;
}

namespace {

std::vector<Matrix> draw_ensemble(const EnsembleSpec& spec) {
  std::vector<Matrix> matrices;
  matrices.reserve(static_cast<std::size_t>(spec.matrix_count));
  for (int i = 0; i < spec.matrix_count; ++i) matrices.push_back(gaussian_matrix(spec, i));
  return matrices;
}

}  // namespace

ConditionStudyReport condition_failure_study(const EnsembleSpec& spec, Index k,
                                             const std::vector<Beta>& betas,
                                             const RegionOptions& opts, StdMode std_mode) {
  return condition_failure_study(draw_ensemble(spec), k, betas, opts, std_mode);
}

RegionStudyReport region_study(const std::vector<Matrix>& matrices, Index k,
                               const std::vector<Beta>& betas, const RegionOptions& opts) {
  if (matrices.empty() || betas.empty()) throw std::invalid_argument("region_study: empty input");
  RegionStudyReport report;
  report.betas = betas;
  for (const Beta& beta : betas) {
    std::vector<RegionStudyRow> rows;
    std::vector<double> r_values, sigma_values;
    rows.reserve(matrices.size());
    for (const Matrix& a : matrices) {
      const auto summary = region_summary(a, beta, k, opts);
      rows.push_back({summary.r_value, summary.sigma_value, summary.theta_min,
                      summary.failure_fraction});
      r_values.push_back(summary.r_value);
      sigma_values.push_back(summary.sigma_value);
    }
    const std::size_t infinite =
        static_cast<std::size_t>(std::count_if(r_values.begin(), r_values.end(),
                                               [](double r) { return !std::isfinite(r); }));
    report.infinite_r_counts.push_back(infinite);
    report.r_summary.push_back(infinite == r_values.size()
                                   ? std::nullopt
                                   : std::optional<StatSummary>(summarize(r_values)));
    report.sigma_summary.push_back(summarize(sigma_values));
    report.rows.push_back(std::move(rows));
  }
  return report;
}

RegionStudyReport region_study(const EnsembleSpec& spec, Index k, const std::vector<Beta>& betas,
                               const RegionOptions& opts) {
  return region_study(draw_ensemble(spec), k, betas, opts);
}

std::vector<double> GeometricGrid::values() const {
  if (count < 1) throw std::invalid_argument("GeometricGrid: count must be >= 1");
  if (!(base > 0) || !(ratio > 0)) throw std::invalid_argument("GeometricGrid: base and ratio must be positive");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(count));
  double v = base;
  for (int i = 0; i < count; ++i) {
    out.push_back(v);
    v *= ratio;
  }
  return out;
}

int support_symmetric_difference(const IndexSet& a, const IndexSet& b) {
  const auto& xs = a.indices();
  const auto& ys = b.indices();
  std::size_t i = 0, j = 0;
  int count = 0;
  while (i < xs.size() && j < ys.size()) {
    if (xs[i] == ys[j]) {
      ++i;
      ++j;
    } else if (xs[i] < ys[j]) {
      ++count;
      ++i;
    } else {
      ++count;
      ++j;
    }
  }
  count += static_cast<int>((xs.size() - i) + (ys.size() - j));
  return count;
}

namespace {

struct Candidate {
  double ae;
  int sd;
  double alpha;
  double beta_value;  // +inf encodes the single-penalty column
};

bool better(const Candidate& a, const Candidate& b, SelectionRule rule) {
  auto key = [rule](const Candidate& c) {
    return rule == SelectionRule::AeFirst
               ? std::make_tuple(c.ae, static_cast<double>(c.sd), c.alpha, c.beta_value)
               : std::make_tuple(static_cast<double>(c.sd), c.ae, c.alpha, c.beta_value);
  };
  return key(a) < key(b);
}

StatSummary summarize_field(const std::vector<TrialRecord>& records,
                            double (*field)(const TrialRecord&), StdMode mode) {
  std::vector<double> values;
  values.reserve(records.size());
  for (const auto& r : records) values.push_back(field(r));
  return summarize(values, mode);
}

}  // namespace

GridSearchReport grid_search_recovery(int problem_count, const SignalSpec& signal,
                                      const EnsembleSpec& ensemble,
                                      const std::vector<double>& alpha_grid,
                                      const std::vector<Beta>& beta_grid,
                                      const RecoveryOptions& opts) {
  if (problem_count < 1) throw std::invalid_argument("grid_search_recovery: problem_count < 1");
  if (alpha_grid.empty() || beta_grid.empty()) {
    throw std::invalid_argument("grid_search_recovery: empty parameter grid");
  }
  std::vector<Beta> multi_betas = beta_grid;
  if (opts.include_infinite_beta_in_multi) multi_betas.push_back(Beta::infinite());

  EnsembleSpec matrix_spec = ensemble;
  matrix_spec.matrix_count = problem_count;  // one matrix per problem

  GridSearchReport report;
  const Index budget = opts.outer_iters * opts.inner_iters;

  for (int trial = 0; trial < problem_count; ++trial) {
    const Matrix a = gaussian_matrix(matrix_spec, trial);
    Rng rng(ensemble.master_seed, stream::kSignal, static_cast<std::uint64_t>(trial));
    const SampledSignal truth = sample_signal(signal, rng, opts.noise);
    const Vector y = a * (truth.u + truth.v);

    auto score = [&](const Vector& u, double alpha, double beta_value) {
      Candidate c;
      c.ae = (u - truth.u).norm();
      c.sd = support_symmetric_difference(support(u, opts.zero_tol), truth.support);
      c.alpha = alpha;
      c.beta_value = beta_value;
      return c;
    };

    std::optional<Candidate> best_single;
    for (double alpha : alpha_grid) {
      const auto res = ista_l1(a, y, alpha, budget, 0.0);
      const Candidate c = score(res.u, alpha, std::numeric_limits<double>::infinity());
      if (!best_single || better(c, *best_single, opts.selection)) best_single = c;
    }

    std::optional<Candidate> best_multi;
    for (double alpha : alpha_grid) {
      for (const Beta& beta : multi_betas) {
        const PenaltyParams<double> params(alpha, beta);
        const auto res =
            solve_multi_alternating(a, y, params, opts.outer_iters, opts.inner_iters);
        const Candidate c = score(res.u, alpha, beta.value());
        if (!best_multi || better(c, *best_multi, opts.selection)) best_multi = c;
      }
    }

    report.single.push_back({trial, Method::Single, best_single->alpha, Beta::infinite(),
                             best_single->ae, best_single->sd});
    const Beta chosen_beta = std::isinf(best_multi->beta_value)
                                 ? Beta::infinite()
                                 : Beta(best_multi->beta_value);
    report.multi.push_back(
        {trial, Method::Multi, best_multi->alpha, chosen_beta, best_multi->ae, best_multi->sd});
  }

  auto ae_of = [](const TrialRecord& r) { return r.ae; };
  auto sd_of = [](const TrialRecord& r) { return static_cast<double>(r.sd); };
  auto alpha_of = [](const TrialRecord& r) { return r.chosen_alpha; };
  report.single_summary = {summarize_field(report.single, ae_of, opts.std_mode),
                           summarize_field(report.single, sd_of, opts.std_mode),
                           summarize_field(report.single, alpha_of, opts.std_mode),
                           std::nullopt};
  std::vector<double> beta_values;
  for (const auto& r : report.multi) beta_values.push_back(r.chosen_beta.value());
  const bool any_finite_beta =
      std::any_of(beta_values.begin(), beta_values.end(), [](double b) { return std::isfinite(b); });
  report.multi_summary = {summarize_field(report.multi, ae_of, opts.std_mode),
                          summarize_field(report.multi, sd_of, opts.std_mode),
                          summarize_field(report.multi, alpha_of, opts.std_mode),
                          any_finite_beta ? std::optional<StatSummary>(summarize(beta_values, opts.std_mode))
                                          : std::nullopt};
  return report;
}

}  // namespace unmix
