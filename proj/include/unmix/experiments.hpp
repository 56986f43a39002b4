#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "unmix/certificates.hpp"
#include "unmix/rng.hpp"
#include "unmix/stats.hpp"
#include "unmix/types.hpp"

namespace unmix {

/// Fixed default so bare invocations are reproducible.
inline constexpr std::uint64_t kDefaultMasterSeed = 42;

/// Stream purposes for counter-based seed derivation; trial results are
/// independent of execution order.
namespace stream {
inline constexpr std::uint64_t kMatrix = 1;
inline constexpr std::uint64_t kSignal = 2;
}  // namespace stream

struct EnsembleSpec {
  Index rows = 0;
  Index cols = 0;
  int matrix_count = 1;
  double entry_std = 0;  ///< per-entry std; <= 0 selects 1/sqrt(rows)
  std::uint64_t master_seed = kDefaultMasterSeed;

  double resolved_entry_std() const;
};

/// i.i.d. zero-mean Gaussian matrix drawn from the stream (master_seed, index).
Matrix gaussian_matrix(const EnsembleSpec& spec, int index);

struct SignalSpec {
  Index n = 0;
  Index sparsity = 0;            ///< k
  double magnitude_floor = 0;    ///< c: nonzero entries exceed this
  double magnitude_ceiling = 0;  ///< <= 0 selects 2c
  double noise_linf = 0;         ///< d

  double resolved_ceiling() const;
};

enum class NoiseMode {
  ExactNorm,     ///< |v|_inf == d (solver-comparison mode)
  StrictlyBelow  ///< |v|_inf < d (certificate mode)
};

struct SampledSignal {
  Vector u;
  Vector v;
  IndexSet support;
};

/// Draws (u, v): support of size k (uniform among size-k sets unless forced),
/// entries with random sign and magnitude uniform in (c, ceiling], noise
/// uniform on [-1,1] rescaled per NoiseMode.
SampledSignal sample_signal(const SignalSpec& spec, Rng& rng, NoiseMode mode,
                            const IndexSet* forced_support = nullptr);

struct ConditionStudyReport {
  std::vector<Beta> betas;
  std::vector<std::vector<double>> failure_fractions;  ///< [beta][matrix]
  std::vector<StatSummary> summary;                    ///< per beta, across matrices
};

ConditionStudyReport condition_failure_study(const std::vector<Matrix>& matrices, Index k,
                                             const std::vector<Beta>& betas,
                                             const RegionOptions& opts = {},
                                             StdMode std_mode = StdMode::Population);
ConditionStudyReport condition_failure_study(const EnsembleSpec& spec, Index k,
                                             const std::vector<Beta>& betas,
                                             const RegionOptions& opts = {},
                                             StdMode std_mode = StdMode::Population);

struct RegionStudyRow {
  double r_value;
  double sigma_value;
  double theta_min;
  double failure_fraction;
};

struct RegionStudyReport {
  std::vector<Beta> betas;
  std::vector<std::vector<RegionStudyRow>> rows;     ///< [beta][matrix]
  std::vector<std::optional<StatSummary>> r_summary; ///< finite R only; empty if none
  std::vector<StatSummary> sigma_summary;
  std::vector<std::size_t> infinite_r_counts;        ///< per beta
};

RegionStudyReport region_study(const std::vector<Matrix>& matrices, Index k,
                               const std::vector<Beta>& betas, const RegionOptions& opts = {});
RegionStudyReport region_study(const EnsembleSpec& spec, Index k,
                               const std::vector<Beta>& betas, const RegionOptions& opts = {});

/// Geometric grid base * ratio^i, i = 0..count-1.
struct GeometricGrid {
  double base = 0;
  double ratio = 1;
  int count = 0;
  std::vector<double> values() const;
};

enum class Method { Single, Multi };
enum class SelectionRule { AeFirst, SdFirst };

struct TrialRecord {
  int trial_id;
  Method method;
  double chosen_alpha;
  Beta chosen_beta;  ///< infinite for single-penalty records
  double ae;         ///< |u - u_true|_2
  int sd;            ///< #(supp(u) symmetric-difference supp(u_true))
};

struct MethodSummary {
  StatSummary ae;
  StatSummary sd;
  StatSummary alpha;
  std::optional<StatSummary> beta;  ///< multi-penalty only
};

struct RecoveryOptions {
  Index inner_iters = 50;
  Index outer_iters = 50;
  SelectionRule selection = SelectionRule::AeFirst;
  bool include_infinite_beta_in_multi = false;  ///< multi grid strictly contains the single grid
  double zero_tol = 1e-10;
  NoiseMode noise = NoiseMode::ExactNorm;
  StdMode std_mode = StdMode::Population;
};

struct GridSearchReport {
  std::vector<TrialRecord> single;
  std::vector<TrialRecord> multi;
  MethodSummary single_summary;
  MethodSummary multi_summary;
};

/// Per problem, solves the full (alpha, beta) grid with the alternating
/// scheme and the alpha grid with plain iterative thresholding, keeps each
/// method's best solution, and aggregates the per-problem bests.
GridSearchReport grid_search_recovery(int problem_count, const SignalSpec& signal,
                                      const EnsembleSpec& ensemble,
                                      const std::vector<double>& alpha_grid,
                                      const std::vector<Beta>& beta_grid,
                                      const RecoveryOptions& opts = {});

int support_symmetric_difference(const IndexSet& a, const IndexSet& b);

}  // namespace unmix
