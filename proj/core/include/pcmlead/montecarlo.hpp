#pragma once

// Monte Carlo study of leader promotion on random inconsistent matrices.
//
// For every size n and profile id a weight profile is drawn; for every alpha
// on the grid a perturbed ratio matrix C_alpha is built from it; every
// (algorithm, strategy) pair is then run on that matrix and one TrialRecord
// is kept. Records come back sorted by (n, profile, alpha, algorithm,
// strategy) and are bit-identical for a given config whatever the number of
// worker threads.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pcmlead/leader.hpp"
#include "pcmlead/pcm.hpp"
#include "pcmlead/random.hpp"

namespace pcmlead {

enum class Strategy {
  lbn,  ///< last by numbering: promote alternative n
  lbr,  ///< last by ranking: promote the geometric-mean loser
};

std::string_view to_string(Strategy s) noexcept;
std::optional<Strategy> parse_strategy(std::string_view s) noexcept;

/// Law of the multiplicative noise r_ij on [1/alpha, alpha].
enum class PerturbationLaw { log_uniform, uniform };

std::string_view to_string(PerturbationLaw law) noexcept;
std::optional<PerturbationLaw> parse_perturbation_law(std::string_view s) noexcept;

struct ExperimentConfig {
  std::vector<int> n_range;
  int profiles_per_n = 50;
  std::vector<double> alpha_grid;
  std::uint64_t seed = 42;
  std::vector<Algorithm> algorithms{Algorithm::greedy, Algorithm::bubble};
  std::vector<Strategy> strategies{Strategy::lbn, Strategy::lbr};
  /// Bound M used for ARSI. Unset means ln(9 * max alpha), the largest
  /// |entry| the generator can produce.
  std::optional<double> scale_bound_m;
  double ci_bin_width = 0.01;
  int ci_bin_min_count = 30;
  PerturbationLaw perturbation = PerturbationLaw::log_uniform;

  /// n = 5..9, 50 profiles per n, alpha = 1.0, 1.5, ..., 5.0.
  static ExperimentConfig desk_scale();
  /// n = 5..9, 500 profiles per n, alpha = 1.0, 1.1, ..., 5.0.
  static ExperimentConfig full_scale();

  /// Throws DomainError when an invariant does not hold.
  void validate() const;

  double effective_scale_bound() const;
  std::size_t matrix_count() const;
  std::size_t run_count() const;
};

struct TrialRecord {
  int n = 0;
  double alpha = 1.0;
  int profile_id = 0;
  Algorithm algorithm = Algorithm::greedy;
  Strategy strategy = Strategy::lbn;
  int target = 0;  ///< 0-based
  int iterations = 0;
  double ci_input = 0.0;
  double ci_output = 0.0;
  /// Distance from the input after each step; size == iterations.
  std::vector<double> frobenius_per_step;
  /// ARSI of the input followed by each step; size == iterations + 1.
  std::vector<double> arsi_per_step;
  /// Empty for a successful trial; otherwise the failure message.
  std::string error;

  bool ok() const noexcept { return error.empty(); }
};

/// Weights log-uniform on [1, 9], so every ratio lies in [1/9, 9].
PriorityVector random_profile(int n, RandomStream& rng);

/// m_ij = (w_i / w_j) * r_ij for i < j, m_ji = 1 / m_ij, with r_ij drawn on
/// [1/alpha, alpha] by `law`. alpha == 1 gives the consistent matrix.
MultiplicativePcm random_pcm(const PriorityVector& profile, double alpha,
                             RandomStream& rng,
                             PerturbationLaw law = PerturbationLaw::log_uniform);

/// 0-based target index for a strategy.
int select_target(const MultiplicativePcm& m, Strategy strategy);

/// Runs a single matrix through every configured (algorithm, strategy).
std::vector<TrialRecord> run_matrix(const ExperimentConfig& config, int n,
                                    int profile_id, double alpha,
                                    const MultiplicativePcm& m);

/// The random matrix the harness uses for (n, profile_id, alpha).
MultiplicativePcm trial_matrix(const ExperimentConfig& config, int n,
                               int profile_id, double alpha);

/// jobs <= 0 selects std::thread::hardware_concurrency().
std::vector<TrialRecord> run_experiment(const ExperimentConfig& config,
                                        int jobs = 1);

std::vector<TrialRecord> filter_records(std::span<const TrialRecord> records,
                                        Algorithm algorithm, Strategy strategy);

struct IterationsByN {
  int n = 0;
  Algorithm algorithm = Algorithm::greedy;
  Strategy strategy = Strategy::lbn;
  double mean_iterations = 0.0;
  std::size_t count = 0;
};

/// Mean iterations per (n, algorithm, strategy); failed trials are skipped.
std::vector<IterationsByN> aggregate_iterations_by_n(
    std::span<const TrialRecord> records);

struct CiBinSummary {
  double bin_low = 0.0;
  double bin_high = 0.0;
  double mean_ci = 0.0;
  double mean_iterations = 0.0;
  std::size_t count = 0;
  bool low_confidence = false;  ///< count < ci_bin_min_count
};

/// Half-open bins [k w, (k+1) w) over ci_input; only non-empty bins are
/// returned, in ascending order.
std::vector<CiBinSummary> bin_by_ci(std::span<const TrialRecord> records,
                                    const ExperimentConfig& config);

struct SeriesPoint {
  int iteration = 0;
  double mean = 0.0;
  std::size_t count = 0;
};

/// Mean ARSI at each iteration index (0 = unmodified input) over records of
/// size n.
std::vector<SeriesPoint> aggregate_arsi_by_iteration(
    std::span<const TrialRecord> records, int n);

/// Mean distance from the input after iteration 1, 2, ...
std::vector<SeriesPoint> aggregate_frobenius_by_iteration(
    std::span<const TrialRecord> records);

struct ArsiByN {
  int n = 0;
  double mean_arsi = 0.0;
  std::size_t count = 0;
};

/// Mean ARSI of the generated (unmodified) matrices per n; every matrix is
/// counted once even though several records share it.
std::vector<ArsiByN> aggregate_input_arsi_by_n(
    std::span<const TrialRecord> records);

struct CiChangeSummary {
  Algorithm algorithm = Algorithm::greedy;
  Strategy strategy = Strategy::lbn;
  std::size_t count = 0;
  double mean_abs = 0.0;
  double median_abs = 0.0;
  double max_abs = 0.0;
};

/// Distribution of |ci_output - ci_input| per (algorithm, strategy).
std::vector<CiChangeSummary> summarize_ci_change(
    std::span<const TrialRecord> records);

}  // namespace pcmlead
