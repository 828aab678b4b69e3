#include "pcmlead/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <iterator>
#include <map>
#include <set>
#include <thread>
#include <tuple>

#include "pcmlead/stability.hpp"
#include "pcmlead/tie_projection.hpp"

namespace pcmlead {

namespace {

constexpr std::uint64_t kProfileStream = 1;
constexpr std::uint64_t kPerturbationStream = 2;

auto record_key(const TrialRecord& r) {
  return std::make_tuple(r.n, r.profile_id, r.alpha,
                         static_cast<int>(r.algorithm),
                         static_cast<int>(r.strategy));
}

RandomStream profile_stream(const ExperimentConfig& c, int n, int profile_id) {
  return RandomStream(derive_key(
      c.seed, {kProfileStream, static_cast<std::uint64_t>(n),
               static_cast<std::uint64_t>(profile_id)}));
}

RandomStream perturbation_stream(const ExperimentConfig& c, int n,
                                 int profile_id, double alpha) {
  return RandomStream(derive_key(
      c.seed, {kPerturbationStream, static_cast<std::uint64_t>(n),
               static_cast<std::uint64_t>(profile_id),
               std::bit_cast<std::uint64_t>(alpha)}));
}

std::vector<double> alpha_range(int tenths_from, int tenths_to, int step) {
  std::vector<double> grid;
  for (int t = tenths_from; t <= tenths_to; t += step) grid.push_back(t / 10.0);
  return grid;
}

}  // namespace

std::string_view to_string(Strategy s) noexcept {
  return s == Strategy::lbn ? "LBN" : "LBR";
}

std::optional<Strategy> parse_strategy(std::string_view s) noexcept {
  if (s == "LBN" || s == "lbn") return Strategy::lbn;
  if (s == "LBR" || s == "lbr") return Strategy::lbr;
  return std::nullopt;
}

std::string_view to_string(PerturbationLaw law) noexcept {
  return law == PerturbationLaw::log_uniform ? "logUniform" : "uniform";
}

std::optional<PerturbationLaw> parse_perturbation_law(
    std::string_view s) noexcept {
  if (s == "logUniform") return PerturbationLaw::log_uniform;
  if (s == "uniform") return PerturbationLaw::uniform;
  return std::nullopt;
}

ExperimentConfig ExperimentConfig::desk_scale() {
  ExperimentConfig c;
  c.n_range = {5, 6, 7, 8, 9};
  c.profiles_per_n = 50;
  c.alpha_grid = alpha_range(10, 50, 5);
  return c;
}

ExperimentConfig ExperimentConfig::full_scale() {
  ExperimentConfig c;
  c.n_range = {5, 6, 7, 8, 9};
  c.profiles_per_n = 500;
  c.alpha_grid = alpha_range(10, 50, 1);
  return c;
}

void ExperimentConfig::validate() const {
  if (n_range.empty()) throw DomainError("nRange is empty");
  for (int n : n_range) {
    if (n < kMinAlternatives || n > max_alternatives()) {
      throw DomainError("nRange value " + std::to_string(n) +
                        " outside [" + std::to_string(kMinAlternatives) + ", " +
                        std::to_string(max_alternatives()) + "]");
    }
  }
  if (profiles_per_n < 1) throw DomainError("profilesPerN must be >= 1");
  if (alpha_grid.empty()) throw DomainError("alphaGrid is empty");
  for (double a : alpha_grid) {
    if (!(a >= 1.0) || !std::isfinite(a)) {
      throw DomainError("alphaGrid values must be finite and >= 1");
    }
  }
  if (algorithms.empty()) throw DomainError("algorithms is empty");
  if (strategies.empty()) throw DomainError("strategies is empty");
  if (scale_bound_m && !(*scale_bound_m > 0.0)) {
    throw DomainError("scaleBoundM must be positive");
  }
  if (!(ci_bin_width > 0.0)) throw DomainError("ciBinWidth must be positive");
  if (ci_bin_min_count < 0) throw DomainError("ciBinMinCount must be >= 0");
}

double ExperimentConfig::effective_scale_bound() const {
  if (scale_bound_m) return *scale_bound_m;
  const double alpha_max =
      alpha_grid.empty() ? 1.0
                         : *std::max_element(alpha_grid.begin(), alpha_grid.end());
  return std::log(9.0 * alpha_max);
}

std::size_t ExperimentConfig::matrix_count() const {
  return n_range.size() * static_cast<std::size_t>(profiles_per_n) *
         alpha_grid.size();
}

std::size_t ExperimentConfig::run_count() const {
  return matrix_count() * algorithms.size() * strategies.size();
}

PriorityVector random_profile(int n, RandomStream& rng) {
  if (n < kMinAlternatives) {
    throw DomainError("profile needs n >= " + std::to_string(kMinAlternatives));
  }
  const double log9 = std::log(9.0);
  Vector w(n);
  for (int i = 0; i < n; ++i) w(i) = std::exp(rng.uniform(0.0, log9));
  return PriorityVector(std::move(w));
}

MultiplicativePcm random_pcm(const PriorityVector& profile, double alpha,
                             RandomStream& rng, PerturbationLaw law) {
  if (!(alpha >= 1.0)) throw DomainError("alpha must be >= 1");
  const int n = profile.size();
  const double log_alpha = std::log(alpha);
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) {
    m(i, i) = 1.0;
    for (int j = i + 1; j < n; ++j) {
      const double r = law == PerturbationLaw::log_uniform
                           ? std::exp(rng.uniform(-log_alpha, log_alpha))
                           : rng.uniform(1.0 / alpha, alpha);
      m(i, j) = profile[i] / profile[j] * r;
      m(j, i) = 1.0 / m(i, j);
    }
  }
  return MultiplicativePcm(std::move(m));
}

int select_target(const MultiplicativePcm& m, Strategy strategy) {
  if (strategy == Strategy::lbn) return m.n() - 1;
  const PriorityVector w = geometric_ranking(m);
  int worst = 0;
  for (int k = 1; k < w.size(); ++k) {
    if (w[k] < w[worst]) worst = k;
  }
  return worst;
}

MultiplicativePcm trial_matrix(const ExperimentConfig& config, int n,
                               int profile_id, double alpha) {
  auto profile_rng = profile_stream(config, n, profile_id);
  const PriorityVector profile = random_profile(n, profile_rng);
  auto rng = perturbation_stream(config, n, profile_id, alpha);
  return random_pcm(profile, alpha, rng, config.perturbation);
}

std::vector<TrialRecord> run_matrix(const ExperimentConfig& config, int n,
                                    int profile_id, double alpha,
                                    const MultiplicativePcm& m) {
  std::vector<TrialRecord> out;
  const auto basis = orthogonal_tie_basis(n);
  const AdditivePcm a = to_additive(m);

  for (Algorithm algorithm : config.algorithms) {
    for (Strategy strategy : config.strategies) {
      TrialRecord r;
      r.n = n;
      r.alpha = alpha;
      r.profile_id = profile_id;
      r.algorithm = algorithm;
      r.strategy = strategy;
      try {
        const ScaleBound bound(config.effective_scale_bound());
        r.target = select_target(m, strategy);
        r.ci_input = consistency_index(m);
        r.arsi_per_step.push_back(arsi(a, bound));

        const auto result = promote(algorithm, a, r.target, *basis,
                                    PromotionOptions{bound, kWeightTolerance});
        r.iterations = result.trace.iterations();
        for (const auto& step : result.trace.steps) {
          r.frobenius_per_step.push_back(step.frobenius_from_input);
          r.arsi_per_step.push_back(*step.arsi);
        }
        if (!leads(additive_ranking(result.matrix), r.target)) {
          throw InvariantError("target does not lead after promotion");
        }
        r.ci_output = consistency_index(to_multiplicative(result.matrix));
      } catch (const Error& e) {
        r.error = e.what();
        r.ci_output = std::nan("");
      }
      out.push_back(std::move(r));
    }
  }
  return out;
}

std::vector<TrialRecord> run_experiment(const ExperimentConfig& config,
                                        int jobs) {
  config.validate();

  struct Task {
    int n;
    int profile_id;
  };
  std::vector<Task> tasks;
  for (int n : config.n_range) {
    orthogonal_tie_basis(n);  // build outside the workers
    for (int p = 0; p < config.profiles_per_n; ++p) tasks.push_back({n, p});
  }

  std::vector<std::vector<TrialRecord>> slots(tasks.size());
  auto work = [&](const Task& t, std::vector<TrialRecord>& slot) {
    for (double alpha : config.alpha_grid) {
      auto records = run_matrix(config, t.n, t.profile_id, alpha,
                                trial_matrix(config, t.n, t.profile_id, alpha));
      std::move(records.begin(), records.end(), std::back_inserter(slot));
    }
  };

  if (jobs <= 0) jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  jobs = std::min<int>(jobs, static_cast<int>(std::max<std::size_t>(1, tasks.size())));

  if (jobs == 1) {
    for (std::size_t k = 0; k < tasks.size(); ++k) work(tasks[k], slots[k]);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> workers;
    workers.reserve(static_cast<std::size_t>(jobs));
    for (int w = 0; w < jobs; ++w) {
      workers.emplace_back([&] {
        for (std::size_t k = next++; k < tasks.size(); k = next++) {
          work(tasks[k], slots[k]);
        }
      });
    }
  }

  std::vector<TrialRecord> records;
  records.reserve(config.run_count());
  for (auto& slot : slots) {
    std::move(slot.begin(), slot.end(), std::back_inserter(records));
  }
  std::stable_sort(records.begin(), records.end(),
                   [](const TrialRecord& x, const TrialRecord& y) {
                     return record_key(x) < record_key(y);
                   });
  return records;
}

std::vector<TrialRecord> filter_records(std::span<const TrialRecord> records,
                                        Algorithm algorithm,
                                        Strategy strategy) {
  std::vector<TrialRecord> out;
  for (const auto& r : records) {
    if (r.algorithm == algorithm && r.strategy == strategy) out.push_back(r);
  }
  return out;
}

std::vector<IterationsByN> aggregate_iterations_by_n(
    std::span<const TrialRecord> records) {
  std::map<std::tuple<int, int, int>, std::pair<double, std::size_t>> groups;
  for (const auto& r : records) {
    if (!r.ok()) continue;
    auto& g = groups[{r.n, static_cast<int>(r.algorithm),
                      static_cast<int>(r.strategy)}];
    g.first += r.iterations;
    ++g.second;
  }
  std::vector<IterationsByN> out;
  for (const auto& [key, g] : groups) {
    const auto [n, algorithm, strategy] = key;
    out.push_back({n, static_cast<Algorithm>(algorithm),
                   static_cast<Strategy>(strategy),
                   g.first / static_cast<double>(g.second), g.second});
  }
  return out;
}

std::vector<CiBinSummary> bin_by_ci(std::span<const TrialRecord> records,
                                    const ExperimentConfig& config) {
  struct Acc {
    double ci = 0.0;
    double iterations = 0.0;
    std::size_t count = 0;
  };
  std::map<long long, Acc> bins;
  for (const auto& r : records) {
    if (!r.ok()) continue;
    // CI of a reciprocal matrix is >= 0 up to rounding; clamp tiny negatives
    // into the first bin.
    const double ci = std::max(0.0, r.ci_input);
    auto& acc = bins[static_cast<long long>(std::floor(ci / config.ci_bin_width))];
    acc.ci += r.ci_input;
    acc.iterations += r.iterations;
    ++acc.count;
  }
  std::vector<CiBinSummary> out;
  for (const auto& [k, acc] : bins) {
    const double low = static_cast<double>(k) * config.ci_bin_width;
    const double count = static_cast<double>(acc.count);
    out.push_back({low, low + config.ci_bin_width, acc.ci / count,
                   acc.iterations / count, acc.count,
                   acc.count < static_cast<std::size_t>(config.ci_bin_min_count)});
  }
  return out;
}

namespace {

std::vector<SeriesPoint> mean_series(
    std::span<const TrialRecord> records,
    const std::vector<double> TrialRecord::*series, int first_index,
    std::optional<int> n_filter) {
  std::vector<std::pair<double, std::size_t>> acc;
  for (const auto& r : records) {
    if (!r.ok() || (n_filter && r.n != *n_filter)) continue;
    const auto& values = r.*series;
    if (acc.size() < values.size()) acc.resize(values.size());
    for (std::size_t k = 0; k < values.size(); ++k) {
      acc[k].first += values[k];
      ++acc[k].second;
    }
  }
  std::vector<SeriesPoint> out;
  for (std::size_t k = 0; k < acc.size(); ++k) {
    out.push_back({static_cast<int>(k) + first_index,
                   acc[k].first / static_cast<double>(acc[k].second),
                   acc[k].second});
  }
  return out;
}

}  // namespace

std::vector<SeriesPoint> aggregate_arsi_by_iteration(
    std::span<const TrialRecord> records, int n) {
  return mean_series(records, &TrialRecord::arsi_per_step, 0, n);
}

std::vector<SeriesPoint> aggregate_frobenius_by_iteration(
    std::span<const TrialRecord> records) {
  return mean_series(records, &TrialRecord::frobenius_per_step, 1,
                     std::nullopt);
}

std::vector<ArsiByN> aggregate_input_arsi_by_n(
    std::span<const TrialRecord> records) {
  std::set<std::tuple<int, int, double>> seen;
  std::map<int, std::pair<double, std::size_t>> groups;
  for (const auto& r : records) {
    if (r.arsi_per_step.empty()) continue;
    if (!seen.insert({r.n, r.profile_id, r.alpha}).second) continue;
    auto& g = groups[r.n];
    g.first += r.arsi_per_step.front();
    ++g.second;
  }
  std::vector<ArsiByN> out;
  for (const auto& [n, g] : groups) {
    out.push_back({n, g.first / static_cast<double>(g.second), g.second});
  }
  return out;
}

std::vector<CiChangeSummary> summarize_ci_change(
    std::span<const TrialRecord> records) {
  std::map<std::pair<int, int>, std::vector<double>> groups;
  for (const auto& r : records) {
    if (!r.ok()) continue;
    groups[{static_cast<int>(r.algorithm), static_cast<int>(r.strategy)}]
        .push_back(std::abs(r.ci_output - r.ci_input));
  }
  std::vector<CiChangeSummary> out;
  for (auto& [key, values] : groups) {
    std::sort(values.begin(), values.end());
    CiChangeSummary s;
    s.algorithm = static_cast<Algorithm>(key.first);
    s.strategy = static_cast<Strategy>(key.second);
    s.count = values.size();
    double total = 0.0;
    for (double v : values) total += v;
    s.mean_abs = total / static_cast<double>(values.size());
    const std::size_t mid = values.size() / 2;
    s.median_abs = values.size() % 2 ? values[mid]
                                     : (values[mid - 1] + values[mid]) / 2.0;
    s.max_abs = values.back();
    out.push_back(s);
  }
  return out;
}

}  // namespace pcmlead
