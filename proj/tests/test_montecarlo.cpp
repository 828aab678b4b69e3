#include <algorithm>
#include <cmath>
#include <filesystem>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "pcmlead/experiment_io.hpp"
#include "pcmlead/montecarlo.hpp"

using namespace pcmlead;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig c = ExperimentConfig::desk_scale();
  c.n_range = {4, 6};
  c.profiles_per_n = 6;
  c.alpha_grid = {1.0, 2.0, 4.0};
  c.seed = 5;
  return c;
}

TrialRecord record(int n, double alpha, int pid, Algorithm alg, Strategy s, int it,
                   double ci) {
  TrialRecord r;
  r.n = n;
  r.alpha = alpha;
  r.profile_id = pid;
  r.algorithm = alg;
  r.strategy = s;
  r.iterations = it;
  r.ci_input = ci;
  r.ci_output = ci;
  return r;
}

bool same(const TrialRecord& a, const TrialRecord& b) {
  return a.n == b.n && a.alpha == b.alpha && a.profile_id == b.profile_id &&
         a.algorithm == b.algorithm && a.strategy == b.strategy && a.target == b.target &&
         a.iterations == b.iterations && a.ci_input == b.ci_input &&
         (a.ci_output == b.ci_output || (std::isnan(a.ci_output) && std::isnan(b.ci_output))) &&
         a.frobenius_per_step == b.frobenius_per_step &&
         a.arsi_per_step == b.arsi_per_step && a.error == b.error;
}

}  // namespace

TEST_CASE("random streams are keyed, not shared") {
  CHECK(derive_key(1, {2, 3}) != derive_key(1, {3, 2}));
  CHECK(derive_key(1, {2, 3}) == derive_key(1, {2, 3}));
  RandomStream a(derive_key(42, {1})), b(derive_key(42, {1}));
  for (int k = 0; k < 100; ++k) {
    double u = a.uniform01();
    CHECK(u == b.uniform01());
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("profiles are log-uniform on [1, 9]") {
  RandomStream rng(derive_key(3, {}));
  std::vector<double> logs;
  for (int t = 0; t < 400; ++t) {
    PriorityVector w = random_profile(5, rng);
    CHECK(w.weights().maxCoeff() / w.weights().minCoeff() <= 9.0);
    for (int i = 0; i < 5; ++i) logs.push_back(std::log(w[i]) / std::log(9.0));
  }
  double d = oracle::ks_statistic(logs, [](double x) { return std::clamp(x, 0.0, 1.0); });
  // 1% critical value
  CHECK(d < 1.63 / std::sqrt(static_cast<double>(logs.size())));
}

TEST_CASE("perturbed matrices") {
  RandomStream rng(derive_key(8, {}));
  PriorityVector w = random_profile(6, rng);
  MultiplicativePcm c1 = random_pcm(w, 1.0, rng);
  CHECK(std::abs(consistency_index(c1)) < 1e-12);
  for (PerturbationLaw law : {PerturbationLaw::log_uniform, PerturbationLaw::uniform}) {
    MultiplicativePcm c = random_pcm(w, 3.0, rng, law);
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) {
        double r = c(i, j) / (w[i] / w[j]);
        CHECK(r >= 1.0 / 3.0 - 1e-12);
        CHECK(r <= 3.0 + 1e-12);
        CHECK(c(i, j) * c(j, i) == doctest::Approx(1.0).epsilon(1e-14));
      }
  }
  CHECK_THROWS_AS(random_pcm(w, 0.5, rng), DomainError);
}

TEST_CASE("mean CI grows with alpha") {
  ExperimentConfig c = small_config();
  double prev = -1.0;
  for (double alpha : {1.0, 1.5, 2.0, 3.0, 5.0}) {
    double s = 0.0;
    for (int pid = 0; pid < 40; ++pid) s += consistency_index(trial_matrix(c, 6, pid, alpha));
    CHECK(s / 40 > prev);
    prev = s / 40;
  }
}

TEST_CASE("target selection") {
  MultiplicativePcm m = consistent_from_weights(std::vector<double>{3.0, 0.5, 2.0, 1.0});
  CHECK(select_target(m, Strategy::lbn) == 3);
  CHECK(select_target(m, Strategy::lbr) == 1);
  CHECK(parse_strategy("LBN") == Strategy::lbn);
  CHECK(parse_strategy("LBR") == Strategy::lbr);
  CHECK(to_string(Strategy::lbr) == "LBR");
}

TEST_CASE("combinatorial counts") {
  ExperimentConfig p = ExperimentConfig::full_scale();
  CHECK(p.alpha_grid.size() == 41);
  CHECK(p.matrix_count() == 102500);
  CHECK(p.run_count() == 410000);
  ExperimentConfig d = ExperimentConfig::desk_scale();
  CHECK(d.alpha_grid.size() == 9);
  CHECK(d.matrix_count() == 2250);
  CHECK(d.effective_scale_bound() == doctest::Approx(std::log(45.0)));
}

TEST_CASE("experiment is deterministic and independent of thread count") {
  ExperimentConfig c = small_config();
  auto one = run_experiment(c, 1);
  auto three = run_experiment(c, 3);
  REQUIRE(one.size() == c.run_count());
  REQUIRE(three.size() == one.size());
  for (std::size_t k = 0; k < one.size(); ++k) CHECK(same(one[k], three[k]));

  c.seed = 6;
  auto other = run_experiment(c, 1);
  bool differs = false;
  for (std::size_t k = 0; k < one.size(); ++k) differs |= !same(one[k], other[k]);
  CHECK(differs);
}

TEST_CASE("records match a direct recomputation") {
  ExperimentConfig c = small_config();
  auto records = run_experiment(c, 1);
  const ScaleBound bound(c.effective_scale_bound());
  for (const TrialRecord& r : records) {
    REQUIRE(r.ok());
    CHECK(r.arsi_per_step.size() == static_cast<std::size_t>(r.iterations) + 1);
    CHECK(r.frobenius_per_step.size() == static_cast<std::size_t>(r.iterations));
    MultiplicativePcm m = trial_matrix(c, r.n, r.profile_id, r.alpha);
    AdditivePcm a = to_additive(m);
    CHECK(r.target == select_target(m, r.strategy));
    CHECK(r.ci_input == consistency_index(m));
    CHECK(r.arsi_per_step[0] == doctest::Approx(oracle::arsi(a.entries(), bound.value())));
    PromotionResult p = promote(r.algorithm, a, r.target, *orthogonal_tie_basis(r.n));
    REQUIRE(p.trace.iterations() == r.iterations);
    for (int k = 0; k < r.iterations; ++k) {
      const AdditivePcm& ak = p.trace.steps[static_cast<std::size_t>(k)].matrix_after;
      CHECK(r.frobenius_per_step[static_cast<std::size_t>(k)] ==
            doctest::Approx((ak.entries() - a.entries()).norm()));
    }
  }
}

TEST_CASE("iterations by n") {
  std::vector<TrialRecord> rs{
      record(5, 1, 0, Algorithm::greedy, Strategy::lbn, 2, 0.0),
      record(5, 1, 1, Algorithm::greedy, Strategy::lbn, 3, 0.0),
      record(6, 1, 0, Algorithm::greedy, Strategy::lbn, 4, 0.0),
      record(5, 1, 0, Algorithm::bubble, Strategy::lbn, 4, 0.0),
  };
  rs.push_back(record(6, 1, 1, Algorithm::greedy, Strategy::lbn, 99, 0.0));
  rs.back().error = "failed";
  auto agg = aggregate_iterations_by_n(rs);
  REQUIRE(agg.size() == 3);
  CHECK(agg[0].n == 5);
  CHECK(agg[0].algorithm == Algorithm::greedy);
  CHECK(agg[0].mean_iterations == doctest::Approx(2.5));
  CHECK(agg[0].count == 2);
  CHECK(agg[1].algorithm == Algorithm::bubble);
  CHECK(agg[2].n == 6);
  CHECK(agg[2].mean_iterations == doctest::Approx(4.0));
  CHECK(agg[2].count == 1);
}

TEST_CASE("ci bins are half-open") {
  ExperimentConfig c = small_config();
  c.ci_bin_width = 0.01;
  c.ci_bin_min_count = 2;
  std::vector<TrialRecord> rs{
      record(5, 1, 0, Algorithm::greedy, Strategy::lbn, 1, 0.0),
      record(5, 1, 1, Algorithm::greedy, Strategy::lbn, 3, 0.0099),
      record(5, 1, 2, Algorithm::greedy, Strategy::lbn, 2, 0.01),
      record(5, 1, 3, Algorithm::greedy, Strategy::lbn, 2, 0.035),
  };
  auto bins = bin_by_ci(rs, c);
  REQUIRE(bins.size() == 3);
  CHECK(bins[0].bin_low == doctest::Approx(0.0));
  CHECK(bins[0].count == 2);
  CHECK(bins[0].mean_iterations == doctest::Approx(2.0));
  CHECK_FALSE(bins[0].low_confidence);
  CHECK(bins[1].bin_low == doctest::Approx(0.01));
  CHECK(bins[1].count == 1);
  CHECK(bins[1].low_confidence);
  CHECK(bins[2].bin_low == doctest::Approx(0.03));
  CHECK(bins[2].bin_high == doctest::Approx(0.04));
}

TEST_CASE("per-iteration series") {
  auto a = record(5, 1, 0, Algorithm::greedy, Strategy::lbn, 2, 0.1);
  a.frobenius_per_step = {1.0, 3.0};
  a.arsi_per_step = {0.5, 0.3, 0.1};
  auto b = record(5, 2, 0, Algorithm::greedy, Strategy::lbn, 1, 0.2);
  b.frobenius_per_step = {2.0};
  b.arsi_per_step = {0.4, 0.2};
  auto c = record(6, 2, 0, Algorithm::greedy, Strategy::lbn, 1, 0.2);
  c.frobenius_per_step = {5.0};
  c.arsi_per_step = {0.9, 0.8};
  auto d = b;
  d.strategy = Strategy::lbr;  // same matrix as b
  std::vector<TrialRecord> rs{a, b, c, d};

  auto fro = aggregate_frobenius_by_iteration(std::vector<TrialRecord>{a, b});
  REQUIRE(fro.size() == 2);
  CHECK(fro[0].iteration == 1);
  CHECK(fro[0].mean == doctest::Approx(1.5));
  CHECK(fro[1].mean == doctest::Approx(3.0));
  CHECK(fro[1].count == 1);

  auto ar = aggregate_arsi_by_iteration(std::vector<TrialRecord>{a, b, c}, 5);
  REQUIRE(ar.size() == 3);
  CHECK(ar[0].iteration == 0);
  CHECK(ar[0].mean == doctest::Approx(0.45));
  CHECK(ar[2].mean == doctest::Approx(0.1));

  auto by_n = aggregate_input_arsi_by_n(rs);
  REQUIRE(by_n.size() == 2);
  CHECK(by_n[0].count == 2);
  CHECK(by_n[0].mean_arsi == doctest::Approx(0.45));
  CHECK(by_n[1].mean_arsi == doctest::Approx(0.9));
}

TEST_CASE("ci change summary") {
  auto a = record(5, 1, 0, Algorithm::greedy, Strategy::lbn, 1, 0.1);
  a.ci_output = 0.3;
  auto b = record(5, 1, 1, Algorithm::greedy, Strategy::lbn, 1, 0.1);
  b.ci_output = 0.05;
  auto c = record(5, 1, 2, Algorithm::greedy, Strategy::lbn, 1, 0.1);
  c.ci_output = 0.2;
  auto s = summarize_ci_change(std::vector<TrialRecord>{a, b, c});
  REQUIRE(s.size() == 1);
  CHECK(s[0].count == 3);
  CHECK(s[0].mean_abs == doctest::Approx((0.2 + 0.05 + 0.1) / 3));
  CHECK(s[0].median_abs == doctest::Approx(0.1));
  CHECK(s[0].max_abs == doctest::Approx(0.2));
}

TEST_CASE("config json") {
  ExperimentConfig c = parse_experiment_config(
      R"({"nRange":[5,7],"profilesPerN":3,"alphaGrid":[1,2],"seed":9,)"
      R"("algorithms":["bubble"],"strategies":["LBR"],"scaleBoundM":4.0,)"
      R"("perturbation":"uniform"})");
  CHECK(c.n_range == std::vector<int>{5, 7});
  CHECK(c.profiles_per_n == 3);
  CHECK(c.seed == 9);
  CHECK(c.algorithms == std::vector<Algorithm>{Algorithm::bubble});
  CHECK(c.strategies == std::vector<Strategy>{Strategy::lbr});
  CHECK(c.scale_bound_m == 4.0);
  CHECK(c.perturbation == PerturbationLaw::uniform);

  ExperimentConfig back = parse_experiment_config(experiment_config_to_json(c));
  CHECK(back.n_range == c.n_range);
  CHECK(back.alpha_grid == c.alpha_grid);
  CHECK(back.scale_bound_m == c.scale_bound_m);

  CHECK(parse_experiment_config("{}").n_range == ExperimentConfig::desk_scale().n_range);
  CHECK_THROWS_AS(parse_experiment_config(R"({"bogus":1})"), ParseError);
  CHECK_THROWS_AS(parse_experiment_config(R"({"nRange":[2]})"), ParseError);
  CHECK_THROWS_AS(parse_experiment_config(R"({"alphaGrid":[0.5]})"), ParseError);
  CHECK_THROWS_AS(parse_experiment_config(R"({"seed":"x"})"), ParseError);
  CHECK_THROWS_AS(parse_experiment_config("[1,2"), ParseError);
}

TEST_CASE("trial files round-trip") {
  ExperimentConfig c = small_config();
  auto records = run_experiment(c, 1);
  records[1].error = "synthetic, with \"quotes\"";
  records[1].ci_output = std::nan("");
  auto dir = std::filesystem::temp_directory_path() / "pcmlead_mc_roundtrip";
  std::filesystem::remove_all(dir);
  write_trial_files(dir, records);
  write_aggregate_files(dir, records, c);
  auto back = read_trial_files(dir);
  REQUIRE(back.size() == records.size());
  for (std::size_t k = 0; k < back.size(); ++k) CHECK(same(back[k], records[k]));

  std::ostringstream header;
  write_records_csv(header, {});
  CHECK(header.str() ==
        "n,alpha,profile_id,algorithm,strategy,target,iterations,ci_input,ci_output\n");
  for (const char* f : {"fig1_iterations_by_n.csv", "fig2_ci_bins.csv", "fig3_frobenius.csv",
                        "fig4_arsi_by_n.csv", "fig5_arsi_by_iter.csv", "ci_change.csv",
                        "failures.csv"})
    CHECK(std::filesystem::exists(dir / f));
  std::filesystem::remove_all(dir);
}
