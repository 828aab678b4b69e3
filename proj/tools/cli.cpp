#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "pcmlead/experiment_io.hpp"
#include "pcmlead/leader.hpp"
#include "pcmlead/matrix_io.hpp"
#include "pcmlead/montecarlo.hpp"
#include "pcmlead/pcm.hpp"
#include "pcmlead/stability.hpp"
#include "pcmlead/tie_projection.hpp"

namespace pcmlead::cli {

namespace fs = std::filesystem;

namespace {

struct Options {
  std::string input;
  std::string output;
  std::string direction;
  std::string emit = "add";
  std::string algorithm = "greedy";
  std::string config;
  std::string preset;
  std::string trace_dir;
  std::string strategy;
  std::vector<int> pair;
  std::optional<int> target;
  std::optional<double> nudge;
  std::optional<double> scale_bound;
  std::optional<std::uint64_t> seed;
  int jobs = 0;
  bool dry_run = false;
};

MatrixKind emit_kind(const std::string& emit) {
  return emit == "mul" ? MatrixKind::multiplicative : MatrixKind::additive;
}

void emit_matrix(const Options& o, const AdditivePcm& a, std::ostream& out) {
  const MatrixKind kind = emit_kind(o.emit);
  const Matrix m = kind == MatrixKind::additive
                       ? a.entries()
                       : to_multiplicative(a).entries();
  if (o.output.empty()) {
    write_matrix_csv(out, kind, m);
  } else {
    write_matrix_file(o.output, kind, m);
  }
}

int check_alternative(int one_based, int n, const char* what) {
  if (one_based < 1 || one_based > n) {
    throw DomainError(std::string(what) + " " + std::to_string(one_based) +
                      " is out of range 1.." + std::to_string(n));
  }
  return one_based - 1;
}

std::string join_weights(const PriorityVector& w) {
  std::string s;
  for (int k = 0; k < w.size(); ++k) {
    if (k) s += ',';
    s += format_double(w[k]);
  }
  return s;
}

void print_ranking(std::ostream& out, const PriorityVector& w) {
  out << "alternative,weight\n";
  for (int k = 0; k < w.size(); ++k) {
    out << (k + 1) << ',' << format_double(w[k]) << '\n';
  }
  out << "# best=" << (best_alternative(w) + 1) << '\n';
}

int cmd_convert(const Options& o, std::ostream& out) {
  const MatrixFile file = read_matrix_file(o.input);
  const bool to_mul = o.direction == "add2mul";
  const MatrixKind expected =
      to_mul ? MatrixKind::additive : MatrixKind::multiplicative;
  if (file.kind != expected) {
    throw ParseError("direction " + o.direction + " expects a " +
                     std::string(to_string(expected)) + " input file");
  }
  Matrix result;
  MatrixKind kind;
  if (to_mul) {
    result = to_multiplicative(AdditivePcm(file.entries)).entries();
    kind = MatrixKind::multiplicative;
  } else {
    result = to_additive(MultiplicativePcm(file.entries)).entries();
    kind = MatrixKind::additive;
  }
  if (o.output.empty()) {
    write_matrix_csv(out, kind, result);
  } else {
    write_matrix_file(o.output, kind, result);
  }
  return kOk;
}

int cmd_rank(const Options& o, std::ostream& out) {
  const MatrixFile file = read_matrix_file(o.input);
  if (file.kind == MatrixKind::additive) {
    print_ranking(out, additive_ranking(AdditivePcm(file.entries)));
  } else {
    print_ranking(out, geometric_ranking(MultiplicativePcm(file.entries)));
  }
  return kOk;
}

int cmd_ci(const Options& o, std::ostream& out) {
  const MatrixFile file = read_matrix_file(o.input);
  const MultiplicativePcm m = file.kind == MatrixKind::multiplicative
                                  ? MultiplicativePcm(file.entries)
                                  : to_multiplicative(AdditivePcm(file.entries));
  out << "lambda_max," << format_double(perron_eigenvalue(m)) << '\n';
  out << "ci," << format_double(consistency_index(m)) << '\n';
  return kOk;
}

int cmd_project(const Options& o, std::ostream& out) {
  const AdditivePcm a = load_additive(read_matrix_file(o.input));
  if (o.pair.size() != 2) throw DomainError("--pair needs two alternatives");
  const int i = check_alternative(o.pair[0], a.n(), "alternative");
  const int j = check_alternative(o.pair[1], a.n(), "alternative");
  if (i == j) throw DomainError("--pair needs two distinct alternatives");
  emit_matrix(o, eq(a, std::min(i, j), std::max(i, j)), out);
  return kOk;
}

void write_trace(const fs::path& dir, const AdditivePcm& input,
                 const PromotionResult& result, const ScaleBound& bound) {
  fs::create_directories(dir);
  write_matrix_file((dir / "step_0.csv").string(), MatrixKind::additive,
                    input.entries());
  std::ofstream steps(dir / "steps.csv");
  if (!steps) throw Error("cannot write trace in '" + dir.string() + "'");
  steps << "step,equated,frobenius_from_input,arsi";
  for (int k = 1; k <= input.n(); ++k) steps << ",w" << k;
  steps << '\n';
  steps << "0,," << format_double(0.0) << ','
        << format_double(arsi(input, bound)) << ','
        << join_weights(additive_ranking(input)) << '\n';
  int k = 0;
  for (const auto& step : result.trace.steps) {
    ++k;
    write_matrix_file((dir / ("step_" + std::to_string(k) + ".csv")).string(),
                      MatrixKind::additive, step.matrix_after.entries());
    steps << k << ',' << (step.equated + 1) << ','
          << format_double(step.frobenius_from_input) << ','
          << format_double(arsi(step.matrix_after, bound)) << ','
          << join_weights(step.ranking) << '\n';
  }
}

int cmd_promote(const Options& o, std::ostream& out, std::ostream& err) {
  const AdditivePcm a = load_additive(read_matrix_file(o.input));
  int target = 0;
  if (!o.strategy.empty()) {
    target = select_target(to_multiplicative(a), *parse_strategy(o.strategy));
  } else if (o.target) {
    target = check_alternative(*o.target, a.n(), "target");
  } else {
    throw ParseError("promote needs --target or --strategy");
  }
  const auto algorithm = parse_algorithm(o.algorithm);
  const auto basis = orthogonal_tie_basis(a.n());
  PromotionResult result = promote(*algorithm, a, target, *basis);

  if (!o.trace_dir.empty()) {
    // Without an explicit bound, use the largest |entry| seen in the run so
    // every recorded ARSI is defined.
    double m = o.scale_bound.value_or(0.0);
    if (!o.scale_bound) {
      m = a.entries().cwiseAbs().maxCoeff();
      for (const auto& s : result.trace.steps) {
        m = std::max(m, s.matrix_after.entries().cwiseAbs().maxCoeff());
      }
      if (m == 0.0) m = 1.0;
    }
    write_trace(o.trace_dir, a, result, ScaleBound(m));
  }

  AdditivePcm final_matrix = result.matrix;
  if (o.nudge) {
    const auto partner = tied_leader(additive_ranking(final_matrix), target);
    if (partner) {
      final_matrix = nudge_leader(final_matrix, target, *partner, *o.nudge);
    } else {
      err << "note: alternative " << (target + 1)
          << " already leads alone; nudge not applied\n";
    }
  }
  err << to_string(*algorithm) << ": " << result.trace.iterations()
      << " iteration(s), ranking " << join_weights(additive_ranking(final_matrix))
      << '\n';
  emit_matrix(o, final_matrix, out);
  return kOk;
}

int cmd_stability(const Options& o, std::ostream& out) {
  const AdditivePcm a = load_additive(read_matrix_file(o.input));
  const ScaleBound bound =
      o.scale_bound ? ScaleBound(*o.scale_bound) : ScaleBound::saaty();
  const Matrix table = rsi_matrix(a, bound);
  out << "# rsi (M=" << format_double(bound.value()) << ")\n";
  for (int i = 0; i < a.n(); ++i) {
    for (int j = 0; j < a.n(); ++j) {
      if (j) out << ',';
      out << format_double(table(i, j));
    }
    out << '\n';
  }
  out << "rsi_min," << format_double(rsi_min(a, bound)) << '\n';
  out << "arsi," << format_double(arsi(a, bound)) << '\n';
  return kOk;
}

ExperimentConfig load_config(const Options& o) {
  ExperimentConfig c;
  if (!o.config.empty()) {
    c = read_experiment_config(o.config);
  } else if (o.preset == "full") {
    c = ExperimentConfig::full_scale();
  } else {
    c = ExperimentConfig::desk_scale();
  }
  if (o.seed) c.seed = *o.seed;
  return c;
}

void print_summary(std::ostream& out, const std::vector<TrialRecord>& records,
                   const ExperimentConfig& c) {
  const auto ci_change = summarize_ci_change(records);
  for (Algorithm a : c.algorithms) {
    for (Strategy s : c.strategies) {
      const auto group = filter_records(records, a, s);
      double iterations = 0.0;
      std::size_t ok = 0;
      for (const auto& r : group) {
        if (!r.ok()) continue;
        iterations += r.iterations;
        ++ok;
      }
      out << to_string(a) << '/' << to_string(s) << ": trials=" << group.size()
          << " failures=" << (group.size() - ok) << " mean_iterations="
          << format_double(ok ? iterations / static_cast<double>(ok) : 0.0);
      for (const auto& d : ci_change) {
        if (d.algorithm == a && d.strategy == s) {
          out << " mean_abs_ci_change=" << format_double(d.mean_abs)
              << " max_abs_ci_change=" << format_double(d.max_abs);
        }
      }
      out << '\n';
    }
  }
}

int cmd_simulate(const Options& o, std::ostream& out) {
  const ExperimentConfig c = load_config(o);
  if (o.dry_run) {
    out << "matrices=" << c.matrix_count() << " runs=" << c.run_count() << '\n';
    return kOk;
  }
  if (o.output.empty()) throw ParseError("simulate needs --output");
  const auto records = run_experiment(c, o.jobs);
  const fs::path dir(o.output);
  write_trial_files(dir, records);
  write_aggregate_files(dir, records, c);
  std::ofstream(dir / "config.json") << experiment_config_to_json(c);
  print_summary(out, records, c);
  return kOk;
}

int cmd_report(const Options& o, std::ostream& out) {
  const fs::path in(o.input);
  ExperimentConfig c;
  if (!o.config.empty()) {
    c = read_experiment_config(o.config);
  } else if (fs::exists(in / "config.json")) {
    c = read_experiment_config(in / "config.json");
  } else {
    c = ExperimentConfig::desk_scale();
  }
  const auto records = read_trial_files(in);
  write_aggregate_files(o.output.empty() ? in : fs::path(o.output), records, c);
  print_summary(out, records, c);
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Pairwise comparison matrices: ties, leader promotion, "
               "ranking stability and Monte Carlo studies"};
  app.require_subcommand(1);
  Options o;

  auto* convert = app.add_subcommand("convert", "Convert between additive and multiplicative form");
  convert->add_option("--input", o.input, "Matrix CSV")->required();
  convert->add_option("--output", o.output, "Output file (stdout if omitted)");
  convert->add_option("--direction", o.direction)
      ->required()
      ->check(CLI::IsMember({"add2mul", "mul2add"}));

  auto* rank = app.add_subcommand("rank", "Row-mean (additive) or geometric-mean (multiplicative) weights");
  rank->add_option("--input", o.input, "Matrix CSV")->required();

  auto* ci = app.add_subcommand("ci", "Saaty consistency index");
  ci->add_option("--input", o.input, "Matrix CSV")->required();

  auto* project = app.add_subcommand("project", "Nearest matrix in which two alternatives tie");
  project->add_option("--input", o.input, "Matrix CSV")->required();
  project->add_option("--pair", o.pair, "Two 1-based alternatives, e.g. 1,4")
      ->required()
      ->delimiter(',')
      ->expected(2);
  project->add_option("--output", o.output, "Output file (stdout if omitted)");
  project->add_option("--emit", o.emit)->check(CLI::IsMember({"add", "mul"}));

  auto* promote_cmd = app.add_subcommand("promote", "Make an alternative the (co-)leader");
  promote_cmd->add_option("--input", o.input, "Matrix CSV")->required();
  auto* target_opt =
      promote_cmd->add_option("--target", o.target, "1-based alternative to promote");
  promote_cmd->add_option("--strategy", o.strategy, "Pick the target: LBN (last index) or LBR (last by GMM)")
      ->check(CLI::IsMember({"LBN", "LBR"}))
      ->excludes(target_opt);
  promote_cmd->add_option("--algorithm", o.algorithm)
      ->check(CLI::IsMember({"greedy", "bubble"}));
  promote_cmd->add_option("--nudge", o.nudge, "Break the final tie by this amount");
  promote_cmd->add_option("--trace-dir", o.trace_dir, "Write per-step matrices and steps.csv here");
  promote_cmd->add_option("--scale-bound", o.scale_bound, "M used for the ARSI column of the trace");
  promote_cmd->add_option("--output", o.output, "Output file (stdout if omitted)");
  promote_cmd->add_option("--emit", o.emit)->check(CLI::IsMember({"add", "mul"}));

  auto* stability = app.add_subcommand("stability", "RSI table, RSI_min and ARSI");
  stability->add_option("--input", o.input, "Matrix CSV")->required();
  stability->add_option("--scale-bound", o.scale_bound, "Entry bound M (default ln 9)");

  auto* simulate = app.add_subcommand("simulate", "Run a Monte Carlo campaign");
  simulate->add_option("--config", o.config, "Experiment JSON");
  simulate->add_option("--preset", o.preset, "desk or full (when --config is absent)")
      ->check(CLI::IsMember({"desk", "full"}));
  simulate->add_option("--output", o.output, "Output directory");
  simulate->add_option("--jobs", o.jobs, "Worker threads (default: logical cores)");
  simulate->add_option("--seed", o.seed, "Override the config seed");
  simulate->add_flag("--dry-run", o.dry_run, "Print planned counts only");

  auto* report = app.add_subcommand("report", "Re-aggregate records of an earlier simulate run");
  report->add_option("--input", o.input, "Directory written by simulate")->required();
  report->add_option("--output", o.output, "Directory for figure CSVs (default: --input)");
  report->add_option("--config", o.config, "Experiment JSON (default: <input>/config.json)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kParseError;
  }

  try {
    if (*convert) return cmd_convert(o, out);
    if (*rank) return cmd_rank(o, out);
    if (*ci) return cmd_ci(o, out);
    if (*project) return cmd_project(o, out);
    if (*promote_cmd) return cmd_promote(o, out, err);
    if (*stability) return cmd_stability(o, out);
    if (*simulate) return cmd_simulate(o, out);
    if (*report) return cmd_report(o, out);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kParseError;
  } catch (const InvariantError& e) {
    err << "error: " << e.what() << '\n';
    return kInvariantViolation;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kDomainError;
  } catch (const DimensionError& e) {
    err << "error: " << e.what() << '\n';
    return kDomainError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kFailure;
}

}  // namespace pcmlead::cli
