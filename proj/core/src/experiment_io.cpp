#include "pcmlead/experiment_io.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "pcmlead/matrix_io.hpp"

namespace pcmlead {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

template <typename T>
T field(const json& j, const char* name, const T& fallback) {
  const auto it = j.find(name);
  if (it == j.end() || it->is_null()) return fallback;
  try {
    return it->get<T>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("config field '") + name + "': " + e.what());
  }
}

template <typename Enum, typename Parse>
std::vector<Enum> enum_list(const json& j, const char* name,
                            const std::vector<Enum>& fallback, Parse parse) {
  const auto names = field<std::vector<std::string>>(j, name, {});
  if (j.find(name) == j.end()) return fallback;
  std::vector<Enum> out;
  for (const auto& s : names) {
    const auto v = parse(s);
    if (!v) {
      throw ParseError(std::string("config field '") + name +
                       "': unknown value '" + s + "'");
    }
    out.push_back(*v);
  }
  return out;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  return out;
}

std::ifstream open_in(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  return in;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

template <typename T>
T parse_cell(const std::string& cell, const fs::path& file, int line) {
  T value{};
  const auto* end = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(cell.data(), end, value);
  if (cell.empty() || ec != std::errc{} || ptr != end) {
    throw ParseError(file.filename().string() + " line " +
                     std::to_string(line) + ": bad value '" + cell + "'");
  }
  return value;
}

double parse_real(const std::string& cell, const fs::path& file, int line) {
  if (cell == "nan") return std::nan("");
  return parse_cell<double>(cell, file, line);
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += (c == '\n' ? ' ' : c);
  }
  return out + '"';
}

std::string unquote(std::string s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
    s = s.substr(1, s.size() - 2);
    std::string out;
    for (std::size_t k = 0; k < s.size(); ++k) {
      out += s[k];
      if (s[k] == '"' && k + 1 < s.size() && s[k + 1] == '"') ++k;
    }
    return out;
  }
  return s;
}

void expect_header(std::istream& in, const std::string& header,
                   const fs::path& file) {
  std::string line;
  if (!std::getline(in, line) || line != header) {
    throw ParseError(file.filename().string() + ": expected header '" + header +
                     "'");
  }
}

void write_series(std::ostream& out, const std::vector<TrialRecord>& records,
                  const std::vector<double> TrialRecord::*series,
                  int first_index) {
  out << "trial_id,iteration,value\n";
  for (std::size_t id = 0; id < records.size(); ++id) {
    const auto& values = records[id].*series;
    for (std::size_t k = 0; k < values.size(); ++k) {
      out << id << ',' << (static_cast<int>(k) + first_index) << ','
          << format_double(values[k]) << '\n';
    }
  }
}

void read_series(const fs::path& path, std::vector<TrialRecord>& records,
                 std::vector<double> TrialRecord::*series, int first_index) {
  auto in = open_in(path);
  expect_header(in, "trial_id,iteration,value", path);
  std::string line;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != 3) {
      throw ParseError(path.filename().string() + " line " +
                       std::to_string(line_no) + ": expected 3 columns");
    }
    const auto id = parse_cell<std::size_t>(cells[0], path, line_no);
    const auto it = parse_cell<int>(cells[1], path, line_no);
    if (id >= records.size()) {
      throw ParseError(path.filename().string() + " line " +
                       std::to_string(line_no) + ": unknown trial id");
    }
    auto& values = records[id].*series;
    if (it - first_index != static_cast<int>(values.size())) {
      throw ParseError(path.filename().string() + " line " +
                       std::to_string(line_no) + ": iterations out of order");
    }
    values.push_back(parse_real(cells[2], path, line_no));
  }
}

constexpr const char* kRecordsHeader =
    "n,alpha,profile_id,algorithm,strategy,target,iterations,ci_input,ci_output";

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("config must be a JSON object");

  static const char* const known[] = {
      "nRange",     "profilesPerN", "alphaGrid",    "seed",
      "algorithms", "strategies",   "scaleBoundM",  "ciBinWidth",
      "ciBinMinCount", "perturbation"};
  for (const auto& [key, value] : j.items()) {
    if (std::find(std::begin(known), std::end(known), key) == std::end(known)) {
      throw ParseError("config has unknown field '" + key + "'");
    }
  }

  ExperimentConfig c = ExperimentConfig::desk_scale();
  c.n_range = field(j, "nRange", c.n_range);
  c.profiles_per_n = field(j, "profilesPerN", c.profiles_per_n);
  c.alpha_grid = field(j, "alphaGrid", c.alpha_grid);
  c.seed = field(j, "seed", c.seed);
  c.algorithms = enum_list(j, "algorithms", c.algorithms, parse_algorithm);
  c.strategies = enum_list(j, "strategies", c.strategies, parse_strategy);
  if (j.contains("scaleBoundM") && !j["scaleBoundM"].is_null()) {
    c.scale_bound_m = field(j, "scaleBoundM", 0.0);
  }
  c.ci_bin_width = field(j, "ciBinWidth", c.ci_bin_width);
  c.ci_bin_min_count = field(j, "ciBinMinCount", c.ci_bin_min_count);
  if (j.contains("perturbation")) {
    const auto law = parse_perturbation_law(field<std::string>(j, "perturbation", ""));
    if (!law) throw ParseError("config field 'perturbation': unknown law");
    c.perturbation = *law;
  }
  try {
    c.validate();
  } catch (const DomainError& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
  return c;
}

ExperimentConfig read_experiment_config(const fs::path& path) {
  auto in = open_in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_experiment_config(ss.str());
}

std::string experiment_config_to_json(const ExperimentConfig& c) {
  json j;
  j["nRange"] = c.n_range;
  j["profilesPerN"] = c.profiles_per_n;
  j["alphaGrid"] = c.alpha_grid;
  j["seed"] = c.seed;
  j["algorithms"] = json::array();
  for (auto a : c.algorithms) j["algorithms"].push_back(std::string(to_string(a)));
  j["strategies"] = json::array();
  for (auto s : c.strategies) j["strategies"].push_back(std::string(to_string(s)));
  j["scaleBoundM"] = c.scale_bound_m ? json(*c.scale_bound_m) : json(nullptr);
  j["ciBinWidth"] = c.ci_bin_width;
  j["ciBinMinCount"] = c.ci_bin_min_count;
  j["perturbation"] = std::string(to_string(c.perturbation));
  return j.dump(2) + "\n";
}

void write_records_csv(std::ostream& out,
                       const std::vector<TrialRecord>& records) {
  out << kRecordsHeader << '\n';
  for (const auto& r : records) {
    out << r.n << ',' << format_double(r.alpha) << ',' << r.profile_id << ','
        << to_string(r.algorithm) << ',' << to_string(r.strategy) << ','
        << (r.target + 1) << ',' << r.iterations << ','
        << format_double(r.ci_input) << ',' << format_double(r.ci_output)
        << '\n';
  }
}

void write_frobenius_trace_csv(std::ostream& out,
                               const std::vector<TrialRecord>& records) {
  write_series(out, records, &TrialRecord::frobenius_per_step, 1);
}

void write_arsi_trace_csv(std::ostream& out,
                          const std::vector<TrialRecord>& records) {
  write_series(out, records, &TrialRecord::arsi_per_step, 0);
}

void write_failures_csv(std::ostream& out,
                        const std::vector<TrialRecord>& records) {
  out << "trial_id,message\n";
  for (std::size_t id = 0; id < records.size(); ++id) {
    if (!records[id].ok()) out << id << ',' << quote(records[id].error) << '\n';
  }
}

void write_trial_files(const fs::path& dir,
                       const std::vector<TrialRecord>& records) {
  fs::create_directories(dir);
  {
    auto out = open_out(dir / "records.csv");
    write_records_csv(out, records);
  }
  {
    auto out = open_out(dir / "trace_frobenius.csv");
    write_frobenius_trace_csv(out, records);
  }
  {
    auto out = open_out(dir / "trace_arsi.csv");
    write_arsi_trace_csv(out, records);
  }
  auto out = open_out(dir / "failures.csv");
  write_failures_csv(out, records);
}

void write_aggregate_files(const fs::path& dir,
                           const std::vector<TrialRecord>& records,
                           const ExperimentConfig& config) {
  fs::create_directories(dir);

  {
    auto out = open_out(dir / "fig1_iterations_by_n.csv");
    out << "n,algorithm,strategy,mean_iterations,count\n";
    for (const auto& row : aggregate_iterations_by_n(records)) {
      out << row.n << ',' << to_string(row.algorithm) << ','
          << to_string(row.strategy) << ',' << format_double(row.mean_iterations)
          << ',' << row.count << '\n';
    }
  }

  auto fig2 = open_out(dir / "fig2_ci_bins.csv");
  fig2 << "algorithm,strategy,bin_low,bin_high,mean_ci,mean_iterations,count,"
          "low_confidence\n";
  auto fig3 = open_out(dir / "fig3_frobenius.csv");
  fig3 << "algorithm,strategy,iteration,mean_distance,count\n";
  auto fig5 = open_out(dir / "fig5_arsi_by_iter.csv");
  fig5 << "n,algorithm,strategy,iteration,mean_arsi,count\n";

  for (Algorithm algorithm : config.algorithms) {
    for (Strategy strategy : config.strategies) {
      const auto group = filter_records(records, algorithm, strategy);
      const auto a = to_string(algorithm);
      const auto s = to_string(strategy);
      for (const auto& bin : bin_by_ci(group, config)) {
        fig2 << a << ',' << s << ',' << format_double(bin.bin_low) << ','
             << format_double(bin.bin_high) << ',' << format_double(bin.mean_ci)
             << ',' << format_double(bin.mean_iterations) << ',' << bin.count
             << ',' << (bin.low_confidence ? 1 : 0) << '\n';
      }
      for (const auto& p : aggregate_frobenius_by_iteration(group)) {
        fig3 << a << ',' << s << ',' << p.iteration << ','
             << format_double(p.mean) << ',' << p.count << '\n';
      }
      for (int n : config.n_range) {
        for (const auto& p : aggregate_arsi_by_iteration(group, n)) {
          fig5 << n << ',' << a << ',' << s << ',' << p.iteration << ','
               << format_double(p.mean) << ',' << p.count << '\n';
        }
      }
    }
  }

  {
    auto out = open_out(dir / "fig4_arsi_by_n.csv");
    out << "n,mean_arsi,count\n";
    for (const auto& row : aggregate_input_arsi_by_n(records)) {
      out << row.n << ',' << format_double(row.mean_arsi) << ',' << row.count
          << '\n';
    }
  }

  auto out = open_out(dir / "ci_change.csv");
  out << "algorithm,strategy,count,mean_abs,median_abs,max_abs\n";
  for (const auto& s : summarize_ci_change(records)) {
    out << to_string(s.algorithm) << ',' << to_string(s.strategy) << ','
        << s.count << ',' << format_double(s.mean_abs) << ','
        << format_double(s.median_abs) << ',' << format_double(s.max_abs)
        << '\n';
  }
}

std::vector<TrialRecord> read_trial_files(const fs::path& dir) {
  const auto records_path = dir / "records.csv";
  auto in = open_in(records_path);
  expect_header(in, kRecordsHeader, records_path);

  std::vector<TrialRecord> records;
  std::string line;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto c = split(line);
    if (c.size() != 9) {
      throw ParseError("records.csv line " + std::to_string(line_no) +
                       ": expected 9 columns");
    }
    TrialRecord r;
    r.n = parse_cell<int>(c[0], records_path, line_no);
    r.alpha = parse_real(c[1], records_path, line_no);
    r.profile_id = parse_cell<int>(c[2], records_path, line_no);
    const auto algorithm = parse_algorithm(c[3]);
    const auto strategy = parse_strategy(c[4]);
    if (!algorithm || !strategy) {
      throw ParseError("records.csv line " + std::to_string(line_no) +
                       ": unknown algorithm or strategy");
    }
    r.algorithm = *algorithm;
    r.strategy = *strategy;
    r.target = parse_cell<int>(c[5], records_path, line_no) - 1;
    r.iterations = parse_cell<int>(c[6], records_path, line_no);
    r.ci_input = parse_real(c[7], records_path, line_no);
    r.ci_output = parse_real(c[8], records_path, line_no);
    records.push_back(std::move(r));
  }

  read_series(dir / "trace_frobenius.csv", records,
              &TrialRecord::frobenius_per_step, 1);
  read_series(dir / "trace_arsi.csv", records, &TrialRecord::arsi_per_step, 0);

  const auto failures_path = dir / "failures.csv";
  if (fs::exists(failures_path)) {
    auto fin = open_in(failures_path);
    expect_header(fin, "trial_id,message", failures_path);
    line_no = 1;
    while (std::getline(fin, line)) {
      ++line_no;
      if (line.empty()) continue;
      const auto comma = line.find(',');
      if (comma == std::string::npos) {
        throw ParseError("failures.csv line " + std::to_string(line_no) +
                         ": expected 2 columns");
      }
      const auto id =
          parse_cell<std::size_t>(line.substr(0, comma), failures_path, line_no);
      if (id >= records.size()) {
        throw ParseError("failures.csv line " + std::to_string(line_no) +
                         ": unknown trial id");
      }
      records[id].error = unquote(line.substr(comma + 1));
    }
  }
  return records;
}

}  // namespace pcmlead
