#include "pcmlead/matrix_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <regex>
#include <sstream>
#include <vector>

namespace pcmlead {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_number(std::string_view token, int line) {
  token = trim(token);
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double value = 0.0;
  const auto* begin = token.data();
  const auto* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (token.empty() || ec != std::errc{} || ptr != end) {
    throw ParseError("line " + std::to_string(line) + ": bad number '" +
                     std::string(token) + "'");
  }
  return value;
}

}  // namespace

std::string_view to_string(MatrixKind kind) noexcept {
  return kind == MatrixKind::additive ? "additive" : "multiplicative";
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] =
      std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  if (ec != std::errc{}) throw Error("failed to format a double");
  return std::string(buf, ptr);
}

MatrixFile parse_matrix_csv(std::istream& in) {
  static const std::regex header_re(
      R"(^#\s*kind\s*=\s*(additive|multiplicative)\s*,\s*n\s*=\s*(\d+)\s*$)");

  std::string line;
  int line_no = 0;
  bool have_header = false;
  MatrixFile file;
  long declared_n = 0;
  std::vector<std::vector<double>> rows;

  while (std::getline(in, line)) {
    ++line_no;
    const auto text = trim(line);
    if (text.empty()) continue;
    if (!have_header) {
      std::smatch m;
      const std::string header(text);
      if (!std::regex_match(header, m, header_re)) {
        throw ParseError("line " + std::to_string(line_no) +
                         ": expected '# kind=additive|multiplicative, n=<int>'");
      }
      file.kind = m[1] == "additive" ? MatrixKind::additive
                                     : MatrixKind::multiplicative;
      declared_n = std::stol(m[2]);
      have_header = true;
      continue;
    }
    if (text.front() == '#') continue;
    std::vector<double> row;
    std::string_view rest = text;
    while (true) {
      const auto comma = rest.find(',');
      row.push_back(parse_number(rest.substr(0, comma), line_no));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    rows.push_back(std::move(row));
  }

  if (!have_header) throw ParseError("missing '# kind=..., n=...' header");
  if (declared_n <= 0 || static_cast<long>(rows.size()) != declared_n) {
    throw ParseError("header declares n=" + std::to_string(declared_n) +
                     " but file has " + std::to_string(rows.size()) + " rows");
  }
  const auto n = static_cast<Eigen::Index>(declared_n);
  file.entries.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = rows[static_cast<std::size_t>(i)];
    if (static_cast<Eigen::Index>(row.size()) != n) {
      throw ParseError("row " + std::to_string(i + 1) + " has " +
                       std::to_string(row.size()) + " values, expected " +
                       std::to_string(n));
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      file.entries(i, j) = row[static_cast<std::size_t>(j)];
    }
  }
  return file;
}

MatrixFile read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return parse_matrix_csv(in);
}

void write_matrix_csv(std::ostream& out, MatrixKind kind, const Matrix& m) {
  out << "# kind=" << to_string(kind) << ", n=" << m.rows() << '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

void write_matrix_file(const std::string& path, MatrixKind kind,
                       const Matrix& m) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  write_matrix_csv(out, kind, m);
}

AdditivePcm load_additive(const MatrixFile& file) {
  if (file.kind == MatrixKind::additive) return AdditivePcm(file.entries);
  return to_additive(MultiplicativePcm(file.entries));
}

}  // namespace pcmlead
