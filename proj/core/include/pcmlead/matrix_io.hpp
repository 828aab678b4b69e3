#pragma once

// Matrix CSV format:
//
//   # kind=additive, n=4
//   0,1,2,9
//   -1,0,1,8
//   ...
//
// Values are written with 17 significant digits so that parsing the file
// reproduces the in-memory doubles bit for bit.

#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>

#include "pcmlead/pcm.hpp"

namespace pcmlead {

enum class MatrixKind { additive, multiplicative };

std::string_view to_string(MatrixKind kind) noexcept;

/// Raw parse result; not yet validated against PCM invariants.
struct MatrixFile {
  MatrixKind kind = MatrixKind::additive;
  Matrix entries;
};

/// Throws ParseError on malformed text. Does not check reciprocity.
MatrixFile parse_matrix_csv(std::istream& in);
MatrixFile read_matrix_file(const std::string& path);

void write_matrix_csv(std::ostream& out, MatrixKind kind, const Matrix& m);
void write_matrix_file(const std::string& path, MatrixKind kind,
                       const Matrix& m);

/// Loads either kind and returns the additive form (InvariantError if the
/// matrix is not a valid PCM).
AdditivePcm load_additive(const MatrixFile& file);

/// Shortest-round-trip 17-significant-digit decimal rendering.
std::string format_double(double v);

}  // namespace pcmlead
