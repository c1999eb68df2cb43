#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "embedlab/types.hpp"

namespace embedlab::cli {

/// Malformed matrix file. Maps to exit status 65.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class FileFormat { Json, Csv };

std::string_view to_string(FileFormat f) noexcept;

struct MatrixFile {
  FileFormat format = FileFormat::Json;
  RealMatrix matrix;
  std::optional<std::string> name;
  std::optional<std::string> kind;  // stochastic | nonnegative | z | intensity
};

// {"n": 3, "rows": [[...], ...], "kind": "stochastic", "name": "..."}
MatrixFile parse_matrix_json(std::string_view text);

// One row per line, comma separated. Lines starting with '#' are comments,
// except "# name: ..." and "# kind: ..." which carry the metadata.
MatrixFile parse_matrix_csv(std::string_view text);

/// Format is taken from the extension (.csv / .json), else sniffed from the
/// first non-blank character.
MatrixFile read_matrix_file(const std::string& path);

}  // namespace embedlab::cli
