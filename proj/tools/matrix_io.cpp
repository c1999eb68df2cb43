#include "matrix_io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

namespace embedlab::cli {

namespace {

constexpr std::array kKnownKinds{"stochastic", "nonnegative", "z", "intensity"};

void check_kind(const std::optional<std::string>& kind) {
  if (!kind) return;
  for (const char* k : kKnownKinds) {
    if (*kind == k) return;
  }
  throw FormatError("unknown kind \"" + *kind + "\" (expected stochastic, nonnegative, z or intensity)");
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

double parse_number(std::string_view token, int line) {
  token = trim(token);
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (token.empty() || ec != std::errc{} || ptr != token.data() + token.size()) {
    throw FormatError("line " + std::to_string(line) + ": cannot parse \"" + std::string(token) + "\" as a number");
  }
  if (!std::isfinite(value)) throw FormatError("line " + std::to_string(line) + ": non-finite entry");
  return value;
}

RealMatrix assemble(const std::vector<std::vector<double>>& rows) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  if (n == 0) throw FormatError("matrix has no rows");
  RealMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = rows[static_cast<std::size_t>(i)];
    if (static_cast<Eigen::Index>(row.size()) != n) {
      throw FormatError("row " + std::to_string(i) + " has " + std::to_string(row.size()) + " entries, expected " +
                        std::to_string(n));
    }
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = row[static_cast<std::size_t>(j)];
  }
  return m;
}

}  // namespace

std::string_view to_string(FileFormat f) noexcept { return f == FileFormat::Json ? "json" : "csv"; }

MatrixFile parse_matrix_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw FormatError("top-level JSON value must be an object");
  if (!doc.contains("rows") || !doc["rows"].is_array()) throw FormatError("missing \"rows\" array");

  std::vector<std::vector<double>> rows;
  for (const auto& r : doc["rows"]) {
    if (!r.is_array()) throw FormatError("every entry of \"rows\" must be an array");
    std::vector<double> row;
    for (const auto& v : r) {
      if (!v.is_number()) throw FormatError("matrix entries must be numbers");
      const double x = v.get<double>();
      if (!std::isfinite(x)) throw FormatError("non-finite entry");
      row.push_back(x);
    }
    rows.push_back(std::move(row));
  }

  MatrixFile out;
  out.format = FileFormat::Json;
  out.matrix = assemble(rows);
  if (doc.contains("n")) {
    if (!doc["n"].is_number_integer() || doc["n"].get<long>() != out.matrix.rows()) {
      throw FormatError("\"n\" does not match the number of rows");
    }
  }
  if (doc.contains("name")) {
    if (!doc["name"].is_string()) throw FormatError("\"name\" must be a string");
    out.name = doc["name"].get<std::string>();
  }
  if (doc.contains("kind")) {
    if (!doc["kind"].is_string()) throw FormatError("\"kind\" must be a string");
    out.kind = doc["kind"].get<std::string>();
  }
  check_kind(out.kind);
  return out;
}

MatrixFile parse_matrix_csv(std::string_view text) {
  MatrixFile out;
  out.format = FileFormat::Csv;
  std::vector<std::vector<double>> rows;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string_view s = trim(raw);
    if (s.empty()) continue;
    if (s.front() == '#') {
      const std::string_view body = trim(s.substr(1));
      if (body.starts_with("name:")) out.name = std::string(trim(body.substr(5)));
      if (body.starts_with("kind:")) out.kind = std::string(trim(body.substr(5)));
      continue;
    }
    std::vector<double> row;
    std::size_t start = 0;
    while (true) {
      const auto comma = s.find(',', start);
      row.push_back(parse_number(s.substr(start, comma == std::string_view::npos ? s.npos : comma - start), line));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    rows.push_back(std::move(row));
  }
  out.matrix = assemble(rows);
  check_kind(out.kind);
  return out;
}

MatrixFile read_matrix_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();

  auto ends_with = [&path](std::string_view ext) {
    return path.size() >= ext.size() && path.compare(path.size() - ext.size(), ext.size(), ext) == 0;
  };
  if (ends_with(".csv")) return parse_matrix_csv(text);
  if (ends_with(".json")) return parse_matrix_json(text);
  const std::string_view t = trim(text);
  return !t.empty() && t.front() == '{' ? parse_matrix_json(text) : parse_matrix_csv(text);
}

}  // namespace embedlab::cli
