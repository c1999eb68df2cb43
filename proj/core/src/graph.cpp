#include "graph.hpp"

#include <algorithm>
#include <cmath>

namespace embedlab::detail {

Pattern off_diagonal_pattern(const RealMatrix& a, double entry_tol) {
  const auto n = static_cast<std::size_t>(a.rows());
  Pattern p(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      p[i][j] = i != j && std::abs(a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))) > entry_tol;
    }
  }
  return p;
}

std::vector<bool> reachable_from(const Pattern& pattern, int start, bool reversed) {
  const auto n = pattern.size();
  std::vector<bool> seen(n, false);
  std::vector<std::size_t> stack{static_cast<std::size_t>(start)};
  seen[static_cast<std::size_t>(start)] = true;
  while (!stack.empty()) {
    const std::size_t u = stack.back();
    stack.pop_back();
    for (std::size_t v = 0; v < n; ++v) {
      const bool edge = reversed ? pattern[v][u] : pattern[u][v];
      if (edge && !seen[v]) {
        seen[v] = true;
        stack.push_back(v);
      }
    }
  }
  return seen;
}

Components strongly_connected_components(const Pattern& pattern) {
  // n is small (dense matrices); mutual reachability is clear and fast enough.
  const int n = static_cast<int>(pattern.size());
  Components out;
  out.component.assign(static_cast<std::size_t>(n), -1);
  for (int i = 0; i < n; ++i) {
    if (out.component[static_cast<std::size_t>(i)] >= 0) continue;
    const auto fwd = reachable_from(pattern, i, false);
    const auto bwd = reachable_from(pattern, i, true);
    for (int j = i; j < n; ++j) {
      if (fwd[static_cast<std::size_t>(j)] && bwd[static_cast<std::size_t>(j)]) {
        out.component[static_cast<std::size_t>(j)] = out.count;
      }
    }
    ++out.count;
  }
  return out;
}

}  // namespace embedlab::detail
