#pragma once

#include <vector>

#include "embedlab/types.hpp"

namespace embedlab::detail {

/// Boolean adjacency of the zero-pattern digraph: edge i -> j iff i != j and
/// |a_ij| > entry_tol.
using Pattern = std::vector<std::vector<bool>>;

Pattern off_diagonal_pattern(const RealMatrix& a, double entry_tol);

/// Strongly connected components; component[i] is the component id of node i.
/// Ids are assigned in order of each component's smallest node.
struct Components {
  std::vector<int> component;
  int count = 0;
};

Components strongly_connected_components(const Pattern& pattern);

/// Nodes reachable from `start` (itself included).
std::vector<bool> reachable_from(const Pattern& pattern, int start, bool reversed = false);

}  // namespace embedlab::detail
