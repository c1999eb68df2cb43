#include "embedlab/structure.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>

#include "embedlab/classify.hpp"
#include "embedlab/error.hpp"
#include "embedlab/numkit.hpp"
#include "graph.hpp"

namespace embedlab {

RealMatrix StructureDecomposition::permutation_matrix() const {
  const auto n = static_cast<Eigen::Index>(permutation.size());
  RealMatrix l = RealMatrix::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) l(permutation[static_cast<std::size_t>(k)], k) = 1.0;
  return l;
}

RealMatrix StructureDecomposition::reconstruct() const {
  const auto n = static_cast<Eigen::Index>(permutation.size());
  RealMatrix b(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index l = 0; l < n; ++l) {
      b(permutation[static_cast<std::size_t>(k)], permutation[static_cast<std::size_t>(l)]) = upper(k, l);
    }
  }
  return b;
}

StructureDecomposition frobenius_form(const RealMatrix& b, const ToleranceConfig& cfg) {
  require_square_finite(b, "frobenius_form");
  cfg.validate();
  const int n = static_cast<int>(b.rows());
  const auto pattern = detail::off_diagonal_pattern(b, cfg.entry_tol);
  const auto scc = detail::strongly_connected_components(pattern);
  const auto m = static_cast<std::size_t>(scc.count);

  std::vector<std::vector<bool>> dag(m, std::vector<bool>(m, false));
  std::vector<int> indegree(m, 0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const auto ci = static_cast<std::size_t>(scc.component[static_cast<std::size_t>(i)]);
      const auto cj = static_cast<std::size_t>(scc.component[static_cast<std::size_t>(j)]);
      if (pattern[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] && ci != cj && !dag[ci][cj]) {
        dag[ci][cj] = true;
        ++indegree[cj];
      }
    }
  }

  // Kahn's algorithm; component ids already follow their smallest member, so
  // a min-heap on the id breaks ties by ascending minimum original index.
  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
  for (std::size_t c = 0; c < m; ++c) {
    if (indegree[c] == 0) ready.push(c);
  }
  std::vector<std::size_t> order;
  while (!ready.empty()) {
    const std::size_t c = ready.top();
    ready.pop();
    order.push_back(c);
    for (std::size_t d = 0; d < m; ++d) {
      if (dag[c][d] && --indegree[d] == 0) ready.push(d);
    }
  }

  StructureDecomposition out;
  for (std::size_t c : order) {
    int size = 0;
    for (int i = 0; i < n; ++i) {
      if (static_cast<std::size_t>(scc.component[static_cast<std::size_t>(i)]) == c) {
        out.permutation.push_back(i);
        ++size;
      }
    }
    out.block_sizes.push_back(size);
  }

  out.upper.resize(n, n);
  for (int k = 0; k < n; ++k) {
    for (int l = 0; l < n; ++l) {
      out.upper(k, l) = b(out.permutation[static_cast<std::size_t>(k)], out.permutation[static_cast<std::size_t>(l)]);
    }
  }
  int offset = 0;
  for (int size : out.block_sizes) {
    out.diagonal_blocks.emplace_back(out.upper.block(offset, offset, size, size));
    offset += size;
  }
  return out;
}

RealMatrix trailing_submatrix(const StructureDecomposition& d, int n) {
  if (n < 0 || n > d.block_count()) {
    throw Error(ErrorKind::OutOfRange, "trailing_submatrix: level " + std::to_string(n) +
                                           " outside [0, " + std::to_string(d.block_count()) + "]");
  }
  int offset = 0;
  for (int k = 0; k < n; ++k) offset += d.block_sizes[static_cast<std::size_t>(k)];
  const auto rest = d.upper.rows() - offset;
  return d.upper.bottomRightCorner(rest, rest);
}

std::vector<PatternViolation> zero_pattern_invariance(const RealMatrix& b, const RealMatrix& q,
                                                      const ToleranceConfig& cfg) {
  require_square_finite(b, "zero_pattern_invariance");
  require_square_finite(q, "zero_pattern_invariance");
  cfg.validate();
  if (b.rows() != q.rows()) throw Error(ErrorKind::InvalidInput, "dimension mismatch");
  if (const double err = relative_error(expm(-q), b); !(err <= cfg.recon_tol)) {
    throw Error(ErrorKind::NotAValidPair,
                "exp(-Q) misses B by relative error " + std::to_string(err));
  }

  const auto n = static_cast<std::size_t>(b.rows());
  const double theta = q.diagonal().maxCoeff();
  const RealMatrix shifted = theta * RealMatrix::Identity(b.rows(), b.cols()) - q;

  using Bits = std::vector<std::vector<bool>>;
  Bits base(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      base[i][j] = structurally_nonzero(shifted(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)), cfg);
    }
  }

  std::vector<PatternViolation> out;
  Bits power = base;
  for (std::size_t m = 1; m < std::max<std::size_t>(n, 2); ++m) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i != j && power[i][j] &&
            !structurally_nonzero(b(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)), cfg)) {
          out.push_back({static_cast<int>(i), static_cast<int>(j), static_cast<int>(m)});
        }
      }
    }
    Bits next(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < n; ++k) {
        if (!power[i][k]) continue;
        for (std::size_t j = 0; j < n; ++j) {
          if (base[k][j]) next[i][j] = true;
        }
      }
    }
    power = std::move(next);
  }
  return out;
}

namespace {

double determinant_floor(const RealMatrix& a) {
  double bound = 1.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) bound *= a.row(i).norm();
  return numerical_zero(static_cast<int>(a.rows()), bound);
}

// Conditions (1)-(3); `base` maps local indices back to original ones.
void check_basic(const RealMatrix& b, const StructureDecomposition& d, const std::vector<int>& base,
                 const ToleranceConfig& cfg, std::vector<ConditionViolation>& out) {
  const auto n = b.rows();
  auto orig = [&base](Eigen::Index i) { return base[static_cast<std::size_t>(i)]; };

  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(b(i, i) > cfg.entry_tol)) {
      out.push_back({condition::kPositiveDiagonal, orig(i), orig(i), -1, "diagonal entry not strictly positive"});
    }
  }

  if (n > 1 && d.block_count() == 1) {
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        if (!(b(i, j) > cfg.entry_tol)) {
          out.push_back({condition::kIrreducibleImpliesPositive, orig(i), orig(j), -1,
                         "irreducible but entry not strictly positive"});
        }
      }
    }
  }

  int offset = 0;
  for (int k = 0; k < d.block_count(); ++k) {
    const int size = d.block_sizes[static_cast<std::size_t>(k)];
    for (int r = 0; r < size; ++r) {
      for (int c = 0; c < size; ++c) {
        if (!(d.upper(offset + r, offset + c) > cfg.entry_tol)) {
          out.push_back({condition::kDiagonalBlocksPositive,
                         orig(d.permutation[static_cast<std::size_t>(offset + r)]),
                         orig(d.permutation[static_cast<std::size_t>(offset + c)]), k,
                         "diagonal block entry not strictly positive"});
        }
      }
    }
    offset += size;
  }
}

}  // namespace

NecessaryConditionReport necessary_conditions(const RealMatrix& b, const ToleranceConfig& cfg) {
  require_square_finite(b, "necessary_conditions");
  cfg.validate();
  const auto n = b.rows();

  NecessaryConditionReport report;
  report.conditions_checked = {condition::kPositiveDiagonal, condition::kIrreducibleImpliesPositive,
                               condition::kDiagonalBlocksPositive, condition::kTrailingSubmatrices,
                               condition::kZeroPatternTransitive};

  const StructureDecomposition d = frobenius_form(b, cfg);
  std::vector<int> identity(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) identity[static_cast<std::size_t>(i)] = static_cast<int>(i);
  check_basic(b, d, identity, cfg, report.violations);

  int offset = 0;
  for (int level = 0; level < d.block_count(); ++level) {
    const RealMatrix sub = trailing_submatrix(d, level);
    const double det = sub.partialPivLu().determinant();
    if (!(det > determinant_floor(sub))) {
      report.violations.push_back({condition::kTrailingSubmatrices, -1, -1, level,
                                   "determinant " + std::to_string(det) + " is not positive"});
    }
    if (level > 0) {
      std::vector<int> base(d.permutation.begin() + offset, d.permutation.end());
      std::vector<ConditionViolation> inner;
      check_basic(sub, frobenius_form(sub, cfg), base, cfg, inner);
      for (auto& v : inner) {
        report.violations.push_back({condition::kTrailingSubmatrices, v.row, v.col, level,
                                     "trailing submatrix fails " + v.condition});
      }
    }
    offset += d.block_sizes[static_cast<std::size_t>(level)];
  }

  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index k = 0; k < n; ++k) {
      if (i == k || b(i, k) > cfg.entry_tol) continue;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (b(i, j) > cfg.entry_tol && b(j, k) > cfg.entry_tol) {
          report.violations.push_back({condition::kZeroPatternTransitive, static_cast<int>(i),
                                       static_cast<int>(k), -1,
                                       "path through " + std::to_string(j) + " fills a structural zero"});
          break;
        }
      }
    }
  }

  report.passed = report.violations.empty();
  return report;
}

RealMatrix monomial_conjugate(const RealMatrix& b, const RealMatrix& l, const ToleranceConfig& cfg) {
  require_square_finite(b, "monomial_conjugate");
  require_square_finite(l, "monomial_conjugate");
  cfg.validate();
  if (b.rows() != l.rows()) throw Error(ErrorKind::InvalidInput, "dimension mismatch");
  const auto n = l.rows();

  std::vector<Eigen::Index> column(static_cast<std::size_t>(n), -1);
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double v = l(i, j);
      if (v < -cfg.entry_tol) throw Error(ErrorKind::NotMonomial, "negative entry");
      if (v <= cfg.entry_tol) continue;
      if (column[static_cast<std::size_t>(i)] >= 0 || used[static_cast<std::size_t>(j)]) {
        throw Error(ErrorKind::NotMonomial, "more than one nonzero in a row or column");
      }
      column[static_cast<std::size_t>(i)] = j;
      used[static_cast<std::size_t>(j)] = true;
    }
    if (column[static_cast<std::size_t>(i)] < 0) throw Error(ErrorKind::NotMonomial, "empty row");
  }

  RealMatrix exact = RealMatrix::Zero(n, n);
  RealMatrix inverse = RealMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index j = column[static_cast<std::size_t>(i)];
    exact(i, j) = l(i, j);
    inverse(j, i) = 1.0 / l(i, j);
  }
  return inverse * b * exact;
}

}  // namespace embedlab
