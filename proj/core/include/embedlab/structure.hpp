#pragma once

#include <string>
#include <vector>

#include "embedlab/types.hpp"

namespace embedlab {

/// Frobenius normal form U = L^T B L with L a permutation matrix. U is block
/// upper triangular and every diagonal block has a strongly connected
/// zero pattern (or is 1x1).
struct StructureDecomposition {
  std::vector<int> permutation;  // permutation[k] = original index placed at position k
  std::vector<int> block_sizes;
  RealMatrix upper;               // U
  std::vector<RealMatrix> diagonal_blocks;

  int block_count() const { return static_cast<int>(block_sizes.size()); }
  RealMatrix permutation_matrix() const;  // L
  RealMatrix reconstruct() const;         // L U L^T, an exact entry permutation
};

StructureDecomposition frobenius_form(const RealMatrix& b, const ToleranceConfig& cfg = {});

/// U^(n): U with its first n diagonal blocks removed from the top rows and
/// left columns. n == block_count() yields a 0x0 matrix.
RealMatrix trailing_submatrix(const StructureDecomposition& d, int n);

struct PatternViolation {
  int row = 0;
  int col = 0;
  int power = 0;
  friend bool operator==(const PatternViolation&, const PatternViolation&) = default;
};

/// Off-diagonal structural zeros of B must stay zero in every power of
/// theta*I - Q. Throws Error(NotAValidPair) if exp(-Q) does not reproduce B.
std::vector<PatternViolation> zero_pattern_invariance(const RealMatrix& b, const RealMatrix& q,
                                                      const ToleranceConfig& cfg = {});

namespace condition {
inline constexpr const char* kPositiveDiagonal = "positive_diagonal";
inline constexpr const char* kIrreducibleImpliesPositive = "irreducible_implies_positive";
inline constexpr const char* kDiagonalBlocksPositive = "diagonal_blocks_positive";
inline constexpr const char* kTrailingSubmatrices = "trailing_submatrices_recursive";
inline constexpr const char* kZeroPatternTransitive = "zero_pattern_transitive";
}  // namespace condition

struct ConditionViolation {
  std::string condition;
  int row = -1;    // original indices, -1 when not applicable
  int col = -1;
  int block = -1;  // Frobenius block / trailing level, -1 when not applicable
  std::string detail;
};

struct NecessaryConditionReport {
  bool passed = true;
  std::vector<ConditionViolation> violations;
  std::vector<std::string> conditions_checked;
};

/// Logarithm-free necessary conditions for strong infinite divisibility.
NecessaryConditionReport necessary_conditions(const RealMatrix& b, const ToleranceConfig& cfg = {});

/// L^-1 B L for a monomial L with strictly positive nonzeros; the inverse is
/// formed exactly from the pattern. Throws Error(NotMonomial).
RealMatrix monomial_conjugate(const RealMatrix& b, const RealMatrix& l, const ToleranceConfig& cfg = {});

}  // namespace embedlab
