#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "embedlab/types.hpp"

namespace embedlab {

enum class MatrixClass {
  Nonnegative,
  StrictlyPositive,
  PositiveDiagonal,
  Stochastic,
  ZMatrix,
  IntensityMatrix,
  MMatrix,
  InverseMMatrix,
  Irreducible,
  Nonsingular,
};

inline constexpr std::array kAllClasses{
    MatrixClass::Nonnegative,  MatrixClass::StrictlyPositive, MatrixClass::PositiveDiagonal,
    MatrixClass::Stochastic,   MatrixClass::ZMatrix,          MatrixClass::IntensityMatrix,
    MatrixClass::MMatrix,      MatrixClass::InverseMMatrix,   MatrixClass::Irreducible,
    MatrixClass::Nonsingular,
};

std::string_view to_string(MatrixClass c) noexcept;

/// Why a flag came out the way it did: an offending index pair, a short note,
/// or (for the inverse-based flags) the inverse that was inspected.
struct Witness {
  std::optional<std::pair<int, int>> index;
  std::string note;
  std::optional<RealMatrix> certificate;
};

struct ClassReport {
  std::array<bool, kAllClasses.size()> flags{};
  std::array<Witness, kAllClasses.size()> witnesses{};
  double det = 0.0;
  double spectral_radius = 0.0;

  bool operator[](MatrixClass c) const { return flags[static_cast<std::size_t>(c)]; }
  const Witness& witness(MatrixClass c) const { return witnesses[static_cast<std::size_t>(c)]; }
};

ClassReport classify_matrix(const RealMatrix& a, const ToleranceConfig& cfg = {});

/// Nonnegative eigenvector of a Z-matrix, obtained as the Perron pair of
/// theta*I - Q. The returned eigenvalue is the smallest real eigenvalue of Q.
struct NonnegEigenpair {
  RealVector vector;  // ||v||_1 == 1, entries >= -entry_tol
  double eigenvalue = 0.0;
};

NonnegEigenpair nonneg_eigvec_of_z(const RealMatrix& q, const ToleranceConfig& cfg = {});

// Single-flag predicates used throughout the decision pipeline.
bool is_nonnegative(const RealMatrix& a, const ToleranceConfig& cfg = {});
bool is_stochastic(const RealMatrix& a, const ToleranceConfig& cfg = {});
bool is_z_matrix(const RealMatrix& a, const ToleranceConfig& cfg = {});
bool is_intensity_matrix(const RealMatrix& a, const ToleranceConfig& cfg = {});
bool is_irreducible(const RealMatrix& a, const ToleranceConfig& cfg = {});

/// Structural zero test shared by every pattern-based decision.
inline bool structurally_nonzero(double v, const ToleranceConfig& cfg) { return std::abs(v) > cfg.entry_tol; }

}  // namespace embedlab
