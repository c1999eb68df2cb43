#pragma once

#include <complex>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace embedlab {

using Complex = std::complex<double>;
using RealMatrix = Eigen::MatrixXd;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

/// Slack used by every tolerance-aware decision in the library. Verdicts are
/// only reproducible for a fixed config, so nothing adapts these silently.
struct ToleranceConfig {
  double entry_tol = 1e-9;      // entrywise sign / structural-zero slack
  double recon_tol = 1e-8;      // relative reconstruction error
  double distinct_tol = 1e-7;   // eigenvalue gap below which values count as repeated
  double perturb_scale = 1e-6;  // perturbation budget, relative to 1 + ||A||
  double cond_ceiling = 1e12;   // eigenbasis condition number above which eig is unusable

  /// Throws Error(InvalidInput) unless every field is strictly positive.
  void validate() const;
};

/// One integer offset per eigenvalue (canonical eig order). Offset k selects
/// Log(lambda) + 2*pi*i*k for that eigenvalue.
struct BranchSelection {
  std::vector<int> offsets;

  static BranchSelection principal(int n) { return {std::vector<int>(static_cast<std::size_t>(n), 0)}; }
  bool is_principal() const;
  friend bool operator==(const BranchSelection&, const BranchSelection&) = default;
};

/// Semantic version of the library build, e.g. "0.3.0".
std::string_view library_version() noexcept;

/// Throws Error(InvalidInput) for non-square, empty or non-finite input.
void require_square_finite(const RealMatrix& a, std::string_view what);

}  // namespace embedlab
