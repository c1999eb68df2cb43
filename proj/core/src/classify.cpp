#include "embedlab/classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "embedlab/error.hpp"
#include "embedlab/numkit.hpp"
#include "graph.hpp"

namespace embedlab {

std::string_view to_string(MatrixClass c) noexcept {
  switch (c) {
    case MatrixClass::Nonnegative: return "nonnegative";
    case MatrixClass::StrictlyPositive: return "strictly_positive";
    case MatrixClass::PositiveDiagonal: return "positive_diagonal";
    case MatrixClass::Stochastic: return "stochastic";
    case MatrixClass::ZMatrix: return "z_matrix";
    case MatrixClass::IntensityMatrix: return "intensity_matrix";
    case MatrixClass::MMatrix: return "m_matrix";
    case MatrixClass::InverseMMatrix: return "inverse_m_matrix";
    case MatrixClass::Irreducible: return "irreducible";
    case MatrixClass::Nonsingular: return "nonsingular";
  }
  return "unknown";
}

namespace {

using Index = std::optional<std::pair<int, int>>;

// First (row-major) index failing `ok`, if any.
template <typename Pred>
Index first_violation(const RealMatrix& a, Pred ok) {
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      if (!ok(static_cast<int>(i), static_cast<int>(j), a(i, j))) {
        return std::pair{static_cast<int>(i), static_cast<int>(j)};
      }
    }
  }
  return std::nullopt;
}

Index row_sum_violation(const RealMatrix& a, double target, double slack) {
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    if (std::abs(a.row(i).sum() - target) > slack) return std::pair{static_cast<int>(i), -1};
  }
  return std::nullopt;
}

Index z_violation(const RealMatrix& a, double tol) {
  return first_violation(a, [tol](int i, int j, double v) { return i == j || v <= tol; });
}

Index irreducibility_violation(const RealMatrix& a, const ToleranceConfig& cfg) {
  const auto pattern = detail::off_diagonal_pattern(a, cfg.entry_tol);
  const auto fwd = detail::reachable_from(pattern, 0, false);
  for (std::size_t j = 0; j < fwd.size(); ++j) {
    if (!fwd[j]) return std::pair{0, static_cast<int>(j)};
  }
  const auto bwd = detail::reachable_from(pattern, 0, true);
  for (std::size_t i = 0; i < bwd.size(); ++i) {
    if (!bwd[i]) return std::pair{static_cast<int>(i), 0};
  }
  return std::nullopt;
}

double hadamard_bound(const RealMatrix& a) {
  double bound = 1.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) bound *= a.row(i).norm();
  return bound;
}

}  // namespace

bool is_nonnegative(const RealMatrix& a, const ToleranceConfig& cfg) {
  return a.minCoeff() >= -cfg.entry_tol;
}

bool is_stochastic(const RealMatrix& a, const ToleranceConfig& cfg) {
  return is_nonnegative(a, cfg) &&
         !row_sum_violation(a, 1.0, static_cast<double>(a.rows()) * cfg.entry_tol);
}

bool is_z_matrix(const RealMatrix& a, const ToleranceConfig& cfg) {
  return !z_violation(a, cfg.entry_tol);
}

bool is_intensity_matrix(const RealMatrix& a, const ToleranceConfig& cfg) {
  const double tol = cfg.entry_tol;
  return !first_violation(a, [tol](int i, int j, double v) { return i == j || v >= -tol; }) &&
         !row_sum_violation(a, 0.0, static_cast<double>(a.rows()) * tol);
}

bool is_irreducible(const RealMatrix& a, const ToleranceConfig& cfg) {
  return !irreducibility_violation(a, cfg);
}

ClassReport classify_matrix(const RealMatrix& a, const ToleranceConfig& cfg) {
  require_square_finite(a, "classify_matrix");
  cfg.validate();
  const int n = static_cast<int>(a.rows());
  const double tol = cfg.entry_tol;
  const double row_slack = n * tol;

  ClassReport report;
  auto set = [&report](MatrixClass c, bool value, Witness w = {}) {
    report.flags[static_cast<std::size_t>(c)] = value;
    report.witnesses[static_cast<std::size_t>(c)] = std::move(w);
  };
  auto from_index = [](Index idx, std::string note) {
    return Witness{idx, idx ? std::move(note) : std::string{}, std::nullopt};
  };

  const Index negative = first_violation(a, [tol](int, int, double v) { return v >= -tol; });
  set(MatrixClass::Nonnegative, !negative, from_index(negative, "negative entry"));

  const Index nonpositive = first_violation(a, [tol](int, int, double v) { return v > tol; });
  set(MatrixClass::StrictlyPositive, !nonpositive, from_index(nonpositive, "entry not strictly positive"));

  const Index bad_diag = first_violation(a, [tol](int i, int j, double v) { return i != j || v > tol; });
  set(MatrixClass::PositiveDiagonal, !bad_diag, from_index(bad_diag, "diagonal entry not strictly positive"));

  if (negative) {
    set(MatrixClass::Stochastic, false, from_index(negative, "negative entry"));
  } else {
    const Index bad_row = row_sum_violation(a, 1.0, row_slack);
    set(MatrixClass::Stochastic, !bad_row, from_index(bad_row, "row sum differs from 1"));
  }

  const Index positive_off = z_violation(a, tol);
  set(MatrixClass::ZMatrix, !positive_off, from_index(positive_off, "positive off-diagonal entry"));

  const Index negative_off =
      first_violation(a, [tol](int i, int j, double v) { return i == j || v >= -tol; });
  if (negative_off) {
    set(MatrixClass::IntensityMatrix, false, from_index(negative_off, "negative off-diagonal entry"));
  } else {
    const Index bad_row = row_sum_violation(a, 0.0, row_slack);
    set(MatrixClass::IntensityMatrix, !bad_row, from_index(bad_row, "row sum differs from 0"));
  }

  const Index reducible = irreducibility_violation(a, cfg);
  set(MatrixClass::Irreducible, !reducible,
      from_index(reducible, "column index unreachable from row index in the zero-pattern graph"));

  Eigen::PartialPivLU<RealMatrix> lu(a);
  report.det = lu.determinant();
  const bool nonsingular =
      std::isfinite(report.det) && std::abs(report.det) > numerical_zero(n, hadamard_bound(a));
  set(MatrixClass::Nonsingular, nonsingular,
      nonsingular ? Witness{} : Witness{std::nullopt, "singular", std::nullopt});

  report.spectral_radius = a.eigenvalues().cwiseAbs().maxCoeff();

  if (!nonsingular) {
    const Witness singular{std::nullopt, "singular", std::nullopt};
    set(MatrixClass::MMatrix, false, singular);
    set(MatrixClass::InverseMMatrix, false, singular);
    return report;
  }

  const RealMatrix inv = lu.inverse();
  const double inv_tol = tol * (1.0 + inv.cwiseAbs().maxCoeff());

  if (positive_off) {
    set(MatrixClass::MMatrix, false, from_index(positive_off, "positive off-diagonal entry"));
  } else {
    const Index neg_inv = first_violation(inv, [inv_tol](int, int, double v) { return v >= -inv_tol; });
    set(MatrixClass::MMatrix, !neg_inv,
        Witness{neg_inv, neg_inv ? "inverse has a negative entry" : "", inv});
  }

  if (negative) {
    set(MatrixClass::InverseMMatrix, false, from_index(negative, "negative entry"));
  } else {
    const Index pos_inv = z_violation(inv, inv_tol);
    set(MatrixClass::InverseMMatrix, !pos_inv,
        Witness{pos_inv, pos_inv ? "inverse has a positive off-diagonal entry" : "", inv});
  }
  return report;
}

NonnegEigenpair nonneg_eigvec_of_z(const RealMatrix& q, const ToleranceConfig& cfg) {
  require_square_finite(q, "nonneg_eigvec_of_z");
  cfg.validate();
  if (!is_z_matrix(q, cfg)) throw Error(ErrorKind::NotZMatrix, "input has positive off-diagonal entries");
  const auto n = q.rows();

  const double theta = q.diagonal().maxCoeff() + q.cwiseAbs().rowwise().sum().maxCoeff() + 1.0;
  RealMatrix shifted = theta * RealMatrix::Identity(n, n) - q;
  shifted = shifted.cwiseMax(0.0);  // sub-tolerance negatives are pattern noise

  const double rho = shifted.eigenvalues().real().maxCoeff();

  // (sigma I - N)^-1 is entrywise nonnegative for sigma > rho(N), so shifted
  // inverse iteration from a positive start never leaves the cone.
  const double sigma = rho + 1e-10 * (1.0 + rho);
  const Eigen::PartialPivLU<RealMatrix> lu(sigma * RealMatrix::Identity(n, n) - shifted);
  RealVector v = RealVector::Constant(n, 1.0 / static_cast<double>(n));
  for (int it = 0; it < 8; ++it) {
    v = lu.solve(v).cwiseMax(0.0);
    const double s = v.sum();
    if (!(s > 0.0) || !std::isfinite(s)) {
      throw Error(ErrorKind::IllConditioned, "nonneg_eigvec_of_z: inverse iteration broke down");
    }
    v /= s;
  }
  return {v, theta - rho};
}

}  // namespace embedlab
