#pragma once

// Random instance generators and independent oracles shared by the test
// binaries. Oracles here deliberately avoid the code paths they check.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "embedlab/types.hpp"

namespace testkit {

using embedlab::RealMatrix;
using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

inline int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

/// Off-diagonal rates U(lo, hi), each kept with probability `density`.
inline RealMatrix random_intensity(Rng& rng, int n, double lo = 0.05, double hi = 1.0, double density = 1.0) {
  RealMatrix r = RealMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j && uniform(rng, 0.0, 1.0) < density) r(i, j) = uniform(rng, lo, hi);
    }
    r(i, i) = -r.row(i).sum();
  }
  return r;
}

/// Unrestricted Z-matrix: nonpositive off-diagonals, diagonal of either sign.
inline RealMatrix random_z(Rng& rng, int n, double density = 1.0) {
  RealMatrix q(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      q(i, j) = i == j ? uniform(rng, 0.0, 2.0) : (uniform(rng, 0.0, 1.0) < density ? -uniform(rng, 0.0, 1.0) : 0.0);
    }
  }
  return q;
}

inline RealMatrix random_nonnegative(Rng& rng, int n, double density = 1.0) {
  RealMatrix k(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) k(i, j) = uniform(rng, 0.0, 1.0) < density ? uniform(rng, 0.0, 1.0) : 0.0;
  }
  return k;
}

inline double spectral_radius(const RealMatrix& a) { return a.eigenvalues().cwiseAbs().maxCoeff(); }

/// alpha I - K with alpha a margin above rho(K).
inline RealMatrix random_m_matrix(Rng& rng, int n, double margin = 0.1) {
  const RealMatrix k = random_nonnegative(rng, n);
  const double alpha = spectral_radius(k) + margin + uniform(rng, 0.0, 1.0);
  return alpha * RealMatrix::Identity(n, n) - k;
}

inline RealMatrix random_permutation(Rng& rng, int n) {
  std::vector<int> p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 0);
  std::shuffle(p.begin(), p.end(), rng);
  RealMatrix l = RealMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) l(i, p[static_cast<std::size_t>(i)]) = 1.0;
  return l;
}

/// Positive diagonal times permutation.
inline RealMatrix random_monomial(Rng& rng, int n) {
  RealMatrix d = RealMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) d(i, i) = uniform(rng, 0.2, 3.0);
  return d * random_permutation(rng, n);
}

inline double min_eigen_gap(const RealMatrix& a) {
  const Eigen::VectorXcd ev = a.eigenvalues();
  double gap = INFINITY;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    for (Eigen::Index j = i + 1; j < ev.size(); ++j) gap = std::min(gap, std::abs(ev(i) - ev(j)));
  }
  return gap;
}

inline double rel_err(const RealMatrix& a, const RealMatrix& b) { return (a - b).norm() / std::max(b.norm(), 1e-300); }

// ---------------------------------------------------------------------------
// Oracles

/// Eigen's own scaling-and-squaring exponential (unsupported module).
inline RealMatrix oracle_expm(const RealMatrix& a) { return a.exp(); }

/// exp of t*[[-a, a], [b, -b]] in closed form: I + (1 - e^{-(a+b)t})/(a+b) R.
inline RealMatrix oracle_expm_2state(double a, double b, double t = 1.0) {
  RealMatrix r(2, 2);
  r << -a, a, b, -b;
  return RealMatrix::Identity(2, 2) + (1.0 - std::exp(-(a + b) * t)) / (a + b) * r;
}

/// Principal log of [[1-a, a], [b, 1-b]]: log(1-a-b)/(-(a+b)) * (P - I).
inline RealMatrix oracle_log_2state(double a, double b) {
  RealMatrix r(2, 2);
  r << -a, a, b, -b;
  return -std::log(1.0 - a - b) / (a + b) * r;
}

/// Parlett recurrence for the principal log of an upper-triangular matrix
/// with distinct positive diagonal. Derived from F T = T F.
inline RealMatrix oracle_log_triangular(const RealMatrix& t) {
  const auto n = t.rows();
  RealMatrix f = RealMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) f(i, i) = std::log(t(i, i));
  for (Eigen::Index d = 1; d < n; ++d) {
    for (Eigen::Index i = 0; i + d < n; ++i) {
      const Eigen::Index j = i + d;
      double s = t(i, j) * (f(j, j) - f(i, i));
      for (Eigen::Index k = i + 1; k < j; ++k) s += t(i, k) * f(k, j) - f(i, k) * t(k, j);
      f(i, j) = s / (t(j, j) - t(i, i));
    }
  }
  return f;
}

/// Number of integers k with lo <= arg + 2 pi k <= hi, by plain scan.
inline int oracle_branch_count(double arg, double lo, double hi) {
  int count = 0;
  for (int k = -1000; k <= 1000; ++k) {
    const double v = arg + 2.0 * M_PI * k;
    if (v >= lo - 1e-9 && v <= hi + 1e-9) ++count;
  }
  return count;
}

/// Reachability closure by Floyd-Warshall on the pattern |a_ij| > tol.
inline std::vector<std::vector<bool>> oracle_reach(const RealMatrix& a, double tol) {
  const auto n = static_cast<std::size_t>(a.rows());
  std::vector<std::vector<bool>> r(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) {
    r[i][i] = true;
    for (std::size_t j = 0; j < n; ++j) {
      if (std::abs(a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))) > tol) r[i][j] = true;
    }
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (r[i][k] && r[k][j]) r[i][j] = true;
  return r;
}

inline bool oracle_irreducible(const RealMatrix& a, double tol) {
  const auto r = oracle_reach(a, tol);
  for (const auto& row : r)
    for (bool b : row)
      if (!b) return false;
  return true;
}

inline RealMatrix matrix_power(const RealMatrix& a, int n) {
  RealMatrix out = RealMatrix::Identity(a.rows(), a.cols());
  for (int i = 0; i < n; ++i) out = out * a;
  return out;
}

}  // namespace testkit
