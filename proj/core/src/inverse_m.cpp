#include <cmath>

#include "embedlab/classify.hpp"
#include "embedlab/embed.hpp"
#include "embedlab/error.hpp"

namespace embedlab {

namespace {

RealMatrix inverse_or_throw(const RealMatrix& a, const char* what) {
  Eigen::FullPivLU<RealMatrix> lu(a);
  double bound = 1.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) bound *= a.row(i).norm();
  if (!lu.isInvertible() || std::abs(lu.determinant()) <= numerical_zero(static_cast<int>(a.rows()), bound)) {
    throw Error(ErrorKind::SingularMatrix, std::string(what) + ": matrix is singular");
  }
  return lu.inverse();
}

RealMatrix matrix_power(RealMatrix base, int exponent) {
  RealMatrix result = RealMatrix::Identity(base.rows(), base.cols());
  for (; exponent > 0; exponent >>= 1) {
    if (exponent & 1) result = result * base;
    if (exponent > 1) base = base * base;
  }
  return result;
}

// exp(-G/n) is a Z-matrix whose inverse exp(G/n) is nonnegative.
bool root_is_m_matrix(const RealMatrix& generator, int n, const ToleranceConfig& cfg) {
  const RealMatrix root = expm(-generator / static_cast<double>(n));
  if (!is_z_matrix(root, cfg)) return false;
  return expm(generator / static_cast<double>(n)).minCoeff() >= -cfg.entry_tol;
}

}  // namespace

std::optional<InverseMPowerForm> inverse_m_power_form(const RealMatrix& p, int m, const ToleranceConfig& cfg) {
  require_square_finite(p, "inverse_m_power_form");
  cfg.validate();
  if (m < 1) throw Error(ErrorKind::InvalidInput, "inverse_m_power_form: m must be >= 1");
  if (!is_stochastic(p, cfg)) throw Error(ErrorKind::NotStochastic, "inverse_m_power_form needs a stochastic matrix");
  const Eigen::Index n = p.rows();
  const RealMatrix identity = RealMatrix::Identity(n, n);

  const RealMatrix inv = inverse_or_throw(p, "inverse_m_power_form");
  if ((p - identity).cwiseAbs().maxCoeff() <= cfg.entry_tol) {
    return InverseMPowerForm{0.0, identity, identity};
  }

  const RealMatrix w = primary_root(inv, m, cfg);
  if (!is_z_matrix(w, cfg)) return std::nullopt;
  const double s = w.diagonal().maxCoeff();
  if (!(s > 1.0 + cfg.entry_tol)) return std::nullopt;

  RealMatrix h = (s * identity - w) / (s - 1.0);
  if (!is_stochastic(h, cfg)) return std::nullopt;
  const double eps = (s - 1.0) / s;

  // W is an M-matrix exactly when its inverse P^(1/m) is nonnegative.
  const RealMatrix w_inv = inverse_or_throw(w, "inverse_m_power_form");
  if (w_inv.minCoeff() < -cfg.entry_tol) return std::nullopt;

  const RealMatrix rebuilt =
      std::pow(1.0 - eps, m) * matrix_power(inverse_or_throw(identity - eps * h, "inverse_m_power_form"), m);
  if (!(relative_error(rebuilt, p) <= cfg.recon_tol)) return std::nullopt;
  return InverseMPowerForm{eps, std::move(h), w};
}

std::optional<RealMatrix> inverse_m_root(const RealMatrix& b, int m, const ToleranceConfig& cfg) {
  require_square_finite(b, "inverse_m_root");
  cfg.validate();
  if (m < 1) throw Error(ErrorKind::InvalidInput, "inverse_m_root: m must be >= 1");
  if (!is_nonnegative(b, cfg)) throw Error(ErrorKind::NotNonnegative, "inverse_m_root needs a nonnegative matrix");
  inverse_or_throw(b, "inverse_m_root");

  RealMatrix k = primary_root(b, m, cfg);
  if (k.minCoeff() < -cfg.entry_tol) return std::nullopt;
  if (!is_z_matrix(inverse_or_throw(k, "inverse_m_root"), cfg)) return std::nullopt;
  if (!(relative_error(matrix_power(k, m), b) <= cfg.recon_tol)) return std::nullopt;
  return k;
}

ImRoot im_root_approx(const RealMatrix& p, const RealMatrix& generator, int n, const ToleranceConfig& cfg,
                      int n_max) {
  require_square_finite(p, "im_root_approx");
  require_square_finite(generator, "im_root_approx");
  cfg.validate();
  if (p.rows() != generator.rows()) throw Error(ErrorKind::InvalidInput, "im_root_approx: size mismatch");
  if (n < 1 || n_max < n) throw Error(ErrorKind::InvalidInput, "im_root_approx: need 1 <= n <= n_max");

  for (Eigen::Index i = 0; i < generator.rows(); ++i) {
    for (Eigen::Index j = 0; j < generator.cols(); ++j) {
      if (i != j && !(generator(i, j) > cfg.entry_tol)) {
        throw Error(ErrorKind::OffDiagonalZeros, "generator entry (" + std::to_string(i) + "," +
                                                     std::to_string(j) + ") is not strictly positive");
      }
    }
  }
  if (!(relative_error(expm(generator), p) <= cfg.recon_tol)) {
    throw Error(ErrorKind::NotAValidPair, "exp(generator) does not reproduce P");
  }

  if (root_is_m_matrix(generator, n, cfg)) return ImRoot{n, expm(-generator / static_cast<double>(n))};

  // Doubling until the test passes, then bisect back between the last
  // failure and the first success.
  long lo = n;
  long hi = n;
  while (true) {
    hi = std::min<long>(2 * hi, n_max);
    if (root_is_m_matrix(generator, static_cast<int>(hi), cfg)) break;
    if (hi == n_max) {
      throw Error(ErrorKind::OutOfRange, "no M-matrix root up to n_max = " + std::to_string(n_max));
    }
    lo = hi;
  }
  while (hi - lo > 1) {
    const long mid = lo + (hi - lo) / 2;
    (root_is_m_matrix(generator, static_cast<int>(mid), cfg) ? hi : lo) = mid;
  }
  return ImRoot{static_cast<int>(hi), expm(-generator / static_cast<double>(hi))};
}

}  // namespace embedlab
