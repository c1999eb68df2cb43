#include "embedlab/numkit.hpp"

#include <algorithm>
#include <array>
#include <cfloat>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

#include "embedlab/error.hpp"

namespace embedlab {

void ToleranceConfig::validate() const {
  const std::array<std::pair<const char*, double>, 5> fields{{
      {"entry_tol", entry_tol},
      {"recon_tol", recon_tol},
      {"distinct_tol", distinct_tol},
      {"perturb_scale", perturb_scale},
      {"cond_ceiling", cond_ceiling},
  }};
  for (const auto& [name, value] : fields) {
    if (!(value > 0.0) || !std::isfinite(value)) {
      throw Error(ErrorKind::InvalidInput, std::string(name) + " must be finite and > 0");
    }
  }
}

bool BranchSelection::is_principal() const {
  return std::all_of(offsets.begin(), offsets.end(), [](int k) { return k == 0; });
}

std::string_view library_version() noexcept { return EMBEDLAB_VERSION_STRING; }

void require_square_finite(const RealMatrix& a, std::string_view what) {
  if (a.rows() == 0 || a.rows() != a.cols()) {
    throw Error(ErrorKind::InvalidInput, std::string(what) + ": matrix must be square and non-empty");
  }
  if (!a.allFinite()) {
    throw Error(ErrorKind::InvalidInput, std::string(what) + ": matrix has non-finite entries");
  }
}

double numerical_zero(int n, double scale) {
  return 64.0 * n * DBL_EPSILON * std::max(scale, 0.0);
}

double relative_error(const RealMatrix& a, const RealMatrix& b) {
  const double diff = (a - b).norm();
  const double ref = b.norm();
  return ref > 0.0 ? diff / ref : diff;
}

namespace {

// Real eigenvalues come back from the solver with an exact zero imaginary
// part; normalise the sign of that zero so std::log picks +i*pi on the
// negative axis consistently.
Complex canonical(Complex z, bool real) { return real ? Complex(z.real(), 0.0) : z; }

struct Unit {
  std::vector<int> members;  // solver indices, negative-imaginary member first
  Complex key;
};

int find_root(std::vector<int>& parent, int i) {
  while (parent[static_cast<std::size_t>(i)] != i) {
    parent[static_cast<std::size_t>(i)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(i)])];
    i = parent[static_cast<std::size_t>(i)];
  }
  return i;
}

}  // namespace

Eigendecomposition eig(const RealMatrix& a, const ToleranceConfig& cfg) {
  require_square_finite(a, "eig");
  cfg.validate();
  const int n = static_cast<int>(a.rows());

  Eigen::EigenSolver<RealMatrix> solver(a, true);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::IllConditioned, "eigenvalue iteration did not converge");
  }
  const Eigen::VectorXcd raw_values = solver.eigenvalues();
  const ComplexMatrix raw_vectors = solver.eigenvectors();

  std::vector<Unit> units;
  double max_modulus = 0.0;
  for (int i = 0; i < n;) {
    const Complex v = raw_values(i);
    max_modulus = std::max(max_modulus, std::abs(v));
    if (v.imag() == 0.0 || i + 1 == n) {
      units.push_back({{i}, canonical(v, true)});
      ++i;
    } else {
      const int neg = v.imag() < 0.0 ? i : i + 1;
      const int pos = neg == i ? i + 1 : i;
      units.push_back({{neg, pos}, raw_values(neg)});
      i += 2;
    }
  }

  const double tie = 1e-12 * (1.0 + max_modulus);
  std::stable_sort(units.begin(), units.end(), [tie](const Unit& x, const Unit& y) {
    const double mx = std::abs(x.key);
    const double my = std::abs(y.key);
    if (std::abs(mx - my) > tie) return mx > my;
    if (std::abs(x.key.real() - y.key.real()) > tie) return x.key.real() > y.key.real();
    return x.key.imag() < y.key.imag();
  });

  Eigendecomposition out;
  out.eigenvalues.reserve(static_cast<std::size_t>(n));
  out.right_eigenvectors.resize(n, n);
  out.conjugate_partner.assign(static_cast<std::size_t>(n), -1);
  out.source_norm = a.norm();

  int col = 0;
  for (const Unit& u : units) {
    Eigen::VectorXcd v = raw_vectors.col(u.members.front());
    const double norm = v.norm();
    if (norm > 0.0) v /= norm;
    if (u.members.size() == 1) {
      out.eigenvalues.push_back(u.key);
      out.right_eigenvectors.col(col) = v;
      ++col;
    } else {
      out.eigenvalues.push_back(u.key);
      out.eigenvalues.push_back(std::conj(u.key));
      out.right_eigenvectors.col(col) = v;
      out.right_eigenvectors.col(col + 1) = v.conjugate();
      out.conjugate_partner[static_cast<std::size_t>(col)] = col + 1;
      out.conjugate_partner[static_cast<std::size_t>(col + 1)] = col;
      col += 2;
    }
  }

  out.min_pairwise_gap = std::numeric_limits<double>::infinity();
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double gap = std::abs(out.eigenvalues[static_cast<std::size_t>(i)] -
                                  out.eigenvalues[static_cast<std::size_t>(j)]);
      out.min_pairwise_gap = std::min(out.min_pairwise_gap, gap);
      if (gap < cfg.distinct_tol) {
        parent[static_cast<std::size_t>(find_root(parent, i))] = find_root(parent, j);
      }
    }
  }
  out.cluster.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out.cluster[static_cast<std::size_t>(i)] = find_root(parent, i);
  out.repeated = out.min_pairwise_gap < cfg.distinct_tol;

  Eigen::FullPivLU<ComplexMatrix> lu(out.right_eigenvectors);
  if (lu.isInvertible()) {
    out.inverse_basis = lu.inverse();
    Eigen::JacobiSVD<ComplexMatrix> svd(out.right_eigenvectors);
    const auto& sv = svd.singularValues();
    const double smin = sv(sv.size() - 1);
    out.basis_condition = smin > 0.0 ? sv(0) / smin : std::numeric_limits<double>::infinity();

    Eigen::VectorXcd lambda(n);
    for (int i = 0; i < n; ++i) lambda(i) = out.eigenvalues[static_cast<std::size_t>(i)];
    const ComplexMatrix rebuilt =
        out.right_eigenvectors * lambda.asDiagonal() * out.inverse_basis;
    const double diff = (a.cast<Complex>() - rebuilt).norm();
    out.residual = out.source_norm > 0.0 ? diff / out.source_norm : diff;
  } else {
    out.inverse_basis = ComplexMatrix::Zero(n, n);
    out.basis_condition = std::numeric_limits<double>::infinity();
    out.residual = std::numeric_limits<double>::infinity();
  }
  out.basis_ill_conditioned = !(out.basis_condition <= cfg.cond_ceiling) || !(out.residual <= cfg.recon_tol);
  return out;
}

void require_well_conditioned(const Eigendecomposition& e) {
  if (e.repeated) {
    throw Error(ErrorKind::IllConditioned,
                "eigenvalue gap " + std::to_string(e.min_pairwise_gap) + " below distinct_tol");
  }
  if (e.basis_ill_conditioned) {
    throw Error(ErrorKind::IllConditioned,
                "eigenbasis condition " + std::to_string(e.basis_condition) + " above ceiling");
  }
}

// ---------------------------------------------------------------------------
// Matrix exponential

namespace {

double norm1(const RealMatrix& a) { return a.cwiseAbs().colwise().sum().maxCoeff(); }

RealMatrix pade_solve(const RealMatrix& u, const RealMatrix& v) {
  return (v - u).partialPivLu().solve(v + u);
}

template <std::size_t N>
RealMatrix pade_low(const RealMatrix& a, const std::array<double, N>& b) {
  const auto n = a.rows();
  const RealMatrix ident = RealMatrix::Identity(n, n);
  const RealMatrix a2 = a * a;
  RealMatrix power = ident;
  RealMatrix u_inner = RealMatrix::Zero(n, n);
  RealMatrix v = RealMatrix::Zero(n, n);
  for (std::size_t k = 0; k < N; k += 2) {
    v += b[k] * power;
    if (k + 1 < N) u_inner += b[k + 1] * power;
    power = power * a2;
  }
  return pade_solve(a * u_inner, v);
}

}  // namespace

RealMatrix expm(const RealMatrix& a) {
  require_square_finite(a, "expm");
  const auto n = a.rows();

  static constexpr std::array<double, 4> b3{120.0, 60.0, 12.0, 1.0};
  static constexpr std::array<double, 6> b5{30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
  static constexpr std::array<double, 8> b7{17297280.0, 8648640.0, 1995840.0, 277200.0,
                                            25200.0,    1512.0,    56.0,      1.0};
  static constexpr std::array<double, 10> b9{17643225600.0, 8821612800.0, 2075673600.0,
                                             302702400.0,   30270240.0,   2162160.0,
                                             110880.0,      3960.0,       90.0,
                                             1.0};
  static constexpr std::array<double, 14> b13{
      64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
      129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
      1323241920.0,        40840800.0,          960960.0,           16380.0,
      182.0,               1.0};
  static constexpr std::array<double, 5> theta{1.495585217958292e-2, 2.539398330063230e-1,
                                               9.504178996162932e-1, 2.097847961257068e0,
                                               5.371920351148152e0};

  const double anorm = norm1(a);
  RealMatrix result;
  if (anorm <= theta[0]) {
    result = pade_low(a, b3);
  } else if (anorm <= theta[1]) {
    result = pade_low(a, b5);
  } else if (anorm <= theta[2]) {
    result = pade_low(a, b7);
  } else if (anorm <= theta[3]) {
    result = pade_low(a, b9);
  } else {
    const int squarings = anorm <= theta[4]
                              ? 0
                              : static_cast<int>(std::ceil(std::log2(anorm / theta[4])));
    if (squarings > 1020) {
      throw Error(ErrorKind::Overflow, "matrix norm too large for exponentiation");
    }
    const RealMatrix s = a * std::ldexp(1.0, -squarings);
    const RealMatrix ident = RealMatrix::Identity(n, n);
    const RealMatrix s2 = s * s;
    const RealMatrix s4 = s2 * s2;
    const RealMatrix s6 = s4 * s2;
    const RealMatrix u = s * (s6 * (b13[13] * s6 + b13[11] * s4 + b13[9] * s2) + b13[7] * s6 +
                              b13[5] * s4 + b13[3] * s2 + b13[1] * ident);
    const RealMatrix v = s6 * (b13[12] * s6 + b13[10] * s4 + b13[8] * s2) + b13[6] * s6 +
                         b13[4] * s4 + b13[2] * s2 + b13[0] * ident;
    result = pade_solve(u, v);
    for (int k = 0; k < squarings; ++k) result = result * result;
  }
  if (!result.allFinite()) {
    throw Error(ErrorKind::Overflow, "matrix exponential overflowed");
  }
  return result;
}

// ---------------------------------------------------------------------------
// Logarithms and roots

ComplexMatrix logm_branch(const Eigendecomposition& e, const BranchSelection& sel,
                          const ToleranceConfig& cfg) {
  cfg.validate();
  const int n = e.size();
  if (static_cast<int>(sel.offsets.size()) != n) {
    throw Error(ErrorKind::InvalidInput, "branch selection length does not match dimension");
  }
  const double zero = numerical_zero(n, e.source_norm);
  for (int i = 0; i < n; ++i) {
    if (std::abs(e.eigenvalues[static_cast<std::size_t>(i)]) <= zero) {
      throw Error(ErrorKind::SingularMatrix, "zero eigenvalue at index " + std::to_string(i));
    }
  }
  if (e.repeated) {
    if (e.basis_ill_conditioned) {
      throw Error(ErrorKind::RepeatedEigenvalues,
                  "repeated eigenvalues with a defective basis; perturb first");
    }
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (e.cluster[static_cast<std::size_t>(i)] == e.cluster[static_cast<std::size_t>(j)] &&
            sel.offsets[static_cast<std::size_t>(i)] != sel.offsets[static_cast<std::size_t>(j)]) {
          throw Error(ErrorKind::RepeatedEigenvalues,
                      "offsets differ inside a repeated-eigenvalue cluster");
        }
      }
    }
  } else if (e.basis_ill_conditioned) {
    throw Error(ErrorKind::IllConditioned, "eigenbasis too ill-conditioned for a logarithm");
  }

  Eigen::VectorXcd mu(n);
  for (int i = 0; i < n; ++i) {
    const Complex lambda = canonical(e.eigenvalues[static_cast<std::size_t>(i)], e.is_real(i));
    mu(i) = std::log(lambda) +
            Complex(0.0, 2.0 * std::numbers::pi * sel.offsets[static_cast<std::size_t>(i)]);
  }
  return e.right_eigenvectors * mu.asDiagonal() * e.inverse_basis;
}

namespace {

void require_principal_domain(const RealMatrix& a, const char* what) {
  const int n = static_cast<int>(a.rows());
  const Eigen::VectorXcd values = a.eigenvalues();
  const double zero = numerical_zero(n, a.norm());
  for (int i = 0; i < n; ++i) {
    const Complex v = values(i);
    if (std::abs(v) <= zero) {
      throw Error(ErrorKind::SingularMatrix, std::string(what) + ": zero eigenvalue");
    }
    if (v.imag() == 0.0 && v.real() < 0.0) {
      throw Error(ErrorKind::NegativeRealEigenvalue,
                  std::string(what) + ": eigenvalue on the negative real axis");
    }
  }
}

}  // namespace

RealMatrix logm_principal(const RealMatrix& a, const ToleranceConfig& cfg) {
  require_square_finite(a, "logm_principal");
  cfg.validate();
  require_principal_domain(a, "logm_principal");
  RealMatrix out = a.log();
  if (!out.allFinite()) {
    throw Error(ErrorKind::IllConditioned, "logm_principal: non-finite result");
  }
  return out;
}

double reality_threshold(const ComplexMatrix& z, const ToleranceConfig& cfg) {
  const double re_norm = z.real().cwiseAbs().rowwise().sum().maxCoeff();
  return static_cast<double>(z.rows()) * cfg.entry_tol * (1.0 + re_norm);
}

std::optional<RealMatrix> real_if_real(const ComplexMatrix& z, const ToleranceConfig& cfg) {
  if (z.size() == 0) return RealMatrix(z.rows(), z.cols());
  if (z.imag().cwiseAbs().maxCoeff() <= reality_threshold(z, cfg)) {
    return RealMatrix(z.real());
  }
  return std::nullopt;
}

RealMatrix primary_root(const RealMatrix& a, int n, const ToleranceConfig& cfg) {
  require_square_finite(a, "primary_root");
  cfg.validate();
  if (n < 1) throw Error(ErrorKind::InvalidInput, "primary_root: order must be >= 1");
  if (n == 1) return a;

  const Eigendecomposition e = eig(a, cfg);
  const double zero = numerical_zero(e.size(), e.source_norm);
  for (int i = 0; i < e.size(); ++i) {
    const Complex v = e.eigenvalues[static_cast<std::size_t>(i)];
    if (std::abs(v) <= zero) throw Error(ErrorKind::SingularMatrix, "primary_root: zero eigenvalue");
    if (e.is_real(i) && v.real() < 0.0) {
      throw Error(ErrorKind::NegativeRealEigenvalue, "primary_root: root is not real");
    }
  }

  if (!e.ill_conditioned()) {
    Eigen::VectorXcd d(e.size());
    for (int i = 0; i < e.size(); ++i) {
      d(i) = std::exp(std::log(canonical(e.eigenvalues[static_cast<std::size_t>(i)], e.is_real(i))) /
                      static_cast<double>(n));
    }
    const ComplexMatrix z = e.right_eigenvectors * d.asDiagonal() * e.inverse_basis;
    if (auto r = real_if_real(z, cfg)) return *r;
  }

  // Repeated or near-defective spectrum: Schur-Pade fractional power.
  Eigen::MatrixPower<RealMatrix> power(a);
  RealMatrix root = power(1.0 / static_cast<double>(n));
  if (!root.allFinite()) throw Error(ErrorKind::IllConditioned, "primary_root: non-finite result");
  return root;
}

// ---------------------------------------------------------------------------
// Perturbation

namespace {

bool looks_stochastic(const RealMatrix& a, const ToleranceConfig& cfg) {
  const double n = static_cast<double>(a.rows());
  if (a.minCoeff() < -cfg.entry_tol) return false;
  const RealVector sums = a.rowwise().sum();
  return (sums.array() - 1.0).abs().maxCoeff() <= n * cfg.entry_tol;
}

double norm_inf(const RealMatrix& a) { return a.cwiseAbs().rowwise().sum().maxCoeff(); }

}  // namespace

RealMatrix perturb_distinct(const RealMatrix& a, const ToleranceConfig& cfg, const PerturbOptions& opts) {
  require_square_finite(a, "perturb_distinct");
  cfg.validate();
  if (!eig(a, cfg).ill_conditioned()) return a;

  const int n = static_cast<int>(a.rows());
  const bool stochastic = opts.keep_stochastic.value_or(looks_stochastic(a, cfg));
  const double budget = cfg.perturb_scale * (1.0 + norm_inf(a));
  const double quarter = budget / 4.0;

  auto in_pattern = [&](const RealMatrix& m, int i, int j) { return std::abs(m(i, j)) > cfg.entry_tol; };

  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);

  for (int attempt = 0; attempt < opts.max_attempts; ++attempt) {
    RealMatrix p = a;
    std::vector<int> rank(static_cast<std::size_t>(n));
    std::iota(rank.begin(), rank.end(), 0);
    std::shuffle(rank.begin(), rank.end(), rng);

    for (int i = 0; i < n; ++i) {
      int comp = -1;
      if (stochastic) {
        Eigen::Index arg = 0;
        const double row_max = a.row(i).maxCoeff(&arg);
        comp = (in_pattern(a, i, i) && a(i, i) >= 0.5 * row_max) ? i : static_cast<int>(arg);
      }
      int free_count = 0;
      for (int j = 0; j < n; ++j) {
        if (j != comp && j != i && in_pattern(a, i, j)) ++free_count;
      }
      double shifted = 0.0;
      for (int j = 0; j < n; ++j) {
        if (j == comp || !in_pattern(a, i, j)) continue;
        double delta = 0.0;
        if (j == i) {
          // stratified diagonal shift keeps diagonal values apart
          const double slot = -1.0 + (2.0 * rank[static_cast<std::size_t>(i)] + 1.0) / n;
          delta = quarter * (slot + unit(rng) / (4.0 * n));
          delta = std::clamp(delta, -0.5 * std::abs(a(i, i)), 0.5 * std::abs(a(i, i)));
        } else {
          const double cap = std::min(quarter / std::max(free_count, 1), 0.5 * std::abs(a(i, j)));
          delta = unit(rng) * cap;
        }
        p(i, j) += delta;
        shifted += delta;
      }
      if (comp >= 0) p(i, comp) -= shifted;
    }

    bool ok = norm_inf(p - a) <= budget;
    for (int i = 0; ok && i < n; ++i) {
      for (int j = 0; ok && j < n; ++j) {
        ok = in_pattern(p, i, j) == in_pattern(a, i, j);
        if (ok && stochastic) ok = p(i, j) >= 0.0;
      }
    }
    if (!ok) continue;
    if (!eig(p, cfg).ill_conditioned()) return p;
  }
  throw Error(ErrorKind::PerturbationFailed,
              "no pattern-preserving perturbation separated the eigenvalues after " +
                  std::to_string(opts.max_attempts) + " attempts");
}

}  // namespace embedlab
