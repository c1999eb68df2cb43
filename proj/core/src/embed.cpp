#include "embedlab/embed.hpp"

#include <cmath>
#include <functional>
#include <numbers>

#include "embedlab/classify.hpp"
#include "embedlab/error.hpp"
#include "embedlab/structure.hpp"

namespace embedlab {

std::string_view to_string(EmbedVerdict v) noexcept {
  switch (v) {
    case EmbedVerdict::Embeddable: return "Embeddable";
    case EmbedVerdict::NotEmbeddable: return "NotEmbeddable";
    case EmbedVerdict::Undetermined: return "Undetermined";
  }
  return "Unknown";
}

std::string_view to_string(DivisibilityVerdict v) noexcept {
  switch (v) {
    case DivisibilityVerdict::StronglyInfDivisible: return "StronglyInfDivisible";
    case DivisibilityVerdict::NotStronglyInfDivisible: return "NotStronglyInfDivisible";
    case DivisibilityVerdict::Undetermined: return "Undetermined";
  }
  return "Unknown";
}

namespace {

// nullopt means the candidate was accepted.
using Acceptor = std::function<std::optional<BranchFailure>(const Candidate&)>;

struct SearchResult {
  std::optional<Candidate> accepted;
  int examined = 0;
  std::vector<BranchFailure> failures;
};

SearchResult search(const Eigendecomposition& e, const BranchBound& bound, const ToleranceConfig& cfg,
                    const Acceptor& accept) {
  GeneratorEnumerator it(e, bound, cfg);
  SearchResult r;
  while (auto c = it.next()) {
    ++r.examined;
    if (auto failure = accept(*c)) {
      r.failures.push_back(std::move(*failure));
    } else {
      r.accepted = std::move(*c);
      break;
    }
  }
  for (const auto& sel : it.rejected_nonreal()) {
    r.failures.push_back({sel, "assembled logarithm is not real"});
  }
  return r;
}

std::optional<BranchFailure> check_off_diagonal(const Candidate& c, const ToleranceConfig& cfg,
                                                const char* reason) {
  const auto& g = c.log;
  int row = -1;
  int col = -1;
  double worst = 0.0;
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    for (Eigen::Index j = 0; j < g.cols(); ++j) {
      if (i != j && g(i, j) < worst) {
        worst = g(i, j);
        row = static_cast<int>(i);
        col = static_cast<int>(j);
      }
    }
  }
  if (worst < -cfg.entry_tol) {
    return BranchFailure{c.selection, reason, row, col, worst, worst >= -10.0 * cfg.entry_tol};
  }
  return std::nullopt;
}

std::optional<BranchFailure> check_row_sums(const Candidate& c, const ToleranceConfig& cfg) {
  const RealVector sums = c.log.rowwise().sum();
  Eigen::Index row = 0;
  const double worst = sums.cwiseAbs().maxCoeff(&row);
  const double slack = static_cast<double>(c.log.rows()) * cfg.entry_tol;
  if (worst > slack) {
    return BranchFailure{c.selection, "row sum of candidate is not zero", static_cast<int>(row), -1,
                         sums(row), worst <= 10.0 * slack};
  }
  return std::nullopt;
}

std::optional<BranchFailure> check_reconstruction(const Candidate& c, const RealMatrix& target,
                                                  const ToleranceConfig& cfg, double sign) {
  try {
    const double err = relative_error(expm(sign * c.log), target);
    if (!(err <= cfg.recon_tol)) {
      return BranchFailure{c.selection, "exponential does not reproduce the input", -1, -1, err, false};
    }
  } catch (const Error& err) {
    return BranchFailure{c.selection, err.what()};
  }
  return std::nullopt;
}

std::optional<BranchFailure> check_runnenberg(const Candidate& c, const Eigendecomposition& e) {
  const int n = e.size();
  for (int i = 0; i < n; ++i) {
    const Complex lambda = e.eigenvalues[static_cast<std::size_t>(i)];
    const Complex base = e.is_real(i) ? Complex(lambda.real(), 0.0) : lambda;
    const Complex mu = std::log(base) +
                       Complex(0.0, 2.0 * std::numbers::pi * c.selection.offsets[static_cast<std::size_t>(i)]);
    if (!runnenberg_admits(mu, n)) {
      return BranchFailure{c.selection, "eigenvalue outside Runnenberg's cone", i, -1, std::arg(mu), false};
    }
  }
  return std::nullopt;
}

double determinant_floor(const RealMatrix& a) {
  double bound = 1.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) bound *= a.row(i).norm();
  return numerical_zero(static_cast<int>(a.rows()), bound);
}

// Every repeated eigenvalue real and carried by a single Jordan block. Then
// all logarithms are primary functions and only the principal one is real.
bool nonderogatory_real_spectrum(const RealMatrix& a, const Eigendecomposition& e, const ToleranceConfig& cfg) {
  const int n = e.size();
  for (const Complex& v : e.eigenvalues) {
    if (std::abs(v.imag()) >= cfg.distinct_tol) return false;
  }
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (int i = 0; i < n; ++i) {
    const int c = e.cluster[static_cast<std::size_t>(i)];
    if (seen[static_cast<std::size_t>(i)]) continue;
    double sum = 0.0;
    int size = 0;
    for (int j = i; j < n; ++j) {
      if (e.cluster[static_cast<std::size_t>(j)] == c) {
        seen[static_cast<std::size_t>(j)] = true;
        sum += e.eigenvalues[static_cast<std::size_t>(j)].real();
        ++size;
      }
    }
    if (size < 2) continue;
    Eigen::FullPivLU<RealMatrix> lu(a - (sum / size) * RealMatrix::Identity(n, n));
    lu.setThreshold(cfg.distinct_tol);
    if (lu.rank() != n - 1) return false;
  }
  return true;
}

std::vector<FailedCondition> from_violations(const NecessaryConditionReport& nc) {
  std::vector<FailedCondition> out;
  for (const auto& v : nc.violations) {
    std::string detail = v.detail;
    if (v.block >= 0) detail += " (block " + std::to_string(v.block) + ")";
    out.push_back({v.condition, detail, v.row, v.col});
  }
  return out;
}

std::optional<FailedCondition> empty_window(const BranchBound& bound) {
  for (std::size_t i = 0; i < bound.per_eigenvalue_counts.size(); ++i) {
    if (bound.per_eigenvalue_counts[i] == 0) {
      return FailedCondition{"branch_window_empty",
                             "no logarithm of eigenvalue " + std::to_string(i) + " fits the " +
                                 std::string(to_string(bound.mode)) + " window",
                             static_cast<int>(i), -1};
    }
  }
  return std::nullopt;
}

/// Shared decision pipeline once the class-specific preconditions hold.
/// `Report` is EmbeddabilityReport or DivisibilityReport.
template <typename Report, typename Verdict>
void decide(const RealMatrix& a, double det, BoundMode mode, bool allow_perturb, const ToleranceConfig& cfg,
            const std::function<Acceptor(const Eigendecomposition&, const RealMatrix&)>& make_acceptor,
            Verdict positive, Verdict negative, Report& report, std::optional<Candidate>& accepted) {
  const Eigendecomposition e = eig(a, cfg);
  report.bound_used = branch_bound(e, det, mode);

  // A logarithm eigenvalue outside the window rules out every logarithm,
  // primary or not, so this verdict is exact even with repeated eigenvalues.
  if (mode != BoundMode::PaperOneSided) {
    if (auto f = empty_window(report.bound_used)) {
      report.verdict = negative;
      report.failed_conditions.push_back(*f);
      report.method = "branch_window";
      return;
    }
  }

  if (!e.ill_conditioned()) {
    SearchResult r = search(e, report.bound_used, cfg, make_acceptor(e, a));
    report.branches_examined = r.examined;
    report.branch_failures = std::move(r.failures);
    report.method = "branch_enumeration";
    if (r.accepted) {
      report.verdict = positive;
      accepted = std::move(r.accepted);
    } else {
      report.verdict = negative;
      if (auto f = empty_window(report.bound_used)) report.failed_conditions.push_back(*f);
      report.failed_conditions.push_back({"no_admissible_branch", "every admissible branch was rejected"});
    }
    return;
  }

  if (e.repeated && !e.basis_ill_conditioned) {
    SearchResult r = search(e, report.bound_used, cfg, make_acceptor(e, a));
    report.branches_examined = r.examined;
    report.branch_failures = std::move(r.failures);
    if (r.accepted) {
      report.verdict = positive;
      report.method = "primary_branch_enumeration";
      accepted = std::move(r.accepted);
      return;
    }
  }

  if (nonderogatory_real_spectrum(a, e, cfg)) {
    report.method = "principal_logarithm";
    try {
      Candidate c{BranchSelection::principal(e.size()), logm_principal(a, cfg)};
      ++report.branches_examined;
      if (auto failure = make_acceptor(e, a)(c)) {
        report.branch_failures.push_back(std::move(*failure));
        report.verdict = negative;
        report.failed_conditions.push_back(
            {"principal_logarithm_rejected", "single-Jordan-block spectrum admits only the principal logarithm"});
      } else {
        report.verdict = positive;
        accepted = std::move(c);
      }
    } catch (const Error& err) {
      if (err.kind() != ErrorKind::NegativeRealEigenvalue) throw;
      report.verdict = negative;
      report.failed_conditions.push_back(
          {"no_real_logarithm", "negative eigenvalue in a single Jordan block has no real logarithm"});
    }
    return;
  }

  report.verdict = Verdict::Undetermined;
  report.method = "perturbation";
  report.failed_conditions.push_back(
      {"repeated_eigenvalues", "non-primary logarithms exist and are not enumerated"});
  if (!allow_perturb) return;

  RealMatrix perturbed;
  try {
    perturbed = perturb_distinct(a, cfg);
  } catch (const Error& err) {
    report.failed_conditions.push_back({"perturbation_failed", err.what()});
    return;
  }
  report.perturbed = true;
  report.perturbed_input = perturbed;
  const Eigendecomposition ep = eig(perturbed, cfg);
  const double det_p = perturbed.partialPivLu().determinant();
  if (ep.ill_conditioned() || !(det_p > 0.0)) {
    report.failed_conditions.push_back({"perturbation_failed", "perturbed matrix still ill-conditioned"});
    return;
  }
  SearchResult r = search(ep, branch_bound(ep, det_p, mode), cfg, make_acceptor(ep, perturbed));
  report.branches_examined += r.examined;
  if (r.accepted) {
    accepted = std::move(r.accepted);
    report.failed_conditions.push_back(
        {"witness_for_perturbed_input", "a generator exists for the perturbed matrix only"});
  } else {
    report.failed_conditions.push_back(
        {"perturbed_search_negative", "no admissible branch for the perturbed matrix either"});
  }
}

RealMatrix matrix_power(RealMatrix base, int exponent) {
  RealMatrix result = RealMatrix::Identity(base.rows(), base.cols());
  while (exponent > 0) {
    if (exponent & 1) result = result * base;
    exponent >>= 1;
    if (exponent > 0) base = base * base;
  }
  return result;
}

}  // namespace

EmbeddabilityReport check_embeddable(const RealMatrix& p, const ToleranceConfig& cfg, const EmbedOptions& opts) {
  require_square_finite(p, "check_embeddable");
  cfg.validate();
  if (!is_stochastic(p, cfg)) throw Error(ErrorKind::NotStochastic, "check_embeddable needs a stochastic matrix");
  const int n = static_cast<int>(p.rows());

  EmbeddabilityReport report;
  report.bound_used.mode = opts.mode;
  const double det = p.partialPivLu().determinant();
  if (det <= determinant_floor(p)) {
    report.verdict = EmbedVerdict::NotEmbeddable;
    report.method = "determinant";
    report.failed_conditions.push_back(
        {det < -determinant_floor(p) ? "det_negative" : "singular", "det = " + std::to_string(det)});
    return report;
  }
  if (det <= cfg.entry_tol) {
    report.verdict = EmbedVerdict::Undetermined;
    report.method = "determinant";
    report.failed_conditions.push_back({"det_near_zero", "det = " + std::to_string(det) + " within entry_tol"});
    return report;
  }

  const NecessaryConditionReport nc = necessary_conditions(p, cfg);
  if (!nc.passed) {
    report.verdict = EmbedVerdict::NotEmbeddable;
    report.method = "necessary_conditions";
    report.failed_conditions = from_violations(nc);
    return report;
  }

  auto make_acceptor = [&cfg, n](const Eigendecomposition& e, const RealMatrix& target) -> Acceptor {
    return [&cfg, n, e, target](const Candidate& c) -> std::optional<BranchFailure> {
      (void)n;
      if (auto f = check_runnenberg(c, e)) return f;
      if (auto f = check_off_diagonal(c, cfg, "negative off-diagonal entry in candidate generator")) return f;
      if (auto f = check_row_sums(c, cfg)) return f;
      return check_reconstruction(c, target, cfg, 1.0);
    };
  };

  std::optional<Candidate> accepted;
  try {
    decide(p, det, opts.mode, opts.allow_perturb, cfg, make_acceptor, EmbedVerdict::Embeddable,
           EmbedVerdict::NotEmbeddable, report, accepted);
  } catch (const Error& err) {
    report.verdict = EmbedVerdict::Undetermined;
    report.failed_conditions.push_back({"numerical_error", err.what()});
    return report;
  }
  if (accepted) report.generator = std::move(accepted->log);
  return report;
}

DivisibilityReport check_strong_inf_divisible(const RealMatrix& b, const ToleranceConfig& cfg,
                                              const DivisibilityOptions& opts) {
  require_square_finite(b, "check_strong_inf_divisible");
  cfg.validate();
  if (!is_nonnegative(b, cfg)) throw Error(ErrorKind::NotNonnegative, "input has negative entries");
  for (int order : opts.roots) {
    if (order < 1) throw Error(ErrorKind::InvalidInput, "root orders must be >= 1");
  }

  DivisibilityReport report;
  report.bound_used.mode = opts.mode;
  const double det = b.partialPivLu().determinant();
  if (det <= determinant_floor(b)) {
    report.verdict = DivisibilityVerdict::NotStronglyInfDivisible;
    report.method = "determinant";
    report.failed_conditions.push_back({"det_nonpositive", "det = " + std::to_string(det)});
    return report;
  }

  const NecessaryConditionReport nc = necessary_conditions(b, cfg);
  if (!nc.passed) {
    report.verdict = DivisibilityVerdict::NotStronglyInfDivisible;
    report.method = "necessary_conditions";
    report.failed_conditions = from_violations(nc);
    return report;
  }

  auto make_acceptor = [&cfg](const Eigendecomposition&, const RealMatrix& target) -> Acceptor {
    return [&cfg, target](const Candidate& c) -> std::optional<BranchFailure> {
      if (auto f = check_off_diagonal(c, cfg, "candidate -log has a positive off-diagonal entry")) return f;
      return check_reconstruction(c, target, cfg, 1.0);
    };
  };

  std::optional<Candidate> accepted;
  try {
    decide(b, det, opts.mode, opts.allow_perturb, cfg, make_acceptor,
           DivisibilityVerdict::StronglyInfDivisible, DivisibilityVerdict::NotStronglyInfDivisible, report,
           accepted);
  } catch (const Error& err) {
    report.verdict = DivisibilityVerdict::Undetermined;
    report.failed_conditions.push_back({"numerical_error", err.what()});
    return report;
  }
  if (!accepted) return report;

  if (report.verdict != DivisibilityVerdict::StronglyInfDivisible) {
    report.z_matrix = -accepted->log;  // witness for the perturbed input
    return report;
  }
  report.z_matrix = -accepted->log;

  for (int order : opts.roots) {
    DemonstratedRoot root;
    root.order = order;
    root.root = expm(accepted->log / static_cast<double>(order));
    root.nonnegative = root.root.minCoeff() >= -cfg.entry_tol;
    root.reconstruction_error = relative_error(matrix_power(root.root, order), b);
    report.roots_demonstrated.push_back(std::move(root));
  }

  if (opts.recurse) {
    const StructureDecomposition d = frobenius_form(b, cfg);
    DivisibilityOptions inner = opts;
    inner.recurse = false;
    for (int level = 1; level < d.block_count(); ++level) {
      report.recursion.push_back(check_strong_inf_divisible(trailing_submatrix(d, level), cfg, inner));
    }
  }
  return report;
}

}  // namespace embedlab
