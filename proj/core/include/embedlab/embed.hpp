#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "embedlab/numkit.hpp"
#include "embedlab/types.hpp"

namespace embedlab {

// ---------------------------------------------------------------------------
// Branch windows

enum class BoundMode {
  IsraelTwoSided,   // |Arg l + 2 pi k| <= -log det
  PaperOneSided,    // log det <= Arg l + 2 pi k <= 0
  Theorem4General,  // nonnegative-matrix window derived from the Perron root
};

std::string_view to_string(BoundMode mode) noexcept;
std::optional<BoundMode> parse_bound_mode(std::string_view text) noexcept;

/// Admissible logarithm offsets per eigenvalue. The window applies to the
/// imaginary part of each candidate logarithm eigenvalue, Arg(l_j) + 2 pi k.
struct BranchBound {
  BoundMode mode = BoundMode::IsraelTwoSided;
  double im_low = 0.0;
  double im_high = 0.0;
  int perron_index = -1;  // forced to offset 0; -1 when no real positive leading eigenvalue
  std::vector<std::vector<int>> admissible;  // per eigenvalue, ordered by |k| then k
  std::vector<int> per_eigenvalue_counts;
  std::uint64_t raw_tuple_count = 0;         // saturates at UINT64_MAX
};

/// Throws Error(SingularDeterminant) unless det is finite and strictly positive.
BranchBound branch_bound(const Eigendecomposition& e, double det, BoundMode mode);

/// Runnenberg's cone for an n x n intensity matrix: every nonzero eigenvalue
/// has argument in [pi (1/2 + 1/n), pi (3/2 - 1/n)].
bool runnenberg_admits(Complex eigenvalue, int n);

// ---------------------------------------------------------------------------
// Candidate logarithms

struct Candidate {
  BranchSelection selection;
  RealMatrix log;  // real logarithm of the source matrix on this branch
};

/// Walks every branch selection inside the bound whose assembled logarithm is
/// real. Conjugate pairs carry opposite offsets, real eigenvalues offset 0,
/// and repeated clusters a single shared offset (primary logarithms only).
/// Order is lexicographic in (|k|, k), so the principal branch comes first.
class GeneratorEnumerator {
 public:
  GeneratorEnumerator(Eigendecomposition e, BranchBound bound, ToleranceConfig cfg = {});

  std::optional<Candidate> next();

  /// Selections that survive the offset-level reality filter.
  std::uint64_t real_selection_count() const { return real_count_; }
  /// Selections dropped because the assembled matrix was numerically complex.
  const std::vector<BranchSelection>& rejected_nonreal() const { return rejected_; }

 private:
  struct Slot {
    std::vector<int> members;
    std::vector<int> partners;  // conjugate members receiving -k; empty when self-conjugate
    std::vector<int> choices;
  };

  Eigendecomposition e_;
  ToleranceConfig cfg_;
  std::vector<Slot> slots_;
  std::vector<std::size_t> cursor_;
  std::uint64_t real_count_ = 0;
  bool exhausted_ = false;
  std::vector<BranchSelection> rejected_;
};

std::vector<Candidate> enumerate_generators(const Eigendecomposition& e, const BranchBound& bound,
                                            const ToleranceConfig& cfg = {});

// ---------------------------------------------------------------------------
// Verdicts

enum class EmbedVerdict { Embeddable, NotEmbeddable, Undetermined };
enum class DivisibilityVerdict { StronglyInfDivisible, NotStronglyInfDivisible, Undetermined };

std::string_view to_string(EmbedVerdict v) noexcept;
std::string_view to_string(DivisibilityVerdict v) noexcept;

struct FailedCondition {
  std::string name;
  std::string detail;
  int row = -1;
  int col = -1;
};

/// Why one branch candidate was rejected.
struct BranchFailure {
  BranchSelection selection;
  std::string reason;
  int row = -1;
  int col = -1;
  double value = 0.0;
  bool borderline = false;  // missed the slack by less than a factor of ten
};

struct EmbedOptions {
  BoundMode mode = BoundMode::IsraelTwoSided;
  bool allow_perturb = true;
};

struct EmbeddabilityReport {
  EmbedVerdict verdict = EmbedVerdict::Undetermined;
  std::optional<RealMatrix> generator;
  int branches_examined = 0;
  std::vector<FailedCondition> failed_conditions;
  std::vector<BranchFailure> branch_failures;
  bool perturbed = false;
  std::optional<RealMatrix> perturbed_input;  // the matrix the witness belongs to
  BranchBound bound_used;
  std::string method;  // which route decided the verdict
};

EmbeddabilityReport check_embeddable(const RealMatrix& p, const ToleranceConfig& cfg = {},
                                     const EmbedOptions& opts = {});

struct DemonstratedRoot {
  int order = 0;
  RealMatrix root;
  double reconstruction_error = 0.0;  // relative, root^order vs source
  bool nonnegative = false;
};

struct DivisibilityOptions {
  BoundMode mode = BoundMode::Theorem4General;
  std::vector<int> roots{2, 3, 5};
  bool allow_perturb = true;
  bool recurse = true;
};

struct DivisibilityReport {
  DivisibilityVerdict verdict = DivisibilityVerdict::Undetermined;
  std::optional<RealMatrix> z_matrix;  // Q with exp(-Q) == B
  std::vector<DemonstratedRoot> roots_demonstrated;
  std::vector<DivisibilityReport> recursion;  // trailing submatrices U^(1), U^(2), ...
  int branches_examined = 0;
  std::vector<FailedCondition> failed_conditions;
  std::vector<BranchFailure> branch_failures;
  bool perturbed = false;
  std::optional<RealMatrix> perturbed_input;
  BranchBound bound_used;
  std::string method;
};

DivisibilityReport check_strong_inf_divisible(const RealMatrix& b, const ToleranceConfig& cfg = {},
                                              const DivisibilityOptions& opts = {});

// ---------------------------------------------------------------------------
// Inverse M-matrix forms

/// P = (1 - eps)^m (I - eps H)^-m with H stochastic; W is the M-matrix
/// primary m-th root of P^-1.
struct InverseMPowerForm {
  double epsilon = 0.0;
  RealMatrix h;
  RealMatrix w;
};

std::optional<InverseMPowerForm> inverse_m_power_form(const RealMatrix& p, int m,
                                                      const ToleranceConfig& cfg = {});

/// Nonnegative analogue: K in IM with K^m == B, if the primary root is one.
std::optional<RealMatrix> inverse_m_root(const RealMatrix& b, int m, const ToleranceConfig& cfg = {});

struct ImRoot {
  int n = 0;
  RealMatrix root;  // exp(-G / n), an M-matrix; its inverse is P^(1/n) in IM
};

inline constexpr int kDefaultImRootCeiling = 1 << 20;

/// Smallest n found (doubling from `n`, then bisection) such that the n-th
/// root of P^-1 along the generator's branch is an M-matrix. Requires every
/// off-diagonal of the generator to be strictly positive.
ImRoot im_root_approx(const RealMatrix& p, const RealMatrix& generator, int n,
                      const ToleranceConfig& cfg = {}, int n_max = kDefaultImRootCeiling);

}  // namespace embedlab
