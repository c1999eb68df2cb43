#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "embedlab/embed.hpp"
#include "embedlab/error.hpp"

namespace embedlab {

std::string_view to_string(BoundMode mode) noexcept {
  switch (mode) {
    case BoundMode::IsraelTwoSided: return "israel_two_sided";
    case BoundMode::PaperOneSided: return "paper_one_sided";
    case BoundMode::Theorem4General: return "theorem4_general";
  }
  return "unknown";
}

std::optional<BoundMode> parse_bound_mode(std::string_view text) noexcept {
  // short forms are what the CLI advertises
  if (text == "israel" || text == "israel_two_sided") return BoundMode::IsraelTwoSided;
  if (text == "paper" || text == "paper_one_sided") return BoundMode::PaperOneSided;
  if (text == "general" || text == "theorem4_general") return BoundMode::Theorem4General;
  return std::nullopt;
}

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double principal_arg(const Eigendecomposition& e, int i) {
  const Complex v = e.eigenvalues[static_cast<std::size_t>(i)];
  return e.is_real(i) ? std::arg(Complex(v.real(), 0.0)) : std::arg(v);
}

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  if (a > std::numeric_limits<std::uint64_t>::max() / b) return std::numeric_limits<std::uint64_t>::max();
  return a * b;
}

}  // namespace

BranchBound branch_bound(const Eigendecomposition& e, double det, BoundMode mode) {
  if (!std::isfinite(det) || !(det > 0.0)) {
    throw Error(ErrorKind::SingularDeterminant, "branch windows need a strictly positive determinant");
  }
  const int n = e.size();
  const double log_det = std::log(det);

  BranchBound bound;
  bound.mode = mode;
  switch (mode) {
    case BoundMode::IsraelTwoSided: {
      const double b = std::abs(log_det);
      bound.im_low = -b;
      bound.im_high = b;
      break;
    }
    case BoundMode::PaperOneSided:
      bound.im_low = std::min(log_det, 0.0);
      bound.im_high = 0.0;
      break;
    case BoundMode::Theorem4General: {
      // For the Perron eigenvector of theta*I - Q the paired eigenvalue of Q is
      // -log rho(B). The window |l (n-1) - log det| only holds for
      // rho(B) <= 1; n log rho(B) - log det bounds theta - l in general.
      const double rho = n > 0 ? std::abs(e.eigenvalues.front()) : 1.0;
      const double lambda = -std::log(rho);
      const double shifted = std::abs(lambda * (n - 1) - log_det);
      const double perron = std::max(0.0, -n * lambda - log_det);
      const double b = std::max(shifted, perron);
      bound.im_low = -b;
      bound.im_high = b;
      break;
    }
  }

  if (n > 0 && e.is_real(0) && e.eigenvalues.front().real() > 0.0) bound.perron_index = 0;

  const double slack = 1e-9 * (1.0 + std::max(std::abs(bound.im_low), std::abs(bound.im_high)));
  bound.raw_tuple_count = 1;
  for (int i = 0; i < n; ++i) {
    std::vector<int> ks;
    if (i == bound.perron_index) {
      ks.push_back(0);
    } else {
      const double arg = principal_arg(e, i);
      const auto kmin = static_cast<long>(std::ceil((bound.im_low - slack - arg) / kTwoPi));
      const auto kmax = static_cast<long>(std::floor((bound.im_high + slack - arg) / kTwoPi));
      for (long k = kmin; k <= kmax; ++k) ks.push_back(static_cast<int>(k));
      std::sort(ks.begin(), ks.end(), [](int a, int b) {
        return std::abs(a) != std::abs(b) ? std::abs(a) < std::abs(b) : a < b;
      });
    }
    bound.per_eigenvalue_counts.push_back(static_cast<int>(ks.size()));
    bound.raw_tuple_count = saturating_mul(bound.raw_tuple_count, ks.size());
    bound.admissible.push_back(std::move(ks));
  }
  return bound;
}

bool runnenberg_admits(Complex eigenvalue, int n) {
  if (n < 2 || std::abs(eigenvalue) <= 1e-8) return true;
  double angle = std::atan2(eigenvalue.imag(), eigenvalue.real());
  if (angle < 0.0) angle += kTwoPi;
  const double slack = 1e-7;
  const double lo = std::numbers::pi * (0.5 + 1.0 / n);
  const double hi = std::numbers::pi * (1.5 - 1.0 / n);
  return angle >= lo - slack && angle <= hi + slack;
}

}  // namespace embedlab
