#include <algorithm>
#include <limits>
#include <map>

#include "embedlab/embed.hpp"
#include "embedlab/error.hpp"

namespace embedlab {

namespace {

bool admits(const BranchBound& bound, int index, int k) {
  const auto& ks = bound.admissible[static_cast<std::size_t>(index)];
  return std::find(ks.begin(), ks.end(), k) != ks.end();
}

}  // namespace

GeneratorEnumerator::GeneratorEnumerator(Eigendecomposition e, BranchBound bound, ToleranceConfig cfg)
    : e_(std::move(e)), cfg_(cfg) {
  cfg_.validate();
  const int n = e_.size();
  if (static_cast<int>(bound.admissible.size()) != n) {
    throw Error(ErrorKind::InvalidInput, "branch bound does not match the decomposition");
  }
  if (e_.basis_ill_conditioned) {
    throw Error(e_.repeated ? ErrorKind::RepeatedEigenvalues : ErrorKind::IllConditioned,
                "eigenbasis unusable for branch enumeration; perturb first");
  }
  const double zero = numerical_zero(n, e_.source_norm);
  for (int i = 0; i < n; ++i) {
    if (std::abs(e_.eigenvalues[static_cast<std::size_t>(i)]) <= zero) {
      throw Error(ErrorKind::SingularMatrix, "zero eigenvalue at index " + std::to_string(i));
    }
  }

  std::map<int, std::vector<int>> by_cluster;
  std::vector<int> cluster_order;
  for (int i = 0; i < n; ++i) {
    const int c = e_.cluster[static_cast<std::size_t>(i)];
    if (by_cluster.find(c) == by_cluster.end()) cluster_order.push_back(c);
    by_cluster[c].push_back(i);
  }

  std::vector<bool> done(static_cast<std::size_t>(n), false);
  for (int c : cluster_order) {
    const auto& members = by_cluster[c];
    if (done[static_cast<std::size_t>(members.front())]) continue;
    for (int i : members) done[static_cast<std::size_t>(i)] = true;

    Slot slot;
    slot.members = members;
    const int partner = e_.conjugate_partner[static_cast<std::size_t>(members.front())];
    const bool self_conjugate =
        partner < 0 || e_.cluster[static_cast<std::size_t>(partner)] == c ||
        std::any_of(members.begin(), members.end(), [this](int i) { return e_.is_real(i); });

    if (self_conjugate) {
      // Only offset 0 keeps a self-conjugate cluster real, and a negative real
      // eigenvalue has no real primary logarithm at all.
      const bool negative_real = std::any_of(members.begin(), members.end(), [this](int i) {
        return e_.is_real(i) && e_.eigenvalues[static_cast<std::size_t>(i)].real() < 0.0;
      });
      const bool zero_ok = std::all_of(members.begin(), members.end(),
                                       [&bound](int i) { return admits(bound, i, 0); });
      if (!negative_real && zero_ok) slot.choices.push_back(0);
    } else {
      slot.partners = by_cluster[e_.cluster[static_cast<std::size_t>(partner)]];
      for (int i : slot.partners) done[static_cast<std::size_t>(i)] = true;
      for (int k : bound.admissible[static_cast<std::size_t>(members.front())]) {
        const bool ok =
            std::all_of(members.begin(), members.end(), [&](int i) { return admits(bound, i, k); }) &&
            std::all_of(slot.partners.begin(), slot.partners.end(),
                        [&](int i) { return admits(bound, i, -k); });
        if (ok) slot.choices.push_back(k);
      }
    }
    slots_.push_back(std::move(slot));
  }

  real_count_ = 1;
  for (const Slot& s : slots_) {
    if (s.choices.empty()) {
      real_count_ = 0;
      exhausted_ = true;
      break;
    }
    const auto size = static_cast<std::uint64_t>(s.choices.size());
    real_count_ = real_count_ > std::numeric_limits<std::uint64_t>::max() / size
                      ? std::numeric_limits<std::uint64_t>::max()
                      : real_count_ * size;
  }
  cursor_.assign(slots_.size(), 0);
}

std::optional<Candidate> GeneratorEnumerator::next() {
  while (!exhausted_) {
    BranchSelection sel{std::vector<int>(static_cast<std::size_t>(e_.size()), 0)};
    for (std::size_t s = 0; s < slots_.size(); ++s) {
      const int k = slots_[s].choices[cursor_[s]];
      for (int i : slots_[s].members) sel.offsets[static_cast<std::size_t>(i)] = k;
      for (int i : slots_[s].partners) sel.offsets[static_cast<std::size_t>(i)] = -k;
    }

    // odometer, last slot fastest
    exhausted_ = true;
    for (std::size_t s = slots_.size(); s-- > 0;) {
      if (++cursor_[s] < slots_[s].choices.size()) {
        exhausted_ = false;
        break;
      }
      cursor_[s] = 0;
    }

    const ComplexMatrix z = logm_branch(e_, sel, cfg_);
    if (auto real = real_if_real(z, cfg_)) return Candidate{std::move(sel), std::move(*real)};
    rejected_.push_back(std::move(sel));
  }
  return std::nullopt;
}

std::vector<Candidate> enumerate_generators(const Eigendecomposition& e, const BranchBound& bound,
                                            const ToleranceConfig& cfg) {
  GeneratorEnumerator it(e, bound, cfg);
  std::vector<Candidate> out;
  while (auto c = it.next()) out.push_back(std::move(*c));
  return out;
}

}  // namespace embedlab
