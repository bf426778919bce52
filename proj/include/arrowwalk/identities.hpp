#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "arrowwalk/arrow_system.hpp"
#include "arrowwalk/local_time.hpp"
#include "arrowwalk/trajectory.hpp"

namespace arrowwalk {

/// The bookkeeping identities every arrow-system walk satisfies at every time.
enum class Identity : std::uint8_t {
  UnitSteps,        // E_0 = 0, |E_{n+1} - E_n| = 1
  Arrivals,         // n(x) = δ_{x,0} + n(x-1,x) + n(x+1,x)
  Departures,       // n(x) = δ_{E_t,x} + n(x,x+1) + n(x,x-1)
  TotalCount,       // Σ_x n(x) = t + 1
  UsedRightArrows,  // n(x,x+1) = #Right among the first n(x) - I{E_t = x} arrows at x
  UsedLeftArrows,   // n(x,x-1) = #Left among the same arrows
  EdgeReciprocity,  // n(x,x+1) + I{x+1<=0}I{E_t<=x} = n(x+1,x) + I{x>=0}I{E_t>=x+1}
};

inline constexpr std::size_t kIdentityCount = 7;

inline const char* to_string(Identity id) noexcept {
  switch (id) {
    case Identity::UnitSteps: return "unit_steps";
    case Identity::Arrivals: return "arrivals";
    case Identity::Departures: return "departures";
    case Identity::TotalCount: return "total_count";
    case Identity::UsedRightArrows: return "used_right_arrows";
    case Identity::UsedLeftArrows: return "used_left_arrows";
    case Identity::EdgeReciprocity: return "edge_reciprocity";
  }
  return "?";
}

struct IdentityWitness {
  std::int64_t t = 0;
  Site site = 0;
};

struct IdentityOutcome {
  Identity identity = Identity::UnitSteps;
  /// False when the identity needs the generating system and none was given.
  bool checked = true;
  bool passed = true;
  std::optional<IdentityWitness> witness;
};

struct IdentityReport {
  std::array<IdentityOutcome, kIdentityCount> outcomes{};

  IdentityReport() {
    for (std::size_t i = 0; i < kIdentityCount; ++i) outcomes[i].identity = static_cast<Identity>(i);
  }

  const IdentityOutcome& operator[](Identity id) const { return outcomes[static_cast<std::size_t>(id)]; }
  IdentityOutcome& operator[](Identity id) { return outcomes[static_cast<std::size_t>(id)]; }

  bool all_passed() const noexcept {
    for (const auto& o : outcomes) {
      if (!o.passed) return false;
    }
    return true;
  }

  /// Earliest failure by time, ties broken by identity order.
  std::optional<std::pair<Identity, IdentityWitness>> first_failure() const {
    std::optional<std::pair<Identity, IdentityWitness>> best;
    for (const auto& o : outcomes) {
      if (o.passed || !o.witness) continue;
      if (!best || o.witness->t < best->second.t) best = std::make_pair(o.identity, *o.witness);
    }
    return best;
  }

  void fail(Identity id, std::int64_t t, Site x) {
    auto& o = (*this)[id];
    if (!o.passed) return;
    o.passed = false;
    o.witness = IdentityWitness{t, x};
  }
};

/// Cumulative Right counts per site, read level by level from a system.
class ArrowPrefixCache {
 public:
  explicit ArrowPrefixCache(const ArrowSystem& system) : system_(&system) {}

  /// Number of Right arrows among the first r arrows at `site`.
  std::int64_t rights(Site site, Level r) {
    auto& prefix = cache_[site];
    if (prefix.empty()) prefix.push_back(0);
    while (static_cast<Level>(prefix.size()) <= r) {
      const Level level = static_cast<Level>(prefix.size());
      prefix.push_back(prefix.back() + (system_->at(site, level) == Arrow::Right ? 1 : 0));
    }
    return prefix[static_cast<std::size_t>(r)];
  }

 private:
  const ArrowSystem* system_;
  std::unordered_map<Site, std::vector<std::int64_t>> cache_;
};

namespace detail {

inline void check_identities_now(const LocalTimeTable& tab, Site lo, Site hi,
                                 ArrowPrefixCache* arrows, IdentityReport& rep) {
  const std::int64_t t = tab.time();
  const Site cur = tab.current();
  if (tab.total() != t + 1) rep.fail(Identity::TotalCount, t, cur);
  for (Site x = lo; x <= hi; ++x) {
    const std::int64_t n = tab.node(x);
    if (n != (x == 0 ? 1 : 0) + tab.up(x - 1) + tab.down(x + 1)) rep.fail(Identity::Arrivals, t, x);
    if (n != (cur == x ? 1 : 0) + tab.up(x) + tab.down(x)) rep.fail(Identity::Departures, t, x);
    const std::int64_t lhs = tab.up(x) + ((x + 1 <= 0 && cur <= x) ? 1 : 0);
    const std::int64_t rhs = tab.down(x + 1) + ((x >= 0 && cur >= x + 1) ? 1 : 0);
    if (lhs != rhs) rep.fail(Identity::EdgeReciprocity, t, x);
    if (arrows != nullptr) {
      const Level used = n - (cur == x ? 1 : 0);
      if (used < 0) {
        rep.fail(Identity::UsedRightArrows, t, x);
        rep.fail(Identity::UsedLeftArrows, t, x);
        continue;
      }
      const std::int64_t rights = arrows->rights(x, used);
      if (tab.up(x) != rights) rep.fail(Identity::UsedRightArrows, t, x);
      if (tab.down(x) != used - rights) rep.fail(Identity::UsedLeftArrows, t, x);
    }
  }
}

inline void check_unit_steps(const Trajectory& traj, std::int64_t t, IdentityReport& rep) {
  if (traj[0] != 0) {
    rep.fail(Identity::UnitSteps, 0, traj[0]);
    return;
  }
  for (std::int64_t n = 1; n <= t; ++n) {
    const Site d = traj[n] - traj[n - 1];
    if (d != 1 && d != -1) {
      rep.fail(Identity::UnitSteps, n, traj[n]);
      return;
    }
  }
}

inline void mark_unchecked_without_system(const ArrowSystem* system, IdentityReport& rep) {
  if (system != nullptr) return;
  rep[Identity::UsedRightArrows].checked = false;
  rep[Identity::UsedLeftArrows].checked = false;
}

}  // namespace detail

/// Checks every identity at the single time t. The arrow-usage identities need
/// the generating system; without it they are reported as unchecked.
inline IdentityReport check_identities(const Trajectory& traj, std::int64_t t,
                                       const ArrowSystem* system = nullptr) {
  if (t < 0 || t > traj.horizon()) throw std::out_of_range("check_identities: t outside [0, horizon]");
  IdentityReport rep;
  detail::mark_unchecked_without_system(system, rep);
  detail::check_unit_steps(traj, t, rep);
  const LocalTimeTable tab = occupation(traj, t);
  std::optional<ArrowPrefixCache> arrows;
  if (system != nullptr) arrows.emplace(*system);
  detail::check_identities_now(tab, tab.window_lo(), tab.window_hi(), arrows ? &*arrows : nullptr, rep);
  return rep;
}

/// Checks every identity at every t in [0, horizon], updating the tables
/// incrementally. Each identity keeps its earliest failure.
inline IdentityReport check_identities_through(const Trajectory& traj,
                                               const ArrowSystem* system = nullptr) {
  IdentityReport rep;
  detail::mark_unchecked_without_system(system, rep);
  detail::check_unit_steps(traj, traj.horizon(), rep);
  LocalTimeTable tab(traj.min_position() - 1, traj.max_position() + 1);
  std::optional<ArrowPrefixCache> arrows;
  if (system != nullptr) arrows.emplace(*system);
  Site lo = std::min<Site>(traj[0], 0);
  Site hi = std::max<Site>(traj[0], 0);
  tab.start(traj[0]);
  for (std::int64_t t = 0;; ++t) {
    detail::check_identities_now(tab, lo - 1, hi + 1, arrows ? &*arrows : nullptr, rep);
    if (t == traj.horizon()) break;
    const Site next = traj[t + 1];
    lo = std::min(lo, next);
    hi = std::max(hi, next);
    tab.step(next);
  }
  return rep;
}

}  // namespace arrowwalk
