#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "arrowwalk/arrow_system.hpp"
#include "arrowwalk/path_order.hpp"
#include "arrowwalk/trajectory.hpp"
#include "arrowwalk/verifier.hpp"

namespace arrowwalk {

namespace checked {

inline std::int64_t add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("ce1 arithmetic overflows int64");
  return r;
}
inline std::int64_t sub(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_sub_overflow(a, b, &r)) throw std::overflow_error("ce1 arithmetic overflows int64");
  return r;
}
inline std::int64_t mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("ce1 arithmetic overflows int64");
  return r;
}

}  // namespace checked

/// Sites x_1 < x_2 < … < x_kmax where the faster walk turns back:
/// x_k = Σ_{m=1}^k N^m − Σ_{m=1}^{k−1} S_m with S_m = Σ_{r=0}^m (−1)^{m−r} N^r.
inline std::vector<Site> ce1_sites(std::int64_t n, int kmax) {
  if (n < 1) throw std::invalid_argument("ce1: N must be >= 1");
  if (kmax < 0) throw std::invalid_argument("ce1: kmax must be >= 0");
  std::vector<Site> xs;
  std::int64_t power = 1;  // N^k
  std::int64_t s = 1;      // S_{k-1}
  Site x = 0;
  for (int k = 1; k <= kmax; ++k) {
    power = checked::mul(power, n);
    x = checked::add(x, power);
    if (k > 1) x = checked::sub(x, s);
    s = checked::sub(power, s);
    xs.push_back(x);
  }
  return xs;
}

/// Every x_k that fits in int64.
inline std::vector<Site> ce1_sites_all(std::int64_t n) {
  std::vector<Site> xs;
  for (int k = 1;; ++k) {
    try {
      xs = ce1_sites(n, k);
    } catch (const std::overflow_error&) {
      return xs;
    }
    if (n == 1 && k > 64) return xs;
  }
}

/// ℒ: RRR at 0, LLRRR at every x > 0, Right everywhere else.
inline ArrowSystem ce1_left_system() {
  return ArrowSystem(
      [](Site x, Level l) {
        if (x > 0 && l <= 2) return Arrow::Left;
        return Arrow::Right;
      },
      SystemKind::RuleBased, "ce1-L");
}

/// ℛ(N): RRR at 0, LRR at each x_k, RLR at every other x > 0, Right elsewhere.
inline ArrowSystem ce1_right_system(std::int64_t n, bool allow_small_n = false) {
  if (n < 3 && !allow_small_n) throw std::invalid_argument("ce1: N must be >= 3");
  auto xs = std::make_shared<const std::vector<Site>>(ce1_sites_all(n));
  return ArrowSystem(
      [xs](Site x, Level l) {
        if (x <= 0 || l > 3) return Arrow::Right;
        const bool turn = std::binary_search(xs->begin(), xs->end(), x);
        if (turn) return l == 1 ? Arrow::Left : Arrow::Right;
        return l == 2 ? Arrow::Left : Arrow::Right;
      },
      SystemKind::RuleBased, "ce1-R(" + std::to_string(n) + ")");
}

inline std::pair<ArrowSystem, ArrowSystem> build_ce1(std::int64_t n, bool allow_small_n = false) {
  return {ce1_left_system(), ce1_right_system(n, allow_small_n)};
}

struct Ce1Milestone {
  int k = 0;
  Site x = 0;
  std::int64_t t = 0;  // first visit to x_k
  std::int64_t s = 0;  // last visit to x_{k-1}
  double ratio_hi = 0.0;  // x_k / t_k
  double ratio_lo = 0.0;  // x_{k-1} / s_k
};

/// Closed forms t_k = x_k + 2x_{k−1}, s_k = 2x_k + x_{k−1} (x_0 = 0).
inline std::vector<Ce1Milestone> ce1_milestones(std::int64_t n, int kmax, bool allow_small_n = false) {
  if (n < 3 && !allow_small_n) throw std::invalid_argument("ce1: N must be >= 3");
  if (kmax < 1) throw std::invalid_argument("ce1: kmax must be >= 1");
  const auto xs = ce1_sites(n, kmax);
  std::vector<Ce1Milestone> out;
  Site prev = 0;
  for (int k = 1; k <= kmax; ++k) {
    Ce1Milestone m;
    m.k = k;
    m.x = xs[static_cast<std::size_t>(k - 1)];
    m.t = checked::add(m.x, checked::mul(2, prev));
    m.s = checked::add(checked::mul(2, m.x), prev);
    m.ratio_hi = static_cast<double>(m.x) / static_cast<double>(m.t);
    m.ratio_lo = static_cast<double>(prev) / static_cast<double>(m.s);
    out.push_back(m);
    prev = m.x;
  }
  return out;
}

/// Milestones read off a simulated ℛ(N) walk: first hit of x_k and last
/// visit to x_{k−1} within the horizon. The horizon must pass t_{kmax+1}.
inline std::vector<Ce1Milestone> ce1_measured_milestones(const Trajectory& right_walk, std::int64_t n, int kmax) {
  const auto xs = ce1_sites(n, kmax + 1);
  const auto closed = ce1_milestones(n, kmax + 1, true);
  if (right_walk.horizon() < closed.back().t) {
    throw std::invalid_argument("ce1: horizon must reach t_{kmax+1} = " + std::to_string(closed.back().t));
  }
  std::vector<Ce1Milestone> out;
  Site prev = 0;
  for (int k = 1; k <= kmax; ++k) {
    Ce1Milestone m;
    m.k = k;
    m.x = xs[static_cast<std::size_t>(k - 1)];
    m.t = -1;
    m.s = -1;
    for (std::int64_t i = 0; i <= right_walk.horizon(); ++i) {
      if (m.t < 0 && right_walk[i] == m.x) m.t = i;
      if (right_walk[i] == prev) m.s = i;
    }
    if (m.t > 0) m.ratio_hi = static_cast<double>(m.x) / static_cast<double>(m.t);
    if (m.s > 0) m.ratio_lo = static_cast<double>(prev) / static_cast<double>(m.s);
    out.push_back(m);
    prev = m.x;
  }
  return out;
}

inline const std::vector<Site>& ce2_right_primed_path() {
  static const std::vector<Site> p = {0,  1,  2,  1,  0,  -1, -2, -3, -4, -5, -6, -5, -4, -3, -4,
                                      -5, -4, -3, -2, -3, -4, -3, -2, -1, -2, -3, -2, -1, 0};
  return p;
}

inline const std::vector<Site>& ce2_left_primed_path() {
  static const std::vector<Site> p = {0,  -1, -2, -3, -4, -5, -6, -5, -4, -3, -4, -5, -4, -3, -2,
                                      -3, -4, -3, -2, -1, -2, -3, -2, -1, 0,  1,  2,  1,  0};
  return p;
}

enum class Ce2Variant { Primed, Periodic, Unprimed };

inline const char* to_string(Ce2Variant v) noexcept {
  switch (v) {
    case Ce2Variant::Primed: return "primed";
    case Ce2Variant::Periodic: return "periodic";
    case Ce2Variant::Unprimed: return "unprimed";
  }
  return "?";
}

/// Systems behind the unprimed pair: the primed right path's forced stacks
/// with (0,2) set to Right and (1,1) to Left, filled with Left. The left
/// system differs only in the first arrow at 0.
inline std::pair<ArrowSystem, ArrowSystem> ce2_unprimed_systems() {
  ExplicitTable r;
  r.stacks = forced_stacks(ce2_right_primed_path());
  r.default_fill = Arrow::Left;
  r.stacks[0] = arrows_from_string("RR");
  r.stacks[1] = arrows_from_string("LL");
  ExplicitTable l = r;
  l.stacks[0] = arrows_from_string("LR");
  return {ArrowSystem(std::move(l), "ce2-unprimed-L"), ArrowSystem(std::move(r), "ce2-unprimed-R")};
}

inline constexpr std::int64_t kCe2BlockLength = 28;

inline CoupledPair build_ce2(Ce2Variant variant, int cycles = 1) {
  switch (variant) {
    case Ce2Variant::Primed:
      return CoupledPair(Trajectory(ce2_left_primed_path()), Trajectory(ce2_right_primed_path()),
                         Relation::Preceq, "leader counterexample (primed)");
    case Ce2Variant::Periodic: {
      if (cycles < 1) throw std::invalid_argument("ce2 periodic: cycles must be >= 1");
      std::vector<Site> l{0};
      std::vector<Site> r{0};
      for (int c = 0; c < cycles; ++c) {
        l.insert(l.end(), ce2_left_primed_path().begin() + 1, ce2_left_primed_path().end());
        r.insert(r.end(), ce2_right_primed_path().begin() + 1, ce2_right_primed_path().end());
      }
      return CoupledPair(Trajectory(std::move(l)), Trajectory(std::move(r)), Relation::Preceq,
                         "leader counterexample (periodic x" + std::to_string(cycles) + ")");
    }
    case Ce2Variant::Unprimed: {
      auto [ls, rs] = ce2_unprimed_systems();
      return make_pair_from_systems(ls, rs, kCe2BlockLength, Relation::Preceq, "leader counterexample (unprimed)");
    }
  }
  throw std::invalid_argument("unknown ce2 variant");
}

struct LeadSets {
  std::int64_t right_ahead = 0;  // |{n <= t : R_n > L_n}|
  std::int64_t left_ahead = 0;   // |{n <= t : R_n < L_n}|

  friend bool operator==(const LeadSets&, const LeadSets&) = default;
};

inline LeadSets lead_sets(const CoupledPair& pair, std::int64_t t) {
  if (t < 0 || t > pair.horizon()) throw std::out_of_range("lead_sets: t outside [0, horizon]");
  LeadSets out;
  for (std::int64_t n = 0; n <= t; ++n) {
    out.right_ahead += pair.right[n] > pair.left[n];
    out.left_ahead += pair.right[n] < pair.left[n];
  }
  return out;
}

}  // namespace arrowwalk
