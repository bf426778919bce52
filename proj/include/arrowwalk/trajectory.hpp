#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "arrowwalk/arrow_system.hpp"

namespace arrowwalk {

/// Dense per-site counters over [-radius, radius].
class SiteCounter {
 public:
  explicit SiteCounter(std::int64_t radius = 0)
      : radius_(radius), counts_(static_cast<std::size_t>(2 * radius + 1), 0) {}

  std::int64_t radius() const noexcept { return radius_; }

  bool covers(Site x) const noexcept { return x >= -radius_ && x <= radius_; }

  std::int64_t operator[](Site x) const noexcept {
    return covers(x) ? counts_[index(x)] : 0;
  }

  std::int64_t& at(Site x) {
    if (!covers(x)) throw std::out_of_range("site outside counter radius");
    return counts_[index(x)];
  }

  std::int64_t increment(Site x) { return ++at(x); }

 private:
  std::size_t index(Site x) const noexcept { return static_cast<std::size_t>(x + radius_); }

  std::int64_t radius_;
  std::vector<std::int64_t> counts_;
};

/// A path E_0..E_T with its final visit counts.
///
/// Construction does not require a legal walk so that corrupted paths can be
/// fed to the checkers; `is_walk()` reports legality.
class Trajectory {
 public:
  Trajectory() : Trajectory(std::vector<Site>{0}) {}

  explicit Trajectory(std::vector<Site> positions) : positions_(std::move(positions)) {
    if (positions_.empty()) throw std::invalid_argument("trajectory needs at least E_0");
    auto [lo, hi] = std::minmax_element(positions_.begin(), positions_.end());
    lo_ = *lo;
    hi_ = *hi;
    counts_.assign(static_cast<std::size_t>(hi_ - lo_ + 1), 0);
    for (Site x : positions_) ++counts_[static_cast<std::size_t>(x - lo_)];
  }

  std::span<const Site> positions() const noexcept { return positions_; }
  std::int64_t horizon() const noexcept { return static_cast<std::int64_t>(positions_.size()) - 1; }

  Site operator[](std::int64_t n) const { return positions_[static_cast<std::size_t>(n)]; }
  Site at(std::int64_t n) const {
    if (n < 0 || n > horizon()) throw std::out_of_range("time outside trajectory");
    return positions_[static_cast<std::size_t>(n)];
  }
  Site final_position() const noexcept { return positions_.back(); }

  Site min_position() const noexcept { return lo_; }
  Site max_position() const noexcept { return hi_; }

  /// #{0 <= m <= T : E_m = x}.
  std::int64_t visit_count(Site x) const noexcept {
    return x < lo_ || x > hi_ ? 0 : counts_[static_cast<std::size_t>(x - lo_)];
  }

  std::map<Site, std::int64_t> visit_counts() const {
    std::map<Site, std::int64_t> out;
    for (Site x = lo_; x <= hi_; ++x) {
      if (auto c = visit_count(x); c > 0) out.emplace(x, c);
    }
    return out;
  }

  /// E_0 = 0 and every step has length one.
  bool is_walk() const noexcept {
    if (positions_.front() != 0) return false;
    for (std::size_t n = 1; n < positions_.size(); ++n) {
      const Site d = positions_[n] - positions_[n - 1];
      if (d != 1 && d != -1) return false;
    }
    return true;
  }

  friend bool operator==(const Trajectory& a, const Trajectory& b) {
    return a.positions_ == b.positions_;
  }

 private:
  std::vector<Site> positions_;
  Site lo_ = 0;
  Site hi_ = 0;
  std::vector<std::int64_t> counts_;
};

/// Throws std::invalid_argument unless the path starts at 0 with unit steps.
inline void require_walk(std::span<const Site> path, const char* what = "path") {
  if (path.empty() || path.front() != 0) {
    throw std::invalid_argument(std::string(what) + " must start at 0");
  }
  for (std::size_t n = 1; n < path.size(); ++n) {
    const Site d = path[n] - path[n - 1];
    if (d != 1 && d != -1) {
      throw std::invalid_argument(std::string(what) + " has a non-unit step at n=" +
                                  std::to_string(n));
    }
  }
}

inline constexpr std::int64_t kMaxHorizon = std::int64_t{1} << 62;

/// Generates E_0..E_T: at E_n on its k-th visit the walk follows arrow
/// (E_n, k) and that arrow is never read again.
inline Trajectory run_walk(const ArrowSystem& system, std::int64_t horizon) {
  if (horizon < 0 || horizon >= kMaxHorizon) throw std::invalid_argument("horizon out of range");
  std::vector<Site> path;
  path.reserve(static_cast<std::size_t>(horizon) + 1);
  SiteCounter visits(horizon);
  Site x = 0;
  path.push_back(x);
  for (std::int64_t n = 0; n < horizon; ++n) {
    const Level k = visits.increment(x);
    x += step_of(system.at(x, k));
    path.push_back(x);
  }
  return Trajectory(std::move(path));
}

}  // namespace arrowwalk
