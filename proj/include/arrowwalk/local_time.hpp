#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "arrowwalk/trajectory.hpp"

namespace arrowwalk {

/// Occupation counts n(x) and directed edge counts n(x, x±1) at a fixed time.
///
/// Storage is dense over a site window fixed at construction; queries outside
/// it return zero. Steps that are not nearest-neighbour moves are counted in
/// `irregular_steps()` instead of any edge.
class LocalTimeTable {
 public:
  LocalTimeTable(Site lo, Site hi)
      : lo_(lo),
        hi_(hi),
        node_(size(), 0),
        up_(size(), 0),
        down_(size(), 0) {
    if (hi < lo) throw std::invalid_argument("empty local time window");
  }

  Site window_lo() const noexcept { return lo_; }
  Site window_hi() const noexcept { return hi_; }
  std::int64_t time() const noexcept { return time_; }
  Site current() const noexcept { return current_; }
  std::int64_t irregular_steps() const noexcept { return irregular_; }

  std::int64_t node(Site x) const noexcept { return get(node_, x); }
  /// n(x, x+1).
  std::int64_t up(Site x) const noexcept { return get(up_, x); }
  /// n(x, x-1).
  std::int64_t down(Site x) const noexcept { return get(down_, x); }

  std::int64_t edge(Site x, Site y) const noexcept {
    if (y == x + 1) return up(x);
    if (y == x - 1) return down(x);
    return 0;
  }

  std::int64_t total() const noexcept {
    std::int64_t s = 0;
    for (auto c : node_) s += c;
    return s;
  }

  /// Records E_0.
  void start(Site x) {
    ref(node_, x) += 1;
    current_ = x;
    time_ = 0;
  }

  /// Records the step E_t -> E_{t+1} = `to`.
  void step(Site to) {
    const Site from = current_;
    if (to == from + 1) {
      ref(up_, from) += 1;
    } else if (to == from - 1) {
      ref(down_, from) += 1;
    } else {
      ++irregular_;
    }
    ref(node_, to) += 1;
    current_ = to;
    ++time_;
  }

 private:
  std::size_t size() const { return static_cast<std::size_t>(hi_ - lo_ + 1); }

  std::int64_t get(const std::vector<std::int64_t>& v, Site x) const noexcept {
    return x < lo_ || x > hi_ ? 0 : v[static_cast<std::size_t>(x - lo_)];
  }
  std::int64_t& ref(std::vector<std::int64_t>& v, Site x) {
    if (x < lo_ || x > hi_) throw std::out_of_range("site outside local time window");
    return v[static_cast<std::size_t>(x - lo_)];
  }

  Site lo_;
  Site hi_;
  std::vector<std::int64_t> node_;
  std::vector<std::int64_t> up_;
  std::vector<std::int64_t> down_;
  Site current_ = 0;
  std::int64_t time_ = 0;
  std::int64_t irregular_ = 0;
};

/// Local-time table of `traj` at time t.
inline LocalTimeTable occupation(const Trajectory& traj, std::int64_t t) {
  if (t < 0 || t > traj.horizon()) throw std::out_of_range("occupation: t outside [0, horizon]");
  Site lo = 0;
  Site hi = 0;
  for (std::int64_t n = 0; n <= t; ++n) {
    lo = std::min(lo, traj[n]);
    hi = std::max(hi, traj[n]);
  }
  LocalTimeTable table(lo - 1, hi + 1);
  table.start(traj[0]);
  for (std::int64_t n = 1; n <= t; ++n) table.step(traj[n]);
  return table;
}

}  // namespace arrowwalk
