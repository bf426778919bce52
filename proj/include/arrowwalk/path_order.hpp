#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "arrowwalk/arrow_system.hpp"
#include "arrowwalk/trajectory.hpp"

namespace arrowwalk {

/// Arrows a path forces at each site: the direction of its k-th departure from
/// x is the arrow at (x, k).
inline std::map<Site, std::vector<Arrow>> forced_stacks(std::span<const Site> path) {
  std::map<Site, std::vector<Arrow>> out;
  for (std::size_t n = 0; n + 1 < path.size(); ++n) {
    out[path[n]].push_back(path[n + 1] > path[n] ? Arrow::Right : Arrow::Left);
  }
  return out;
}

struct PathOrderResult {
  bool admissible = true;
  /// (site, first failing level) for every site whose forced prefixes clash.
  std::vector<std::pair<Site, Level>> violations;
  /// Completions generating the two paths; they satisfy left ⪯ right exactly
  /// when `admissible`.
  ArrowSystem left_system = ArrowSystem::constant(Arrow::Left);
  ArrowSystem right_system = ArrowSystem::constant(Arrow::Right);

  explicit operator bool() const noexcept { return admissible; }
};

/// Decides whether systems L ⪯ R exist whose walks are `left` and `right`.
///
/// Each path pins a prefix of arrows per site. Filling L with Left and R with
/// Right above those prefixes maximises slack for every level, so the prefix
/// inequality only needs checking up to the taller of the two forced heights.
inline PathOrderResult paths_admit_preceq(std::span<const Site> left, std::span<const Site> right) {
  require_walk(left, "left path");
  require_walk(right, "right path");

  ExplicitTable lt;
  lt.stacks = forced_stacks(left);
  lt.default_fill = Arrow::Left;
  ExplicitTable rt;
  rt.stacks = forced_stacks(right);
  rt.default_fill = Arrow::Right;

  std::set<Site> touched;
  for (const auto& [x, s] : lt.stacks) touched.insert(x);
  for (const auto& [x, s] : rt.stacks) touched.insert(x);

  PathOrderResult result;
  for (Site x : touched) {
    const auto height = [](const ExplicitTable& t, Site s) -> Level {
      auto it = t.stacks.find(s);
      return it == t.stacks.end() ? 0 : static_cast<Level>(it->second.size());
    };
    const Level top = std::max(height(lt, x), height(rt, x));
    Level lefts_l = 0;
    Level lefts_r = 0;
    for (Level r = 1; r <= top; ++r) {
      lefts_l += lt.at(x, r) == Arrow::Left;
      lefts_r += rt.at(x, r) == Arrow::Left;
      if (lefts_l < lefts_r) {
        result.admissible = false;
        result.violations.emplace_back(x, r);
        break;
      }
    }
  }
  result.left_system = ArrowSystem(std::move(lt), "completion(left)");
  result.right_system = ArrowSystem(std::move(rt), "completion(right)");
  return result;
}

inline PathOrderResult paths_admit_preceq(const Trajectory& left, const Trajectory& right) {
  return paths_admit_preceq(left.positions(), right.positions());
}

}  // namespace arrowwalk
