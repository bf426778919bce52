#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "arrowwalk/arrow.hpp"

namespace arrowwalk {

enum class SystemKind { ExplicitTable, RuleBased, Sampled };

/// Finite explicit stacks plus a fill arrow above them. A site without an
/// explicit stack is filled entirely; `site_fill` overrides the fill per site.
struct ExplicitTable {
  std::map<Site, std::vector<Arrow>> stacks;
  Arrow default_fill = Arrow::Right;
  std::map<Site, Arrow> site_fill;

  Arrow fill_at(Site site) const {
    auto it = site_fill.find(site);
    return it == site_fill.end() ? default_fill : it->second;
  }

  Arrow at(Site site, Level level) const {
    auto it = stacks.find(site);
    if (it != stacks.end() && level <= static_cast<Level>(it->second.size())) {
      return it->second[static_cast<std::size_t>(level - 1)];
    }
    return fill_at(site);
  }
};

/// An infinite stack of arrows above every site of Z, queried lazily.
///
/// Systems are immutable values: copies share one rule object, and a query
/// for the same (site, level) always returns the same arrow. Walks never
/// mutate a system; consumption is tracked by visit counts.
class ArrowSystem {
 public:
  using Rule = std::function<Arrow(Site, Level)>;

  ArrowSystem(Rule rule, SystemKind kind, std::string label = {})
      : rule_(std::make_shared<const Rule>(std::move(rule))),
        kind_(kind),
        label_(std::move(label)) {
    if (!*rule_) throw std::invalid_argument("arrow system rule is empty");
  }

  explicit ArrowSystem(ExplicitTable table, std::string label = "explicit")
      : table_(std::make_shared<const ExplicitTable>(std::move(table))),
        kind_(SystemKind::ExplicitTable),
        label_(std::move(label)) {
    auto t = table_;
    rule_ = std::make_shared<const Rule>([t](Site s, Level l) { return t->at(s, l); });
  }

  static ArrowSystem constant(Arrow a) {
    ExplicitTable t;
    t.default_fill = a;
    return ArrowSystem(std::move(t), a == Arrow::Right ? "all-R" : "all-L");
  }

  Arrow at(Site site, Level level) const {
    if (level < 1) throw std::invalid_argument("arrow levels start at 1");
    return (*rule_)(site, level);
  }

  SystemKind kind() const noexcept { return kind_; }
  const std::string& label() const noexcept { return label_; }

  /// Present only for explicit-table systems.
  const ExplicitTable* table() const noexcept { return table_.get(); }

  bool is_zero_right() const noexcept { return zero_right_; }

 private:
  friend ArrowSystem zero_right_transform(const ArrowSystem& system);

  std::shared_ptr<const Rule> rule_;
  std::shared_ptr<const ExplicitTable> table_;
  SystemKind kind_;
  std::string label_;
  bool zero_right_ = false;
};

struct StackCounts {
  Level left = 0;
  Level right = 0;
};

/// Number of Left and Right arrows among the first `r` arrows above `site`.
inline StackCounts stack_counts(const ArrowSystem& system, Site site, Level r) {
  if (r < 0) throw std::invalid_argument("stack_counts: r must be >= 0");
  StackCounts c;
  for (Level level = 1; level <= r; ++level) {
    if (system.at(site, level) == Arrow::Left) {
      ++c.left;
    } else {
      ++c.right;
    }
  }
  return c;
}

/// Reflection about 0: mirrored(j, r) = flip(original(-j, r)).
inline ArrowSystem mirror_system(const ArrowSystem& system) {
  const SystemKind kind = system.kind() == SystemKind::ExplicitTable ? SystemKind::RuleBased
                                                                     : system.kind();
  return ArrowSystem([system](Site s, Level l) { return flip(system.at(-s, l)); }, kind,
                     "mirror(" + system.label() + ")");
}

/// Replaces every arrow at site 0 by Right; all other arrows are unchanged.
inline ArrowSystem zero_right_transform(const ArrowSystem& system) {
  if (system.is_zero_right()) return system;
  const SystemKind kind = system.kind() == SystemKind::ExplicitTable ? SystemKind::RuleBased
                                                                     : system.kind();
  ArrowSystem out(
      [system](Site s, Level l) { return s == 0 ? Arrow::Right : system.at(s, l); }, kind,
      "zero-right(" + system.label() + ")");
  out.zero_right_ = true;
  return out;
}

enum class Relation { Preceq, Trileq };

inline const char* to_string(Relation r) noexcept {
  return r == Relation::Preceq ? "preceq" : "trileq";
}

/// Finite window of sites [site_lo, site_hi] and levels [1, level_max].
struct Window {
  Site site_lo = 0;
  Site site_hi = 0;
  Level level_max = 0;
};

struct RelationResult {
  bool holds = true;
  /// First (site, level) in site-major order where the relation fails.
  std::optional<std::pair<Site, Level>> witness;

  explicit operator bool() const noexcept { return holds; }
};

/// Decides `left ⪯ right` (prefix Left-count domination) or `left ⊴ right`
/// (every Right of `left` is a Right of `right`) on a finite window.
inline RelationResult check_relation(const ArrowSystem& left, const ArrowSystem& right,
                                     const Window& window, Relation mode) {
  RelationResult result;
  for (Site j = window.site_lo; j <= window.site_hi; ++j) {
    Level left_count_l = 0;
    Level left_count_r = 0;
    for (Level r = 1; r <= window.level_max; ++r) {
      const Arrow a = left.at(j, r);
      const Arrow b = right.at(j, r);
      bool ok;
      if (mode == Relation::Trileq) {
        ok = a != Arrow::Right || b == Arrow::Right;
      } else {
        left_count_l += a == Arrow::Left;
        left_count_r += b == Arrow::Left;
        ok = left_count_l >= left_count_r;
      }
      if (!ok) {
        result.holds = false;
        result.witness = std::make_pair(j, r);
        return result;
      }
    }
  }
  return result;
}

}  // namespace arrowwalk
