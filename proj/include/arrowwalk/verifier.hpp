#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "arrowwalk/arrow_system.hpp"
#include "arrowwalk/trajectory.hpp"
#include "json.hpp"

namespace arrowwalk {

/// Finite-time statements that hold for every pair of walks generated by
/// systems L ⪯ R.
enum class Statement : std::uint8_t {
  Envelopes,              // max_{k<=n} R_k >= max_{k<=n} L_k, and the same for minima
  HittingOrder,           // R reaches each x > 0 no later than L; L reaches each x < 0 no later than R
  LocalTimeOrder,         // n_R(x) > n_L(x) implies n_R(y) >= n_L(y) for all y > x
  MaxVisits,              // n_R(max R) >= n_L(max R), n_L(min L) >= n_R(min L)
  NeighbourAndPlusMinus,  // neighbour propagation of local-time excess, and the R_t <= y < L_t interval rule
  KthVisitNeighbour,      // n_R(x-1) at R's k-th visit to x <= n_L(x-1) at L's k-th visit to x
  RecordLead,             // R >= L whenever R sets a new maximum or L sets a new minimum
};

inline constexpr std::array<Statement, 7> kAllStatements = {
    Statement::Envelopes,         Statement::HittingOrder,
    Statement::LocalTimeOrder,    Statement::MaxVisits,
    Statement::NeighbourAndPlusMinus, Statement::KthVisitNeighbour,
    Statement::RecordLead};

inline const char* to_string(Statement s) noexcept {
  switch (s) {
    case Statement::Envelopes: return "envelopes";
    case Statement::HittingOrder: return "hitting_order";
    case Statement::LocalTimeOrder: return "local_time_order";
    case Statement::MaxVisits: return "max_visits";
    case Statement::NeighbourAndPlusMinus: return "neighbour_and_plusminus";
    case Statement::KthVisitNeighbour: return "kth_visit_neighbour";
    case Statement::RecordLead: return "record_lead";
  }
  return "?";
}

inline std::optional<Statement> statement_from_string(std::string_view name) {
  for (Statement s : kAllStatements) {
    if (name == to_string(s)) return s;
  }
  return std::nullopt;
}

struct Witness {
  std::int64_t t = 0;
  Site x = 0;
  std::int64_t k = 0;
  std::string detail;
};

struct VerifyResult {
  Statement statement = Statement::Envelopes;
  bool passed = true;
  /// The statement's hypothesis never held within the horizon.
  bool vacuous = false;
  std::optional<Witness> witness;
};

inline void to_json(nlohmann::json& j, const Witness& w) {
  j = nlohmann::json{{"t", w.t}, {"x", w.x}, {"k", w.k}, {"detail", w.detail}};
}

inline void to_json(nlohmann::json& j, const VerifyResult& r) {
  j = nlohmann::json{{"statement", to_string(r.statement)},
                     {"passed", r.passed},
                     {"vacuous", r.vacuous},
                     {"witness", nullptr}};
  if (r.witness) j["witness"] = *r.witness;
}

/// Two walks over a common horizon, both starting at 0.
struct CoupledPair {
  Trajectory left;
  Trajectory right;
  Relation mode = Relation::Preceq;
  std::string provenance;

  CoupledPair(Trajectory l, Trajectory r, Relation m = Relation::Preceq, std::string prov = {})
      : left(std::move(l)), right(std::move(r)), mode(m), provenance(std::move(prov)) {
    if (left.horizon() != right.horizon()) throw std::invalid_argument("coupled pair horizons differ");
    if (left[0] != 0 || right[0] != 0) throw std::invalid_argument("coupled walks must start at 0");
  }

  std::int64_t horizon() const noexcept { return left.horizon(); }
};

inline CoupledPair make_pair_from_systems(const ArrowSystem& left, const ArrowSystem& right,
                                          std::int64_t horizon, Relation mode = Relation::Preceq,
                                          std::string provenance = "explicit systems") {
  return CoupledPair(run_walk(left, horizon), run_walk(right, horizon), mode, std::move(provenance));
}

namespace detail {

inline VerifyResult fail(Statement s, std::int64_t t, Site x, std::int64_t k, std::string detail) {
  VerifyResult r;
  r.statement = s;
  r.passed = false;
  r.witness = Witness{t, x, k, std::move(detail)};
  return r;
}

inline VerifyResult pass(Statement s, bool vacuous) {
  VerifyResult r;
  r.statement = s;
  r.vacuous = vacuous;
  return r;
}

inline std::int64_t radius_of(const CoupledPair& p) {
  return std::max<std::int64_t>({p.horizon(), -p.left.min_position(), p.left.max_position(),
                                 -p.right.min_position(), p.right.max_position(), 1}) + 1;
}

/// Sign sets of d(x) = n_R(x) - n_L(x), updated one site at a time.
class DifferenceSigns {
 public:
  explicit DifferenceSigns(std::int64_t radius) : left_(radius), right_(radius) {}

  void visit_left(Site x) {
    left_.increment(x);
    refresh(x);
  }
  void visit_right(Site x) {
    right_.increment(x);
    refresh(x);
  }

  std::int64_t diff(Site x) const { return right_[x] - left_[x]; }
  std::int64_t left_count(Site x) const { return left_[x]; }
  std::int64_t right_count(Site x) const { return right_[x]; }

  const std::set<Site>& positive() const noexcept { return pos_; }
  const std::set<Site>& negative() const noexcept { return neg_; }
  /// Sites x with d(x-1) > 0 and d(x) < 0.
  const std::set<Site>& bad_adjacent() const noexcept { return bad_; }

 private:
  void refresh(Site x) {
    const std::int64_t d = diff(x);
    if (d > 0) pos_.insert(x); else pos_.erase(x);
    if (d < 0) neg_.insert(x); else neg_.erase(x);
    refresh_pair(x);
    refresh_pair(x + 1);
  }
  void refresh_pair(Site x) {
    if (diff(x - 1) > 0 && diff(x) < 0) bad_.insert(x); else bad_.erase(x);
  }

  SiteCounter left_;
  SiteCounter right_;
  std::set<Site> pos_;
  std::set<Site> neg_;
  std::set<Site> bad_;
};

}  // namespace detail

inline VerifyResult verify_envelopes(const CoupledPair& pair) {
  const auto& L = pair.left;
  const auto& R = pair.right;
  Site max_l = 0, max_r = 0, min_l = 0, min_r = 0;
  for (std::int64_t n = 0; n <= pair.horizon(); ++n) {
    max_l = std::max(max_l, L[n]);
    max_r = std::max(max_r, R[n]);
    min_l = std::min(min_l, L[n]);
    min_r = std::min(min_r, R[n]);
    if (max_r < max_l) {
      return detail::fail(Statement::Envelopes, n, max_l, 0,
                          "max R = " + std::to_string(max_r) + " < max L = " + std::to_string(max_l));
    }
    if (min_r < min_l) {
      return detail::fail(Statement::Envelopes, n, min_r, 0,
                          "min R = " + std::to_string(min_r) + " < min L = " + std::to_string(min_l));
    }
  }
  return detail::pass(Statement::Envelopes, false);
}

inline VerifyResult verify_hitting_order(const CoupledPair& pair) {
  const std::int64_t radius = detail::radius_of(pair);
  constexpr std::int64_t kNever = std::numeric_limits<std::int64_t>::max();
  std::vector<std::int64_t> first_l(static_cast<std::size_t>(2 * radius + 1), kNever);
  std::vector<std::int64_t> first_r(first_l.size(), kNever);
  const auto idx = [radius](Site x) { return static_cast<std::size_t>(x + radius); };
  for (std::int64_t n = 0; n <= pair.horizon(); ++n) {
    auto& fl = first_l[idx(pair.left[n])];
    auto& fr = first_r[idx(pair.right[n])];
    if (fl == kNever) fl = n;
    if (fr == kNever) fr = n;
  }
  bool exercised = false;
  std::optional<VerifyResult> earliest;
  const auto consider = [&](std::int64_t t, Site x, std::int64_t other, const char* who) {
    exercised = true;
    if (other <= t) return;
    if (earliest && earliest->witness->t <= t) return;
    const std::string when = other == kNever ? std::string("never") : "at " + std::to_string(other);
    earliest = detail::fail(Statement::HittingOrder, t, x, 1,
                            std::string(who) + " first hits " + std::to_string(x) + " " + when);
  };
  for (Site x = 1; x <= radius; ++x) {
    if (auto t = first_l[idx(x)]; t != kNever) consider(t, x, first_r[idx(x)], "R");
  }
  for (Site x = -1; x >= -radius; --x) {
    if (auto t = first_r[idx(x)]; t != kNever) consider(t, x, first_l[idx(x)], "L");
  }
  if (earliest) return *earliest;
  return detail::pass(Statement::HittingOrder, !exercised);
}

inline VerifyResult verify_local_time_order(const CoupledPair& pair) {
  detail::DifferenceSigns signs(detail::radius_of(pair));
  bool exercised = false;
  for (std::int64_t n = 0; n <= pair.horizon(); ++n) {
    signs.visit_left(pair.left[n]);
    signs.visit_right(pair.right[n]);
    const auto& pos = signs.positive();
    const auto& neg = signs.negative();
    if (pos.empty()) continue;
    exercised = true;
    if (!neg.empty() && *pos.begin() < *neg.rbegin()) {
      const Site x = *pos.begin();
      const Site y = *neg.rbegin();
      return detail::fail(Statement::LocalTimeOrder, n, x, 0,
                          "n_R(x) > n_L(x) at x=" + std::to_string(x) + " but n_R(y) < n_L(y) at y=" +
                              std::to_string(y));
    }
  }
  return detail::pass(Statement::LocalTimeOrder, !exercised);
}

inline VerifyResult verify_max_visits(const CoupledPair& pair) {
  detail::DifferenceSigns counts(detail::radius_of(pair));
  Site max_r = 0;
  Site min_l = 0;
  for (std::int64_t n = 0; n <= pair.horizon(); ++n) {
    counts.visit_left(pair.left[n]);
    counts.visit_right(pair.right[n]);
    max_r = std::max(max_r, pair.right[n]);
    min_l = std::min(min_l, pair.left[n]);
    if (counts.right_count(max_r) < counts.left_count(max_r)) {
      return detail::fail(Statement::MaxVisits, n, max_r, counts.left_count(max_r),
                          "n_R(max R) = " + std::to_string(counts.right_count(max_r)) +
                              " < n_L(max R) = " + std::to_string(counts.left_count(max_r)));
    }
    if (counts.left_count(min_l) < counts.right_count(min_l)) {
      return detail::fail(Statement::MaxVisits, n, min_l, counts.right_count(min_l),
                          "n_L(min L) = " + std::to_string(counts.left_count(min_l)) +
                              " < n_R(min L) = " + std::to_string(counts.right_count(min_l)));
    }
  }
  return detail::pass(Statement::MaxVisits, false);
}

inline VerifyResult verify_neighbour_and_plusminus(const CoupledPair& pair) {
  detail::DifferenceSigns signs(detail::radius_of(pair));
  bool exercised = false;
  for (std::int64_t n = 0; n <= pair.horizon(); ++n) {
    signs.visit_left(pair.left[n]);
    signs.visit_right(pair.right[n]);
    if (signs.positive().empty()) continue;
    exercised = true;
    if (!signs.bad_adjacent().empty()) {
      const Site x = *signs.bad_adjacent().begin();
      return detail::fail(Statement::NeighbourAndPlusMinus, n, x, 0,
                          "n_R(x-1) > n_L(x-1) but n_R(x) < n_L(x)");
    }
    const Site r_now = pair.right[n];
    const Site l_now = pair.left[n];
    auto y = signs.positive().lower_bound(r_now);
    if (y == signs.positive().end() || *y >= l_now) continue;
    auto bad = signs.negative().lower_bound(*y);
    if (bad != signs.negative().end() && *bad <= l_now) {
      return detail::fail(Statement::NeighbourAndPlusMinus, n, *bad, 0,
                          "R_t <= y=" + std::to_string(*y) + " < L_t with n_R(y) > n_L(y), but n_R(x) < n_L(x) inside [y, L_t]");
    }
  }
  return detail::pass(Statement::NeighbourAndPlusMinus, !exercised);
}

inline VerifyResult verify_kth_visit_neighbour(const CoupledPair& pair) {
  const std::int64_t radius = detail::radius_of(pair);
  struct Visit {
    std::int64_t time;
    std::int64_t left_neighbour_count;
  };
  const auto record = [radius](const Trajectory& walk) {
    SiteCounter counts(radius);
    std::vector<std::vector<Visit>> visits(static_cast<std::size_t>(2 * radius + 1));
    for (std::int64_t n = 0; n <= walk.horizon(); ++n) {
      const Site x = walk[n];
      counts.increment(x);
      visits[static_cast<std::size_t>(x + radius)].push_back({n, counts[x - 1]});
    }
    return visits;
  };
  const auto vl = record(pair.left);
  const auto vr = record(pair.right);
  std::optional<VerifyResult> earliest;
  std::int64_t earliest_time = std::numeric_limits<std::int64_t>::max();
  for (std::size_t i = 0; i < vl.size(); ++i) {
    const std::size_t common = std::min(vl[i].size(), vr[i].size());
    for (std::size_t k = 0; k < common; ++k) {
      if (vr[i][k].left_neighbour_count <= vl[i][k].left_neighbour_count) continue;
      const std::int64_t t = std::max(vl[i][k].time, vr[i][k].time);
      if (t < earliest_time) {
        earliest_time = t;
        const Site x = static_cast<Site>(i) - radius;
        earliest = detail::fail(
            Statement::KthVisitNeighbour, t, x, static_cast<std::int64_t>(k) + 1,
            "n_R(x-1) = " + std::to_string(vr[i][k].left_neighbour_count) +
                " at R's visit vs n_L(x-1) = " + std::to_string(vl[i][k].left_neighbour_count));
      }
      break;
    }
  }
  if (earliest) return *earliest;
  return detail::pass(Statement::KthVisitNeighbour, false);
}

inline VerifyResult verify_record_lead(const CoupledPair& pair) {
  Site max_r = 0;
  Site min_l = 0;
  bool exercised = false;
  for (std::int64_t n = 1; n <= pair.horizon(); ++n) {
    const Site r = pair.right[n];
    const Site l = pair.left[n];
    if (r > max_r) {
      max_r = r;
      exercised = true;
      if (r < l) {
        return detail::fail(Statement::RecordLead, n, r, 0,
                            "R sets a new maximum " + std::to_string(r) + " while L = " + std::to_string(l));
      }
    }
    if (l < min_l) {
      min_l = l;
      exercised = true;
      if (l > r) {
        return detail::fail(Statement::RecordLead, n, l, 0,
                            "L sets a new minimum " + std::to_string(l) + " while R = " + std::to_string(r));
      }
    }
  }
  return detail::pass(Statement::RecordLead, !exercised);
}

inline VerifyResult verify(const CoupledPair& pair, Statement s) {
  switch (s) {
    case Statement::Envelopes: return verify_envelopes(pair);
    case Statement::HittingOrder: return verify_hitting_order(pair);
    case Statement::LocalTimeOrder: return verify_local_time_order(pair);
    case Statement::MaxVisits: return verify_max_visits(pair);
    case Statement::NeighbourAndPlusMinus: return verify_neighbour_and_plusminus(pair);
    case Statement::KthVisitNeighbour: return verify_kth_visit_neighbour(pair);
    case Statement::RecordLead: return verify_record_lead(pair);
  }
  throw std::invalid_argument("unknown statement");
}

inline std::vector<VerifyResult> verify_all(const CoupledPair& pair,
                                            std::span<const Statement> statements = kAllStatements) {
  std::vector<VerifyResult> out;
  out.reserve(statements.size());
  for (Statement s : statements) out.push_back(verify(pair, s));
  return out;
}

/// Hand-built pairs of legal walks, not related by ⪯, each violating the
/// given statement within a few steps.
///
///  - envelopes, hitting_order: L = 0,1,2,3,4 and R = 0,-1,0,1,2 (arrow (0,1) differs).
///  - local_time_order, neighbour_and_plusminus: L = 0,1,2 and R = 0,-1,0; at t=2
///    site 0 has R-excess and site 1 has L-excess.
///  - max_visits: L = 0,1,0,1 and R = 0,1,0,-1; L visits max R twice.
///  - kth_visit_neighbour, record_lead: L = 0,1,2,3,4 and R = 0,-1,0,1,2; R reaches 1
///    after two visits to 0 and sets its record while L is ahead.
inline CoupledPair negative_control(Statement s) {
  const auto table = [](std::initializer_list<std::pair<const Site, const char*>> stacks) {
    ExplicitTable t;
    for (const auto& [site, text] : stacks) t.stacks[site] = arrows_from_string(text);
    return ArrowSystem(std::move(t));
  };
  const ArrowSystem all_right = ArrowSystem::constant(Arrow::Right);
  switch (s) {
    case Statement::Envelopes:
    case Statement::HittingOrder:
      return make_pair_from_systems(all_right, table({{0, "L"}}), 4, Relation::Preceq,
                                    "negative control: first arrow at 0 reversed");
    case Statement::LocalTimeOrder:
    case Statement::NeighbourAndPlusMinus:
      return make_pair_from_systems(all_right, table({{0, "LL"}, {-1, "R"}}), 2, Relation::Preceq,
                                    "negative control: R-excess left of L-excess");
    case Statement::MaxVisits:
      return make_pair_from_systems(table({{0, "RR"}, {1, "L"}}), table({{0, "RL"}, {1, "L"}}), 3,
                                    Relation::Preceq, "negative control: L revisits max R");
    case Statement::KthVisitNeighbour:
    case Statement::RecordLead:
      return make_pair_from_systems(all_right, table({{0, "LR"}, {-1, "R"}}), 4, Relation::Preceq,
                                    "negative control: R detours left before its record");
  }
  throw std::invalid_argument("unknown statement");
}

}  // namespace arrowwalk
