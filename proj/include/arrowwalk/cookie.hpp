#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "arrowwalk/arrow_system.hpp"
#include "arrowwalk/uniform_field.hpp"

namespace arrowwalk {

/// Right-step probabilities ω(x, k): explicit lists per site, a default list
/// for every other site, and a constant tail above both.
class CookieEnvironment {
 public:
  CookieEnvironment() = default;

  CookieEnvironment(std::map<Site, std::vector<double>> sites, std::vector<double> default_stack,
                    double tail = 0.5)
      : sites_(std::move(sites)), default_(std::move(default_stack)), tail_(tail) {
    validate();
  }

  static CookieEnvironment constant(double p) { return CookieEnvironment({}, {}, p); }

  /// The same cookie list at every site, tail 1/2.
  static CookieEnvironment homogeneous(std::vector<double> cookies, double tail = 0.5) {
    return CookieEnvironment({}, std::move(cookies), tail);
  }

  double at(Site x, Level k) const {
    if (k < 1) throw std::invalid_argument("cookie levels start at 1");
    const auto& s = stack(x);
    return k <= static_cast<Level>(s.size()) ? s[static_cast<std::size_t>(k - 1)] : tail_;
  }

  const std::vector<double>& stack(Site x) const {
    auto it = sites_.find(x);
    return it == sites_.end() ? default_ : it->second;
  }

  const std::map<Site, std::vector<double>>& sites() const noexcept { return sites_; }
  const std::vector<double>& default_stack() const noexcept { return default_; }
  double tail() const noexcept { return tail_; }

  /// Longest explicit list, over the sites and the default.
  Level depth() const noexcept {
    std::size_t d = default_.size();
    for (const auto& [x, s] : sites_) d = std::max(d, s.size());
    return static_cast<Level>(d);
  }

  void set_site(Site x, std::vector<double> probs) {
    check_probs(probs);
    sites_[x] = std::move(probs);
  }

  friend bool operator==(const CookieEnvironment&, const CookieEnvironment&) = default;

 private:
  static void check_prob(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("cookie probability outside [0,1]");
  }
  static void check_probs(const std::vector<double>& ps) {
    for (double p : ps) check_prob(p);
  }
  void validate() const {
    check_prob(tail_);
    check_probs(default_);
    for (const auto& [x, s] : sites_) check_probs(s);
  }

  std::map<Site, std::vector<double>> sites_;
  std::vector<double> default_;
  double tail_ = 0.5;
};

/// Per-site partition of levels 1..D into finite blocks; levels above D are
/// singleton blocks. Levels inside a block are kept in increasing order.
class BlockPartition {
 public:
  using Block = std::vector<Level>;
  using Blocks = std::vector<Block>;

  BlockPartition() = default;

  BlockPartition(Blocks blocks, int cap = 3, std::map<Site, Blocks> sites = {})
      : cap_(cap), default_(normalize(std::move(blocks))) {
    if (cap < 1) throw std::invalid_argument("partition cap must be >= 1");
    check(default_);
    for (auto& [x, b] : sites) {
      sites_.emplace(x, normalize(std::move(b)));
      check(sites_.at(x));
    }
  }

  /// Consecutive blocks of `size` covering levels 1..depth.
  static BlockPartition consecutive(Level size, Level depth, int cap = 3) {
    Blocks out;
    for (Level lo = 1; lo <= depth; lo += size) {
      Block b;
      for (Level l = lo; l < lo + size && l <= depth; ++l) b.push_back(l);
      out.push_back(std::move(b));
    }
    return BlockPartition(std::move(out), cap);
  }

  int cap() const noexcept { return cap_; }
  const Blocks& default_blocks() const noexcept { return default_; }
  const std::map<Site, Blocks>& site_blocks() const noexcept { return sites_; }

  const Blocks& blocks(Site x) const {
    auto it = sites_.find(x);
    return it == sites_.end() ? default_ : it->second;
  }

  Level depth(Site x) const {
    Level d = 0;
    for (const auto& b : blocks(x)) d = std::max(d, b.back());
    return d;
  }

  Level max_depth() const {
    Level d = 0;
    for (const auto& b : default_) d = std::max(d, b.back());
    for (const auto& [x, bs] : sites_) {
      for (const auto& b : bs) d = std::max(d, b.back());
    }
    return d;
  }

  /// Index of the block holding `level` at x, or nullopt for a tail singleton.
  std::optional<std::size_t> block_index(Site x, Level level) const {
    const auto& bs = blocks(x);
    for (std::size_t i = 0; i < bs.size(); ++i) {
      if (std::binary_search(bs[i].begin(), bs[i].end(), level)) return i;
    }
    return std::nullopt;
  }

 private:
  static Blocks normalize(Blocks bs) {
    for (auto& b : bs) std::sort(b.begin(), b.end());
    return bs;
  }

  void check(const Blocks& bs) const {
    std::set<Level> seen;
    Level top = 0;
    for (const auto& b : bs) {
      if (b.empty()) throw std::invalid_argument("partition block is empty");
      if (static_cast<int>(b.size()) > cap_) {
        throw std::invalid_argument("partition block larger than cap " + std::to_string(cap_));
      }
      for (Level l : b) {
        if (l < 1) throw std::invalid_argument("partition levels start at 1");
        if (!seen.insert(l).second) throw std::invalid_argument("partition blocks overlap at level " + std::to_string(l));
        top = std::max(top, l);
      }
    }
    if (static_cast<Level>(seen.size()) != top) {
      throw std::invalid_argument("partition blocks must cover 1..D without gaps");
    }
  }

  int cap_ = 3;
  Blocks default_;
  std::map<Site, Blocks> sites_;
};

/// Arrow (x, n) is Right iff U(x, n) < ω(x, n).
inline ArrowSystem sample_system(const CookieEnvironment& env, const UniformField& field,
                                 std::uint64_t stream) {
  auto e = std::make_shared<const CookieEnvironment>(env);
  return ArrowSystem(
      [e, field, stream](Site x, Level n) {
        return field.uniform(stream, x, n, role::kArrow) < e->at(x, n) ? Arrow::Right : Arrow::Left;
      },
      SystemKind::Sampled, "sampled");
}

/// Sites where either environment or the partition is explicit, plus one
/// representative of the shared default profile.
inline std::vector<Site> profile_sites(const CookieEnvironment& a, const CookieEnvironment& b,
                                       const BlockPartition& partition) {
  std::set<Site> s;
  for (const auto& [x, v] : a.sites()) s.insert(x);
  for (const auto& [x, v] : b.sites()) s.insert(x);
  for (const auto& [x, v] : partition.site_blocks()) s.insert(x);
  Site fresh = s.empty() ? 0 : *s.rbegin() + 1;
  std::vector<Site> out(s.begin(), s.end());
  out.push_back(fresh);
  return out;
}

inline std::vector<double> block_values(const CookieEnvironment& env, Site x,
                                        const BlockPartition::Block& block) {
  std::vector<double> v;
  v.reserve(block.size());
  for (Level l : block) v.push_back(env.at(x, l));
  return v;
}

/// Permutes ω within every block into nondecreasing order.
inline CookieEnvironment sorted_env(const CookieEnvironment& env, const BlockPartition& partition) {
  const auto sort_profile = [&](Site x) {
    const Level depth = std::max<Level>(partition.depth(x), static_cast<Level>(env.stack(x).size()));
    std::vector<double> out;
    for (Level l = 1; l <= depth; ++l) out.push_back(env.at(x, l));
    for (const auto& b : partition.blocks(x)) {
      auto vals = block_values(env, x, b);
      std::sort(vals.begin(), vals.end());
      for (std::size_t i = 0; i < b.size(); ++i) out[static_cast<std::size_t>(b[i] - 1)] = vals[i];
    }
    return out;
  };

  std::map<Site, std::vector<double>> sites;
  for (const auto& [x, s] : env.sites()) sites[x] = sort_profile(x);
  for (const auto& [x, bs] : partition.site_blocks()) sites[x] = sort_profile(x);

  std::vector<double> def;
  {
    const Level depth = std::max<Level>(static_cast<Level>(env.default_stack().size()),
                                        [&] {
                                          Level d = 0;
                                          for (const auto& b : partition.default_blocks()) d = std::max(d, b.back());
                                          return d;
                                        }());
    for (Level l = 1; l <= depth; ++l) {
      def.push_back(l <= static_cast<Level>(env.default_stack().size())
                        ? env.default_stack()[static_cast<std::size_t>(l - 1)]
                        : env.tail());
    }
    for (const auto& b : partition.default_blocks()) {
      std::vector<double> vals;
      for (Level l : b) vals.push_back(def[static_cast<std::size_t>(l - 1)]);
      std::sort(vals.begin(), vals.end());
      for (std::size_t i = 0; i < b.size(); ++i) def[static_cast<std::size_t>(b[i] - 1)] = vals[i];
    }
  }
  return CookieEnvironment(std::move(sites), std::move(def), env.tail());
}

/// A swap of block positions (j, k), j < k, exchanging ω at those levels.
using Swap = std::pair<std::size_t, std::size_t>;

inline constexpr std::size_t kMaxSwapBlock = 8;

/// Shortest sequence of favourable swaps turning `from` into `to`, found by
/// breadth-first search in lexicographic swap order. A swap (j, k) is
/// favourable when the current value at j is <= the value at k.
inline std::optional<std::vector<Swap>> favourable_swap_path(const std::vector<double>& from,
                                                             const std::vector<double>& to) {
  if (from.size() != to.size()) throw std::invalid_argument("swap path: block sizes differ");
  if (from.size() > kMaxSwapBlock) throw std::invalid_argument("swap path: block larger than 8");
  if (from == to) return std::vector<Swap>{};
  auto a = from;
  auto b = to;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  if (a != b) return std::nullopt;

  std::map<std::vector<double>, std::pair<std::vector<double>, Swap>> parent;
  std::deque<std::vector<double>> queue{from};
  parent.emplace(from, std::make_pair(from, Swap{0, 0}));
  while (!queue.empty()) {
    auto cur = std::move(queue.front());
    queue.pop_front();
    for (std::size_t j = 0; j < cur.size(); ++j) {
      for (std::size_t k = j + 1; k < cur.size(); ++k) {
        if (!(cur[j] < cur[k])) continue;
        auto next = cur;
        std::swap(next[j], next[k]);
        if (parent.contains(next)) continue;
        parent.emplace(next, std::make_pair(cur, Swap{j, k}));
        if (next == to) {
          std::vector<Swap> path;
          for (auto at = next; at != from; at = parent.at(at).first) path.push_back(parent.at(at).second);
          std::reverse(path.begin(), path.end());
          return path;
        }
        queue.push_back(std::move(next));
      }
    }
  }
  return std::nullopt;
}

struct EnvOrderReport {
  bool pointwise_leq = true;
  bool is_A_permutation = true;
  bool preceq_A = true;
  /// First site where each property fails.
  std::optional<Site> pointwise_witness;
  std::optional<Site> permutation_witness;
  std::optional<Site> preceq_witness;
};

/// Compares two environments on sites [site_lo, site_hi] and levels up to
/// level_max, which must not cut through a block.
inline EnvOrderReport env_order(const CookieEnvironment& a, const CookieEnvironment& b,
                                const BlockPartition& partition, const Window& window) {
  EnvOrderReport rep;
  for (Site x = window.site_lo; x <= window.site_hi; ++x) {
    for (Level l = 1; l <= window.level_max; ++l) {
      if (rep.pointwise_leq && a.at(x, l) > b.at(x, l)) {
        rep.pointwise_leq = false;
        rep.pointwise_witness = x;
      }
    }
    std::set<Level> covered;
    for (const auto& blk : partition.blocks(x)) {
      const bool inside = blk.back() <= window.level_max;
      if (!inside && blk.front() <= window.level_max) {
        throw std::invalid_argument("window level_max cuts through a partition block at site " + std::to_string(x));
      }
      if (!inside) continue;
      covered.insert(blk.begin(), blk.end());
      if (blk.size() > kMaxSwapBlock) throw std::invalid_argument("env_order: block larger than 8");
      const auto va = block_values(a, x, blk);
      const auto vb = block_values(b, x, blk);
      auto sa = va;
      auto sb = vb;
      std::sort(sa.begin(), sa.end());
      std::sort(sb.begin(), sb.end());
      if (sa != sb) {
        if (rep.is_A_permutation) rep.permutation_witness = x;
        rep.is_A_permutation = false;
      }
      if (rep.preceq_A && !favourable_swap_path(va, vb)) {
        rep.preceq_A = false;
        rep.preceq_witness = x;
      }
    }
    for (Level l = 1; l <= window.level_max; ++l) {
      if (covered.contains(l) || a.at(x, l) == b.at(x, l)) continue;
      if (rep.is_A_permutation) rep.permutation_witness = x;
      rep.is_A_permutation = false;
      if (rep.preceq_A) rep.preceq_witness = x;
      rep.preceq_A = false;
    }
  }
  return rep;
}

/// Window covering every explicit site of both environments and the
/// partition, one default site beyond them, and all explicit levels.
inline Window profile_window(const CookieEnvironment& a, const CookieEnvironment& b,
                             const BlockPartition& partition) {
  const auto sites = profile_sites(a, b, partition);
  Window w;
  w.site_lo = std::min<Site>(sites.front(), 0);
  w.site_hi = sites.back();
  w.level_max = std::max({a.depth(), b.depth(), partition.max_depth(), Level{1}});
  return w;
}

}  // namespace arrowwalk
