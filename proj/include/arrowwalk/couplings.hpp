#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "arrowwalk/arrow_system.hpp"
#include "arrowwalk/cookie.hpp"
#include "arrowwalk/stacks.hpp"
#include "arrowwalk/uniform_field.hpp"
#include "arrowwalk/verifier.hpp"

namespace arrowwalk {

struct OrderError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Inverse-CDF draw of the number of Right arrows, skipping null values.
inline int draw_block_count(std::span<const double> pmf, double u) {
  double total = 0.0;
  for (double p : pmf) total += p;
  double cum = 0.0;
  int last = -1;
  for (std::size_t y = 0; y < pmf.size(); ++y) {
    if (!(pmf[y] > 0.0)) continue;
    cum += pmf[y];
    last = static_cast<int>(y);
    if (u * total < cum) return last;
  }
  if (last < 0) throw NullConditioning("block pmf has no mass");
  return last;
}

/// First m with u < Σ_{i<=m} pmf[i]; the last index if rounding leaves u above the total.
inline std::size_t select_from_cdf(std::span<const double> pmf, double u) {
  double cum = 0.0;
  for (std::size_t m = 0; m < pmf.size(); ++m) {
    cum += pmf[m];
    if (u < cum) return m;
  }
  return pmf.size() - 1;
}

/// Stack of a block with Right count y, chosen by u along the ⪯-chain via the
/// block's conditional law.
inline Stack coupled_block_stack(std::span<const double> probs, int y, double u) {
  const auto pmf = conditional_stack_pmf(probs, y);
  return stack_chain(static_cast<int>(probs.size()), y)[select_from_cdf(pmf, u)];
}

/// Shared-randomness coupling of a family of block permutations of one
/// environment. Every member draws the same Right count Y per block and then
/// picks its stack along the ⪯-chain with one shared uniform, so members that
/// are ⪯-comparable by favourable swaps give ⪯-ordered systems.
class BlockPermutationCoupling {
 public:
  BlockPermutationCoupling(const CookieEnvironment& base, const BlockPartition& partition,
                           std::vector<CookieEnvironment> members, const UniformField& field,
                           std::uint64_t stream)
      : state_(std::make_shared<State>(State{sorted_env(base, partition), partition, std::move(members),
                                             field, stream})) {
    if (partition.cap() > 3) throw std::invalid_argument("block-permutation coupling needs partition cap <= 3");
    for (const auto& m : state_->members) {
      const auto window = profile_window(state_->sorted, m, partition);
      const auto rep = env_order(state_->sorted, m, partition, window);
      if (!rep.is_A_permutation) {
        throw OrderError("member environment is not a block permutation of the base at site " +
                         std::to_string(rep.permutation_witness.value_or(0)));
      }
    }
  }

  std::size_t size() const noexcept { return state_->members.size(); }

  ArrowSystem system(std::size_t i) const {
    if (i >= size()) throw std::out_of_range("coupling member index");
    auto s = state_;
    return ArrowSystem([s, i](Site x, Level l) { return s->arrow(i, x, l); }, SystemKind::Sampled,
                       "block-permutation[" + std::to_string(i) + "]");
  }

  std::vector<ArrowSystem> systems() const {
    std::vector<ArrowSystem> out;
    for (std::size_t i = 0; i < size(); ++i) out.push_back(system(i));
    return out;
  }

  /// Right count Y shared by every member for the block holding (x, level).
  int block_count(Site x, Level level) const { return state_->count(x, level); }

 private:
  struct State {
    CookieEnvironment sorted;
    BlockPartition partition;
    std::vector<CookieEnvironment> members;
    UniformField field;
    std::uint64_t stream;

    int count(Site x, Level level) const {
      const auto bi = partition.block_index(x, level);
      if (!bi) {
        return field.uniform(stream, x, level, role::kArrow) < sorted.at(x, level) ? 1 : 0;
      }
      const auto& blk = partition.blocks(x)[*bi];
      const auto base = block_values(sorted, x, blk);
      return draw_block_count(poisson_binomial(base), field.uniform(stream, x, blk.front(), role::kBlockCount));
    }

    Arrow arrow(std::size_t i, Site x, Level level) const {
      const auto bi = partition.block_index(x, level);
      if (!bi || partition.blocks(x)[*bi].size() == 1) {
        return field.uniform(stream, x, level, role::kArrow) < members[i].at(x, level) ? Arrow::Right
                                                                                       : Arrow::Left;
      }
      const auto& blk = partition.blocks(x)[*bi];
      const int y = count(x, level);
      const auto probs = block_values(members[i], x, blk);
      const auto stack = coupled_block_stack(probs, y, field.uniform(stream, x, blk.front(), role::kBlockSelect));
      const auto pos = static_cast<std::size_t>(std::lower_bound(blk.begin(), blk.end(), level) - blk.begin());
      return stack[pos];
    }
  };

  std::shared_ptr<const State> state_;
};

inline std::vector<ArrowSystem> couple_block_permutations(const CookieEnvironment& base,
                                                          const BlockPartition& partition,
                                                          std::vector<CookieEnvironment> members,
                                                          const UniformField& field, std::uint64_t stream) {
  return BlockPermutationCoupling(base, partition, std::move(members), field, stream).systems();
}

/// Couples ω ⪯^𝒜 ω′ through a chain of favourable swaps ω_0 → … → ω_K.
///
/// The block under ω_0 is sampled arrow by arrow. Each link re-draws the
/// swapped pair from its conditional law given the current pair, using a
/// fresh link-indexed uniform, and maps it through the swapped table of
/// pair_swap_block. The end systems are ⪯-ordered surely.
class SwapChainCoupling {
 public:
  SwapChainCoupling(const CookieEnvironment& left, const CookieEnvironment& right,
                    const BlockPartition& partition, const UniformField& field, std::uint64_t stream)
      : state_(std::make_shared<State>()) {
    auto& s = *state_;
    s.left = left;
    s.right = right;
    s.partition = partition;
    s.field = field;
    s.stream = stream;
    const auto sites = profile_sites(left, right, partition);
    for (std::size_t i = 0; i < sites.size(); ++i) {
      const bool is_default = i + 1 == sites.size();
      auto plan = make_plan(sites[i]);
      if (is_default) {
        s.default_plan = std::move(plan);
      } else {
        s.plans.emplace(sites[i], std::move(plan));
      }
    }
    const auto window = profile_window(left, right, partition);
    for (Site x = window.site_lo; x <= window.site_hi; ++x) {
      for (Level l = 1; l <= window.level_max; ++l) {
        if (!partition.block_index(x, l) && left.at(x, l) != right.at(x, l)) {
          throw OrderError("environments differ outside the partition at site " + std::to_string(x));
        }
      }
    }
  }

  ArrowSystem left_system() const { return end_system(false); }
  ArrowSystem right_system() const { return end_system(true); }

  /// Number of favourable swaps in the block holding (x, level).
  std::size_t chain_length(Site x, Level level) const {
    const auto bi = state_->partition.block_index(x, level);
    return bi ? state_->plan(x)[*bi].size() : 0;
  }

 private:
  using SitePlan = std::vector<std::vector<Swap>>;

  struct State {
    CookieEnvironment left;
    CookieEnvironment right;
    BlockPartition partition;
    UniformField field;
    std::uint64_t stream = 0;
    std::map<Site, SitePlan> plans;
    SitePlan default_plan;

    const SitePlan& plan(Site x) const {
      auto it = plans.find(x);
      return it == plans.end() ? default_plan : it->second;
    }

    Arrow arrow(bool at_end, Site x, Level level) const {
      const auto bi = partition.block_index(x, level);
      if (!bi) {
        return field.uniform(stream, x, level, role::kArrow) < left.at(x, level) ? Arrow::Right : Arrow::Left;
      }
      const auto& blk = partition.blocks(x)[*bi];
      auto probs = block_values(left, x, blk);
      std::vector<Arrow> arrows;
      arrows.reserve(blk.size());
      for (std::size_t j = 0; j < blk.size(); ++j) {
        arrows.push_back(field.uniform(stream, x, blk[j], role::kArrow) < probs[j] ? Arrow::Right : Arrow::Left);
      }
      const auto pos = static_cast<std::size_t>(std::lower_bound(blk.begin(), blk.end(), level) - blk.begin());
      if (!at_end) return arrows[pos];
      const auto& links = plan(x)[*bi];
      for (std::size_t i = 0; i < links.size(); ++i) {
        const auto [j, k] = links[i];
        const double p = probs[j];
        const double q = probs[k];
        const auto [lo, hi] = pair_swap_interval(p, q, {arrows[j], arrows[k]});
        const double v = field.uniform(stream, x, blk.front(), role::kSwapLink + i);
        double u = lo + v * (hi - lo);
        if (u >= hi && hi > lo) u = std::nextafter(hi, lo);
        const auto next = pair_swap_block(q, p, u);
        arrows[j] = next.first;
        arrows[k] = next.second;
        std::swap(probs[j], probs[k]);
      }
      return arrows[pos];
    }
  };

  SitePlan make_plan(Site x) const {
    const auto& s = *state_;
    SitePlan plan;
    for (const auto& blk : s.partition.blocks(x)) {
      if (blk.size() > kMaxSwapBlock) throw std::invalid_argument("swap chain: block larger than 8");
      auto path = favourable_swap_path(block_values(s.left, x, blk), block_values(s.right, x, blk));
      if (!path) {
        throw OrderError("right environment is not reachable by favourable swaps at site " + std::to_string(x));
      }
      plan.push_back(std::move(*path));
    }
    return plan;
  }

  ArrowSystem end_system(bool at_end) const {
    auto s = state_;
    return ArrowSystem([s, at_end](Site x, Level l) { return s->arrow(at_end, x, l); }, SystemKind::Sampled,
                       at_end ? "swap-chain(right)" : "swap-chain(left)");
  }

  std::shared_ptr<State> state_;
};

inline CoupledPair couple_swap_chain(const CookieEnvironment& left, const CookieEnvironment& right,
                                     const BlockPartition& partition, const UniformField& field,
                                     std::uint64_t stream, std::int64_t horizon) {
  SwapChainCoupling c(left, right, partition, field, stream);
  return CoupledPair(run_walk(c.left_system(), horizon), run_walk(c.right_system(), horizon), Relation::Preceq,
                     "swap chain");
}

/// Two sampled systems from one field and stream; ⊴-ordered whenever the
/// environments are pointwise ordered.
inline CoupledPair couple_shared_uniform(const CookieEnvironment& left, const CookieEnvironment& right,
                                         const UniformField& field, std::uint64_t stream, std::int64_t horizon) {
  return CoupledPair(run_walk(sample_system(left, field, stream), horizon),
                     run_walk(sample_system(right, field, stream), horizon), Relation::Trileq, "shared uniform");
}

}  // namespace arrowwalk
