#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "arrowwalk/arrow.hpp"

namespace arrowwalk {

/// A finite bottom-to-top list of arrows at one site.
using Stack = std::vector<Arrow>;

inline std::vector<int> prefix_lefts(std::span<const Arrow> s) {
  std::vector<int> out;
  out.reserve(s.size());
  int c = 0;
  for (Arrow a : s) {
    c += a == Arrow::Left;
    out.push_back(c);
  }
  return out;
}

/// a ⪯ b for single stacks of equal length: every prefix of a holds at
/// least as many Left arrows as the same prefix of b.
inline bool stack_precedes(std::span<const Arrow> a, std::span<const Arrow> b) {
  if (a.size() != b.size()) throw std::invalid_argument("stack_precedes: lengths differ");
  const auto pa = prefix_lefts(a);
  const auto pb = prefix_lefts(b);
  for (std::size_t i = 0; i < pa.size(); ++i) {
    if (pa[i] < pb[i]) return false;
  }
  return true;
}

inline int count_rights(std::span<const Arrow> s) {
  return static_cast<int>(std::count(s.begin(), s.end(), Arrow::Right));
}

/// All n-stacks with y Right arrows, from the ⪯-largest (Rights at the
/// bottom) down. Throws for n >= 4, where the set is no longer a chain.
inline std::vector<Stack> stack_chain(int n, int y) {
  if (n < 1) throw std::invalid_argument("stack_chain: n must be >= 1");
  if (n > 3) throw std::invalid_argument("stack_chain: stacks of height >= 4 are not totally ordered");
  if (y < 0 || y > n) throw std::invalid_argument("stack_chain: y outside 0..n");
  std::vector<Stack> out;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    Stack s(static_cast<std::size_t>(n), Arrow::Left);
    for (int i = 0; i < n; ++i) {
      if (mask >> i & 1u) s[static_cast<std::size_t>(i)] = Arrow::Right;
    }
    if (count_rights(s) == y) out.push_back(std::move(s));
  }
  std::sort(out.begin(), out.end(),
            [](const Stack& a, const Stack& b) { return prefix_lefts(a) < prefix_lefts(b); });
  for (std::size_t i = 1; i < out.size(); ++i) {
    if (!stack_precedes(out[i], out[i - 1])) throw std::logic_error("stack_chain: not a chain");
  }
  return out;
}

/// Probability of one stack under independent arrows, Right w.p. probs[i].
inline double stack_probability(std::span<const double> probs, std::span<const Arrow> stack) {
  if (probs.size() != stack.size()) throw std::invalid_argument("stack_probability: sizes differ");
  double p = 1.0;
  for (std::size_t i = 0; i < probs.size(); ++i) p *= stack[i] == Arrow::Right ? probs[i] : 1.0 - probs[i];
  return p;
}

/// Law of the number of Right arrows in a block, by enumerating all 2^n
/// outcomes.
inline std::vector<double> poisson_binomial(std::span<const double> probs) {
  if (probs.size() > 20) throw std::invalid_argument("poisson_binomial: at most 20 trials");
  const std::size_t n = probs.size();
  std::vector<double> pmf(n + 1, 0.0);
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    double p = 1.0;
    for (std::size_t i = 0; i < n; ++i) p *= (mask >> i & 1u) ? probs[i] : 1.0 - probs[i];
    pmf[static_cast<std::size_t>(std::popcount(mask))] += p;
  }
  return pmf;
}

struct NullConditioning : std::domain_error {
  using std::domain_error::domain_error;
};

/// Law of the block's stack given y Right arrows, over stack_chain(n, y).
inline std::vector<double> conditional_stack_pmf(std::span<const double> probs, int y) {
  const int n = static_cast<int>(probs.size());
  const auto chain = stack_chain(n, y);
  std::vector<double> out;
  out.reserve(chain.size());
  double q = 0.0;
  for (const auto& s : chain) {
    out.push_back(stack_probability(probs, s));
    q += out.back();
  }
  if (!(q > 0.0)) {
    throw NullConditioning("conditional_stack_pmf: P(Y = " + std::to_string(y) + ") is zero");
  }
  for (auto& p : out) p /= q;
  return out;
}

/// Couples the arrows at two levels j < k with probabilities (pj, pk) from a
/// single uniform: RR on [0, pj·pk), RL up to pj, LR up to pj+pk-pj·pk, then LL.
inline std::pair<Arrow, Arrow> pair_swap_block(double pj, double pk, double u) {
  const double lo = std::min(pj, pk);
  const double hi = std::max(pj, pk);
  const double both = lo * hi;
  const double either = lo + hi - both;
  if (u < both) return {Arrow::Right, Arrow::Right};
  if (u < pj) return {Arrow::Right, Arrow::Left};
  if (u < either) return {Arrow::Left, Arrow::Right};
  return {Arrow::Left, Arrow::Left};
}

/// The u-interval on which pair_swap_block(pj, pk, ·) returns `pair`.
inline std::pair<double, double> pair_swap_interval(double pj, double pk, std::pair<Arrow, Arrow> pair) {
  const double lo = std::min(pj, pk);
  const double hi = std::max(pj, pk);
  const double both = lo * hi;
  const double either = lo + hi - both;
  if (pair.first == Arrow::Right && pair.second == Arrow::Right) return {0.0, both};
  if (pair.first == Arrow::Right) return {both, pj};
  if (pair.second == Arrow::Right) return {pj, either};
  return {either, 1.0};
}

}  // namespace arrowwalk
