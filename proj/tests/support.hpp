#pragma once

// Hand-rolled generators and independent oracles shared by the test suites.

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <utility>
#include <vector>

#include "arrowwalk.hpp"

namespace testsupport {

namespace aw = arrowwalk;

/// Explicit system with random stacks on sites [-radius, radius].
inline aw::ArrowSystem random_explicit_system(std::mt19937_64& rng, int radius = 12, int max_height = 10) {
  std::uniform_int_distribution<int> height(0, max_height);
  std::bernoulli_distribution coin(0.5);
  aw::ExplicitTable t;
  for (int x = -radius; x <= radius; ++x) {
    std::vector<aw::Arrow> s(static_cast<std::size_t>(height(rng)));
    for (auto& a : s) a = coin(rng) ? aw::Arrow::Right : aw::Arrow::Left;
    if (!s.empty()) t.stacks[x] = std::move(s);
    if (coin(rng)) t.site_fill[x] = coin(rng) ? aw::Arrow::Right : aw::Arrow::Left;
  }
  t.default_fill = coin(rng) ? aw::Arrow::Right : aw::Arrow::Left;
  return aw::ArrowSystem(std::move(t));
}

/// Cookie environment with a few random cookies per site on [-radius, radius].
inline aw::CookieEnvironment random_environment(std::mt19937_64& rng, int radius = 6, int depth = 4) {
  std::uniform_real_distribution<double> p(0.0, 1.0);
  std::uniform_int_distribution<int> len(0, depth);
  std::map<aw::Site, std::vector<double>> sites;
  for (int x = -radius; x <= radius; ++x) {
    std::vector<double> s(static_cast<std::size_t>(len(rng)));
    for (auto& v : s) v = p(rng);
    sites[x] = std::move(s);
  }
  std::vector<double> def(static_cast<std::size_t>(len(rng)));
  for (auto& v : def) v = p(rng);
  return aw::CookieEnvironment(std::move(sites), std::move(def), 0.5);
}

/// Pointwise raises every cookie of `env` towards 1 by a random fraction.
inline aw::CookieEnvironment raised(const aw::CookieEnvironment& env, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> f(0.0, 1.0);
  auto bump = [&](std::vector<double> v) {
    for (auto& p : v) p = p + (1.0 - p) * f(rng);
    return v;
  };
  std::map<aw::Site, std::vector<double>> sites;
  for (const auto& [x, s] : env.sites()) sites[x] = bump(s);
  return aw::CookieEnvironment(std::move(sites), bump(env.default_stack()), env.tail());
}

/// Every nearest-neighbour path from 0 with exactly `steps` steps.
inline std::vector<std::vector<aw::Site>> all_paths(int steps) {
  std::vector<std::vector<aw::Site>> out;
  for (std::uint32_t mask = 0; mask < (1u << steps); ++mask) {
    std::vector<aw::Site> p{0};
    for (int i = 0; i < steps; ++i) p.push_back(p.back() + ((mask >> i & 1u) ? 1 : -1));
    out.push_back(std::move(p));
  }
  return out;
}

/// Re-simulates a walk from scratch with a map of visit counts.
inline std::vector<aw::Site> replay_walk(const aw::ArrowSystem& sys, std::int64_t horizon) {
  std::map<aw::Site, aw::Level> seen;
  std::vector<aw::Site> path{0};
  for (std::int64_t n = 0; n < horizon; ++n) {
    const aw::Site x = path.back();
    const aw::Level k = ++seen[x];
    path.push_back(sys.at(x, k) == aw::Arrow::Right ? x + 1 : x - 1);
  }
  return path;
}

/// Poisson-binomial pmf by sequential convolution.
inline std::vector<double> poisson_binomial_dp(const std::vector<double>& probs) {
  std::vector<double> pmf{1.0};
  for (double p : probs) {
    std::vector<double> next(pmf.size() + 1, 0.0);
    for (std::size_t y = 0; y < pmf.size(); ++y) {
      next[y] += pmf[y] * (1.0 - p);
      next[y + 1] += pmf[y] * p;
    }
    pmf = std::move(next);
  }
  return pmf;
}

/// Brute-force decision of whether ⪯-ordered systems generate two paths:
/// at each touched site, search all height-8 completions of the forced
/// prefixes for a pair with prefix Left-count domination.
class PathOrderOracle {
 public:
  static constexpr int kHeight = 8;

  PathOrderOracle() {
    for (int a = 0; a < 256; ++a) {
      for (int b = 0; b < 256; ++b) {
        int la = 0, lb = 0;
        bool ok = true;
        for (int i = 0; i < kHeight; ++i) {
          la += (a >> i & 1) == 0;  // bit set = Right
          lb += (b >> i & 1) == 0;
          if (la < lb) ok = false;
        }
        dominates_[a][b] = ok;
      }
    }
  }

  bool admits(const std::vector<aw::Site>& l, const std::vector<aw::Site>& r) {
    const auto fl = forced(l);
    const auto fr = forced(r);
    std::vector<aw::Site> sites;
    for (const auto& [x, s] : fl) sites.push_back(x);
    for (const auto& [x, s] : fr) sites.push_back(x);
    for (aw::Site x : sites) {
      const auto il = fl.find(x);
      const auto ir = fr.find(x);
      const Prefix pl = il == fl.end() ? Prefix{} : il->second;
      const Prefix pr = ir == fr.end() ? Prefix{} : ir->second;
      if (!site_ok(pl, pr)) return false;
    }
    return true;
  }

 private:
  using Prefix = std::pair<int, int>;  // (bits, length)

  static std::map<aw::Site, Prefix> forced(const std::vector<aw::Site>& path) {
    std::map<aw::Site, Prefix> out;
    for (std::size_t n = 0; n + 1 < path.size(); ++n) {
      auto& [bits, len] = out[path[n]];
      if (path[n + 1] > path[n]) bits |= 1 << len;
      ++len;
    }
    return out;
  }

  bool site_ok(Prefix pl, Prefix pr) {
    const auto key = std::make_pair(pl, pr);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    bool found = false;
    for (int a = 0; a < 256 && !found; ++a) {
      if ((a & ((1 << pl.second) - 1)) != pl.first) continue;
      for (int b = 0; b < 256 && !found; ++b) {
        if ((b & ((1 << pr.second) - 1)) != pr.first) continue;
        found = dominates_[a][b];
      }
    }
    memo_[key] = found;
    return found;
  }

  bool dominates_[256][256];
  std::map<std::pair<Prefix, Prefix>, bool> memo_;
};

}  // namespace testsupport
