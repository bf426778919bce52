#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "arrowwalk/arrow_system.hpp"
#include "arrowwalk/cookie.hpp"
#include "arrowwalk/trajectory.hpp"
#include "arrowwalk/uniform_field.hpp"

namespace arrowwalk {

/// Past of a self-interacting walk up to the current time.
class WalkHistory {
 public:
  explicit WalkHistory(std::int64_t horizon) : visits_(horizon + 1) {
    path_.reserve(static_cast<std::size_t>(horizon) + 1);
  }

  std::span<const Site> positions() const noexcept { return path_; }
  Site current() const noexcept { return path_.back(); }
  std::int64_t time() const noexcept { return static_cast<std::int64_t>(path_.size()) - 1; }
  /// Visits to x up to and including the current time.
  std::int64_t visits(Site x) const noexcept { return visits_[x]; }

  Level push(Site x) {
    path_.push_back(x);
    return visits_.increment(x);
  }

  std::vector<Site> release() && { return std::move(path_); }

 private:
  std::vector<Site> path_;
  SiteCounter visits_;
};

/// Probability of a right step given the history and the visit count k at
/// the current site.
using DriftLaw = std::function<double(const WalkHistory&, Level)>;

struct ContractViolation : std::runtime_error {
  std::int64_t n;
  Level k;
  double value;
  double bound;

  ContractViolation(std::int64_t n_, Level k_, double value_, double bound_)
      : std::runtime_error("drift law exceeds its bound at n=" + std::to_string(n_) + ", k=" + std::to_string(k_) +
                           ": " + std::to_string(value_) + " > " + std::to_string(bound_)),
        n(n_),
        k(k_),
        value(value_),
        bound(bound_) {}
};

/// η_1..η_M followed by 1/2.
inline CookieEnvironment envelope_environment(const std::vector<double>& eta) {
  return CookieEnvironment::homogeneous(eta, 0.5);
}

inline double envelope_alpha(const std::vector<double>& eta) {
  double a = 0.0;
  for (double e : eta) a += 2.0 * e - 1.0;
  return a;
}

struct EnvelopeResult {
  Trajectory left;
  Trajectory right;
  double alpha = 0.0;
  /// Arrows of the dominated walk compared against the envelope.
  std::int64_t arrows_checked = 0;
};

/// Runs a self-interacting walk L and the excited walk R in η from the same
/// uniforms: L steps right iff U(L_n, k) < P, R iff U(R_n, k) < η_k.
/// Throws ContractViolation when P exceeds η_k (or 1/2 past M), and
/// std::logic_error if a consumed arrow of L is Right while R's is Left.
inline EnvelopeResult envelope_walk(const DriftLaw& law, const std::vector<double>& eta,
                                    const UniformField& field, std::uint64_t stream, std::int64_t horizon) {
  if (horizon < 0 || horizon >= kMaxHorizon) throw std::invalid_argument("horizon out of range");
  const auto env = envelope_environment(eta);
  const ArrowSystem envelope = sample_system(env, field, stream);

  EnvelopeResult out;
  out.alpha = envelope_alpha(eta);
  WalkHistory h(horizon);
  Level k = h.push(0);
  for (std::int64_t n = 0; n < horizon; ++n) {
    const Site x = h.current();
    const double p = law(h, k);
    const double bound = env.at(x, k);
    if (p > bound) throw ContractViolation(n, k, p, bound);
    const Arrow a = field.uniform(stream, x, k, role::kArrow) < p ? Arrow::Right : Arrow::Left;
    if (a == Arrow::Right && envelope.at(x, k) != Arrow::Right) {
      throw std::logic_error("envelope order violated at site " + std::to_string(x) + ", level " + std::to_string(k));
    }
    ++out.arrows_checked;
    k = h.push(x + step_of(a));
  }
  out.left = Trajectory(std::move(h).release());
  out.right = run_walk(envelope, horizon);
  return out;
}

/// The self-interacting walk alone, optionally with every step from 0 forced
/// to the right.
inline Trajectory run_drift_walk(const DriftLaw& law, const UniformField& field, std::uint64_t stream,
                                 std::int64_t horizon, bool zero_right = false) {
  if (horizon < 0 || horizon >= kMaxHorizon) throw std::invalid_argument("horizon out of range");
  WalkHistory h(horizon);
  Level k = h.push(0);
  for (std::int64_t n = 0; n < horizon; ++n) {
    const Site x = h.current();
    const double p = zero_right && x == 0 ? 1.0 : law(h, k);
    k = h.push(x + (field.uniform(stream, x, k, role::kArrow) < p ? 1 : -1));
  }
  return Trajectory(std::move(h).release());
}

/// Right-step probability of once-reinforced random walk: edges already
/// crossed weigh 1 + β, others 1.
inline double orrw_probability(const WalkHistory& h, double beta) {
  const Site x = h.current();
  const bool right_crossed = h.visits(x + 1) > 0;
  const bool left_crossed = h.visits(x - 1) > 0;
  const double wr = right_crossed ? 1.0 + beta : 1.0;
  const double wl = left_crossed ? 1.0 + beta : 1.0;
  return wr / (wl + wr);
}

/// ORRW for the first M visits to a site, then capped at 1/2.
inline DriftLaw orrw_capped(double beta, Level m) {
  if (beta < 0) throw std::invalid_argument("beta must be >= 0");
  return [beta, m](const WalkHistory& h, Level k) {
    const double p = orrw_probability(h, beta);
    return k <= m ? p : std::min(p, 0.5);
  };
}

/// ORRW reflected at 0: forced right at 0, 1/(2+β) when x+1 is unvisited,
/// 1/2 otherwise.
inline DriftLaw orrw_one_sided(double beta) {
  if (beta < 0) throw std::invalid_argument("beta must be >= 0");
  return [beta](const WalkHistory& h, Level) {
    const Site x = h.current();
    if (x == 0) return 1.0;
    return h.visits(x + 1) > 0 ? 0.5 : 1.0 / (2.0 + beta);
  };
}

struct OrrwProbeResult {
  Trajectory stronger;  // larger β
  Trajectory weaker;
  std::int64_t common_arrows = 0;
  std::int64_t violations = 0;
  std::optional<std::pair<Site, Level>> first_violation;
};

/// Runs one-sided ORRW for β >= ζ from shared uniforms and checks, on every
/// arrow consumed by both walks, that a Right of the β-walk is a Right of the
/// ζ-walk. An empirical probe of an unproved monotone coupling.
inline OrrwProbeResult orrw_monotone_probe(double beta, double zeta, const UniformField& field,
                                           std::uint64_t stream, std::int64_t horizon) {
  if (beta < zeta) throw std::invalid_argument("orrw probe needs beta >= zeta");
  OrrwProbeResult out;
  out.stronger = run_drift_walk(orrw_one_sided(beta), field, stream, horizon);
  out.weaker = run_drift_walk(orrw_one_sided(zeta), field, stream, horizon);
  const auto consumed = [](const Trajectory& t) {
    std::map<std::pair<Site, Level>, Arrow> arrows;
    SiteCounter c(t.horizon() + 1);
    for (std::int64_t n = 0; n < t.horizon(); ++n) {
      const Level k = c.increment(t[n]);
      arrows.emplace(std::make_pair(t[n], k), t[n + 1] > t[n] ? Arrow::Right : Arrow::Left);
    }
    return arrows;
  };
  const auto a = consumed(out.stronger);
  const auto b = consumed(out.weaker);
  for (const auto& [key, arrow] : a) {
    auto it = b.find(key);
    if (it == b.end()) continue;
    ++out.common_arrows;
    if (arrow == Arrow::Right && it->second == Arrow::Left) {
      ++out.violations;
      if (!out.first_violation) out.first_violation = key;
    }
  }
  return out;
}

}  // namespace arrowwalk
