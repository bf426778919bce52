#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <exception>
#include <functional>
#include <iomanip>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "arrowwalk/cookie.hpp"
#include "arrowwalk/counterexamples.hpp"
#include "arrowwalk/couplings.hpp"
#include "arrowwalk/envelope.hpp"
#include "arrowwalk/io.hpp"
#include "arrowwalk/path_order.hpp"
#include "arrowwalk/verifier.hpp"

namespace arrowwalk {

enum class Family { SharedUniform, BlockPermutation, SwapChain, Envelope, Ce1, Ce2, IndependentControl };

inline constexpr std::array<Family, 7> kAllFamilies = {
    Family::SharedUniform, Family::BlockPermutation, Family::SwapChain, Family::Envelope,
    Family::Ce1,           Family::Ce2,              Family::IndependentControl};

inline const char* to_string(Family f) noexcept {
  switch (f) {
    case Family::SharedUniform: return "shared-uniform";
    case Family::BlockPermutation: return "block-permutation";
    case Family::SwapChain: return "swap-chain";
    case Family::Envelope: return "envelope";
    case Family::Ce1: return "ce1";
    case Family::Ce2: return "ce2";
    case Family::IndependentControl: return "independent-control";
  }
  return "?";
}

inline std::optional<Family> family_from_string(std::string_view name) {
  for (Family f : kAllFamilies) {
    if (name == to_string(f)) return f;
  }
  return std::nullopt;
}

/// Runs `fn(i)` for i in [0, n) on up to `threads` workers. The first
/// exception thrown by any call is rethrown after all workers stop.
inline void parallel_for(std::int64_t n, int threads, const std::function<void(std::int64_t)>& fn) {
  const int workers = static_cast<int>(std::clamp<std::int64_t>(threads, 1, std::max<std::int64_t>(n, 1)));
  if (workers == 1) {
    for (std::int64_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::int64_t> next{0};
  std::atomic<bool> stop{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::int64_t i = next++; i < n && !stop; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          stop = true;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

struct Summary {
  double mean = 0.0;
  double stderr_ = 0.0;
  double q10 = 0.0;
  double q50 = 0.0;
  double q90 = 0.0;
};

/// Linear-interpolation quantile of sorted data.
inline double quantile_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return 0.0;
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

inline Summary summarize(std::vector<double> xs) {
  Summary s;
  if (xs.empty()) return s;
  const auto n = static_cast<double>(xs.size());
  double sum = 0.0;
  for (double x : xs) sum += x;
  s.mean = sum / n;
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.stderr_ = std::sqrt(ss / (n - 1.0) / n);
  }
  std::sort(xs.begin(), xs.end());
  s.q10 = quantile_sorted(xs, 0.1);
  s.q50 = quantile_sorted(xs, 0.5);
  s.q90 = quantile_sorted(xs, 0.9);
  return s;
}

inline json to_json(const Summary& s) {
  return {{"mean", s.mean}, {"stderr", s.stderr_}, {"q10", s.q10}, {"q50", s.q50}, {"q90", s.q90}};
}

inline std::int64_t returns_to_zero(const Trajectory& t, std::int64_t after = 0) {
  std::int64_t c = 0;
  for (std::int64_t n = std::max<std::int64_t>(after + 1, 1); n <= t.horizon(); ++n) c += t[n] == 0;
  return c;
}

struct CampaignConfig {
  Family family = Family::SharedUniform;
  std::int64_t trials = 100;
  std::int64_t horizon = 1000;
  std::uint64_t seed = 0;
  CookieEnvironment env = CookieEnvironment::constant(0.5);
  std::optional<CookieEnvironment> env2;
  BlockPartition partition;
  std::vector<Statement> checks{kAllStatements.begin(), kAllStatements.end()};
  int threads = 1;
  bool timestamp = true;

  std::int64_t ce1_n = 3;
  Ce2Variant ce2_variant = Ce2Variant::Primed;
  int ce2_cycles = 1;
  std::vector<double> eta = {0.9, 0.9};
  double beta = 1.0;

  void validate() const {
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    if (horizon < 1 || horizon >= kMaxHorizon) throw std::invalid_argument("horizon must be >= 1");
    if (checks.empty()) throw std::invalid_argument("no checks selected");
  }
};

struct TrialOutcome {
  std::vector<VerifyResult> results;
  double left_speed = 0.0;   // L_T / T
  double right_speed = 0.0;  // R_T / T
  double right_max = 0.0;    // max_{n<=T} R_n
  double left_returns = 0.0;   // returns to 0 of L₊
  double right_returns = 0.0;  // returns to 0 of R₊
  std::optional<std::string> contract_violation;
};

struct CheckTally {
  Statement statement = Statement::Envelopes;
  std::int64_t passed = 0;
  std::int64_t vacuous = 0;
  std::int64_t failed = 0;
  std::optional<std::int64_t> first_failed_trial;
  std::optional<Witness> first_witness;
};

struct CampaignReport {
  CampaignConfig config;
  std::int64_t trials_run = 0;
  std::vector<CheckTally> checks;
  std::map<std::string, Summary> aggregates;
  std::int64_t contract_violations = 0;
  std::optional<std::string> first_contract_violation;
  json extras = json::object();
  std::vector<TrialOutcome> trials;
  double wall_seconds = 0.0;
  std::string timestamp;

  bool all_passed() const {
    for (const auto& c : checks) {
      if (c.failed > 0) return false;
    }
    return true;
  }

  json to_json() const {
    json checks_json = json::object();
    for (const auto& c : checks) {
      json first = nullptr;
      if (c.first_failed_trial) first = {{"trial", *c.first_failed_trial}, {"witness", *c.first_witness}};
      checks_json[to_string(c.statement)] = {
          {"passed", c.passed}, {"vacuous", c.vacuous}, {"failed", c.failed}, {"first_failure", first}};
    }
    json agg = json::object();
    for (const auto& [k, s] : aggregates) agg[k] = arrowwalk::to_json(s);
    json j = {{"family", to_string(config.family)},
              {"trials", trials_run},
              {"horizon", config.horizon},
              {"seed", config.seed},
              {"checks", checks_json},
              {"aggregates", agg},
              {"contract_violations", contract_violations},
              {"first_contract_violation", first_contract_violation ? json(*first_contract_violation) : json(nullptr)},
              {"all_passed", all_passed()}};
    for (const auto& [k, v] : extras.items()) j[k] = v;
    if (config.timestamp) {
      j["timestamp"] = timestamp;
      j["wall_clock_seconds"] = wall_seconds;
    }
    return j;
  }

  /// One row per (trial, check): pass, vacuous or fail.
  Table per_trial_table() const {
    Table t({"trial", "check", "status"});
    for (std::size_t i = 0; i < trials.size(); ++i) {
      for (const auto& r : trials[i].results) {
        const char* status = !r.passed ? "fail" : (r.vacuous ? "vacuous" : "pass");
        t.add({static_cast<std::int64_t>(i), to_string(r.statement), status});
      }
    }
    return t;
  }
};

namespace detail {

inline std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

struct Environments {
  CookieEnvironment left;
  CookieEnvironment right;
};

inline Environments resolve_environments(const CampaignConfig& c) {
  switch (c.family) {
    case Family::BlockPermutation:
    case Family::SwapChain:
      if (c.env2) return {c.env, *c.env2};
      return {sorted_env(c.env, c.partition), c.env};
    default:
      return {c.env, c.env2.value_or(c.env)};
  }
}

inline constexpr std::uint64_t kIndependentStreamBit = std::uint64_t{1} << 63;

inline TrialOutcome finish_trial(const CampaignConfig& c, const CoupledPair& pair, std::int64_t left_returns,
                                 std::int64_t right_returns) {
  TrialOutcome out;
  out.results = verify_all(pair, c.checks);
  const auto T = static_cast<double>(pair.horizon());
  out.left_speed = static_cast<double>(pair.left.final_position()) / T;
  out.right_speed = static_cast<double>(pair.right.final_position()) / T;
  out.right_max = static_cast<double>(pair.right.max_position());
  out.left_returns = static_cast<double>(left_returns);
  out.right_returns = static_cast<double>(right_returns);
  return out;
}

inline TrialOutcome run_systems_trial(const CampaignConfig& c, const ArrowSystem& l, const ArrowSystem& r,
                                      Relation mode, const std::string& provenance) {
  CoupledPair pair(run_walk(l, c.horizon), run_walk(r, c.horizon), mode, provenance);
  return finish_trial(c, pair, returns_to_zero(run_walk(zero_right_transform(l), c.horizon)),
                      returns_to_zero(run_walk(zero_right_transform(r), c.horizon)));
}

inline TrialOutcome run_trial(const CampaignConfig& c, const Environments& envs, std::int64_t i) {
  const UniformField field(c.seed);
  const auto stream = static_cast<std::uint64_t>(i);
  switch (c.family) {
    case Family::SharedUniform:
      return run_systems_trial(c, sample_system(envs.left, field, stream), sample_system(envs.right, field, stream),
                               Relation::Trileq, "shared uniform");
    case Family::IndependentControl:
      return run_systems_trial(c, sample_system(envs.left, field, stream),
                               sample_system(envs.right, field, stream | kIndependentStreamBit), Relation::Preceq,
                               "independent streams");
    case Family::BlockPermutation: {
      BlockPermutationCoupling cp(envs.left, c.partition, {envs.left, envs.right}, field, stream);
      return run_systems_trial(c, cp.system(0), cp.system(1), Relation::Preceq, "block permutation");
    }
    case Family::SwapChain: {
      SwapChainCoupling cp(envs.left, envs.right, c.partition, field, stream);
      return run_systems_trial(c, cp.left_system(), cp.right_system(), Relation::Preceq, "swap chain");
    }
    case Family::Envelope: {
      const auto law = orrw_capped(c.beta, static_cast<Level>(c.eta.size()));
      try {
        auto res = envelope_walk(law, c.eta, field, stream, c.horizon);
        CoupledPair pair(std::move(res.left), std::move(res.right), Relation::Trileq, "envelope");
        const auto lp = run_drift_walk(law, field, stream, c.horizon, true);
        const auto rp = run_walk(zero_right_transform(sample_system(envelope_environment(c.eta), field, stream)),
                                 c.horizon);
        return finish_trial(c, pair, returns_to_zero(lp), returns_to_zero(rp));
      } catch (const ContractViolation& e) {
        TrialOutcome out;
        out.contract_violation = e.what();
        for (Statement s : c.checks) {
          VerifyResult r;
          r.statement = s;
          r.passed = false;
          r.witness = Witness{e.n, 0, e.k, e.what()};
          out.results.push_back(r);
        }
        return out;
      }
    }
    case Family::Ce1: {
      auto [l, r] = build_ce1(c.ce1_n);
      return run_systems_trial(c, l, r, Relation::Trileq, "ce1");
    }
    case Family::Ce2: {
      if (c.ce2_variant == Ce2Variant::Unprimed) {
        auto [l, r] = ce2_unprimed_systems();
        CoupledPair pair = build_ce2(Ce2Variant::Unprimed);
        return finish_trial(c, pair, returns_to_zero(run_walk(zero_right_transform(l), pair.horizon())),
                            returns_to_zero(run_walk(zero_right_transform(r), pair.horizon())));
      }
      CoupledPair pair = build_ce2(c.ce2_variant, c.ce2_cycles);
      auto completion = paths_admit_preceq(pair.left, pair.right);
      return finish_trial(c, pair,
                          returns_to_zero(run_walk(zero_right_transform(completion.left_system), pair.horizon())),
                          returns_to_zero(run_walk(zero_right_transform(completion.right_system), pair.horizon())));
    }
  }
  throw std::invalid_argument("unknown family");
}

inline json family_extras(const CampaignConfig& c) {
  json j = json::object();
  if (c.family == Family::Ce1) {
    json ms = json::array();
    const auto closed = ce1_milestones(c.ce1_n, 8);
    for (const auto& m : closed) {
      ms.push_back({{"k", m.k}, {"x_k", m.x}, {"t_k", m.t}, {"s_k", m.s}, {"ratio_hi", m.ratio_hi},
                    {"ratio_lo", m.ratio_lo}});
    }
    j["milestones"] = ms;
  }
  if (c.family == Family::Ce2) {
    const auto pair = build_ce2(c.ce2_variant, c.ce2_cycles);
    const auto ls = lead_sets(pair, pair.horizon());
    j["lead_sets"] = {{"t", pair.horizon()}, {"right_ahead", ls.right_ahead}, {"left_ahead", ls.left_ahead}};
    j["variant"] = to_string(c.ce2_variant);
  }
  if (c.family == Family::Envelope) {
    j["alpha"] = envelope_alpha(c.eta);
    j["eta"] = c.eta;
    j["beta"] = c.beta;
  }
  return j;
}

}  // namespace detail

/// Runs every trial of a campaign, verifies each pair, and aggregates.
/// Trial i uses stream i; outcomes are merged in trial order, so the report
/// does not depend on the number of threads.
inline CampaignReport run_campaign(CampaignConfig config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  const bool deterministic = config.family == Family::Ce1 || config.family == Family::Ce2;
  const std::int64_t trials = deterministic ? 1 : config.trials;
  const auto envs = detail::resolve_environments(config);

  CampaignReport rep;
  rep.timestamp = config.timestamp ? detail::utc_timestamp() : std::string();
  rep.trials.resize(static_cast<std::size_t>(trials));
  parallel_for(trials, config.threads, [&](std::int64_t i) {
    rep.trials[static_cast<std::size_t>(i)] = detail::run_trial(config, envs, i);
  });

  rep.trials_run = trials;
  for (Statement s : config.checks) {
    CheckTally tally;
    tally.statement = s;
    rep.checks.push_back(tally);
  }
  std::vector<double> ls, rs, rmax, lret, rret;
  for (std::int64_t i = 0; i < trials; ++i) {
    const auto& t = rep.trials[static_cast<std::size_t>(i)];
    for (std::size_t c = 0; c < t.results.size(); ++c) {
      auto& tally = rep.checks[c];
      const auto& r = t.results[c];
      if (!r.passed) {
        ++tally.failed;
        if (!tally.first_failed_trial) {
          tally.first_failed_trial = i;
          tally.first_witness = r.witness;
        }
      } else if (r.vacuous) {
        ++tally.vacuous;
      } else {
        ++tally.passed;
      }
    }
    if (t.contract_violation) {
      ++rep.contract_violations;
      if (!rep.first_contract_violation) rep.first_contract_violation = *t.contract_violation;
      continue;
    }
    ls.push_back(t.left_speed);
    rs.push_back(t.right_speed);
    rmax.push_back(t.right_max);
    lret.push_back(t.left_returns);
    rret.push_back(t.right_returns);
  }
  rep.aggregates["left_final_over_T"] = summarize(std::move(ls));
  rep.aggregates["right_final_over_T"] = summarize(std::move(rs));
  rep.aggregates["right_max"] = summarize(std::move(rmax));
  rep.aggregates["left_zero_right_returns"] = summarize(std::move(lret));
  rep.aggregates["right_zero_right_returns"] = summarize(std::move(rret));
  rep.extras = detail::family_extras(config);
  rep.config = std::move(config);
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

struct SpeedStats {
  std::int64_t trials = 0;
  std::int64_t horizon = 0;
  std::int64_t burn_in = 0;
  Summary speed;        // X_T / T
  Summary max_speed;    // max_{n<=T} X_n / T
  Summary returns;      // returns to 0 of X₊ after burn_in
  std::map<std::int64_t, std::int64_t> returns_histogram;

  json to_json() const {
    json hist = json::object();
    for (const auto& [k, v] : returns_histogram) hist[format_number(k)] = v;
    return {{"trials", trials},
            {"horizon", horizon},
            {"burn_in", burn_in},
            {"speed", arrowwalk::to_json(speed)},
            {"max_speed", arrowwalk::to_json(max_speed)},
            {"returns_after_burn_in", arrowwalk::to_json(returns)},
            {"returns_histogram", hist}};
  }
};

/// Speed and recurrence statistics of the excited walk in `env`. Returns are
/// counted for the walk with every arrow at 0 replaced by Right.
inline SpeedStats speed_and_recurrence_stats(const CookieEnvironment& env, std::int64_t trials, std::int64_t horizon,
                                             std::uint64_t seed, std::int64_t burn_in = 0, int threads = 1) {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (horizon < 1 || horizon >= kMaxHorizon) throw std::invalid_argument("horizon must be >= 1");
  if (burn_in < 0) throw std::invalid_argument("burn_in must be >= 0");
  struct Row {
    double speed, max_speed;
    std::int64_t returns;
  };
  std::vector<Row> rows(static_cast<std::size_t>(trials));
  const UniformField field(seed);
  parallel_for(trials, threads, [&](std::int64_t i) {
    const auto sys = sample_system(env, field, static_cast<std::uint64_t>(i));
    const auto x = run_walk(sys, horizon);
    const auto xp = run_walk(zero_right_transform(sys), horizon);
    rows[static_cast<std::size_t>(i)] = {static_cast<double>(x.final_position()) / static_cast<double>(horizon),
                                         static_cast<double>(x.max_position()) / static_cast<double>(horizon),
                                         returns_to_zero(xp, burn_in)};
  });
  SpeedStats out;
  out.trials = trials;
  out.horizon = horizon;
  out.burn_in = burn_in;
  std::vector<double> sp, ms, rt;
  for (const auto& r : rows) {
    sp.push_back(r.speed);
    ms.push_back(r.max_speed);
    rt.push_back(static_cast<double>(r.returns));
    ++out.returns_histogram[r.returns];
  }
  out.speed = summarize(std::move(sp));
  out.max_speed = summarize(std::move(ms));
  out.returns = summarize(std::move(rt));
  return out;
}

}  // namespace arrowwalk
