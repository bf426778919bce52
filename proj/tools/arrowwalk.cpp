// Command-line front end: walks, verifiers, counterexamples, couplings,
// campaigns and statistics. Exit codes: 0 ok, 1 a check failed, 2 usage or
// input error.

#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "arrowwalk.hpp"

namespace aw = arrowwalk;

namespace {

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kUsage = 2;

struct Options {
  std::vector<std::string> systems;
  std::string env;
  std::string env2;
  std::string partition;
  std::int64_t horizon = 1000;
  std::int64_t trials = 100;
  std::uint64_t seed = 0;
  std::string out;
  std::string format = "csv";
  std::string checks;
  bool no_timestamp = false;
  int threads = 1;

  std::int64_t n = 3;
  int kmax = 8;
  bool allow_small_n = false;
  std::string variant = "primed";
  int cycles = 1;
  std::string family = "shared-uniform";
  std::int64_t trial = 0;
  std::vector<double> eta = {0.9, 0.9};
  double beta = 1.0;
  std::int64_t burn_in = 0;
  std::string trial_csv;
};

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
  } else {
    aw::write_text_file(o.out, text);
  }
}

std::vector<aw::Statement> parse_checks(const std::string& list) {
  if (list.empty() || list == "all") return {aw::kAllStatements.begin(), aw::kAllStatements.end()};
  std::vector<aw::Statement> out;
  std::stringstream ss(list);
  std::string name;
  while (std::getline(ss, name, ',')) {
    auto s = aw::statement_from_string(name);
    if (!s) throw std::invalid_argument("unknown check '" + name + "'");
    out.push_back(*s);
  }
  return out;
}

aw::Ce2Variant parse_variant(const std::string& v) {
  if (v == "primed") return aw::Ce2Variant::Primed;
  if (v == "periodic") return aw::Ce2Variant::Periodic;
  if (v == "unprimed") return aw::Ce2Variant::Unprimed;
  throw std::invalid_argument("variant must be primed, periodic or unprimed");
}

aw::Family parse_family(const std::string& f) {
  auto fam = aw::family_from_string(f);
  if (!fam) throw std::invalid_argument("unknown family '" + f + "'");
  return *fam;
}

aw::Table verify_table(const std::vector<aw::VerifyResult>& results) {
  aw::Table t({"statement", "passed", "vacuous", "t", "x", "k", "detail"});
  for (const auto& r : results) {
    if (r.witness) {
      t.add({aw::to_string(r.statement), r.passed, r.vacuous, r.witness->t, r.witness->x, r.witness->k,
             r.witness->detail});
    } else {
      t.add({aw::to_string(r.statement), r.passed, r.vacuous, nullptr, nullptr, nullptr, ""});
    }
  }
  return t;
}

int report_failures(const std::vector<aw::VerifyResult>& results) {
  int code = kOk;
  for (const auto& r : results) {
    if (r.passed) continue;
    code = kCheckFailed;
    std::cerr << "FAIL " << aw::to_string(r.statement) << " at t=" << r.witness->t << " x=" << r.witness->x
              << " k=" << r.witness->k << ": " << r.witness->detail << "\n";
  }
  return code;
}

int cmd_run(const Options& o) {
  std::optional<aw::ArrowSystem> sys;
  if (!o.systems.empty()) {
    sys = aw::load_arrow_system(o.systems.front());
  } else if (!o.env.empty()) {
    sys = aw::sample_system(aw::load_environment(o.env), aw::UniformField(o.seed), 0);
  } else {
    throw std::invalid_argument("run needs --system or --env");
  }
  const auto traj = aw::run_walk(*sys, o.horizon);
  const auto ids = aw::check_identities_through(traj, &*sys);
  emit(o, aw::trajectory_table(traj).render(o.format));
  if (!ids.all_passed()) {
    const auto f = *ids.first_failure();
    std::cerr << "FAIL identity " << aw::to_string(f.first) << " at t=" << f.second.t << " x=" << f.second.site
              << "\n";
    return kCheckFailed;
  }
  return kOk;
}

int cmd_verify(const Options& o) {
  if (o.systems.size() != 2) throw std::invalid_argument("verify needs --system LEFT RIGHT");
  const auto l = aw::load_arrow_system(o.systems[0]);
  const auto r = aw::load_arrow_system(o.systems[1]);
  const auto rel = aw::check_relation(l, r, {-o.horizon, o.horizon, o.horizon + 1}, aw::Relation::Preceq);
  if (!rel) {
    std::cerr << "note: systems are not ordered; first violation at site " << rel.witness->first << ", level "
              << rel.witness->second << "\n";
  }
  const auto pair = aw::make_pair_from_systems(l, r, o.horizon);
  const auto results = aw::verify_all(pair, parse_checks(o.checks));
  emit(o, verify_table(results).render(o.format));
  return report_failures(results);
}

int cmd_ce1(const Options& o) {
  const auto ms = aw::ce1_milestones(o.n, o.kmax, o.allow_small_n);
  aw::Table t({"k", "x_k", "t_k", "s_k", "ratio_hi", "ratio_lo"});
  for (const auto& m : ms) t.add({m.k, m.x, m.t, m.s, m.ratio_hi, m.ratio_lo});
  emit(o, t.render(o.format));
  return kOk;
}

int cmd_ce2(const Options& o) {
  const auto variant = parse_variant(o.variant);
  const auto pair = aw::build_ce2(variant, o.cycles);
  const auto ls = aw::lead_sets(pair, pair.horizon());
  aw::Table t({"variant", "t", "right_ahead", "left_ahead"});
  t.add({aw::to_string(variant), pair.horizon(), ls.right_ahead, ls.left_ahead});
  if (!o.out.empty()) {
    std::cout << "lead sets at t=" << pair.horizon() << ": (" << ls.right_ahead << ", " << ls.left_ahead << ")\n";
  }
  emit(o, t.render(o.format));
  return kOk;
}

aw::CampaignConfig campaign_config(const Options& o) {
  aw::CampaignConfig c;
  c.family = parse_family(o.family);
  c.trials = o.trials;
  c.horizon = o.horizon;
  c.seed = o.seed;
  if (!o.env.empty()) c.env = aw::load_environment(o.env);
  if (!o.env2.empty()) c.env2 = aw::load_environment(o.env2);
  if (!o.partition.empty()) c.partition = aw::load_partition(o.partition);
  c.checks = parse_checks(o.checks);
  c.threads = o.threads;
  c.timestamp = !o.no_timestamp;
  c.ce1_n = o.n;
  c.ce2_variant = parse_variant(o.variant);
  c.ce2_cycles = o.cycles;
  c.eta = o.eta;
  c.beta = o.beta;
  return c;
}

int cmd_couple(const Options& o) {
  auto c = campaign_config(o);
  c.trials = 1;
  const auto envs = aw::detail::resolve_environments(c);
  const aw::UniformField field(o.seed);
  const auto stream = static_cast<std::uint64_t>(o.trial);
  std::optional<aw::CoupledPair> pair;
  switch (c.family) {
    case aw::Family::SharedUniform:
      pair = aw::couple_shared_uniform(envs.left, envs.right, field, stream, o.horizon);
      break;
    case aw::Family::IndependentControl:
      pair = aw::CoupledPair(aw::run_walk(aw::sample_system(envs.left, field, stream), o.horizon),
                             aw::run_walk(aw::sample_system(envs.right, field, stream | (std::uint64_t{1} << 63)),
                                          o.horizon));
      break;
    case aw::Family::BlockPermutation: {
      aw::BlockPermutationCoupling cp(envs.left, c.partition, {envs.left, envs.right}, field, stream);
      pair = aw::make_pair_from_systems(cp.system(0), cp.system(1), o.horizon);
      break;
    }
    case aw::Family::SwapChain:
      pair = aw::couple_swap_chain(envs.left, envs.right, c.partition, field, stream, o.horizon);
      break;
    case aw::Family::Envelope: {
      auto res = aw::envelope_walk(aw::orrw_capped(o.beta, static_cast<aw::Level>(o.eta.size())), o.eta, field,
                                   stream, o.horizon);
      pair = aw::CoupledPair(std::move(res.left), std::move(res.right), aw::Relation::Trileq);
      break;
    }
    default:
      throw std::invalid_argument("couple supports the randomized families only");
  }
  emit(o, aw::pair_table(pair->left, pair->right).render(o.format));
  return report_failures(aw::verify_all(*pair, c.checks));
}

int cmd_campaign(const Options& o) {
  const auto report = aw::run_campaign(campaign_config(o));
  emit(o, report.to_json().dump(2) + "\n");
  if (!o.trial_csv.empty()) aw::write_text_file(o.trial_csv, report.per_trial_table().csv());
  for (const auto& c : report.checks) {
    if (c.failed == 0) continue;
    std::cerr << "FAIL " << aw::to_string(c.statement) << ": " << c.failed << " of " << report.trials_run
              << " trials; first at trial " << *c.first_failed_trial << ": " << c.first_witness->detail << "\n";
  }
  return report.all_passed() ? kOk : kCheckFailed;
}

int cmd_stats(const Options& o) {
  if (o.env.empty()) throw std::invalid_argument("stats needs --env");
  const auto s = aw::speed_and_recurrence_stats(aw::load_environment(o.env), o.trials, o.horizon, o.seed, o.burn_in,
                                                o.threads);
  emit(o, s.to_json().dump(2) + "\n");
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"arrowwalk: arrow systems, coupled walks and their verifiers"};
  app.require_subcommand(1);
  Options o;

  const auto common = [&o](CLI::App* sub) {
    sub->add_option("--horizon", o.horizon, "number of steps")->check(CLI::NonNegativeNumber);
    sub->add_option("--seed", o.seed, "seed of the uniform field");
    sub->add_option("--out", o.out, "output file (default stdout)");
    sub->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  };
  const auto envs = [&o](CLI::App* sub) {
    sub->add_option("--env", o.env, "environment JSON");
    sub->add_option("--env2", o.env2, "second environment JSON");
    sub->add_option("--partition", o.partition, "partition JSON");
    sub->add_option("--family", o.family, "coupling family");
    sub->add_option("--eta", o.eta, "envelope cookies eta_1..eta_M")->delimiter(',');
    sub->add_option("--beta", o.beta, "ORRW reinforcement");
    sub->add_option("--checks", o.checks, "comma list of checks (default all)");
  };

  auto* run = app.add_subcommand("run", "walk one arrow system");
  common(run);
  run->add_option("--system", o.systems, "arrow system JSON")->expected(1);
  run->add_option("--env", o.env, "environment JSON (sampled system, stream 0)");

  auto* verify = app.add_subcommand("verify", "walk two systems and run the verifiers");
  common(verify);
  verify->add_option("--system", o.systems, "LEFT RIGHT arrow system JSON files")->expected(2)->required();
  verify->add_option("--checks", o.checks, "comma list of checks (default all)");

  auto* ce = app.add_subcommand("counterexample", "exact counterexample constructions");
  ce->require_subcommand(1);
  auto* ce1 = ce->add_subcommand("ce1", "speed counterexample milestones");
  common(ce1);
  ce1->add_option("--N", o.n, "construction parameter (>= 3)");
  ce1->add_option("--kmax", o.kmax, "number of milestones")->check(CLI::PositiveNumber);
  ce1->add_flag("--allow-small-n", o.allow_small_n, "accept N < 3");
  auto* ce2 = ce->add_subcommand("ce2", "leader counterexample lead sets");
  common(ce2);
  ce2->add_option("--variant", o.variant, "primed, periodic or unprimed");
  ce2->add_option("--cycles", o.cycles, "periodic repetitions")->check(CLI::PositiveNumber);

  auto* couple = app.add_subcommand("couple", "one coupled pair from a family");
  common(couple);
  envs(couple);
  couple->add_option("--trial", o.trial, "stream index");

  auto* campaign = app.add_subcommand("campaign", "Monte Carlo campaign with a JSON report");
  common(campaign);
  envs(campaign);
  campaign->add_option("--trials", o.trials, "number of trials")->check(CLI::PositiveNumber);
  campaign->add_option("--threads", o.threads, "worker threads")->check(CLI::PositiveNumber);
  campaign->add_flag("--no-timestamp", o.no_timestamp, "omit timestamp and wall clock");
  campaign->add_option("--trial-csv", o.trial_csv, "per-trial trial,check,status CSV");
  campaign->add_option("--N", o.n, "ce1 parameter");
  campaign->add_option("--variant", o.variant, "ce2 variant");
  campaign->add_option("--cycles", o.cycles, "ce2 periodic repetitions");

  auto* stats = app.add_subcommand("stats", "speed and recurrence statistics of an excited walk");
  common(stats);
  stats->add_option("--env", o.env, "environment JSON")->required();
  stats->add_option("--trials", o.trials, "number of trials")->check(CLI::PositiveNumber);
  stats->add_option("--burn-in", o.burn_in, "count returns after this time");
  stats->add_option("--threads", o.threads, "worker threads")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e, std::cerr, std::cerr);
    return kUsage;
  }

  try {
    if (*run) return cmd_run(o);
    if (*verify) return cmd_verify(o);
    if (*ce1) return cmd_ce1(o);
    if (*ce2) return cmd_ce2(o);
    if (*couple) return cmd_couple(o);
    if (*campaign) return cmd_campaign(o);
    if (*stats) return cmd_stats(o);
  } catch (const aw::ContractViolation& e) {
    std::cerr << "FAIL " << e.what() << "\n";
    return kCheckFailed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
