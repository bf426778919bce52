#include <gtest/gtest.h>

#include <cmath>

#include "support.hpp"

namespace aw = arrowwalk;

namespace {

aw::CampaignConfig config(aw::Family f, std::int64_t trials, std::int64_t horizon, std::uint64_t seed = 42) {
  aw::CampaignConfig c;
  c.family = f;
  c.trials = trials;
  c.horizon = horizon;
  c.seed = seed;
  c.timestamp = false;
  return c;
}

}  // namespace

TEST(Summary, QuantilesAndStderr) {
  const auto s = aw::summarize({1, 2, 3, 4, 5});
  EXPECT_DOUBLE_EQ(s.mean, 3.0);
  EXPECT_DOUBLE_EQ(s.q50, 3.0);
  EXPECT_DOUBLE_EQ(s.q10, 1.4);
  EXPECT_DOUBLE_EQ(s.q90, 4.6);
  EXPECT_NEAR(s.stderr_, std::sqrt(2.5 / 5), 1e-12);
  const auto one = aw::summarize({7});
  EXPECT_DOUBLE_EQ(one.q10, 7);
  EXPECT_DOUBLE_EQ(one.stderr_, 0);
}

TEST(Returns, CountsVisitsAfterTime) {
  const aw::Trajectory t(std::vector<aw::Site>{0, 1, 0, 1, 0, -1, 0});
  EXPECT_EQ(aw::returns_to_zero(t), 3);
  EXPECT_EQ(aw::returns_to_zero(t, 3), 2);
}

TEST(ParallelFor, CoversEveryIndexAndPropagatesErrors) {
  std::vector<int> hit(1000, 0);
  aw::parallel_for(1000, 8, [&](std::int64_t i) { hit[static_cast<std::size_t>(i)] += 1; });
  for (int h : hit) EXPECT_EQ(h, 1);
  EXPECT_THROW(aw::parallel_for(100, 4, [](std::int64_t i) {
                 if (i == 37) throw std::runtime_error("boom");
               }),
               std::runtime_error);
}

TEST(Campaign, FamilyNames) {
  for (auto f : aw::kAllFamilies) EXPECT_EQ(aw::family_from_string(aw::to_string(f)), f);
  EXPECT_FALSE(aw::family_from_string("thm51").has_value());
}

TEST(Campaign, ConfigValidation) {
  auto c = config(aw::Family::SharedUniform, 0, 10);
  EXPECT_THROW(aw::run_campaign(c), std::invalid_argument);
  c = config(aw::Family::SharedUniform, 1, 0);
  EXPECT_THROW(aw::run_campaign(c), std::invalid_argument);
}

TEST(Campaign, SharedUniformHasNoFailures) {
  auto c = config(aw::Family::SharedUniform, 200, 1000);
  c.env = aw::CookieEnvironment::homogeneous({0.3, 0.6});
  c.env2 = aw::CookieEnvironment::homogeneous({0.5, 0.9});
  c.threads = 4;
  const auto rep = aw::run_campaign(c);
  EXPECT_TRUE(rep.all_passed());
  for (const auto& t : rep.checks) EXPECT_EQ(t.passed + t.vacuous + t.failed, 200);
}

TEST(Campaign, ReportIndependentOfThreadCount) {
  auto c = config(aw::Family::SharedUniform, 64, 500, 7);
  c.env2 = aw::CookieEnvironment::homogeneous({0.8, 0.8});
  c.threads = 1;
  const auto a = aw::run_campaign(c).to_json().dump();
  c.threads = 7;
  const auto b = aw::run_campaign(c).to_json().dump();
  EXPECT_EQ(a, b);
  c.seed = 8;
  EXPECT_NE(aw::run_campaign(c).to_json().dump(), a);
}

TEST(Campaign, TimestampOnlyWhenRequested) {
  auto c = config(aw::Family::Ce1, 1, 100);
  EXPECT_FALSE(aw::run_campaign(c).to_json().contains("timestamp"));
  c.timestamp = true;
  EXPECT_TRUE(aw::run_campaign(c).to_json().contains("timestamp"));
}

TEST(Campaign, Ce1IsSingleTrialWithMilestones) {
  const auto rep = aw::run_campaign(config(aw::Family::Ce1, 50, 2000));
  EXPECT_EQ(rep.trials_run, 1);
  EXPECT_TRUE(rep.all_passed());
  const auto j = rep.to_json();
  ASSERT_EQ(j["milestones"].size(), 8u);
  EXPECT_EQ(j["milestones"][7]["x_k"], 7381);
  EXPECT_EQ(j["milestones"][7]["t_k"], 12301);
}

TEST(Campaign, Ce2ReportsLeadSets) {
  auto c = config(aw::Family::Ce2, 5, 28);
  const auto j = aw::run_campaign(c).to_json();
  EXPECT_EQ(j["trials"], 1);
  EXPECT_EQ(j["lead_sets"]["right_ahead"], 7);
  EXPECT_EQ(j["lead_sets"]["left_ahead"], 10);
  EXPECT_TRUE(j["all_passed"].get<bool>());
  c.ce2_variant = aw::Ce2Variant::Unprimed;
  EXPECT_TRUE(aw::run_campaign(c).all_passed());
}

TEST(Campaign, BlockFamiliesPass) {
  for (auto f : {aw::Family::BlockPermutation, aw::Family::SwapChain}) {
    auto c = config(f, 100, 500);
    c.env = aw::CookieEnvironment::homogeneous({0.7, 0.5, 0.2});
    c.partition = aw::BlockPartition({{1, 2, 3}}, 3);
    const auto rep = aw::run_campaign(c);
    EXPECT_TRUE(rep.all_passed()) << aw::to_string(f);
  }
}

TEST(Campaign, EnvelopeFamily) {
  auto c = config(aw::Family::Envelope, 50, 2000);
  const auto rep = aw::run_campaign(c);
  EXPECT_TRUE(rep.all_passed());
  EXPECT_EQ(rep.contract_violations, 0);
  EXPECT_NEAR(rep.to_json()["alpha"].get<double>(), 1.6, 1e-12);
  c.eta = {0.6, 0.6};
  c.beta = 10.0;
  const auto bad = aw::run_campaign(c);
  EXPECT_GT(bad.contract_violations, 0);
  EXPECT_FALSE(bad.all_passed());
  EXPECT_TRUE(bad.first_contract_violation.has_value());
}

TEST(Campaign, IndependentControlFindsWitness) {
  const auto rep = aw::run_campaign(config(aw::Family::IndependentControl, 200, 500));
  EXPECT_FALSE(rep.all_passed());
  bool witnessed = false;
  for (const auto& t : rep.checks) witnessed |= t.failed > 0 && t.first_witness.has_value();
  EXPECT_TRUE(witnessed);
}

TEST(Campaign, PerTrialTable) {
  auto c = config(aw::Family::SharedUniform, 3, 50);
  c.checks = {aw::Statement::Envelopes, aw::Statement::RecordLead};
  const auto t = aw::run_campaign(c).per_trial_table();
  const auto csv = t.csv();
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "trial,check,status");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 7);
}

TEST(Stats, AllRightMovesAtUnitSpeed) {
  const auto s = aw::speed_and_recurrence_stats(aw::CookieEnvironment::constant(1.0), 10, 500, 1);
  EXPECT_DOUBLE_EQ(s.speed.mean, 1.0);
  EXPECT_DOUBLE_EQ(s.returns.mean, 0.0);
  EXPECT_EQ(s.returns_histogram.at(0), 10);
}

TEST(Stats, SimpleWalkHasZeroSpeed) {
  const auto s = aw::speed_and_recurrence_stats(aw::CookieEnvironment::constant(0.5), 300, 4000, 2, 0, 4);
  EXPECT_LE(std::abs(s.speed.mean), 3 * s.speed.stderr_);
}

TEST(Stats, DeterministicAcrossThreads) {
  const auto env = aw::CookieEnvironment::homogeneous({0.9, 0.9});
  const auto a = aw::speed_and_recurrence_stats(env, 40, 1000, 3, 100, 1).to_json().dump();
  const auto b = aw::speed_and_recurrence_stats(env, 40, 1000, 3, 100, 5).to_json().dump();
  EXPECT_EQ(a, b);
}
