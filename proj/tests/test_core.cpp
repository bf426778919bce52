#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "support.hpp"

namespace aw = arrowwalk;
using aw::Arrow;
using aw::Site;

namespace {

aw::ArrowSystem table(std::initializer_list<std::pair<const Site, const char*>> stacks, Arrow fill = Arrow::Right) {
  aw::ExplicitTable t;
  t.default_fill = fill;
  for (const auto& [x, s] : stacks) t.stacks[x] = aw::arrows_from_string(s);
  return aw::ArrowSystem(std::move(t));
}

}  // namespace

TEST(Arrows, CharRoundTripAndErrors) {
  EXPECT_EQ(aw::to_string(aw::arrows_from_string("RRLRL")), "RRLRL");
  EXPECT_THROW(aw::arrow_from_char('x'), std::invalid_argument);
  EXPECT_EQ(aw::flip(Arrow::Left), Arrow::Right);
}

TEST(StackCounts, AllRight) {
  const auto c = aw::stack_counts(aw::ArrowSystem::constant(Arrow::Right), 5, 4);
  EXPECT_EQ(c.left, 0);
  EXPECT_EQ(c.right, 4);
  const auto z = aw::stack_counts(aw::ArrowSystem::constant(Arrow::Right), 5, 0);
  EXPECT_EQ(z.left + z.right, 0);
}

TEST(StackCounts, SlowSystemAtSiteOne) {
  const auto c = aw::stack_counts(aw::ce1_left_system(), 1, 5);
  EXPECT_EQ(c.left, 2);
  EXPECT_EQ(c.right, 3);
}

TEST(StackCounts, SampledMatchesRecount) {
  const auto sys = aw::sample_system(aw::CookieEnvironment::constant(0.5), aw::UniformField(7), 0);
  const auto c = aw::stack_counts(sys, 0, 100);
  aw::Level lefts = 0;
  for (aw::Level r = 1; r <= 100; ++r) {
    lefts += sys.at(0, r) == Arrow::Left;
    const auto prefix = aw::stack_counts(sys, 0, r);
    EXPECT_EQ(prefix.left + prefix.right, r);
    EXPECT_EQ(prefix.left, lefts);
  }
  EXPECT_EQ(c.left, lefts);
}

TEST(StackCounts, NegativeLevelRejected) {
  EXPECT_THROW(aw::stack_counts(aw::ArrowSystem::constant(Arrow::Right), 0, -1), std::invalid_argument);
  EXPECT_THROW(aw::ArrowSystem::constant(Arrow::Right).at(0, 0), std::invalid_argument);
}

TEST(RunWalk, AllRight) {
  const auto t = aw::run_walk(aw::ArrowSystem::constant(Arrow::Right), 5);
  EXPECT_EQ(std::vector<Site>(t.positions().begin(), t.positions().end()), (std::vector<Site>{0, 1, 2, 3, 4, 5}));
}

TEST(RunWalk, SlowSystemPattern) {
  const auto t = aw::run_walk(aw::ce1_left_system(), 10);
  EXPECT_EQ(std::vector<Site>(t.positions().begin(), t.positions().end()),
            (std::vector<Site>{0, 1, 0, 1, 0, 1, 2, 1, 2, 1, 2}));
}

TEST(RunWalk, SampledReplayAgrees) {
  std::mt19937_64 rng(3);
  const auto sys = aw::sample_system(testsupport::random_environment(rng), aw::UniformField(11), 4);
  const auto a = aw::run_walk(sys, 1000);
  const auto b = aw::run_walk(sys, 1000);
  EXPECT_EQ(a, b);
  const auto replay = testsupport::replay_walk(sys, 1000);
  EXPECT_EQ(std::vector<Site>(a.positions().begin(), a.positions().end()), replay);
}

TEST(RunWalk, VisitCountsMatchPositions) {
  std::mt19937_64 rng(5);
  const auto t = aw::run_walk(testsupport::random_explicit_system(rng), 300);
  std::map<Site, std::int64_t> counts;
  for (Site x : t.positions()) ++counts[x];
  EXPECT_EQ(t.visit_counts(), counts);
  EXPECT_TRUE(t.is_walk());
}

TEST(Occupation, StraightPath) {
  const aw::Trajectory t(std::vector<Site>{0, 1, 2, 3});
  const auto tab = aw::occupation(t, 3);
  for (Site x = 0; x <= 3; ++x) EXPECT_EQ(tab.node(x), 1);
  EXPECT_EQ(tab.edge(0, 1), 1);
  EXPECT_EQ(tab.edge(1, 2), 1);
  EXPECT_EQ(tab.edge(2, 3), 1);
  EXPECT_EQ(tab.edge(1, 0), 0);
  EXPECT_EQ(tab.edge(3, 2), 0);
  EXPECT_EQ(tab.total(), 4);
}

TEST(Occupation, SlowSystemCounts) {
  const auto tab = aw::occupation(aw::run_walk(aw::ce1_left_system(), 10), 10);
  EXPECT_EQ(tab.node(1), 5);
  EXPECT_EQ(tab.node(0), 3);
  EXPECT_EQ(tab.node(2), 3);
}

TEST(Occupation, PrimedLeaderPathsHaveEqualCounts) {
  const auto pair = aw::build_ce2(aw::Ce2Variant::Primed);
  const auto a = aw::occupation(pair.left, 28);
  const auto b = aw::occupation(pair.right, 28);
  for (Site x = -8; x <= 8; ++x) EXPECT_EQ(a.node(x), b.node(x)) << x;
}

TEST(Occupation, OutOfRange) {
  const aw::Trajectory t(std::vector<Site>{0, 1});
  EXPECT_THROW(aw::occupation(t, 2), std::out_of_range);
  EXPECT_THROW(aw::occupation(t, -1), std::out_of_range);
}

TEST(Identities, HandCheckDepartures) {
  const aw::Trajectory t(std::vector<Site>{0, 1, 2});
  const auto tab = aw::occupation(t, 2);
  EXPECT_EQ(tab.node(1), 1);
  EXPECT_EQ(tab.up(1) + tab.down(1), 1);
  EXPECT_TRUE(aw::check_identities(t, 2).all_passed());
}

TEST(Identities, CorruptedPathIsFlagged) {
  const aw::Trajectory t(std::vector<Site>{0, 1, 1});
  const auto rep = aw::check_identities(t, 2);
  EXPECT_FALSE(rep.all_passed());
  EXPECT_FALSE(rep[aw::Identity::UnitSteps].passed);
  ASSERT_TRUE(rep.first_failure().has_value());
}

TEST(Identities, WrongSystemBreaksArrowUsage) {
  const auto t = aw::run_walk(aw::ArrowSystem::constant(Arrow::Right), 5);
  const auto other = aw::ArrowSystem::constant(Arrow::Left);
  const auto rep = aw::check_identities_through(t, &other);
  EXPECT_FALSE(rep[aw::Identity::UsedRightArrows].passed);
  EXPECT_TRUE(rep[aw::Identity::Arrivals].passed);
}

TEST(Identities, WithoutSystemArrowUsageUnchecked) {
  const auto t = aw::run_walk(aw::ArrowSystem::constant(Arrow::Right), 5);
  const auto rep = aw::check_identities(t, 5);
  EXPECT_FALSE(rep[aw::Identity::UsedRightArrows].checked);
  EXPECT_TRUE(rep.all_passed());
}

TEST(Identities, RandomSystemsEveryTime) {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 100; ++i) {
    const auto sys = i % 2 ? testsupport::random_explicit_system(rng)
                           : aw::sample_system(testsupport::random_environment(rng), aw::UniformField(i), i);
    const auto t = aw::run_walk(sys, 300);
    const auto rep = aw::check_identities_through(t, &sys);
    ASSERT_TRUE(rep.all_passed()) << "system " << i;
    const auto single = aw::check_identities(t, 137, &sys);
    ASSERT_TRUE(single.all_passed());
  }
}

TEST(Relation, Reflexive) {
  std::mt19937_64 rng(2);
  const auto s = testsupport::random_explicit_system(rng);
  const aw::Window w{-15, 15, 12};
  EXPECT_TRUE(aw::check_relation(s, s, w, aw::Relation::Preceq));
  EXPECT_TRUE(aw::check_relation(s, s, w, aw::Relation::Trileq));
}

TEST(Relation, WitnessAtOrigin) {
  const auto l = aw::ArrowSystem::constant(Arrow::Right);
  const auto r = table({{0, "L"}});
  for (auto mode : {aw::Relation::Preceq, aw::Relation::Trileq}) {
    const auto res = aw::check_relation(l, r, {0, 0, 3}, mode);
    EXPECT_FALSE(res.holds);
    ASSERT_TRUE(res.witness);
    EXPECT_EQ(*res.witness, std::make_pair(Site{0}, aw::Level{1}));
  }
}

TEST(Relation, TrileqImpliesPreceq) {
  std::mt19937_64 rng(23);
  const aw::Window w{-6, 6, 8};
  int trileq_seen = 0;
  for (int i = 0; i < 2000; ++i) {
    const auto a = testsupport::random_explicit_system(rng, 6, 6);
    const auto b = testsupport::random_explicit_system(rng, 6, 6);
    if (aw::check_relation(a, b, w, aw::Relation::Trileq)) {
      ++trileq_seen;
      EXPECT_TRUE(aw::check_relation(a, b, w, aw::Relation::Preceq));
    }
  }
  std::mt19937_64 rng2(29);
  for (int i = 0; i < 200; ++i) {
    const auto env = testsupport::random_environment(rng2);
    const aw::UniformField f(i);
    const auto a = aw::sample_system(env, f, 0);
    const auto b = aw::sample_system(testsupport::raised(env, rng2), f, 0);
    ASSERT_TRUE(aw::check_relation(a, b, w, aw::Relation::Trileq));
    ASSERT_TRUE(aw::check_relation(a, b, w, aw::Relation::Preceq));
    ++trileq_seen;
  }
  EXPECT_GT(trileq_seen, 0);
}

TEST(Mirror, AllRightBecomesAllLeft) {
  const auto m = aw::mirror_system(aw::ArrowSystem::constant(Arrow::Right));
  const auto t = aw::run_walk(m, 4);
  EXPECT_EQ(std::vector<Site>(t.positions().begin(), t.positions().end()), (std::vector<Site>{0, -1, -2, -3, -4}));
}

TEST(Mirror, InvolutionAndNegatedWalk) {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 50; ++i) {
    const auto s = testsupport::random_explicit_system(rng);
    const auto mm = aw::mirror_system(aw::mirror_system(s));
    for (Site x = -14; x <= 14; ++x) {
      for (aw::Level l = 1; l <= 12; ++l) ASSERT_EQ(mm.at(x, l), s.at(x, l));
    }
    const auto a = aw::run_walk(s, 200);
    const auto b = aw::run_walk(aw::mirror_system(s), 200);
    for (std::int64_t n = 0; n <= 200; ++n) ASSERT_EQ(a[n], -b[n]);
  }
}

TEST(Mirror, ReversesPreceq) {
  std::mt19937_64 rng(37);
  const aw::Window w{-8, 8, 8};
  for (int i = 0; i < 200; ++i) {
    const auto env = testsupport::random_environment(rng);
    const aw::UniformField f(i);
    const auto l = aw::sample_system(env, f, 1);
    const auto r = aw::sample_system(testsupport::raised(env, rng), f, 1);
    ASSERT_TRUE(aw::check_relation(l, r, w, aw::Relation::Preceq));
    ASSERT_TRUE(aw::check_relation(aw::mirror_system(r), aw::mirror_system(l), w, aw::Relation::Preceq));
  }
}

TEST(ZeroRight, AllLeftOscillates) {
  const auto t = aw::run_walk(aw::zero_right_transform(aw::ArrowSystem::constant(Arrow::Left)), 6);
  EXPECT_EQ(std::vector<Site>(t.positions().begin(), t.positions().end()), (std::vector<Site>{0, 1, 0, 1, 0, 1, 0}));
}

TEST(ZeroRight, IdempotentAndKeepsOtherSites) {
  std::mt19937_64 rng(41);
  const auto s = testsupport::random_explicit_system(rng);
  const auto z = aw::zero_right_transform(s);
  const auto zz = aw::zero_right_transform(z);
  for (Site x = -14; x <= 14; ++x) {
    for (aw::Level l = 1; l <= 12; ++l) {
      EXPECT_EQ(zz.at(x, l), z.at(x, l));
      EXPECT_EQ(z.at(x, l), x == 0 ? Arrow::Right : s.at(x, l));
    }
  }
}

TEST(ZeroRight, NeverNegative) {
  std::mt19937_64 rng(43);
  for (int i = 0; i < 1000; ++i) {
    const auto sys = i % 2 ? testsupport::random_explicit_system(rng)
                           : aw::sample_system(testsupport::random_environment(rng), aw::UniformField(i), 0);
    const auto t = aw::run_walk(aw::zero_right_transform(sys), 1000);
    ASSERT_GE(t.min_position(), 0) << i;
  }
}

TEST(PathOrder, IdenticalPaths) {
  const std::vector<Site> p{0, 1, 0, -1, 0, 1, 2};
  EXPECT_TRUE(aw::paths_admit_preceq(p, p).admissible);
}

TEST(PathOrder, PrimedLeaderPaths) {
  const auto res = aw::paths_admit_preceq(aw::ce2_left_primed_path(), aw::ce2_right_primed_path());
  EXPECT_TRUE(res.admissible);
  EXPECT_TRUE(res.violations.empty());
  const auto l = aw::run_walk(res.left_system, 28);
  const auto r = aw::run_walk(res.right_system, 28);
  EXPECT_EQ(std::vector<Site>(l.positions().begin(), l.positions().end()), aw::ce2_left_primed_path());
  EXPECT_EQ(std::vector<Site>(r.positions().begin(), r.positions().end()), aw::ce2_right_primed_path());
  EXPECT_TRUE(aw::check_relation(res.left_system, res.right_system, {-10, 10, 20}, aw::Relation::Preceq));
}

TEST(PathOrder, SwappedLeaderPathsRejected) {
  const auto res = aw::paths_admit_preceq(aw::ce2_right_primed_path(), aw::ce2_left_primed_path());
  EXPECT_FALSE(res.admissible);
  ASSERT_FALSE(res.violations.empty());
  EXPECT_EQ(res.violations.front(), std::make_pair(Site{0}, aw::Level{1}));
}

TEST(PathOrder, MalformedInput) {
  EXPECT_THROW(aw::paths_admit_preceq(std::vector<Site>{1, 2}, std::vector<Site>{0}), std::invalid_argument);
  EXPECT_THROW(aw::paths_admit_preceq(std::vector<Site>{0, 2}, std::vector<Site>{0}), std::invalid_argument);
}

TEST(PathOrder, ExhaustiveAgainstCompletionSearch) {
  testsupport::PathOrderOracle oracle;
  std::vector<std::vector<Site>> paths;
  for (int len = 0; len <= 8; ++len) {
    for (auto& p : testsupport::all_paths(len)) paths.push_back(std::move(p));
  }
  std::int64_t admitted = 0;
  std::int64_t compared = 0;
  for (const auto& l : paths) {
    for (const auto& r : paths) {
      const bool fast = aw::paths_admit_preceq(l, r).admissible;
      ASSERT_EQ(fast, oracle.admits(l, r));
      admitted += fast;
      ++compared;
    }
  }
  EXPECT_EQ(compared, 511 * 511);
  EXPECT_GT(admitted, 0);
  EXPECT_LT(admitted, compared);
}
