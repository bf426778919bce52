#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "support.hpp"

namespace aw = arrowwalk;
using aw::Arrow;
using aw::Site;
using aw::Statement;

namespace arrowwalk {
inline void PrintTo(Statement s, std::ostream* os) { *os << to_string(s); }
}  // namespace arrowwalk

namespace {

aw::CoupledPair pair_of(const std::vector<Site>& l, const std::vector<Site>& r) {
  return aw::CoupledPair(aw::Trajectory(l), aw::Trajectory(r));
}

std::vector<Site> random_path(std::mt19937_64& rng, int steps) {
  std::bernoulli_distribution coin(0.5);
  std::vector<Site> p{0};
  for (int i = 0; i < steps; ++i) p.push_back(p.back() + (coin(rng) ? 1 : -1));
  return p;
}

}  // namespace

TEST(Statements, NamesRoundTrip) {
  for (Statement s : aw::kAllStatements) EXPECT_EQ(aw::statement_from_string(aw::to_string(s)), s);
  EXPECT_FALSE(aw::statement_from_string("main1").has_value());
}

TEST(CoupledPair, RejectsMismatch) {
  EXPECT_THROW(pair_of({0, 1}, {0, 1, 2}), std::invalid_argument);
  EXPECT_THROW(pair_of({1, 2}, {0, 1}), std::invalid_argument);
}

class NegativeControl : public ::testing::TestWithParam<Statement> {};

TEST_P(NegativeControl, FailsWithWitness) {
  const auto pair = aw::negative_control(GetParam());
  const auto res = aw::verify(pair, GetParam());
  EXPECT_FALSE(res.passed) << aw::to_string(GetParam());
  ASSERT_TRUE(res.witness.has_value());
  EXPECT_LE(res.witness->t, pair.horizon());
  EXPECT_FALSE(res.witness->detail.empty());
  EXPECT_FALSE(aw::paths_admit_preceq(pair.left, pair.right).admissible);
}

INSTANTIATE_TEST_SUITE_P(All, NegativeControl, ::testing::ValuesIn(aw::kAllStatements),
                         [](const auto& info) { return std::string(aw::to_string(info.param)); });

TEST(Verifier, ControlPathsAsDocumented) {
  const auto env = aw::negative_control(Statement::Envelopes);
  EXPECT_EQ(std::vector<Site>(env.right.positions().begin(), env.right.positions().end()),
            (std::vector<Site>{0, -1, 0, 1, 2}));
  const auto mv = aw::negative_control(Statement::MaxVisits);
  EXPECT_EQ(std::vector<Site>(mv.left.positions().begin(), mv.left.positions().end()),
            (std::vector<Site>{0, 1, 0, 1}));
  EXPECT_EQ(std::vector<Site>(mv.right.positions().begin(), mv.right.positions().end()),
            (std::vector<Site>{0, 1, 0, -1}));
}

TEST(Verifier, IdenticalWalksPass) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 50; ++i) {
    const auto sys = testsupport::random_explicit_system(rng);
    const auto pair = aw::make_pair_from_systems(sys, sys, 400);
    for (const auto& r : aw::verify_all(pair)) ASSERT_TRUE(r.passed) << aw::to_string(r.statement);
  }
}

TEST(Verifier, ZeroHorizonIsVacuousForLocalTimes) {
  const auto pair = pair_of({0}, {0});
  for (const auto& r : aw::verify_all(pair)) EXPECT_TRUE(r.passed);
  EXPECT_TRUE(aw::verify(pair, Statement::LocalTimeOrder).vacuous);
}

TEST(Verifier, SlowAndFastSystemsHitThree) {
  auto [l, r] = aw::build_ce1(3);
  const auto pair = aw::make_pair_from_systems(l, r, 200, aw::Relation::Trileq);
  const auto first = [](const aw::Trajectory& t, Site x) {
    for (std::int64_t n = 0; n <= t.horizon(); ++n) {
      if (t[n] == x) return n;
    }
    return std::int64_t{-1};
  };
  EXPECT_EQ(first(pair.left, 3), 11);
  EXPECT_EQ(first(pair.right, 3), 3);
  EXPECT_TRUE(aw::check_relation(l, r, {-5, 200, 10}, aw::Relation::Trileq));
  for (const auto& res : aw::verify_all(pair)) EXPECT_TRUE(res.passed) << aw::to_string(res.statement);
}

TEST(Verifier, LeaderPairsPassEveryStatement) {
  for (auto v : {aw::Ce2Variant::Primed, aw::Ce2Variant::Unprimed}) {
    const auto pair = aw::build_ce2(v);
    for (const auto& res : aw::verify_all(pair)) EXPECT_TRUE(res.passed) << aw::to_string(res.statement);
  }
  const auto periodic = aw::build_ce2(aw::Ce2Variant::Periodic, 5);
  for (const auto& res : aw::verify_all(periodic)) EXPECT_TRUE(res.passed) << aw::to_string(res.statement);
}

TEST(Verifier, AdmissiblePathPairsPass) {
  std::mt19937_64 rng(3);
  int admissible = 0;
  for (int i = 0; i < 20000 && admissible < 2000; ++i) {
    const int steps = 4 + static_cast<int>(rng() % 20);
    const auto l = random_path(rng, steps);
    const auto r = random_path(rng, steps);
    if (!aw::paths_admit_preceq(l, r).admissible) continue;
    ++admissible;
    const auto pair = pair_of(l, r);
    for (const auto& res : aw::verify_all(pair)) {
      ASSERT_TRUE(res.passed) << aw::to_string(res.statement) << " trial " << i;
    }
  }
  EXPECT_GT(admissible, 100);
}

TEST(Verifier, ExhaustiveShortAdmissiblePairs) {
  for (int len = 1; len <= 7; ++len) {
    const auto paths = testsupport::all_paths(len);
    for (const auto& l : paths) {
      for (const auto& r : paths) {
        if (!aw::paths_admit_preceq(l, r).admissible) continue;
        for (const auto& res : aw::verify_all(pair_of(l, r))) ASSERT_TRUE(res.passed) << aw::to_string(res.statement);
      }
    }
  }
}

TEST(Verifier, SharedUniformPairsPass) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 200; ++i) {
    const auto env = testsupport::random_environment(rng);
    const auto pair = aw::couple_shared_uniform(env, testsupport::raised(env, rng), aw::UniformField(i), 0, 500);
    for (const auto& res : aw::verify_all(pair)) ASSERT_TRUE(res.passed) << aw::to_string(res.statement);
  }
}

TEST(Verifier, MirroredPairStillPasses) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 100; ++i) {
    const auto env = testsupport::random_environment(rng);
    const aw::UniformField f(i);
    const auto l = aw::sample_system(env, f, 0);
    const auto r = aw::sample_system(testsupport::raised(env, rng), f, 0);
    const auto pair = aw::make_pair_from_systems(aw::mirror_system(r), aw::mirror_system(l), 300);
    for (const auto& res : aw::verify_all(pair)) ASSERT_TRUE(res.passed) << aw::to_string(res.statement);
  }
}

TEST(Verifier, IndependentWalksEventuallyFail) {
  const auto env = aw::CookieEnvironment::constant(0.5);
  const aw::UniformField f(9);
  bool found = false;
  for (std::uint64_t s = 0; s < 200 && !found; ++s) {
    const auto pair = aw::make_pair_from_systems(aw::sample_system(env, f, 2 * s), aw::sample_system(env, f, 2 * s + 1),
                                                 200);
    for (const auto& res : aw::verify_all(pair)) {
      if (!res.passed) {
        ASSERT_TRUE(res.witness.has_value());
        found = true;
      }
    }
  }
  EXPECT_TRUE(found);
}

TEST(Verifier, ResultJson) {
  const auto res = aw::verify(aw::negative_control(Statement::Envelopes), Statement::Envelopes);
  const nlohmann::json j = res;
  EXPECT_EQ(j["statement"], "envelopes");
  EXPECT_EQ(j["passed"], false);
  EXPECT_TRUE(j["witness"].contains("t"));
}
