#include <gtest/gtest.h>

#include <random>

#include "support.hpp"

using namespace plancog;

namespace {

RecognitionProblem museum() {
  auto p = fixtures::load_data("museum/domain.pddl", "museum/template.pddl");
  RecognitionProblem rp;
  rp.domain = p;
  rp.hypotheses = parse_hypotheses(p, read_file(fixtures::data_path("museum/hyps.dat")));
  rp.theta = parse_observations(p, read_file(fixtures::data_path("museum/obs.txt")));
  return rp;
}

RecognizerConfig quick() {
  RecognizerConfig cfg;
  cfg.min_budget_seconds = 5;
  return cfg;
}

}  // namespace

TEST(Recognize, SingleHypothesisFromItsOwnPlan) {
  auto p = fixtures::load_data("blocksworld/domain.pddl", "blocksworld/problem-3.pddl");
  RecognitionProblem rp;
  rp.domain = p;
  rp.hypotheses = {p.goal};
  auto plan = astar(p).plan;
  rp.theta = ObsNode::ordered();
  for (auto a : plan) rp.theta.members.push_back(ObsNode::act(a));
  number_observations(rp.theta);
  auto res = recognize(rp, quick());
  EXPECT_EQ(res.g_star_cpx, (std::set<std::size_t>{0}));
  EXPECT_EQ(res.g_star_ign, (std::set<std::size_t>{0}));
}

TEST(Recognize, MuseumSinglesOutOneMotive) {
  auto rp = museum();
  auto res = recognize(rp, quick());
  EXPECT_EQ(res.g_star_cpx, (std::set<std::size_t>{2}));
  EXPECT_EQ(res.g_star_ign, (std::set<std::size_t>{0, 1, 2}));
  EXPECT_EQ(res.theta_cpx_size, 6u);
  EXPECT_EQ(res.theta_ign_size, 2u);
  EXPECT_EQ(res.records[0].base_cost, 5);
  EXPECT_EQ(res.records[1].base_cost, 7);
  EXPECT_EQ(res.records[2].base_cost, 7);
  EXPECT_EQ(res.records[0].cpx_cost.kind, CompiledCost::Kind::exceeded_bound);
  for (std::size_t g = 0; g < rp.hypotheses.size(); ++g) {
    EXPECT_EQ(brute_force_g_star(rp, g), res.g_star_cpx.count(g) > 0) << g;
    auto ign = rp;
    ign.theta = simplify_ignore(rp.theta, quick().seed).as_theta();
    EXPECT_EQ(brute_force_g_star(ign, g), res.g_star_ign.count(g) > 0) << g;
  }
}

TEST(Recognize, EmptyIgnoreSetIsFlagged) {
  auto rp = museum();
  rp.theta = ObsNode::ordered({ObsNode::flu(parse_fluent_list(rp.domain, "(window-open)"))});
  number_observations(rp.theta);
  auto res = recognize(rp, quick());
  EXPECT_TRUE(res.ign_empty_flag);
  EXPECT_EQ(res.theta_ign_size, 0u);
  EXPECT_EQ(res.g_star_ign.size(), 3u);  // no constraint at all
}

TEST(Recognize, UnsolvableHypothesisIsExcludedAndFlagged) {
  auto rp = museum();
  rp.hypotheses.push_back(parse_fluent_list(rp.domain, "(in-drawer key) (has key)"));
  auto res = recognize(rp, quick());
  EXPECT_EQ(res.unsolvable_goals(), std::vector<std::size_t>{3});
  EXPECT_FALSE(res.g_star_cpx.count(3));
  EXPECT_FALSE(res.g_star_ign.count(3));
}

TEST(Recognize, ParallelMatchesSerial) {
  auto rp = museum();
  auto cfg = quick();
  auto serial = recognize(rp, cfg);
  cfg.jobs = 4;
  auto parallel = recognize(rp, cfg);
  EXPECT_EQ(serial.g_star_cpx, parallel.g_star_cpx);
  EXPECT_EQ(serial.g_star_ign, parallel.g_star_ign);
}

TEST(Recognize, TimeoutIsReportedSeparately) {
  auto rp = museum();
  auto cfg = quick();
  cfg.min_budget_seconds = -1;
  cfg.budget_factor = 0;
  auto res = recognize(rp, cfg);
  EXPECT_TRUE(res.any_timeouts());
  EXPECT_EQ(res.records[2].cpx_cost.kind, CompiledCost::Kind::timed_out);
  EXPECT_TRUE(res.g_star_cpx.empty());
}

// An unordered group is a conjunction over one segment, so a single
// occurrence of `a` satisfies two observations of `a`. The compilation keeps
// one explanation action per observation id and therefore needs two. This
// pins the known divergence so a change in either side is noticed.
TEST(Recognize, RepeatedActionInUnorderedGroupNeedsTwoOccurrences) {
  fixtures::Builder b;
  auto a = b.action("a", {}, {b.f("f")});
  RecognitionProblem rp;
  rp.domain = b.p;
  rp.hypotheses = {b.fs({"f"})};
  rp.theta = ObsNode::ordered({ObsNode::unordered({ObsNode::act(a), ObsNode::act(a)})});
  number_observations(rp.theta);

  EXPECT_EQ(brute_force_g_star(rp, 0), std::optional<bool>(true));
  auto res = recognize(rp, quick());
  EXPECT_TRUE(res.g_star_cpx.empty());
  EXPECT_EQ(res.records[0].cpx_cost.kind, CompiledCost::Kind::exceeded_bound);
  EXPECT_EQ(astar(compile(rp, 0).problem).cost, 2);
  EXPECT_EQ(res.g_star_ign, (std::set<std::size_t>{0}));
}

TEST(BruteForce, EmptyThetaAndImpossibleAction) {
  auto rp = museum();
  rp.theta = ObsNode::ordered();
  for (std::size_t g = 0; g < 3; ++g) EXPECT_EQ(brute_force_g_star(rp, g), true);
  // no optimal plan for "has cash + escaped" takes the key
  auto key = *rp.domain.find_action("(take-from-drawer key)");
  rp.theta = ObsNode::ordered({ObsNode::act(key)});
  number_observations(rp.theta);
  EXPECT_EQ(brute_force_g_star(rp, 0), false);
}

TEST(BruteForce, LimitsDecline) {
  auto rp = museum();
  BruteForceLimits tiny;
  tiny.max_plans = 3;
  rp.theta = ObsNode::ordered({ObsNode::act(0)});
  number_observations(rp.theta);
  EXPECT_FALSE(brute_force_g_star(rp, 1, tiny).has_value());
}

// Per-instance properties on random micro instances: cpx is contained in
// ign, adding an observation never grows cpx.
TEST(RecognizeProperty, ContainmentAndMonotoneExclusion) {
  std::mt19937_64 rng(31);
  auto cfg = quick();
  for (int round = 0; round < 60; ++round) {
    auto rp = fixtures::random_micro(rng, {5, 8, 3, 2});
    rp.theta = fixtures::random_theta(rng, rp.domain, 3);
    auto res = recognize(rp, cfg);
    for (auto g : res.g_star_cpx) EXPECT_TRUE(res.g_star_ign.count(g));
    auto more = rp;
    auto extra = fixtures::random_theta(rng, rp.domain, 1);
    more.theta.members.push_back(extra.members.empty() ? ObsNode::act(0) : extra.members[0]);
    number_observations(more.theta);
    auto res2 = recognize(more, cfg);
    for (auto g : res2.g_star_cpx) EXPECT_TRUE(res.g_star_cpx.count(g)) << "round " << round;
  }
}
