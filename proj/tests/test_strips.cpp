#include <gtest/gtest.h>

#include <random>

#include "support.hpp"

using namespace plancog;
using plancog::fixtures::Builder;

TEST(Apply, AddsToEmptyState) {
  Builder b;
  auto a = b.action("a", {}, b.fs({"p"}));
  auto s = apply(b.p, State(b.p.num_fluents()), a);
  EXPECT_EQ(s.members(), b.fs({"p"}));
}

TEST(Apply, DeleteBeforeAdd) {
  Builder b;
  auto a = b.action("a", b.fs({"p"}), b.fs({"p"}), b.fs({"p"}));
  auto s = apply(b.p, State(b.p.num_fluents(), b.fs({"p"})), a);
  EXPECT_EQ(s.members(), b.fs({"p"}));
}

TEST(Apply, MissingPreconditionIsReported) {
  Builder b;
  auto a = b.action("a", b.fs({"p"}), {});
  try {
    apply(b.p, State(b.p.num_fluents()), a);
    FAIL();
  } catch (const PreconditionError &e) {
    EXPECT_EQ(e.missing, std::vector<std::string>{"(p)"});
  }
}

TEST(TraceTest, EmptyPlan) {
  Builder b;
  b.f("p");
  b.p.init = b.fs({"p"});
  auto t = trace(b.p, {});
  ASSERT_EQ(t.states.size(), 1u);
  EXPECT_EQ(t.states[0].members(), b.fs({"p"}));
  EXPECT_TRUE(t.actions.empty());
}

TEST(TraceTest, SingleStep) {
  Builder b;
  auto a = b.action("a", {}, b.fs({"p"}));
  auto t = trace(b.p, {a});
  ASSERT_EQ(t.states.size(), 2u);
  EXPECT_EQ(t.states[0].count(), 0u);
  EXPECT_EQ(t.states[1].members(), b.fs({"p"}));
}

TEST(TraceTest, SelfDisablingActionFailsAtStepTwo) {
  Builder b;
  auto a = b.action("a", b.fs({"p"}), {}, b.fs({"p"}));
  b.p.init = b.fs({"p"});
  try {
    trace(b.p, {a, a});
    FAIL();
  } catch (const PreconditionError &e) {
    EXPECT_EQ(e.step, 2u);
  }
}

TEST(PlanCost, Examples) {
  Builder b;
  auto u1 = b.action("u1", {}, b.fs({"p"}));
  auto u2 = b.action("u2", {}, b.fs({"q"}));
  auto z = b.action("z", {}, {}, {}, 0);
  auto t = b.action("t", {}, {}, {}, 3);
  EXPECT_EQ(plan_cost(b.p, {}), 0);
  EXPECT_EQ(plan_cost(b.p, {u1, u2}), 2);
  EXPECT_EQ(plan_cost(b.p, {z, t}), 3);
}

TEST(PlanningProblemTest, RejectsNegativeCost) {
  Builder b;
  EXPECT_THROW(b.action("bad", {}, {}, {}, -1), SemanticError);
}

TEST(FluentTableTest, InterningIsIdempotent) {
  FluentTable t;
  auto a = t.intern(Fluent{"on", {"a", "b"}});
  auto b = t.intern(Fluent{"on", {"a", "b"}});
  EXPECT_EQ(a, b);
  EXPECT_EQ(t.size(), 1u);
  EXPECT_EQ(t.find("(on a b)"), a);
}

// Folding apply over random valid plans reproduces the trace, and the summed
// step costs equal plan_cost.
TEST(TraceProperty, FoldAndCostCoherence) {
  std::mt19937_64 rng(7);
  for (int round = 0; round < 200; ++round) {
    auto rp = fixtures::random_micro(rng, {6, 8, 1, 3});
    const auto &p = rp.domain;
    auto plan = fixtures::random_walk(rng, p, 10);
    auto t = trace(p, plan);
    State fold = p.initial_state();
    Cost sum = 0;
    for (std::size_t i = 0; i < plan.size(); ++i) {
      fold = apply(p, fold, plan[i]);
      ASSERT_EQ(fold, t.states[i + 1]);
      ASSERT_EQ(apply(p, t.states[i], plan[i]), t.states[i + 1]);  // deterministic
      sum += p.action(t.actions[i]).cost;
    }
    EXPECT_EQ(sum, plan_cost(p, plan));
  }
}
