#include <gtest/gtest.h>

#include <cmath>

#include "support.hpp"

using namespace plancog;

namespace {

BenchInstance museum_instance() {
  auto rd = [](const char *f) { return read_file(fixtures::data_path(std::string("museum/") + f)); };
  return make_instance("museum", rd("domain.pddl"), rd("template.pddl"), rd("hyps.dat"), rd("real_hyp.dat"));
}

BenchOptions quick(std::vector<BenchSetting> settings, std::vector<std::uint64_t> seeds) {
  BenchOptions o;
  o.settings = std::move(settings);
  o.seeds = std::move(seeds);
  o.recognizer.min_budget_seconds = 10;
  return o;
}

const std::vector<BenchInstance> &grid_suite() {
  static const auto suite = load_suite(fixtures::data_path("suites/grid"));
  return suite;
}

}  // namespace

TEST(MeanCi, NormalApproximation) {
  auto m = mean_ci({1, 2, 3});
  EXPECT_DOUBLE_EQ(m.mean, 2.0);
  EXPECT_DOUBLE_EQ(m.half_width, 1.96 / std::sqrt(3.0));
  EXPECT_EQ(mean_ci({}).n, 0u);
  EXPECT_DOUBLE_EQ(mean_ci({5}).half_width, 0.0);
}

TEST(Instance, TrueGoalByTextOrIndex) {
  auto inst = museum_instance();
  EXPECT_EQ(inst.true_goal, 2u);
  EXPECT_EQ(inst.optimal_cost, 7);
  auto rd = [](const char *f) { return read_file(fixtures::data_path(std::string("museum/") + f)); };
  EXPECT_EQ(make_instance("m", rd("domain.pddl"), rd("template.pddl"), rd("hyps.dat"), "1").true_goal, 1u);
  EXPECT_THROW(make_instance("m", rd("domain.pddl"), rd("template.pddl"), rd("hyps.dat"), "(escaped)"), Error);
}

TEST(Suite, LoadsSortedInstances) {
  const auto &suite = grid_suite();
  ASSERT_EQ(suite.size(), 10u);
  EXPECT_EQ(suite[0].name, "centre-0");
  EXPECT_EQ(suite[0].domain_name, "grid");
  EXPECT_EQ(suite[0].base.hypotheses.size(), 5u);
  EXPECT_THROW(load_suite(fixtures::data_path("no-such-suite")), Error);
}

TEST(Bench, OneInstanceOneSettingOneSeed) {
  std::vector<BenchInstance> suite{museum_instance()};
  auto records = run_bench(suite, quick({{ObsMode::actions, 0, 0}}, {1}));
  ASSERT_EQ(records.size(), 1u);
  auto rows = aggregate(records);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].counted() + rows[0].excluded_empty + rows[0].failed, 1u);
  EXPECT_TRUE(records[0].self_check);
}

TEST(Bench, PlainSettingGivesIdenticalSets) {
  auto records = run_bench(grid_suite(), quick({{ObsMode::actions, 0, 0}}, {1, 2}));
  for (const auto &r : records) {
    ASSERT_TRUE(r.error.empty()) << r.error;
    EXPECT_EQ(r.g_star_cpx, r.g_star_ign) << r.instance;
  }
}

TEST(Bench, AggregatesMatchRawRecordsAndClassification) {
  auto records = run_bench(grid_suite(), quick({{ObsMode::actions_fluents, 50, 25}, {ObsMode::actions, 25, 0}}, {1, 2}));
  auto rows = aggregate(records);
  ASSERT_EQ(rows.size(), 2u);
  for (const auto &row : rows) {
    std::size_t opt = 0, un = 0, imp = 0, empty = 0, n = 0;
    double gi = 0, gc = 0;
    for (const auto &r : records) {
      if (r.setting.mode != row.setting.mode || r.setting.u_percent != row.setting.u_percent) continue;
      ++n;
      if (r.ign_empty) {
        ++empty;
        continue;
      }
      auto k = r.g_star_ign.size();
      if (k == 1) ++opt;
      if (k == 0) ++un;
      if (k > 1) {
        ++imp;
        gi += static_cast<double>(k);
        gc += static_cast<double>(r.g_star_cpx.size());
      }
    }
    EXPECT_EQ(row.runs, n);
    EXPECT_EQ(row.opt, opt);
    EXPECT_EQ(row.un, un);
    EXPECT_EQ(row.imp, imp);
    EXPECT_EQ(row.excluded_empty, empty);
    EXPECT_EQ(row.counted() + row.excluded_empty + row.failed, row.runs);
    if (imp) {
      EXPECT_DOUBLE_EQ(row.g_star_ign_imp.mean, gi / static_cast<double>(imp));
      EXPECT_DOUBLE_EQ(row.g_star_cpx_imp.mean, gc / static_cast<double>(imp));
      EXPECT_LE(row.g_star_cpx_imp.mean, row.g_star_ign_imp.mean);
    }
    EXPECT_EQ(row.seeds, (std::vector<std::uint64_t>{1, 2}));
  }
}

TEST(Bench, CsvIsReproducibleAcrossRunsAndWorkers) {
  auto opts = quick({{ObsMode::actions_fluents, 50, 25}}, {3});
  auto a = rows_to_csv(aggregate(run_bench(grid_suite(), opts)));
  opts.jobs = 3;
  auto b = rows_to_csv(aggregate(run_bench(grid_suite(), opts)));
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.substr(0, a.find(',')), "domain");
}

TEST(Bench, SeedsDifferAcrossSettings) {
  BenchSetting s1{ObsMode::actions, 0, 0}, s2{ObsMode::actions, 0, 25};
  EXPECT_NE(run_seed(1, 0, s1), run_seed(1, 0, s2));
  EXPECT_NE(run_seed(1, 0, s1), run_seed(2, 0, s1));
  EXPECT_EQ(run_seed(1, 0, s1), run_seed(1, 0, s1));
}

TEST(Bench, RecordJsonHasEveryField) {
  std::vector<BenchInstance> suite{museum_instance()};
  auto records = run_bench(suite, quick({{ObsMode::actions, 0, 25}}, {1}));
  auto j = nlohmann::json::parse(records_to_jsonl(records));
  for (const char *key : {"instance", "mode", "u_percent", "d_percent", "seed", "g_star_cpx", "g_star_ign",
                          "ign_empty", "theta_cpx", "theta_ign", "observations"})
    EXPECT_TRUE(j.contains(key)) << key;
}
