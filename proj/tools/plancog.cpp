// plancog: command-line front end for planning, goal recognition with
// complex observations, observation generation and benchmarking.
//
// Exit codes: 0 success, 1 negative answer (unsolvable / not satisfied),
// 2 usage, I/O or parse error, 3 recognition finished with timeouts.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include <nlohmann/json.hpp>

#include "plancog/bench.hpp"
#include "plancog/compiler.hpp"
#include "plancog/obs_generator.hpp"
#include "plancog/pddl.hpp"
#include "plancog/planner.hpp"
#include "plancog/recognizer.hpp"

namespace fs = std::filesystem;
using namespace plancog;

namespace {

constexpr int kNegative = 1;
constexpr int kInputError = 2;
constexpr int kTimeouts = 3;

void write_text(const std::string &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
}

std::vector<std::uint64_t> parse_seed_list(const std::string &text) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(std::stoull(item));
  if (out.empty()) throw Error("empty seed list");
  return out;
}

// "A:0:0,A+F:50:25" -> settings
std::vector<BenchSetting> parse_settings(const std::string &text) {
  std::vector<BenchSetting> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    auto a = item.find(':'), b = item.rfind(':');
    if (a == std::string::npos || a == b) throw Error("bad setting '" + item + "', want MODE:U:D");
    out.push_back({parse_obs_mode(item.substr(0, a)), std::stod(item.substr(a + 1, b - a - 1)),
                   std::stod(item.substr(b + 1))});
  }
  return out;
}

struct Common {
  std::string domain, problem, hyps, obs, out;
  double budget_factor = 10, min_budget = 20;
  unsigned jobs = 1;
  std::uint64_t seed = 0;
};

RecognitionProblem load_recognition(const Common &c) {
  auto task = load_task(read_file(c.domain), read_file(c.problem));
  RecognitionProblem rp;
  rp.domain = std::move(task.problem);
  rp.hypotheses = parse_hypotheses(rp.domain, read_file(c.hyps));
  if (rp.hypotheses.empty()) throw Error("no hypotheses in '" + c.hyps + "'");
  rp.theta = parse_observations(rp.domain, read_file(c.obs));
  return rp;
}

nlohmann::json record_json(const RecognitionProblem &rp, const GoalRecord &r) {
  nlohmann::json base = nullptr;
  if (r.base_cost) base = *r.base_cost;
  return {{"goal", r.goal},
          {"hypothesis", format_fluents(rp.domain, rp.hypotheses[r.goal])},
          {"base_cost", base},
          {"unsolvable", !r.base_cost},
          {"base_time", r.base_time},
          {"cpx_cost", r.cpx_cost.to_string()},
          {"ign_cost", r.ign_cost.to_string()},
          {"cpx_time", r.cpx_time},
          {"ign_time", r.ign_time},
          {"in_cpx", r.in_cpx},
          {"in_ign", r.in_ign}};
}

int cmd_plan(const Common &c) {
  auto task = load_task(read_file(c.domain), read_file(c.problem));
  auto res = astar(task.problem);
  std::cerr << "; expanded " << res.stats.expanded << ", generated " << res.stats.generated
            << ", " << res.stats.seconds << " s\n";
  if (!res.solved()) {
    std::cout << "; unsolvable\n";
    return kNegative;
  }
  std::string text = plan_to_string(task.problem, res.plan) + "; cost = " +
                     std::to_string(res.cost) + "\n";
  if (c.out.empty())
    std::cout << text;
  else
    write_text(c.out, text);
  return 0;
}

int cmd_recognize(const Common &c, bool json_only, bool first_choice) {
  auto rp = load_recognition(c);
  RecognizerConfig cfg;
  cfg.budget_factor = c.budget_factor;
  cfg.min_budget_seconds = c.min_budget;
  cfg.jobs = c.jobs;
  cfg.seed = c.seed;
  if (first_choice) cfg.unordered_choice = UnorderedChoice::first;
  auto res = recognize(rp, cfg);

  std::string jsonl;
  for (const auto &r : res.records) jsonl += record_json(rp, r).dump() + "\n";
  nlohmann::json summary = {{"summary", true},
                            {"g_star_cpx", res.g_star_cpx},
                            {"g_star_ign", res.g_star_ign},
                            {"ign_empty", res.ign_empty_flag},
                            {"theta_cpx", res.theta_cpx_size},
                            {"theta_ign", res.theta_ign_size},
                            {"unsolvable_goals", res.unsolvable_goals()},
                            {"timeouts", res.any_timeouts()}};
  jsonl += summary.dump() + "\n";
  if (!c.out.empty()) write_text(c.out, jsonl);

  if (json_only) {
    std::cout << jsonl;
  } else {
    std::cout << std::left << std::setw(4) << "#" << std::setw(8) << "c*" << std::setw(16)
              << "cpx" << std::setw(16) << "ign" << std::setw(5) << "cpx" << std::setw(5)
              << "ign"
              << "hypothesis\n";
    for (const auto &r : res.records)
      std::cout << std::setw(4) << r.goal << std::setw(8)
                << (r.base_cost ? std::to_string(*r.base_cost) : "unsolv") << std::setw(16)
                << r.cpx_cost.to_string() << std::setw(16) << r.ign_cost.to_string()
                << std::setw(5) << (r.in_cpx ? "*" : "") << std::setw(5) << (r.in_ign ? "*" : "")
                << format_fluents(rp.domain, rp.hypotheses[r.goal]) << '\n';
    std::cout << "|Theta_cpx| = " << res.theta_cpx_size << ", |Theta_ign| = "
              << res.theta_ign_size << (res.ign_empty_flag ? " (ignore-simplified set is empty)" : "")
              << "\n|G*_cpx| = " << res.g_star_cpx.size() << ", |G*_ign| = " << res.g_star_ign.size()
              << '\n';
    for (auto g : res.unsolvable_goals())
      std::cout << "warning: hypothesis " << g << " is unsolvable and was excluded\n";
  }
  if (res.any_timeouts()) {
    std::cerr << "some compiled searches timed out\n";
    return kTimeouts;
  }
  return 0;
}

int cmd_compile(const Common &c, std::size_t goal) {
  auto rp = load_recognition(c);
  auto cp = compile(rp, goal);
  auto [dom, prob] = write_grounded_pddl(cp.problem, "compiled");
  if (c.out.empty()) {
    std::cout << dom << '\n' << prob;
  } else {
    write_text(c.out + "-domain.pddl", dom);
    write_text(c.out + "-problem.pddl", prob);
  }
  return 0;
}

int cmd_genobs(const Common &c, const std::string &goal_text, const std::string &mode,
               double u, double d) {
  auto task = load_task(read_file(c.domain), read_file(c.problem));
  auto &p = task.problem;
  if (!goal_text.empty()) p.goal = parse_fluent_list(p, goal_text);
  auto res = astar(p);
  if (!res.solved()) {
    std::cerr << "goal is unsolvable\n";
    return kNegative;
  }
  GenSettings gs;
  gs.mode = parse_obs_mode(mode);
  gs.u_percent = u;
  gs.d_percent = d;
  gs.seed = c.seed;
  auto tr = trace(p, res.plan);
  auto theta = generate(p, tr, gs);
  auto text = write_observations(p, theta);
  auto manifest = generation_manifest(gs, res.cost, res.plan.size(), theta);
  manifest["goal"] = format_fluents(p, p.goal);
  manifest["source_plan"] = plan_to_string(p, res.plan);
  if (c.out.empty()) {
    std::cout << text;
  } else {
    write_text(c.out, text);
    write_text(c.out + ".manifest.json", manifest.dump(2) + "\n");
  }
  return 0;
}

int cmd_check(const Common &c, const std::string &plan_path, bool strict) {
  auto task = load_task(read_file(c.domain), read_file(c.problem));
  const auto &p = task.problem;
  auto theta = parse_observations(p, read_file(c.obs));
  auto plan = parse_plan(p, read_file(plan_path));
  try {
    trace(p, plan);
  } catch (const PreconditionError &e) {
    std::cout << "not satisfied: " << e.what() << '\n';
    return kNegative;
  }
  SatisfactionOptions opts;
  opts.strict_fluent_window = strict;
  bool ok = satisfies_plan(p, plan, p.initial_state(), theta, opts);
  std::cout << (ok ? "satisfied" : "not satisfied") << '\n';
  return ok ? 0 : kNegative;
}

int cmd_bench(const Common &c, const std::vector<std::string> &suites, const std::string &settings,
              const std::string &mode, double u, double d, bool single, const std::string &seeds) {
  BenchOptions opts;
  if (single)
    opts.settings = {{parse_obs_mode(mode), u, d}};
  else if (!settings.empty())
    opts.settings = parse_settings(settings);
  opts.seeds = parse_seed_list(seeds);
  opts.recognizer.budget_factor = c.budget_factor;
  opts.recognizer.min_budget_seconds = c.min_budget;
  opts.jobs = c.jobs;

  std::vector<RunRecord> records;
  for (const auto &dir : suites) {
    auto suite = load_suite(dir);
    std::cerr << dir << ": " << suite.size() << " instances\n";
    auto part = run_bench(suite, opts);
    records.insert(records.end(), part.begin(), part.end());
  }
  auto rows = aggregate(records);
  std::size_t empty = 0, failed = 0, violations = 0;
  for (const auto &r : rows) {
    empty += r.excluded_empty;
    failed += r.failed;
    violations += r.containment_violations;
  }
  std::cout << rows_to_table(rows);
  std::cout << "runs: " << records.size() << ", removed (empty ignore set): " << empty
            << ", failed: " << failed << ", |G*_cpx| > |G*_ign| violations: " << violations
            << '\n';
  for (const auto &r : records)
    if (!r.error.empty()) std::cerr << "error: " << r.instance << ": " << r.error << '\n';
  if (!c.out.empty()) {
    fs::create_directories(c.out);
    write_text((fs::path(c.out) / "aggregate.csv").string(), rows_to_csv(rows));
    write_text((fs::path(c.out) / "timing.csv").string(), rows_to_timing_csv(rows));
    write_text((fs::path(c.out) / "raw.jsonl").string(), records_to_jsonl(records));
  }
  return 0;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"plancog: goal recognition with complex observations"};
  app.require_subcommand(1);
  Common c;

  auto add_task = [&](CLI::App *sub) {
    sub->add_option("--domain", c.domain, "PDDL domain file")->required()->check(CLI::ExistingFile);
    sub->add_option("--problem", c.problem, "PDDL problem (or template) file")
        ->required()
        ->check(CLI::ExistingFile);
  };
  auto add_budget = [&](CLI::App *sub) {
    sub->add_option("--budget-factor", c.budget_factor, "compiled budget = factor x base time");
    sub->add_option("--min-budget", c.min_budget, "lower bound on the compiled budget (s)");
    sub->add_option("--jobs", c.jobs, "worker threads")->check(CLI::PositiveNumber);
  };

  auto *plan = app.add_subcommand("plan", "optimal plan for a PDDL problem");
  add_task(plan);
  plan->add_option("--out", c.out, "write the plan here instead of stdout");

  bool json_only = false, first_choice = false;
  auto *rec = app.add_subcommand("recognize", "optimal goal sets with and without complex observations");
  add_task(rec);
  rec->add_option("--hyps", c.hyps, "one hypothesis per line")->required()->check(CLI::ExistingFile);
  rec->add_option("--obs", c.obs, "observation file")->required()->check(CLI::ExistingFile);
  rec->add_option("--seed", c.seed, "seed for the baseline's unordered-group choice");
  rec->add_option("--out", c.out, "write JSON lines here");
  rec->add_flag("--json", json_only, "print JSON lines instead of a table");
  rec->add_flag("--first-unordered", first_choice, "baseline keeps the first unordered member");
  add_budget(rec);

  std::size_t goal_index = 0;
  auto *comp = app.add_subcommand("compile", "export the compiled problem for one hypothesis as PDDL");
  add_task(comp);
  comp->add_option("--hyps", c.hyps)->required()->check(CLI::ExistingFile);
  comp->add_option("--obs", c.obs)->required()->check(CLI::ExistingFile);
  comp->add_option("--goal-index", goal_index, "hypothesis index (0-based)");
  comp->add_option("--out", c.out, "output prefix (<out>-domain.pddl, <out>-problem.pddl)");

  std::string goal_text, mode = "A";
  double u = 0, d = 0;
  auto *gen = app.add_subcommand("genobs", "generate a complex observation set from an optimal plan");
  add_task(gen);
  gen->add_option("--goal", goal_text, "goal fluents, overriding the problem's goal");
  gen->add_option("--mode", mode, "A or A+F");
  gen->add_option("--u", u, "percent of observations in unordered groups")->check(CLI::Range(0.0, 100.0));
  gen->add_option("--d", d, "percent of action observations debound")->check(CLI::Range(0.0, 100.0));
  gen->add_option("--seed", c.seed);
  gen->add_option("--out", c.out, "observation file; a manifest is written next to it");

  std::string plan_path;
  bool strict = false;
  auto *chk = app.add_subcommand("check", "does a plan satisfy an observation set?");
  add_task(chk);
  chk->add_option("--obs", c.obs)->required()->check(CLI::ExistingFile);
  chk->add_option("--plan", plan_path)->required()->check(CLI::ExistingFile);
  chk->add_flag("--strict", strict, "fluent observations only see states after the segment start");

  std::vector<std::string> suites;
  std::string settings, seeds = "1,2,3";
  auto *bench = app.add_subcommand("bench", "run the benchmark pipeline over suites");
  bench->add_option("--suite", suites, "suite directory (repeatable)")->required();
  bench->add_option("--settings", settings, "comma list of MODE:U:D (default: 10 standard settings)");
  auto *mode_opt = bench->add_option("--mode", mode, "single setting: mode");
  bench->add_option("--u", u)->check(CLI::Range(0.0, 100.0));
  bench->add_option("--d", d)->check(CLI::Range(0.0, 100.0));
  bench->add_option("--seeds", seeds, "comma list of seeds");
  bench->add_option("--out", c.out, "directory for aggregate.csv, timing.csv, raw.jsonl");
  add_budget(bench);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kInputError;
  }

  try {
    if (*plan) return cmd_plan(c);
    if (*rec) return cmd_recognize(c, json_only, first_choice);
    if (*comp) return cmd_compile(c, goal_index);
    if (*gen) return cmd_genobs(c, goal_text, mode, u, d);
    if (*chk) return cmd_check(c, plan_path, strict);
    if (*bench) return cmd_bench(c, suites, settings, mode, u, d, mode_opt->count() > 0, seeds);
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}
