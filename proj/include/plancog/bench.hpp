#ifndef PLANCOG_BENCH_HPP
#define PLANCOG_BENCH_HPP

// Benchmark harness: for every suite instance x setting x seed, generate a
// complex observation tree from an optimal plan for the true goal, run the
// recognizer with and without complex observations, and aggregate rows.

#include <cmath>
#include <filesystem>
#include <iomanip>
#include <map>
#include <mutex>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <nlohmann/json.hpp>

#include "plancog/obs_generator.hpp"
#include "plancog/pddl.hpp"
#include "plancog/recognizer.hpp"

namespace plancog {

struct BenchSetting {
  ObsMode mode = ObsMode::actions;
  double u_percent = 0;
  double d_percent = 0;
};

/// U/D matrix {0/0, 0/25, 25/0, 50/0, 50/25} for both modes.
inline std::vector<BenchSetting> default_settings() {
  static constexpr std::pair<double, double> ud[] = {{0, 0}, {0, 25}, {25, 0}, {50, 0}, {50, 25}};
  std::vector<BenchSetting> out;
  for (auto mode : {ObsMode::actions, ObsMode::actions_fluents})
    for (auto [u, d] : ud) out.push_back({mode, u, d});
  return out;
}

/// A recognition instance: domain, problem template, hypotheses and the
/// index of the true hypothesis. Parsed and solved once, reused per setting.
struct BenchInstance {
  std::string name;
  std::string domain_name;
  RecognitionProblem base;  // theta left empty
  std::size_t true_goal = 0;
  Plan optimal_plan;
  Trace optimal_trace;
  Cost optimal_cost = 0;
};

inline BenchInstance make_instance(std::string name, std::string_view domain_text,
                                   std::string_view template_text, std::string_view hyps_text,
                                   std::string_view true_goal_text) {
  BenchInstance inst;
  inst.name = std::move(name);
  auto task = load_task(domain_text, template_text);
  inst.domain_name = task.domain.name;
  inst.base.domain = std::move(task.problem);
  inst.base.hypotheses = parse_hypotheses(inst.base.domain, hyps_text);
  if (inst.base.hypotheses.empty()) throw Error(inst.name + ": no hypotheses");

  std::string truth(true_goal_text);
  auto first = truth.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) throw Error(inst.name + ": empty true-goal file");
  if (std::isdigit(static_cast<unsigned char>(truth[first]))) {
    inst.true_goal = std::stoul(truth.substr(first));
  } else {
    auto goal = parse_fluent_list(inst.base.domain, truth);
    auto it = std::find(inst.base.hypotheses.begin(), inst.base.hypotheses.end(), goal);
    if (it == inst.base.hypotheses.end())
      throw Error(inst.name + ": true goal is not among the hypotheses");
    inst.true_goal = static_cast<std::size_t>(it - inst.base.hypotheses.begin());
  }
  if (inst.true_goal >= inst.base.hypotheses.size())
    throw Error(inst.name + ": true goal index out of range");
  inst.base.true_goal = inst.true_goal;

  auto res = astar(inst.base.problem_for(inst.true_goal));
  if (!res.solved()) throw Error(inst.name + ": true goal is unsolvable");
  inst.optimal_plan = res.plan;
  inst.optimal_cost = res.cost;
  inst.optimal_trace = trace(inst.base.domain, res.plan);
  return inst;
}

/// Reads <suite>/<instance>/{domain.pddl, template.pddl, hyps.dat,
/// real_hyp.dat}; domain.pddl may instead sit in the suite root.
inline std::vector<BenchInstance> load_suite(const std::filesystem::path &dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw Error("suite directory '" + dir.string() + "' not found");
  std::vector<fs::path> subdirs;
  for (const auto &e : fs::directory_iterator(dir))
    if (e.is_directory()) subdirs.push_back(e.path());
  std::sort(subdirs.begin(), subdirs.end());
  std::vector<BenchInstance> out;
  for (const auto &sub : subdirs) {
    auto domain = fs::exists(sub / "domain.pddl") ? sub / "domain.pddl" : dir / "domain.pddl";
    auto problem = fs::exists(sub / "template.pddl") ? sub / "template.pddl" : sub / "problem.pddl";
    out.push_back(make_instance(sub.filename().string(), read_file(domain.string()),
                                read_file(problem.string()), read_file((sub / "hyps.dat").string()),
                                read_file((sub / "real_hyp.dat").string())));
  }
  return out;
}

/// splitmix64 finalizer, used to derive per-run seeds.
inline std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline std::uint64_t run_seed(std::uint64_t seed, std::size_t instance, const BenchSetting &s) {
  auto h = mix_seed(seed);
  h = mix_seed(h ^ instance);
  h = mix_seed(h ^ static_cast<std::uint64_t>(s.mode));
  h = mix_seed(h ^ static_cast<std::uint64_t>(s.u_percent * 1000));
  return mix_seed(h ^ static_cast<std::uint64_t>(s.d_percent * 1000));
}

struct RunRecord {
  std::string instance;
  std::string domain;
  BenchSetting setting;
  std::uint64_t seed = 0;
  std::uint64_t run_seed = 0;
  std::size_t true_goal = 0;
  std::size_t hypotheses = 0;
  std::size_t theta_cpx = 0;
  std::size_t theta_ign = 0;
  std::vector<std::size_t> g_star_cpx;
  std::vector<std::size_t> g_star_ign;
  bool ign_empty = false;
  bool self_check = false;
  bool timeouts = false;
  double time_base = 0;
  double time_cpx = 0;
  double time_ign = 0;
  std::string error;
  std::string observations;  // observation file text

  bool true_in_cpx() const {
    return std::find(g_star_cpx.begin(), g_star_cpx.end(), true_goal) != g_star_cpx.end();
  }

  nlohmann::json to_json() const {
    return {
        {"instance", instance},       {"domain", domain},
        {"mode", to_string(setting.mode)}, {"u_percent", setting.u_percent},
        {"d_percent", setting.d_percent}, {"seed", seed},
        {"run_seed", run_seed},       {"true_goal", true_goal},
        {"hypotheses", hypotheses},   {"theta_cpx", theta_cpx},
        {"theta_ign", theta_ign},     {"g_star_cpx", g_star_cpx},
        {"g_star_ign", g_star_ign},   {"ign_empty", ign_empty},
        {"self_check", self_check},   {"timeouts", timeouts},
        {"time_base", time_base},     {"time_cpx", time_cpx},
        {"time_ign", time_ign},       {"error", error},
        {"observations", observations},
    };
  }
};

inline RunRecord run_instance(const BenchInstance &inst, std::size_t instance_index,
                              const BenchSetting &setting, std::uint64_t seed,
                              RecognizerConfig cfg) {
  RunRecord r;
  r.instance = inst.name;
  r.domain = inst.domain_name;
  r.setting = setting;
  r.seed = seed;
  r.run_seed = run_seed(seed, instance_index, setting);
  r.true_goal = inst.true_goal;
  r.hypotheses = inst.base.hypotheses.size();
  try {
    GenSettings gs;
    gs.mode = setting.mode;
    gs.u_percent = setting.u_percent;
    gs.d_percent = setting.d_percent;
    gs.seed = r.run_seed;
    RecognitionProblem rp = inst.base;
    rp.theta = generate(rp.domain, inst.optimal_trace, gs);
    r.observations = write_observations(rp.domain, rp.theta);
    r.self_check = self_check(rp.domain, rp.theta, inst.optimal_trace);
    cfg.seed = mix_seed(r.run_seed);
    auto res = recognize(rp, cfg);
    r.theta_cpx = res.theta_cpx_size;
    r.theta_ign = res.theta_ign_size;
    r.g_star_cpx.assign(res.g_star_cpx.begin(), res.g_star_cpx.end());
    r.g_star_ign.assign(res.g_star_ign.begin(), res.g_star_ign.end());
    r.ign_empty = res.ign_empty_flag;
    r.timeouts = res.any_timeouts();
    r.time_base = res.base_time;
    r.time_cpx = res.cpx_time;
    r.time_ign = res.ign_time;
  } catch (const std::exception &e) {
    r.error = e.what();
  }
  return r;
}

struct MeanCi {
  double mean = 0;
  double half_width = 0;  // 95% normal approximation
  std::size_t n = 0;
};

inline MeanCi mean_ci(const std::vector<double> &xs) {
  MeanCi out;
  out.n = xs.size();
  if (xs.empty()) return out;
  double sum = 0;
  for (auto x : xs) sum += x;
  out.mean = sum / static_cast<double>(xs.size());
  if (xs.size() < 2) return out;
  double ss = 0;
  for (auto x : xs) ss += (x - out.mean) * (x - out.mean);
  double sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  out.half_width = 1.96 * sd / std::sqrt(static_cast<double>(xs.size()));
  return out;
}

/// One aggregate row per (domain, mode, U, D). Instances whose baseline
/// observation list is empty, or that failed, are excluded and counted.
struct BenchRow {
  std::string domain;
  BenchSetting setting;
  std::size_t runs = 0;
  std::size_t excluded_empty = 0;
  std::size_t failed = 0;
  std::size_t opt = 0;  // |G*_ign| == 1
  std::size_t un = 0;   // |G*_ign| == 0
  std::size_t imp = 0;  // |G*_ign| > 1
  std::size_t improved = 0;  // Imp rows with |G*_cpx| < |G*_ign|
  std::size_t containment_violations = 0;
  std::size_t true_goal_missed = 0;
  MeanCi theta_ign_opt, theta_ign_imp, theta_cpx_opt, theta_cpx_imp;
  MeanCi g_star_ign_imp, g_star_cpx_imp;
  MeanCi time_ign_all, time_cpx_all;
  std::vector<std::uint64_t> seeds;

  std::size_t counted() const { return opt + un + imp; }
};

inline std::vector<BenchRow> aggregate(const std::vector<RunRecord> &records) {
  using Key = std::tuple<std::string, int, double, double>;
  std::map<Key, std::vector<const RunRecord *>> groups;
  std::vector<Key> order;
  for (const auto &r : records) {
    Key k{r.domain, static_cast<int>(r.setting.mode), r.setting.u_percent, r.setting.d_percent};
    if (!groups.count(k)) order.push_back(k);
    groups[k].push_back(&r);
  }
  std::vector<BenchRow> rows;
  for (const auto &k : order) {
    BenchRow row;
    const auto &members = groups[k];
    row.domain = std::get<0>(k);
    row.setting = members.front()->setting;
    std::vector<double> tio, tii, tco, tci, gi, gc, ti, tc;
    for (const auto *r : members) {
      ++row.runs;
      if (std::find(row.seeds.begin(), row.seeds.end(), r->seed) == row.seeds.end())
        row.seeds.push_back(r->seed);
      if (!r->error.empty()) {
        ++row.failed;
        continue;
      }
      if (r->ign_empty) {
        ++row.excluded_empty;
        continue;
      }
      auto ign = r->g_star_ign.size();
      auto cpx = r->g_star_cpx.size();
      if (cpx > ign) ++row.containment_violations;
      if (!r->true_in_cpx()) ++row.true_goal_missed;
      ti.push_back(r->time_ign);
      tc.push_back(r->time_cpx);
      if (ign == 1) {
        ++row.opt;
        tio.push_back(static_cast<double>(r->theta_ign));
        tco.push_back(static_cast<double>(r->theta_cpx));
      } else if (ign > 1) {
        ++row.imp;
        if (cpx < ign) ++row.improved;
        tii.push_back(static_cast<double>(r->theta_ign));
        tci.push_back(static_cast<double>(r->theta_cpx));
        gi.push_back(static_cast<double>(ign));
        gc.push_back(static_cast<double>(cpx));
      } else {
        ++row.un;
      }
    }
    row.theta_ign_opt = mean_ci(tio);
    row.theta_ign_imp = mean_ci(tii);
    row.theta_cpx_opt = mean_ci(tco);
    row.theta_cpx_imp = mean_ci(tci);
    row.g_star_ign_imp = mean_ci(gi);
    row.g_star_cpx_imp = mean_ci(gc);
    row.time_ign_all = mean_ci(ti);
    row.time_cpx_all = mean_ci(tc);
    std::sort(row.seeds.begin(), row.seeds.end());
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace detail {

inline std::string fixed(double v, int digits = 4) {
  std::ostringstream ss;
  ss << std::fixed << std::setprecision(digits) << v;
  return ss.str();
}

}  // namespace detail

/// Deterministic aggregate CSV (no timing columns).
inline std::string rows_to_csv(const std::vector<BenchRow> &rows) {
  std::ostringstream out;
  out << "domain,mode,u_percent,d_percent,runs,excluded_empty,failed,opt,un,imp,improved,"
         "containment_violations,true_goal_missed,"
         "theta_ign_opt,theta_ign_opt_ci,theta_ign_imp,theta_ign_imp_ci,"
         "theta_cpx_opt,theta_cpx_opt_ci,theta_cpx_imp,theta_cpx_imp_ci,"
         "g_star_ign_imp,g_star_ign_imp_ci,g_star_cpx_imp,g_star_cpx_imp_ci,seeds\n";
  for (const auto &r : rows) {
    using detail::fixed;
    out << r.domain << ',' << to_string(r.setting.mode) << ',' << r.setting.u_percent << ','
        << r.setting.d_percent << ',' << r.runs << ',' << r.excluded_empty << ',' << r.failed
        << ',' << r.opt << ',' << r.un << ',' << r.imp << ',' << r.improved << ','
        << r.containment_violations << ',' << r.true_goal_missed;
    for (const auto *m : {&r.theta_ign_opt, &r.theta_ign_imp, &r.theta_cpx_opt, &r.theta_cpx_imp,
                          &r.g_star_ign_imp, &r.g_star_cpx_imp})
      out << ',' << fixed(m->mean) << ',' << fixed(m->half_width);
    out << ',';
    for (std::size_t i = 0; i < r.seeds.size(); ++i) out << (i ? ";" : "") << r.seeds[i];
    out << '\n';
  }
  return out.str();
}

inline std::string rows_to_timing_csv(const std::vector<BenchRow> &rows) {
  std::ostringstream out;
  out << "domain,mode,u_percent,d_percent,time_ign_all,time_ign_all_ci,time_cpx_all,"
         "time_cpx_all_ci\n";
  for (const auto &r : rows)
    out << r.domain << ',' << to_string(r.setting.mode) << ',' << r.setting.u_percent << ','
        << r.setting.d_percent << ',' << detail::fixed(r.time_ign_all.mean, 6) << ','
        << detail::fixed(r.time_ign_all.half_width, 6) << ','
        << detail::fixed(r.time_cpx_all.mean, 6) << ','
        << detail::fixed(r.time_cpx_all.half_width, 6) << '\n';
  return out.str();
}

inline std::string rows_to_table(const std::vector<BenchRow> &rows) {
  std::ostringstream out;
  auto pm = [](const MeanCi &m) { return detail::fixed(m.mean, 2) + "±" + detail::fixed(m.half_width, 2); };
  out << std::left << std::setw(14) << "domain" << std::setw(5) << "mode" << std::setw(4) << "U"
      << std::setw(4) << "D" << std::setw(5) << "Opt" << std::setw(4) << "Un" << std::setw(5)
      << "Imp" << std::setw(6) << "empty" << std::setw(14) << "|Gign| Imp" << std::setw(14)
      << "|Gcpx| Imp" << std::setw(16) << "t_ign" << "t_cpx\n";
  for (const auto &r : rows)
    out << std::setw(14) << r.domain << std::setw(5) << to_string(r.setting.mode) << std::setw(4)
        << r.setting.u_percent << std::setw(4) << r.setting.d_percent << std::setw(5) << r.opt
        << std::setw(4) << r.un << std::setw(5) << r.imp << std::setw(6) << r.excluded_empty
        << std::setw(14) << pm(r.g_star_ign_imp) << std::setw(14) << pm(r.g_star_cpx_imp)
        << std::setw(16) << detail::fixed(r.time_ign_all.mean, 5) << detail::fixed(r.time_cpx_all.mean, 5)
        << '\n';
  return out.str();
}

struct BenchOptions {
  std::vector<BenchSetting> settings = default_settings();
  std::vector<std::uint64_t> seeds = {1, 2, 3};
  RecognizerConfig recognizer;
  unsigned jobs = 1;
};

/// Runs every instance x setting x seed; results come back in that order.
inline std::vector<RunRecord> run_bench(const std::vector<BenchInstance> &suite,
                                        const BenchOptions &opts) {
  struct Job {
    std::size_t instance;
    BenchSetting setting;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (std::size_t i = 0; i < suite.size(); ++i)
    for (const auto &s : opts.settings)
      for (auto seed : opts.seeds) jobs.push_back({i, s, seed});
  std::vector<RunRecord> out(jobs.size());
  auto cfg = opts.recognizer;
  cfg.jobs = 1;
  detail::parallel_for(jobs.size(), opts.jobs, [&](std::size_t j) {
    out[j] = run_instance(suite[jobs[j].instance], jobs[j].instance, jobs[j].setting,
                          jobs[j].seed, cfg);
  });
  return out;
}

inline std::string records_to_jsonl(const std::vector<RunRecord> &records) {
  std::string out;
  for (const auto &r : records) out += r.to_json().dump() + "\n";
  return out;
}

}  // namespace plancog

#endif  // PLANCOG_BENCH_HPP
