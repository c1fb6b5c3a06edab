#ifndef PLANCOG_TESTS_SUPPORT_HPP
#define PLANCOG_TESTS_SUPPORT_HPP

// Test-only helpers: seeded micro-domain generation and oracles that share
// no code with the planner (plain Dijkstra, backward Dijkstra over the full
// reachable graph, bounded depth-first plan enumeration).

#include <functional>
#include <map>
#include <optional>
#include <queue>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "plancog/bench.hpp"
#include "plancog/compiler.hpp"
#include "plancog/observation.hpp"
#include "plancog/pddl.hpp"
#include "plancog/planner.hpp"
#include "plancog/recognizer.hpp"

namespace plancog::fixtures {

inline std::string data_path(const std::string &rel) { return std::string(PLANCOG_DATA_DIR) + "/" + rel; }

inline PlanningProblem load_data(const std::string &domain, const std::string &problem) {
  return load_task(read_file(data_path(domain)), read_file(data_path(problem))).problem;
}

/// Hand-built STRIPS problem: fluent names are plain atoms, actions named.
struct Builder {
  PlanningProblem p;

  FluentId f(const std::string &name) { return p.fluents.intern(Fluent{name, {}}); }
  FluentSet fs(std::initializer_list<const char *> names) {
    FluentSet out;
    for (auto n : names) out.push_back(f(n));
    return make_fluent_set(out);
  }
  ActionId action(const std::string &name, FluentSet pre, FluentSet add, FluentSet del = {},
                  Cost cost = 1) {
    GroundAction a;
    a.name = name;
    a.pre = std::move(pre);
    a.add = std::move(add);
    a.del = std::move(del);
    a.cost = cost;
    return p.add_action(std::move(a));
  }
};

struct MicroSpec {
  std::size_t fluents = 5;
  std::size_t actions = 8;
  std::size_t hypotheses = 3;
  Cost max_cost = 2;
};

/// Random positive-STRIPS domain with a few hypotheses. Not guaranteed to make
/// every hypothesis reachable; callers handle unsolvable goals.
inline RecognitionProblem random_micro(std::mt19937_64 &rng, const MicroSpec &spec) {
  RecognitionProblem rp;
  auto &p = rp.domain;
  for (std::size_t i = 0; i < spec.fluents; ++i) p.fluents.intern(Fluent{"f" + std::to_string(i), {}});
  auto pick = [&](std::size_t lo, std::size_t hi) {
    std::size_t n = std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
    std::vector<FluentId> ids(spec.fluents);
    for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<FluentId>(i);
    std::shuffle(ids.begin(), ids.end(), rng);
    ids.resize(std::min(n, ids.size()));
    return make_fluent_set(ids);
  };
  for (std::size_t i = 0; i < spec.actions; ++i) {
    GroundAction a;
    a.name = "a" + std::to_string(i);
    a.pre = pick(0, 2);
    a.add = pick(1, 2);
    a.del = pick(0, 2);
    a.cost = std::uniform_int_distribution<Cost>(1, spec.max_cost)(rng);
    p.add_action(std::move(a));
  }
  p.init = pick(0, 2);
  for (std::size_t h = 0; h < spec.hypotheses; ++h) rp.hypotheses.push_back(pick(1, 2));
  return rp;
}

/// Random observation tree over the domain's actions and fluents: an ordered
/// root whose members are simple observations, small unordered groups,
/// option groups or nested ordered groups.
inline ObsNode random_theta(std::mt19937_64 &rng, const PlanningProblem &p, std::size_t max_members = 3) {
  auto coin = [&](double prob) { return std::bernoulli_distribution(prob)(rng); };
  auto simple = [&]() {
    if (coin(0.7) || p.num_fluents() == 0) {
      auto a = std::uniform_int_distribution<ActionId>(0, static_cast<ActionId>(p.actions().size() - 1))(rng);
      return ObsNode::act(a);
    }
    auto f = std::uniform_int_distribution<FluentId>(0, static_cast<FluentId>(p.num_fluents() - 1))(rng);
    return ObsNode::flu({f});
  };
  std::function<ObsNode(int)> node = [&](int depth) -> ObsNode {
    int roll = std::uniform_int_distribution<int>(0, 9)(rng);
    if (depth >= 2 || roll < 5) return simple();
    std::size_t n = std::uniform_int_distribution<std::size_t>(1, 3)(rng);
    std::vector<ObsNode> members;
    if (roll < 7) {
      for (std::size_t i = 0; i < n; ++i) members.push_back(simple());
      return ObsNode::option(std::move(members));
    }
    for (std::size_t i = 0; i < n; ++i) members.push_back(node(depth + 1));
    return roll < 9 ? ObsNode::unordered(std::move(members)) : ObsNode::ordered(std::move(members));
  };
  auto root = ObsNode::ordered();
  std::size_t n = std::uniform_int_distribution<std::size_t>(0, max_members)(rng);
  for (std::size_t i = 0; i < n; ++i) root.members.push_back(node(1));
  number_observations(root);
  return root;
}

/// Random applicable action sequence of at most max_len steps.
inline Plan random_walk(std::mt19937_64 &rng, const PlanningProblem &p, std::size_t max_len) {
  Plan plan;
  State s = p.initial_state();
  for (std::size_t i = 0; i < max_len; ++i) {
    std::vector<ActionId> ok;
    for (ActionId a = 0; a < p.actions().size(); ++a)
      if (s.contains_all(p.action(a).pre)) ok.push_back(a);
    if (ok.empty()) break;
    plan.push_back(ok[std::uniform_int_distribution<std::size_t>(0, ok.size() - 1)(rng)]);
    s = apply_unchecked(s, p.action(plan.back()));
  }
  return plan;
}

/// Uniform-cost search; returns the optimal cost or nullopt.
inline std::optional<Cost> uniform_cost(const PlanningProblem &p) {
  using Entry = std::pair<Cost, std::size_t>;
  std::vector<State> states{p.initial_state()};
  std::unordered_map<State, std::size_t, StateHash> index{{states[0], 0}};
  std::vector<Cost> dist{0};
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  open.emplace(0, 0);
  while (!open.empty()) {
    auto [d, s] = open.top();
    open.pop();
    if (d > dist[s]) continue;
    if (p.is_goal(states[s])) return d;
    for (const auto &a : p.actions()) {
      if (!states[s].contains_all(a.pre)) continue;
      auto [it, fresh] = index.emplace(apply_unchecked(states[s], a), states.size());
      if (fresh) {
        states.push_back(it->first);
        dist.push_back(kInfiniteCost);
      }
      if (d + a.cost < dist[it->second]) {
        dist[it->second] = d + a.cost;
        open.emplace(d + a.cost, it->second);
      }
    }
  }
  return std::nullopt;
}

/// Full reachable state graph with exact cost-to-goal per state (backward
/// Dijkstra from every goal state). nullopt if more than max_states.
struct StateGraph {
  std::vector<State> states;
  std::vector<Cost> to_goal;  // kInfiniteCost if the goal is unreachable
};

inline std::optional<StateGraph> cost_to_go(const PlanningProblem &p, std::size_t max_states = 100000) {
  StateGraph g;
  std::unordered_map<State, std::size_t, StateHash> index;
  std::vector<std::vector<std::pair<std::size_t, Cost>>> preds;
  g.states.push_back(p.initial_state());
  index.emplace(g.states[0], 0);
  preds.emplace_back();
  for (std::size_t s = 0; s < g.states.size(); ++s) {
    for (const auto &a : p.actions()) {
      if (!g.states[s].contains_all(a.pre)) continue;
      auto [it, fresh] = index.emplace(apply_unchecked(g.states[s], a), g.states.size());
      if (fresh) {
        if (g.states.size() >= max_states) return std::nullopt;
        g.states.push_back(it->first);
        preds.emplace_back();
      }
      preds[it->second].emplace_back(s, a.cost);
    }
  }
  using Entry = std::pair<Cost, std::size_t>;
  g.to_goal.assign(g.states.size(), kInfiniteCost);
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  for (std::size_t s = 0; s < g.states.size(); ++s)
    if (p.is_goal(g.states[s])) {
      g.to_goal[s] = 0;
      open.emplace(0, s);
    }
  while (!open.empty()) {
    auto [d, s] = open.top();
    open.pop();
    if (d > g.to_goal[s]) continue;
    for (auto [q, c] : preds[s])
      if (d + c < g.to_goal[q]) {
        g.to_goal[q] = d + c;
        open.emplace(d + c, q);
      }
  }
  return g;
}

/// Every goal-reaching plan of cost <= bound, up to `cap` plans and a depth
/// limit. The flag reports whether enumeration was complete.
struct Enumeration {
  std::vector<Plan> plans;
  bool complete = true;
};

inline Enumeration enumerate_plans(const PlanningProblem &p, Cost bound, std::size_t cap = 2000,
                                   std::size_t max_depth = 40) {
  Enumeration out;
  Plan prefix;
  std::function<void(const State &, Cost)> dfs = [&](const State &s, Cost cost) {
    if (out.plans.size() >= cap) {
      out.complete = false;
      return;
    }
    if (p.is_goal(s)) out.plans.push_back(prefix);
    if (prefix.size() >= max_depth) {
      out.complete = false;
      return;
    }
    const auto &actions = p.actions();
    for (ActionId a = 0; a < actions.size(); ++a) {
      if (cost + actions[a].cost > bound || !s.contains_all(actions[a].pre)) continue;
      prefix.push_back(a);
      dfs(apply_unchecked(s, actions[a]), cost + actions[a].cost);
      prefix.pop_back();
    }
  };
  dfs(p.initial_state(), 0);
  return out;
}

}  // namespace plancog::fixtures

#endif  // PLANCOG_TESTS_SUPPORT_HPP
