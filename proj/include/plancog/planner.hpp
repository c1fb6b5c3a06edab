#ifndef PLANCOG_PLANNER_HPP
#define PLANCOG_PLANNER_HPP

// Optimal forward search: A* guided by h-max, with optional cost-bound
// pruning on f = g + h and a wall-clock budget.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <unordered_map>
#include <vector>

#include "plancog/strips.hpp"

namespace plancog {

inline constexpr Cost kInfiniteCost = std::numeric_limits<Cost>::max() / 4;

/// h-max over the delete relaxation. Holds scratch buffers, so one instance
/// per thread.
class HMax {
 public:
  explicit HMax(const PlanningProblem &p) : problem_(p), pre_of_(p.num_fluents()) {
    const auto &actions = p.actions();
    pre_count_.reserve(actions.size());
    for (ActionId a = 0; a < actions.size(); ++a) {
      pre_count_.push_back(static_cast<std::uint32_t>(actions[a].pre.size()));
      if (actions[a].pre.empty()) no_pre_.push_back(a);
      for (auto f : actions[a].pre) pre_of_[f].push_back(a);
    }
    value_.resize(p.num_fluents());
    done_.resize(p.num_fluents());
    is_goal_.assign(p.num_fluents(), 0);
    for (auto g : p.goal) is_goal_[g] = 1;
  }

  /// nullopt when some goal fluent is unreachable even without deletes.
  std::optional<Cost> operator()(const State &s) {
    const auto &goal = problem_.goal;
    if (goal.empty()) return 0;
    std::fill(value_.begin(), value_.end(), kInfiniteCost);
    std::fill(done_.begin(), done_.end(), 0);
    counter_ = pre_count_;
    Queue queue;
    for (auto f : s.members()) {
      value_[f] = 0;
      queue.emplace(0, f);
    }
    const auto &actions = problem_.actions();
    auto fire = [&](ActionId a, Cost base) {
      Cost c = base + actions[a].cost;
      for (auto q : actions[a].add)
        if (c < value_[q]) {
          value_[q] = c;
          queue.emplace(c, q);
        }
    };
    for (auto a : no_pre_) fire(a, 0);
    std::size_t goals_left = goal.size();
    while (!queue.empty()) {
      auto [c, f] = queue.top();
      queue.pop();
      if (done_[f] || c > value_[f]) continue;
      done_[f] = 1;
      if (is_goal_[f] && --goals_left == 0) return c;
      for (auto a : pre_of_[f])
        if (--counter_[a] == 0) fire(a, c);
    }
    return std::nullopt;
  }

 private:
  using Entry = std::pair<Cost, FluentId>;
  using Queue = std::priority_queue<Entry, std::vector<Entry>, std::greater<>>;

  const PlanningProblem &problem_;
  std::vector<std::vector<ActionId>> pre_of_;
  std::vector<std::uint32_t> pre_count_;
  std::vector<ActionId> no_pre_;
  std::vector<Cost> value_;
  std::vector<char> done_;
  std::vector<char> is_goal_;
  std::vector<std::uint32_t> counter_;
};

inline std::optional<Cost> hmax(const PlanningProblem &p, const State &s) { return HMax(p)(s); }

struct SearchConfig {
  std::optional<Cost> cost_bound;
  std::optional<std::chrono::duration<double>> time_budget;
};

enum class SearchStatus { solved, exhausted, timed_out };

inline const char *to_string(SearchStatus s) {
  switch (s) {
    case SearchStatus::solved: return "solved";
    case SearchStatus::exhausted: return "exhausted";
    case SearchStatus::timed_out: return "timed_out";
  }
  return "?";
}

struct SearchStats {
  std::size_t expanded = 0;
  std::size_t generated = 0;
  double seconds = 0;
};

struct SearchOutcome {
  SearchStatus status = SearchStatus::exhausted;
  Plan plan;
  Cost cost = 0;
  SearchStats stats;

  bool solved() const { return status == SearchStatus::solved; }
};

/// A* with h-max. Open list ordered by f, then higher g, then insertion order.
/// Duplicate states keep their best g; cheaper paths reopen closed states.
inline SearchOutcome astar(const PlanningProblem &p, const SearchConfig &cfg = {}) {
  using Clock = std::chrono::steady_clock;
  auto start = Clock::now();
  SearchOutcome out;
  HMax h(p);

  struct Node {
    std::uint32_t state;
    std::int64_t parent;
    ActionId action;
    Cost g;
  };
  struct Record {
    Cost best_g;
    std::optional<Cost> h;
  };
  struct OpenEntry {
    Cost f;
    Cost g;
    std::uint64_t seq;
    std::uint32_t node;
    bool operator<(const OpenEntry &o) const {  // max-heap: "less" = lower priority
      if (f != o.f) return f > o.f;
      if (g != o.g) return g < o.g;
      return seq > o.seq;
    }
  };

  std::vector<State> states;
  std::unordered_map<State, std::uint32_t, StateHash> state_index;
  std::vector<Record> records;
  std::vector<Node> nodes;
  std::priority_queue<OpenEntry> open;
  std::uint64_t seq = 0;

  auto intern = [&](State s) -> std::pair<std::uint32_t, bool> {
    auto [it, inserted] = state_index.emplace(std::move(s), static_cast<std::uint32_t>(states.size()));
    if (inserted) {
      states.push_back(it->first);
      records.push_back({kInfiniteCost, std::nullopt});
      records.back().h = h(states.back());
    }
    return {it->second, inserted};
  };
  auto within_bound = [&](Cost f) { return !cfg.cost_bound || f <= *cfg.cost_bound; };
  auto finish = [&](SearchStatus st) {
    out.status = st;
    out.stats.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    return out;
  };

  auto [root, _] = intern(p.initial_state());
  if (records[root].h && within_bound(*records[root].h)) {
    records[root].best_g = 0;
    nodes.push_back({root, -1, 0, 0});
    open.push({*records[root].h, 0, seq++, 0});
  }
  const auto &actions = p.actions();
  while (!open.empty()) {
    if (cfg.time_budget && (out.stats.expanded & 255) == 0 &&
        Clock::now() - start > *cfg.time_budget)
      return finish(SearchStatus::timed_out);
    auto top = open.top();
    open.pop();
    const Node node = nodes[top.node];
    if (node.g > records[node.state].best_g) continue;  // stale entry
    const State current = states[node.state];
    if (p.is_goal(current)) {
      for (std::int64_t n = top.node; nodes[n].parent >= 0; n = nodes[n].parent)
        out.plan.push_back(nodes[n].action);
      std::reverse(out.plan.begin(), out.plan.end());
      out.cost = node.g;
      return finish(SearchStatus::solved);
    }
    ++out.stats.expanded;
    for (ActionId a = 0; a < actions.size(); ++a) {
      if (!current.contains_all(actions[a].pre)) continue;
      ++out.stats.generated;
      Cost g = node.g + actions[a].cost;
      auto [succ, fresh] = intern(apply_unchecked(current, actions[a]));
      (void)fresh;
      auto &rec = records[succ];
      if (!rec.h || g >= rec.best_g) continue;
      Cost f = g + *rec.h;
      if (!within_bound(f)) continue;
      rec.best_g = g;
      nodes.push_back({succ, top.node, a, g});
      open.push({f, g, seq++, static_cast<std::uint32_t>(nodes.size() - 1)});
    }
  }
  return finish(SearchStatus::exhausted);
}

}  // namespace plancog

#endif  // PLANCOG_PLANNER_HPP
