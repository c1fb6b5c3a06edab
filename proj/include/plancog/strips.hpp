#ifndef PLANCOG_STRIPS_HPP
#define PLANCOG_STRIPS_HPP

// Propositional STRIPS model: interned fluents, bitset states, ground actions
// with integer costs, plans and execution traces.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "plancog/error.hpp"

namespace plancog {

using FluentId = std::uint32_t;
using ActionId = std::uint32_t;
using Cost = std::int64_t;

struct Fluent {
  std::string predicate;
  std::vector<std::string> args;

  std::string to_string() const {
    std::string out = "(" + predicate;
    for (const auto &a : args) out += " " + a;
    return out + ")";
  }
  friend bool operator==(const Fluent &, const Fluent &) = default;
};

/// Interns fluents to dense ids. Equal (predicate, args) share one id.
class FluentTable {
 public:
  FluentId intern(const Fluent &f) {
    auto key = f.to_string();
    auto it = index_.find(key);
    if (it != index_.end()) return it->second;
    auto id = static_cast<FluentId>(fluents_.size());
    fluents_.push_back(f);
    index_.emplace(std::move(key), id);
    return id;
  }

  std::optional<FluentId> find(const Fluent &f) const { return find(f.to_string()); }
  std::optional<FluentId> find(const std::string &printed) const {
    auto it = index_.find(printed);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  const Fluent &operator[](FluentId id) const { return fluents_.at(id); }
  std::string name(FluentId id) const { return fluents_.at(id).to_string(); }
  std::size_t size() const { return fluents_.size(); }

 private:
  std::vector<Fluent> fluents_;
  std::unordered_map<std::string, FluentId> index_;
};

/// Sorted, duplicate-free list of fluent ids.
using FluentSet = std::vector<FluentId>;

inline FluentSet make_fluent_set(std::vector<FluentId> ids) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

/// Fixed-width bitset over the fluents of one problem.
class State {
 public:
  State() = default;
  explicit State(std::size_t num_fluents) : bits_((num_fluents + 63) / 64, 0) {}
  State(std::size_t num_fluents, const FluentSet &members) : State(num_fluents) {
    for (auto f : members) set(f);
  }

  bool test(FluentId f) const { return (bits_[f >> 6] >> (f & 63)) & 1u; }
  void set(FluentId f) { bits_[f >> 6] |= (std::uint64_t{1} << (f & 63)); }
  void reset(FluentId f) { bits_[f >> 6] &= ~(std::uint64_t{1} << (f & 63)); }

  bool contains_all(const FluentSet &fs) const {
    return std::all_of(fs.begin(), fs.end(), [&](FluentId f) { return test(f); });
  }

  FluentSet members() const {
    FluentSet out;
    for (std::size_t w = 0; w < bits_.size(); ++w) {
      auto word = bits_[w];
      while (word) {
        auto bit = static_cast<unsigned>(std::countr_zero(word));
        out.push_back(static_cast<FluentId>(w * 64 + bit));
        word &= word - 1;
      }
    }
    return out;
  }

  std::size_t count() const {
    std::size_t n = 0;
    for (auto w : bits_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
  }

  std::size_t hash() const {
    std::size_t h = 1469598103934665603ull;
    for (auto w : bits_) h = (h ^ std::hash<std::uint64_t>{}(w)) * 1099511628211ull;
    return h;
  }

  friend bool operator==(const State &, const State &) = default;

 private:
  std::vector<std::uint64_t> bits_;
};

struct StateHash {
  std::size_t operator()(const State &s) const { return s.hash(); }
};

struct GroundAction {
  std::string name;
  std::vector<std::string> params;
  FluentSet pre;
  FluentSet add;
  FluentSet del;
  Cost cost = 1;

  std::string signature() const {
    std::string out = "(" + name;
    for (const auto &p : params) out += " " + p;
    return out + ")";
  }
};

using Plan = std::vector<ActionId>;

struct Trace {
  std::vector<State> states;    // states[0] is the initial state
  std::vector<ActionId> actions;  // actions[i] leads from states[i] to states[i+1]
};

/// Grounded problem <F, I, A, G>; action costs live on the actions.
class PlanningProblem {
 public:
  FluentTable fluents;
  FluentSet init;
  FluentSet goal;

  const std::vector<GroundAction> &actions() const { return actions_; }
  const GroundAction &action(ActionId id) const { return actions_.at(id); }

  ActionId add_action(GroundAction a) {
    if (a.cost < 0) throw SemanticError("negative cost on " + a.signature());
    a.pre = make_fluent_set(std::move(a.pre));
    a.add = make_fluent_set(std::move(a.add));
    a.del = make_fluent_set(std::move(a.del));
    auto id = static_cast<ActionId>(actions_.size());
    by_signature_.emplace(a.signature(), id);
    actions_.push_back(std::move(a));
    return id;
  }

  std::optional<ActionId> find_action(const std::string &signature) const {
    auto it = by_signature_.find(signature);
    if (it == by_signature_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t num_fluents() const { return fluents.size(); }
  State initial_state() const { return State(num_fluents(), init); }
  bool is_goal(const State &s) const { return s.contains_all(goal); }

  std::string describe(const FluentSet &fs) const {
    std::string out;
    for (auto f : fs) {
      if (!out.empty()) out += ' ';
      out += fluents.name(f);
    }
    return out;
  }

 private:
  std::vector<GroundAction> actions_;
  std::unordered_map<std::string, ActionId> by_signature_;
};

/// (s \ del(a)) ∪ add(a), without checking preconditions.
inline State apply_unchecked(const State &s, const GroundAction &a) {
  State next = s;
  for (auto f : a.del) next.reset(f);
  for (auto f : a.add) next.set(f);
  return next;
}

inline std::vector<std::string> missing_preconditions(const PlanningProblem &p,
                                                      const State &s,
                                                      const GroundAction &a) {
  std::vector<std::string> missing;
  for (auto f : a.pre)
    if (!s.test(f)) missing.push_back(p.fluents.name(f));
  return missing;
}

inline State apply(const PlanningProblem &p, const State &s, ActionId id) {
  const auto &a = p.action(id);
  auto missing = missing_preconditions(p, s, a);
  if (!missing.empty()) {
    std::string what = a.signature() + " not applicable; missing";
    for (const auto &m : missing) what += " " + m;
    throw PreconditionError(what, 0, std::move(missing));
  }
  return apply_unchecked(s, a);
}

inline Trace trace(const PlanningProblem &p, const Plan &plan, const State &init) {
  Trace t;
  t.states.push_back(init);
  for (std::size_t i = 0; i < plan.size(); ++i) {
    const auto &a = p.action(plan[i]);
    auto missing = missing_preconditions(p, t.states.back(), a);
    if (!missing.empty()) {
      std::string what =
          "step " + std::to_string(i + 1) + " " + a.signature() + " not applicable; missing";
      for (const auto &m : missing) what += " " + m;
      throw PreconditionError(what, i + 1, std::move(missing));
    }
    t.states.push_back(apply_unchecked(t.states.back(), a));
    t.actions.push_back(plan[i]);
  }
  return t;
}

inline Trace trace(const PlanningProblem &p, const Plan &plan) {
  return trace(p, plan, p.initial_state());
}

inline Cost plan_cost(const PlanningProblem &p, const Plan &plan) {
  return std::accumulate(plan.begin(), plan.end(), Cost{0},
                         [&](Cost c, ActionId id) { return c + p.action(id).cost; });
}

/// True when the plan is applicable from the initial state and reaches the goal.
inline bool solves(const PlanningProblem &p, const Plan &plan) {
  try {
    return p.is_goal(trace(p, plan).states.back());
  } catch (const PreconditionError &) {
    return false;
  }
}

inline std::string plan_to_string(const PlanningProblem &p, const Plan &plan) {
  std::string out;
  for (auto id : plan) out += p.action(id).signature() + "\n";
  return out;
}

}  // namespace plancog

#endif  // PLANCOG_STRIPS_HPP
