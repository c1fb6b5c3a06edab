#ifndef PLANCOG_COMPILER_HPP
#define PLANCOG_COMPILER_HPP

// Compiles a recognition problem for one hypothesis into a classical planning
// problem whose solutions explain every observation in Theta, translates
// compiled plans back to the original domain, and implements the baseline
// that drops complex observations before compiling.

#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "plancog/observation.hpp"
#include "plancog/strips.hpp"

namespace plancog {

struct CompiledProblem {
  /// F' = F ∪ F_e ∪ guards, I' = I ∪ guards, A' = A ∪ A_e, G' = G ∪ F_e.
  /// Fluent and action ids below the base counts coincide with the source.
  PlanningProblem problem;
  std::size_t base_fluent_count = 0;
  std::size_t base_action_count = 0;
  std::map<ActionId, ObsId> expl_of;
  std::map<ObsId, FluentId> ord_fluent;
  std::map<FluentId, FluentId> guard_fluent;
  /// Per explanation action (indexed from base_action_count): the original
  /// action it stands for, or nullopt for fluent explanations.
  std::vector<std::optional<ActionId>> source_action;
  std::optional<Cost> base_optimal_cost;

  std::size_t explanation_fluent_count() const { return guard_fluent.size(); }
  bool is_explanation(ActionId a) const { return a >= base_action_count; }
};

namespace detail {

inline bool find_path(const ObsNode &node, ObsId o,
                      std::vector<std::pair<const ObsNode *, std::size_t>> &path) {
  if (node.is_simple()) return node.id == o;
  for (std::size_t i = 0; i < node.members.size(); ++i) {
    path.emplace_back(&node, i);
    if (find_path(node.members[i], o, path)) return true;
    path.pop_back();
  }
  return false;
}

}  // namespace detail

/// Observations that must be explained before o: walking outwards from o,
/// the nest of the nearest non-empty member preceding o's branch in an
/// enclosing ordered group. Deeper ordered levels are implied transitively
/// because explanation fluents are never deleted.
inline std::set<ObsId> predecessor_set(const ObsNode &theta, ObsId o) {
  std::vector<std::pair<const ObsNode *, std::size_t>> path;
  if (!detail::find_path(theta, o, path))
    throw Error("unknown observation id " + std::to_string(o));
  for (auto it = path.rbegin(); it != path.rend(); ++it) {
    const auto &[group, index] = *it;
    if (group->kind != ObsKind::ordered) continue;
    for (std::size_t i = index; i-- > 0;) {
      auto ids = nest(group->members[i]);
      if (!ids.empty()) return ids;
    }
  }
  return {};
}

/// Builds P'[G'] for an explicit goal and observation tree.
inline CompiledProblem compile_theta(const PlanningProblem &domain, const FluentSet &goal,
                                     const ObsNode &theta) {
  validate_observations(theta, domain);
  CompiledProblem cp;
  cp.problem = domain;
  cp.problem.goal = goal;
  cp.base_fluent_count = domain.num_fluents();
  cp.base_action_count = domain.actions().size();

  // One explanation fluent per simple observation, shared within an option.
  std::map<ObsId, std::size_t> slot_of;
  std::size_t slots = 0;
  auto assign = [&](auto &self, const ObsNode &n) -> void {
    if (n.is_simple()) {
      slot_of[n.id] = slots++;
      return;
    }
    if (n.kind == ObsKind::option) {
      if (n.members.empty()) return;
      for (const auto &m : n.members) slot_of[m.id] = slots;
      ++slots;
      return;
    }
    for (const auto &m : n.members) self(self, m);
  };
  assign(assign, theta);

  std::vector<FluentId> explained(slots), guard(slots);
  for (std::size_t s = 0; s < slots; ++s) {
    auto tag = "p" + std::to_string(s);
    explained[s] = cp.problem.fluents.intern(Fluent{"obs-explained", {tag}});
    guard[s] = cp.problem.fluents.intern(Fluent{"obs-unexplained", {tag}});
    cp.guard_fluent[explained[s]] = guard[s];
    cp.problem.init.push_back(guard[s]);
    cp.problem.goal.push_back(explained[s]);
  }
  cp.problem.init = make_fluent_set(std::move(cp.problem.init));
  cp.problem.goal = make_fluent_set(std::move(cp.problem.goal));

  auto emit = [&](auto &self, const ObsNode &n) -> void {
    if (!n.is_simple()) {
      for (const auto &m : n.members) self(self, m);
      return;
    }
    auto slot = slot_of.at(n.id);
    cp.ord_fluent[n.id] = explained[slot];
    FluentSet before;
    for (auto b : predecessor_set(theta, n.id)) before.push_back(explained[slot_of.at(b)]);

    GroundAction e;
    if (n.kind == ObsKind::action) {
      const auto &a = domain.action(n.action);
      e.name = "expl-" + std::to_string(n.id) + "-" + a.name;
      e.params = a.params;
      e.pre = a.pre;
      e.add = a.add;
      e.del = a.del;
      e.cost = a.cost;
      cp.source_action.push_back(n.action);
    } else {
      e.name = "expl-" + std::to_string(n.id) + "-fluents";
      e.pre = n.fluents;
      e.cost = 0;
      cp.source_action.push_back(std::nullopt);
    }
    e.pre.push_back(guard[slot]);
    e.pre.insert(e.pre.end(), before.begin(), before.end());
    e.add.push_back(explained[slot]);
    e.del.push_back(guard[slot]);
    cp.expl_of[cp.problem.add_action(std::move(e))] = n.id;
  };
  emit(emit, theta);
  return cp;
}

inline CompiledProblem compile(const RecognitionProblem &rp, std::size_t g) {
  if (g >= rp.hypotheses.size()) throw Error("hypothesis index out of range");
  return compile_theta(rp.domain, rp.hypotheses[g], rp.theta);
}

/// Maps a compiled plan back: fluent explanations dropped, action
/// explanations replaced by their source action. Cost is preserved.
inline Plan psi_translate(const CompiledProblem &cp, const Plan &compiled_plan) {
  Plan out;
  for (auto id : compiled_plan) {
    if (id >= cp.problem.actions().size())
      throw Error("action id " + std::to_string(id) + " is not in the compiled problem");
    if (!cp.is_explanation(id)) {
      out.push_back(id);
    } else if (auto src = cp.source_action[id - cp.base_action_count]) {
      out.push_back(*src);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// "Ignore complexity" baseline

enum class UnorderedChoice { random, first };

struct IgnoreSimplification {
  std::vector<ActionId> actions;  // total order of action observations
  bool empty_flag = false;

  ObsNode as_theta() const {
    auto root = ObsNode::ordered();
    for (auto a : actions) root.members.push_back(ObsNode::act(a));
    number_observations(root);
    return root;
  }
};

namespace detail {

inline std::optional<ObsNode> strip_complex(const ObsNode &n) {
  switch (n.kind) {
    case ObsKind::action:
      return n;
    case ObsKind::fluent:
    case ObsKind::option:
      return std::nullopt;
    default:
      break;
  }
  ObsNode out = ObsNode::group(n.kind, {});
  for (const auto &m : n.members)
    if (auto s = strip_complex(m)) out.members.push_back(std::move(*s));
  if (out.members.empty()) return std::nullopt;
  return out;
}

template <class Rng>
void linearize(const ObsNode &n, UnorderedChoice choice, Rng &rng, std::vector<ActionId> &out) {
  if (n.kind == ObsKind::action) {
    out.push_back(n.action);
    return;
  }
  if (n.kind == ObsKind::unordered) {
    std::size_t pick = 0;
    if (choice == UnorderedChoice::random && n.members.size() > 1)
      pick = std::uniform_int_distribution<std::size_t>(0, n.members.size() - 1)(rng);
    linearize(n.members[pick], choice, rng, out);
    return;
  }
  for (const auto &m : n.members) linearize(m, choice, rng, out);
}

}  // namespace detail

/// Drops fluent observations and option groups, prunes groups left empty,
/// keeps one member of each unordered group and flattens the result.
inline IgnoreSimplification simplify_ignore(const ObsNode &theta, std::uint64_t seed,
                                            UnorderedChoice choice = UnorderedChoice::random) {
  IgnoreSimplification out;
  std::mt19937_64 rng(seed);
  if (auto stripped = detail::strip_complex(theta))
    detail::linearize(*stripped, choice, rng, out.actions);
  out.empty_flag = out.actions.empty();
  return out;
}

inline CompiledProblem compile_ignore(const RecognitionProblem &rp, std::size_t g,
                                      const IgnoreSimplification &simplified) {
  if (g >= rp.hypotheses.size()) throw Error("hypothesis index out of range");
  return compile_theta(rp.domain, rp.hypotheses[g], simplified.as_theta());
}

}  // namespace plancog

#endif  // PLANCOG_COMPILER_HPP
