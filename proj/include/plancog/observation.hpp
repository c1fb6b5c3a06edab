#ifndef PLANCOG_OBSERVATION_HPP
#define PLANCOG_OBSERVATION_HPP

// Observation trees (action/fluent observations nested in ordered, unordered
// and option groups) and a plan-satisfaction checker that works directly on
// the tree, independently of any compilation.

#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "plancog/pddl.hpp"
#include "plancog/strips.hpp"

namespace plancog {

using ObsId = std::uint32_t;
inline constexpr ObsId kNoObsId = std::numeric_limits<ObsId>::max();

enum class ObsKind { action, fluent, ordered, unordered, option };

struct ObsNode {
  ObsKind kind = ObsKind::ordered;
  ActionId action = 0;      // ObsKind::action
  FluentSet fluents;        // ObsKind::fluent
  std::vector<ObsNode> members;  // groups
  ObsId id = kNoObsId;      // simple observations only

  static ObsNode act(ActionId a) {
    ObsNode n;
    n.kind = ObsKind::action;
    n.action = a;
    return n;
  }
  static ObsNode flu(FluentSet fs) {
    ObsNode n;
    n.kind = ObsKind::fluent;
    n.fluents = make_fluent_set(std::move(fs));
    return n;
  }
  static ObsNode group(ObsKind kind, std::vector<ObsNode> members) {
    ObsNode n;
    n.kind = kind;
    n.members = std::move(members);
    return n;
  }
  static ObsNode ordered(std::vector<ObsNode> m = {}) { return group(ObsKind::ordered, std::move(m)); }
  static ObsNode unordered(std::vector<ObsNode> m) { return group(ObsKind::unordered, std::move(m)); }
  static ObsNode option(std::vector<ObsNode> m) { return group(ObsKind::option, std::move(m)); }

  bool is_simple() const { return kind == ObsKind::action || kind == ObsKind::fluent; }
};

/// Assigns preorder ids 0..n-1 to the simple observations; returns n.
inline ObsId number_observations(ObsNode &node, ObsId next = 0) {
  if (node.is_simple()) {
    node.id = next;
    return next + 1;
  }
  for (auto &m : node.members) next = number_observations(m, next);
  return next;
}

inline void collect_nest(const ObsNode &node, std::vector<ObsId> &out) {
  if (node.is_simple()) {
    if (node.id == kNoObsId) throw Error("observation tree is not numbered");
    out.push_back(node.id);
    return;
  }
  for (const auto &m : node.members) collect_nest(m, out);
}

/// Ids of all simple observations nested in node (a simple node nests itself).
inline std::set<ObsId> nest(const ObsNode &node) {
  std::vector<ObsId> ids;
  collect_nest(node, ids);
  return {ids.begin(), ids.end()};
}

/// Number of observations, counting each option group as one.
inline std::size_t observation_count(const ObsNode &node) {
  if (node.is_simple() || node.kind == ObsKind::option) return 1;
  std::size_t n = 0;
  for (const auto &m : node.members) n += observation_count(m);
  return n;
}

inline std::size_t simple_observation_count(const ObsNode &node) {
  if (node.is_simple()) return 1;
  std::size_t n = 0;
  for (const auto &m : node.members) n += simple_observation_count(m);
  return n;
}

/// Throws SemanticError unless the tree is numbered with unique ids, option
/// members are simple, fluent observations are non-empty and every referenced
/// action/fluent exists in p.
inline void validate_observations(const ObsNode &root, const PlanningProblem &p) {
  std::set<ObsId> seen;
  auto walk = [&](auto &self, const ObsNode &n) -> void {
    switch (n.kind) {
      case ObsKind::action:
        if (n.action >= p.actions().size()) throw SemanticError("observed action id out of range");
        break;
      case ObsKind::fluent:
        if (n.fluents.empty()) throw SemanticError("empty fluent observation");
        for (auto f : n.fluents)
          if (f >= p.num_fluents()) throw SemanticError("observed fluent id out of range");
        break;
      case ObsKind::option:
        for (const auto &m : n.members)
          if (!m.is_simple()) throw SemanticError("option groups may only contain simple observations");
        [[fallthrough]];
      default:
        for (const auto &m : n.members) self(self, m);
        return;
    }
    if (n.id == kNoObsId) throw SemanticError("observation tree is not numbered");
    if (!seen.insert(n.id).second)
      throw SemanticError("duplicate observation id " + std::to_string(n.id));
  };
  walk(walk, root);
}

struct SatisfactionOptions {
  /// Fluent observations over [j, k] see only states s_j..s_k instead of
  /// s_{j-1}..s_k (the state the segment starts in).
  bool strict_fluent_window = false;
};

/// Decides whether segments of one plan satisfy observation nodes.
/// Indices follow the plan convention: actions a_1..a_m, states s_0..s_m;
/// segment [j, k] with j = k + 1 is the empty segment starting at s_{j-1}.
class SatisfactionChecker {
 public:
  SatisfactionChecker(Trace trace, SatisfactionOptions opts = {})
      : trace_(std::move(trace)), opts_(opts) {}

  std::size_t plan_length() const { return trace_.actions.size(); }

  bool satisfies(const ObsNode &node, std::size_t j, std::size_t k) {
    auto m = plan_length();
    if (j < 1 || k + 1 < j || k > m)
      throw Error("segment [" + std::to_string(j) + ", " + std::to_string(k) +
                  "] out of range for plan of length " + std::to_string(m));
    return sat(node, j, k);
  }

  bool satisfies_plan(const ObsNode &root) { return satisfies(root, 1, plan_length()); }

 private:
  bool sat(const ObsNode &node, std::size_t j, std::size_t k) {
    switch (node.kind) {
      case ObsKind::action:
        for (std::size_t i = j; i <= k; ++i)
          if (trace_.actions[i - 1] == node.action) return true;
        return false;
      case ObsKind::fluent: {
        std::size_t first = opts_.strict_fluent_window ? j : j - 1;
        for (std::size_t i = first; i <= k; ++i)
          if (trace_.states[i].contains_all(node.fluents)) return true;
        return false;
      }
      default:
        break;
    }
    auto key = memo_key(node, j, k);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    bool result = false;
    switch (node.kind) {
      case ObsKind::unordered:
        result = true;
        for (const auto &m : node.members)
          if (!sat(m, j, k)) {
            result = false;
            break;
          }
        break;
      case ObsKind::option:
        for (const auto &m : node.members)
          if (sat(m, j, k)) {
            result = true;
            break;
          }
        break;
      case ObsKind::ordered:
        result = sat_ordered(node, j, k);
        break;
      default:
        break;
    }
    memo_.emplace(key, result);
    return result;
  }

  // Consecutive, possibly empty chunks [b_i, b_{i+1} - 1] with b_1 = j and
  // b_{n+1} = k + 1; chunk i must satisfy member i.
  bool sat_ordered(const ObsNode &node, std::size_t j, std::size_t k) {
    if (node.members.empty()) return true;
    std::size_t width = k + 2 - j;  // boundaries j..k+1
    std::vector<char> reach(width, 0), next(width, 0);
    reach[0] = 1;
    for (const auto &member : node.members) {
      std::fill(next.begin(), next.end(), 0);
      bool any = false;
      for (std::size_t b = 0; b < width; ++b) {
        if (!reach[b]) continue;
        for (std::size_t e = b; e < width; ++e) {
          if (next[e]) continue;
          if (sat(member, j + b, j + e - 1)) {
            next[e] = 1;
            any = true;
          }
        }
      }
      if (!any) return false;
      reach.swap(next);
    }
    return reach[width - 1] != 0;
  }

  std::uint64_t memo_key(const ObsNode &node, std::size_t j, std::size_t k) {
    auto [it, inserted] = node_index_.emplace(&node, node_index_.size());
    (void)inserted;
    auto m = plan_length() + 2;
    return (static_cast<std::uint64_t>(it->second) * m + j) * m + k;
  }

  Trace trace_;
  SatisfactionOptions opts_;
  std::unordered_map<const ObsNode *, std::size_t> node_index_;
  std::unordered_map<std::uint64_t, bool> memo_;
};

inline bool satisfies(const PlanningProblem &p, const Plan &plan, const State &init,
                      const ObsNode &node, std::size_t j, std::size_t k,
                      SatisfactionOptions opts = {}) {
  SatisfactionChecker c(trace(p, plan, init), opts);
  return c.satisfies(node, j, k);
}

inline bool satisfies_plan(const PlanningProblem &p, const Plan &plan, const State &init,
                           const ObsNode &theta, SatisfactionOptions opts = {}) {
  SatisfactionChecker c(trace(p, plan, init), opts);
  return c.satisfies_plan(theta);
}

/// <P, hypotheses, Theta>. The domain's own goal is ignored.
struct RecognitionProblem {
  PlanningProblem domain;
  std::vector<FluentSet> hypotheses;
  ObsNode theta = ObsNode::ordered();
  std::optional<std::size_t> true_goal;

  PlanningProblem problem_for(std::size_t g) const {
    if (g >= hypotheses.size()) throw Error("hypothesis index out of range");
    PlanningProblem p = domain;
    p.goal = hypotheses[g];
    return p;
  }
};

// ---------------------------------------------------------------------------
// Observation file format
//
//   node  := obs | (ordered node+) | (unordered node+) | (option obs+)
//   obs   := (act (name arg*)) | (flu (pred arg*)+)
//
// A file whose forms are plain "(name arg*)" lines is read as a legacy
// obs.dat: a totally ordered sequence of action observations.

namespace detail {

inline ObsNode read_obs_node(const PlanningProblem &p, const Sexpr &e) {
  const auto &h = e.head();
  if (h == "act") {
    if (e.items.size() != 2 || !e.items[1].is_list) e.fail("expected (act (name arg*))");
    auto id = p.find_action(e.items[1].to_string());
    if (!id) e.fail("unknown action " + e.items[1].to_string());
    return ObsNode::act(*id);
  }
  if (h == "flu") {
    if (e.items.size() < 2) e.fail("expected (flu (pred arg*)+)");
    std::vector<Sexpr> atoms(e.items.begin() + 1, e.items.end());
    return ObsNode::flu(fluents_from_sexprs(p, atoms));
  }
  ObsKind kind;
  if (h == "ordered")
    kind = ObsKind::ordered;
  else if (h == "unordered")
    kind = ObsKind::unordered;
  else if (h == "option")
    kind = ObsKind::option;
  else
    e.fail("expected observation or group, got " + e.to_string());
  if (e.items.size() < 2) e.fail("empty observation group");
  std::vector<ObsNode> members;
  for (std::size_t i = 1; i < e.items.size(); ++i) {
    members.push_back(read_obs_node(p, e.items[i]));
    if (kind == ObsKind::option && !members.back().is_simple())
      e.items[i].fail("option groups may only contain simple observations");
  }
  return ObsNode::group(kind, std::move(members));
}

}  // namespace detail

/// Parses an observation file and numbers its observations.
inline ObsNode parse_observations(const PlanningProblem &p, std::string_view text) {
  auto forms = parse_sexprs(text);
  ObsNode root;
  static const std::set<std::string> node_heads = {"ordered", "unordered", "option", "act", "flu"};
  if (forms.size() == 1 && node_heads.count(forms[0].head())) {
    root = detail::read_obs_node(p, forms[0]);
  } else {
    root = ObsNode::ordered();
    for (const auto &e : forms) {
      if (node_heads.count(e.head()))
        e.fail("observation file must have exactly one root node");
      if (!e.is_list) e.fail("expected action, got '" + e.atom + "'");
      auto id = p.find_action(e.to_string());
      if (!id) e.fail("unknown action " + e.to_string());
      root.members.push_back(ObsNode::act(*id));
    }
  }
  number_observations(root);
  return root;
}

inline void write_obs_node(const PlanningProblem &p, const ObsNode &n, std::ostream &out,
                           int depth = 0) {
  std::string indent(static_cast<std::size_t>(depth) * 2, ' ');
  switch (n.kind) {
    case ObsKind::action:
      out << indent << "(act " << p.action(n.action).signature() << ")\n";
      return;
    case ObsKind::fluent:
      out << indent << "(flu " << format_fluents(p, n.fluents) << ")\n";
      return;
    case ObsKind::ordered:
      out << indent << "(ordered\n";
      break;
    case ObsKind::unordered:
      out << indent << "(unordered\n";
      break;
    case ObsKind::option:
      out << indent << "(option\n";
      break;
  }
  for (const auto &m : n.members) write_obs_node(p, m, out, depth + 1);
  out << indent << ")\n";
}

/// Serializes a tree. An empty root group is written as a comment-only file,
/// which parses back as an empty ordered group.
inline std::string write_observations(const PlanningProblem &p, const ObsNode &root) {
  std::ostringstream out;
  if (!root.is_simple() && root.members.empty()) {
    out << "; empty observation set\n";
    return out.str();
  }
  write_obs_node(p, root, out);
  return out.str();
}

}  // namespace plancog

#endif  // PLANCOG_OBSERVATION_HPP
