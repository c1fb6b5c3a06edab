#ifndef PLANCOG_OBS_GENERATOR_HPP
#define PLANCOG_OBS_GENERATOR_HPP

// Degrades an optimal plan (or its trace) into a complex observation tree:
// keep a fraction of the observations, wrap consecutive runs into unordered
// groups, and "debind" action observations into option groups.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "plancog/observation.hpp"

namespace plancog {

enum class ObsMode { actions, actions_fluents };

inline const char *to_string(ObsMode m) { return m == ObsMode::actions ? "A" : "A+F"; }

inline ObsMode parse_obs_mode(const std::string &s) {
  if (s == "A" || s == "a") return ObsMode::actions;
  if (s == "A+F" || s == "a+f" || s == "AF" || s == "af") return ObsMode::actions_fluents;
  throw Error("unknown observation mode '" + s + "' (expected A or A+F)");
}

struct GenSettings {
  ObsMode mode = ObsMode::actions;
  double u_percent = 0;
  double d_percent = 0;
  double keep_fraction = 0.5;
  double fluent_keep_fraction = 0.1;
  std::size_t group_size = 3;
  std::uint64_t seed = 0;

  void validate() const {
    auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
    if (u_percent < 0 || u_percent > 100 || d_percent < 0 || d_percent > 100)
      throw Error("U% and D% must lie in [0, 100]");
    if (!in_unit(keep_fraction) || !in_unit(fluent_keep_fraction))
      throw Error("keep fractions must lie in [0, 1]");
    if (group_size < 2) throw Error("group size must be at least 2");
  }
};

namespace detail {

// ceil(fraction * n) without floating-point fuzz pushing 4.0000001 to 5.
inline std::size_t ceil_fraction(double fraction, std::size_t n) {
  return static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n) - 1e-9));
}

template <class Rng>
std::size_t uniform_index(Rng &rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

}  // namespace detail

/// Candidate observations before removal: the plan's actions, interleaved in
/// A+F mode with one fluent observation per resulting state.
template <class Rng>
std::vector<ObsNode> observation_candidates(const Trace &trace, const GenSettings &s, Rng &rng) {
  std::vector<ObsNode> out;
  for (std::size_t i = 0; i < trace.actions.size(); ++i) {
    out.push_back(ObsNode::act(trace.actions[i]));
    if (s.mode != ObsMode::actions_fluents) continue;
    auto members = trace.states[i + 1].members();
    std::shuffle(members.begin(), members.end(), rng);
    members.resize(std::min(members.size(), detail::ceil_fraction(s.fluent_keep_fraction, members.size())));
    if (!members.empty()) out.push_back(ObsNode::flu(std::move(members)));
  }
  return out;
}

/// Builds a root ordered group from a trace of an (optimal) plan.
inline ObsNode generate(const PlanningProblem &p, const Trace &trace, const GenSettings &s) {
  s.validate();
  std::mt19937_64 rng(s.seed);
  auto candidates = observation_candidates(trace, s, rng);

  // Keep exactly ceil(keep_fraction * n), order preserved.
  std::vector<std::size_t> order(candidates.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  order.resize(detail::ceil_fraction(s.keep_fraction, candidates.size()));
  std::sort(order.begin(), order.end());
  std::vector<ObsNode> kept;
  for (auto i : order) kept.push_back(std::move(candidates[i]));

  // Partition into consecutive blocks with a random phase, then wrap randomly
  // chosen blocks until at least U% of the observations are grouped.
  auto root = ObsNode::ordered();
  std::size_t target = detail::ceil_fraction(s.u_percent / 100.0, kept.size());
  if (target == 0) {
    root.members = std::move(kept);
  } else {
    std::vector<std::pair<std::size_t, std::size_t>> blocks;  // [begin, end)
    std::size_t phase = detail::uniform_index(rng, s.group_size);
    std::size_t begin = 0;
    if (phase > 0) {
      blocks.emplace_back(0, std::min(phase, kept.size()));
      begin = blocks.back().second;
    }
    for (; begin < kept.size(); begin += s.group_size)
      blocks.emplace_back(begin, std::min(begin + s.group_size, kept.size()));
    std::vector<std::size_t> pick(blocks.size());
    std::iota(pick.begin(), pick.end(), 0);
    std::shuffle(pick.begin(), pick.end(), rng);
    std::vector<char> grouped(blocks.size(), 0);
    std::size_t covered = 0;
    for (auto b : pick) {
      if (covered >= target) break;
      grouped[b] = 1;
      covered += blocks[b].second - blocks[b].first;
    }
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      auto [lo, hi] = blocks[b];
      if (!grouped[b]) {
        for (auto i = lo; i < hi; ++i) root.members.push_back(std::move(kept[i]));
        continue;
      }
      std::vector<ObsNode> members;
      for (auto i = lo; i < hi; ++i) members.push_back(std::move(kept[i]));
      root.members.push_back(ObsNode::unordered(std::move(members)));
    }
  }

  // Debind ceil(D% of eligible) action observations into option groups.
  std::vector<ObsNode *> eligible;
  auto collect = [&](auto &self, ObsNode &n) -> void {
    if (n.kind == ObsKind::action) {
      if (!p.action(n.action).params.empty()) eligible.push_back(&n);
      return;
    }
    for (auto &m : n.members) self(self, m);
  };
  collect(collect, root);
  std::shuffle(eligible.begin(), eligible.end(), rng);
  eligible.resize(detail::ceil_fraction(s.d_percent / 100.0, eligible.size()));
  for (auto *node : eligible) {
    const auto &src = p.action(node->action);
    std::size_t dropped = detail::uniform_index(rng, src.params.size());
    std::vector<ObsNode> options;
    for (ActionId a = 0; a < p.actions().size(); ++a) {
      const auto &cand = p.action(a);
      if (cand.name != src.name || cand.params.size() != src.params.size()) continue;
      bool match = true;
      for (std::size_t i = 0; i < src.params.size() && match; ++i)
        match = i == dropped || cand.params[i] == src.params[i];
      if (match) options.push_back(ObsNode::act(a));
    }
    *node = ObsNode::option(std::move(options));
  }
  number_observations(root);
  return root;
}

/// The generating plan always satisfies the tree built from it.
inline bool self_check(const PlanningProblem &p, const ObsNode &theta, const Trace &trace) {
  return satisfies_plan(p, trace.actions, trace.states.front(), theta);
}

inline nlohmann::json generation_manifest(const GenSettings &s, Cost source_cost,
                                          std::size_t source_length, const ObsNode &theta) {
  return {
      {"mode", to_string(s.mode)},
      {"u_percent", s.u_percent},
      {"d_percent", s.d_percent},
      {"keep_fraction", s.keep_fraction},
      {"fluent_keep_fraction", s.fluent_keep_fraction},
      {"group_size", s.group_size},
      {"seed", s.seed},
      {"source_plan_cost", source_cost},
      {"source_plan_length", source_length},
      {"observation_count", observation_count(theta)},
      {"simple_observation_count", simple_observation_count(theta)},
  };
}

}  // namespace plancog

#endif  // PLANCOG_OBS_GENERATOR_HPP
