#ifndef PLANCOG_PDDL_HPP
#define PLANCOG_PDDL_HPP

// Reader for the STRIPS subset of PDDL (:strips, :typing, :action-costs),
// a grounder producing PlanningProblem, and the hyps.dat / plan file formats.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "plancog/sexpr.hpp"
#include "plancog/strips.hpp"

namespace plancog {

/// Predicate or operator argument: a "?variable" or an object name.
struct LiftedAtom {
  std::string predicate;
  std::vector<std::string> args;
};

struct TypedName {
  std::string name;
  std::string type;
};

struct OperatorSchema {
  std::string name;
  std::vector<TypedName> params;
  std::vector<LiftedAtom> pre;
  std::vector<LiftedAtom> add;
  std::vector<LiftedAtom> del;
  Cost cost = 1;
};

struct DomainSchema {
  std::string name;
  std::vector<std::string> requirements;
  std::map<std::string, std::string> type_parent;  // "object" is the root
  std::vector<TypedName> constants;
  std::map<std::string, std::vector<std::string>> predicates;  // name -> arg types
  std::vector<std::string> predicate_order;
  std::vector<OperatorSchema> operators;
  bool action_costs = false;

  bool has_type(const std::string &t) const { return t == "object" || type_parent.count(t); }

  bool is_subtype(std::string t, const std::string &ancestor) const {
    for (int guard = 0; guard < 256; ++guard) {
      if (t == ancestor) return true;
      if (t == "object") return false;
      auto it = type_parent.find(t);
      if (it == type_parent.end()) return false;
      t = it->second;
    }
    return false;
  }

  const OperatorSchema *find_operator(const std::string &op) const {
    for (const auto &o : operators)
      if (o.name == op) return &o;
    return nullptr;
  }
};

struct LiftedProblem {
  std::string name;
  std::string domain_name;
  std::vector<TypedName> objects;  // domain constants first, then :objects
  std::vector<Fluent> init;
  std::vector<Fluent> goal;
};

namespace detail {

inline std::vector<TypedName> parse_typed_list(const std::vector<Sexpr> &items,
                                               std::size_t start, bool variables) {
  std::vector<TypedName> out;
  std::vector<std::string> pending;
  for (std::size_t i = start; i < items.size(); ++i) {
    const auto &it = items[i];
    if (it.is_list) it.fail("unexpected list in typed list (either-types are unsupported)");
    if (it.atom == "-") {
      if (i + 1 >= items.size() || items[i + 1].is_list) it.fail("missing type after '-'");
      for (auto &n : pending) out.push_back({std::move(n), items[i + 1].atom});
      pending.clear();
      ++i;
      continue;
    }
    if (variables != (!it.atom.empty() && it.atom[0] == '?'))
      it.fail(variables ? "expected variable, got '" + it.atom + "'"
                        : "unexpected variable '" + it.atom + "'");
    pending.push_back(it.atom);
  }
  for (auto &n : pending) out.push_back({std::move(n), "object"});
  return out;
}

inline LiftedAtom to_atom(const Sexpr &e) {
  if (!e.is_list || e.items.empty() || e.items[0].is_list) e.fail("expected atom");
  LiftedAtom a{e.items[0].atom, {}};
  for (std::size_t i = 1; i < e.items.size(); ++i) {
    if (e.items[i].is_list) e.items[i].fail("nested term in atom");
    a.args.push_back(e.items[i].atom);
  }
  return a;
}

/// Flattens "(and ...)" conjunctions; "()" is the empty conjunction.
inline std::vector<const Sexpr *> conjuncts(const Sexpr &e) {
  std::vector<const Sexpr *> out;
  if (!e.is_list) e.fail("expected formula");
  if (e.items.empty()) return out;
  if (e.head() == "and") {
    for (std::size_t i = 1; i < e.items.size(); ++i) {
      auto sub = conjuncts(e.items[i]);
      out.insert(out.end(), sub.begin(), sub.end());
    }
    return out;
  }
  out.push_back(&e);
  return out;
}

inline Cost parse_cost_literal(const Sexpr &e) {
  if (e.is_list) e.fail("only constant action costs are supported");
  const auto &s = e.atom;
  bool integral = !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return std::isdigit(static_cast<unsigned char>(c));
  });
  if (!integral) {
    // Accept "3.0" style literals only when exactly integral.
    char *end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0') e.fail("bad cost literal '" + s + "'");
    if (v < 0 || std::floor(v) != v) e.fail("non-integer or negative action cost '" + s + "'");
    return static_cast<Cost>(v);
  }
  return static_cast<Cost>(std::stoll(s));
}

inline void check_atom(const DomainSchema &d, const LiftedAtom &a, const Sexpr &where) {
  auto it = d.predicates.find(a.predicate);
  if (it == d.predicates.end()) where.fail("undeclared predicate '" + a.predicate + "'");
  if (it->second.size() != a.args.size())
    where.fail("arity mismatch for '" + a.predicate + "': expected " +
               std::to_string(it->second.size()) + ", got " + std::to_string(a.args.size()));
}

inline const Sexpr &single_define(const std::vector<Sexpr> &top, const char *what) {
  if (top.size() != 1) throw ParseError(std::string("expected exactly one ") + what + " form");
  const auto &def = top.front();
  if (def.head() != "define") def.fail(std::string("expected (define ...) for ") + what);
  return def;
}

}  // namespace detail

inline DomainSchema parse_domain(std::string_view text) {
  using detail::conjuncts;
  using detail::to_atom;
  auto top = parse_sexprs(text);
  const auto &def = detail::single_define(top, "domain");
  DomainSchema d;
  bool typing = false;
  for (std::size_t i = 1; i < def.items.size(); ++i) {
    const auto &sec = def.items[i];
    const auto &h = sec.head();
    if (h == "domain") {
      if (sec.items.size() != 2) sec.fail("malformed (domain name)");
      d.name = sec.items[1].atom;
    } else if (h == ":requirements") {
      for (std::size_t k = 1; k < sec.items.size(); ++k) {
        const auto &r = sec.items[k].atom;
        if (r == ":negative-preconditions")
          sec.items[k].fail(
              "requirement :negative-preconditions is not supported; encode negation with "
              "complement predicates");
        if (r != ":strips" && r != ":typing" && r != ":action-costs")
          sec.items[k].fail("unknown or unsupported requirement '" + r + "'");
        typing |= r == ":typing";
        d.action_costs |= r == ":action-costs";
        d.requirements.push_back(r);
      }
    } else if (h == ":types") {
      for (auto &t : detail::parse_typed_list(sec.items, 1, false)) {
        if (t.name == "object") continue;
        d.type_parent[t.name] = t.type;
      }
      typing = true;
    } else if (h == ":constants") {
      d.constants = detail::parse_typed_list(sec.items, 1, false);
    } else if (h == ":predicates") {
      for (std::size_t k = 1; k < sec.items.size(); ++k) {
        const auto &p = sec.items[k];
        if (!p.is_list || p.items.empty() || p.items[0].is_list) p.fail("malformed predicate");
        std::vector<std::string> types;
        for (auto &v : detail::parse_typed_list(p.items, 1, true)) types.push_back(v.type);
        if (!d.predicates.emplace(p.items[0].atom, types).second)
          p.fail("duplicate predicate '" + p.items[0].atom + "'");
        d.predicate_order.push_back(p.items[0].atom);
      }
    } else if (h == ":functions") {
      // Only (total-cost) is meaningful; it is implied by :action-costs.
    } else if (h == ":action") {
      if (sec.items.size() < 2 || sec.items[1].is_list) sec.fail("malformed :action");
      OperatorSchema op;
      op.name = sec.items[1].atom;
      op.cost = d.action_costs ? 0 : 1;
      for (std::size_t k = 2; k + 1 < sec.items.size(); k += 2) {
        const auto &key = sec.items[k];
        const auto &val = sec.items[k + 1];
        if (key.is_atom(":parameters")) {
          if (!val.is_list) val.fail("expected parameter list");
          op.params = detail::parse_typed_list(val.items, 0, true);
        } else if (key.is_atom(":precondition")) {
          for (const auto *c : conjuncts(val)) {
            if (c->head() == "not")
              c->fail("negative precondition in '" + op.name +
                      "' is not supported (:negative-preconditions)");
            if (c->head() == "or" || c->head() == "forall" || c->head() == "exists" ||
                c->head() == "imply" || c->head() == "=")
              c->fail("unsupported precondition construct '" + c->head() + "'");
            op.pre.push_back(to_atom(*c));
          }
        } else if (key.is_atom(":effect")) {
          for (const auto *c : conjuncts(val)) {
            if (c->head() == "not") {
              if (c->items.size() != 2) c->fail("malformed (not ...)");
              op.del.push_back(to_atom(c->items[1]));
            } else if (c->head() == "increase") {
              if (!d.action_costs) c->fail("increase effect requires :action-costs");
              if (c->items.size() != 3 || c->items[1].head() != "total-cost")
                c->fail("only (increase (total-cost) N) is supported");
              op.cost += detail::parse_cost_literal(c->items[2]);
            } else if (c->head() == "when" || c->head() == "forall") {
              c->fail("conditional/quantified effects are not supported");
            } else {
              op.add.push_back(to_atom(*c));
            }
          }
        } else {
          key.fail("unknown action key '" + key.to_string() + "'");
        }
      }
      if ((sec.items.size() - 2) % 2 != 0) sec.fail("dangling key in :action");
      d.operators.push_back(std::move(op));
    } else {
      sec.fail("unknown domain section '" + (h.empty() ? sec.to_string() : h) + "'");
    }
  }
  // Validate types, then operator atoms against predicate declarations.
  for (const auto &[t, parent] : d.type_parent)
    if (!d.has_type(parent)) throw SemanticError("undeclared parent type '" + parent + "'");
  auto check_type = [&](const std::string &t) {
    if (!d.has_type(t)) throw SemanticError("undeclared type '" + t + "'");
  };
  for (const auto &c : d.constants) check_type(c.type);
  for (const auto &[p, types] : d.predicates)
    for (const auto &t : types) check_type(t);
  (void)typing;
  for (std::size_t i = 1; i < def.items.size(); ++i) {
    const auto &sec = def.items[i];
    if (sec.head() != ":action") continue;
    const OperatorSchema *op = d.find_operator(sec.items[1].atom);
    for (const auto &p : op->params) check_type(p.type);
    auto check_all = [&](const std::vector<LiftedAtom> &atoms) {
      for (const auto &a : atoms) {
        detail::check_atom(d, a, sec);
        for (const auto &arg : a.args) {
          if (arg[0] == '?') {
            bool bound = std::any_of(op->params.begin(), op->params.end(),
                                     [&](const TypedName &t) { return t.name == arg; });
            if (!bound) sec.fail("unbound variable '" + arg + "' in '" + op->name + "'");
          } else if (std::none_of(d.constants.begin(), d.constants.end(),
                                  [&](const TypedName &t) { return t.name == arg; })) {
            sec.fail("undeclared constant '" + arg + "' in '" + op->name + "'");
          }
        }
      }
    };
    check_all(op->pre);
    check_all(op->add);
    check_all(op->del);
  }
  return d;
}

inline LiftedProblem parse_problem(std::string_view text, const DomainSchema &d) {
  auto top = parse_sexprs(text);
  const auto &def = detail::single_define(top, "problem");
  LiftedProblem p;
  p.objects = d.constants;
  std::map<std::string, std::string> object_type;
  for (const auto &c : d.constants) object_type[c.name] = c.type;

  auto ground_atom = [&](const Sexpr &e) {
    auto a = detail::to_atom(e);
    detail::check_atom(d, a, e);
    const auto &types = d.predicates.at(a.predicate);
    for (std::size_t i = 0; i < a.args.size(); ++i) {
      auto it = object_type.find(a.args[i]);
      if (it == object_type.end()) e.fail("undeclared object '" + a.args[i] + "'");
      if (!d.is_subtype(it->second, types[i]))
        e.fail("type mismatch: '" + a.args[i] + "' is not a " + types[i]);
    }
    return Fluent{a.predicate, a.args};
  };

  const Sexpr *init = nullptr;
  const Sexpr *goal = nullptr;
  for (std::size_t i = 1; i < def.items.size(); ++i) {
    const auto &sec = def.items[i];
    const auto &h = sec.head();
    if (h == "problem") {
      if (sec.items.size() == 2) p.name = sec.items[1].atom;
    } else if (h == ":domain") {
      if (sec.items.size() == 2) p.domain_name = sec.items[1].atom;
    } else if (h == ":requirements" || h == ":metric") {
    } else if (h == ":objects") {
      for (auto &o : detail::parse_typed_list(sec.items, 1, false)) {
        if (!d.has_type(o.type)) sec.fail("undeclared type '" + o.type + "'");
        if (object_type.count(o.name)) continue;
        object_type[o.name] = o.type;
        p.objects.push_back(std::move(o));
      }
    } else if (h == ":init") {
      init = &sec;
    } else if (h == ":goal") {
      if (sec.items.size() != 2) sec.fail("malformed :goal");
      goal = &sec.items[1];
    } else {
      sec.fail("unknown problem section '" + (h.empty() ? sec.to_string() : h) + "'");
    }
  }
  if (init) {
    for (std::size_t k = 1; k < init->items.size(); ++k) {
      const auto &e = init->items[k];
      if (e.head() == "=") continue;  // (= (total-cost) 0)
      p.init.push_back(ground_atom(e));
    }
  }
  if (goal) {
    for (const auto *c : detail::conjuncts(*goal)) {
      if (c->head() == "not") c->fail("negative goals are not supported");
      p.goal.push_back(ground_atom(*c));
    }
  }
  return p;
}

namespace detail {

/// Calls fn(tuple) for every assignment of type-compatible objects.
template <class Fn>
void for_each_tuple(const DomainSchema &d, const std::vector<TypedName> &objects,
                    const std::vector<std::string> &types, Fn &&fn) {
  std::vector<std::vector<const std::string *>> domains;
  for (const auto &t : types) {
    std::vector<const std::string *> dom;
    for (const auto &o : objects)
      if (d.is_subtype(o.type, t)) dom.push_back(&o.name);
    if (dom.empty()) return;
    domains.push_back(std::move(dom));
  }
  std::vector<std::size_t> idx(types.size(), 0);
  std::vector<std::string> tuple(types.size());
  for (;;) {
    for (std::size_t i = 0; i < types.size(); ++i) tuple[i] = *domains[i][idx[i]];
    fn(tuple);
    std::size_t i = types.size();
    while (i > 0) {
      --i;
      if (++idx[i] < domains[i].size()) break;
      idx[i] = 0;
      if (i == 0) return;
    }
    if (types.empty()) return;
  }
}

}  // namespace detail

/// Instantiates every predicate and operator over all type-compatible object
/// tuples. No inequality between parameters is implied.
inline PlanningProblem ground(const DomainSchema &d, const LiftedProblem &lp) {
  PlanningProblem p;
  for (const auto &pred : d.predicate_order)
    detail::for_each_tuple(d, lp.objects, d.predicates.at(pred),
                           [&](const std::vector<std::string> &args) {
                             p.fluents.intern(Fluent{pred, args});
                           });
  auto lookup = [&](const Fluent &f) {
    auto id = p.fluents.find(f);
    if (!id) throw SemanticError("fluent " + f.to_string() + " is not in the grounded universe");
    return *id;
  };
  for (const auto &f : lp.init) p.init.push_back(lookup(f));
  for (const auto &f : lp.goal) p.goal.push_back(lookup(f));
  p.init = make_fluent_set(std::move(p.init));
  p.goal = make_fluent_set(std::move(p.goal));

  for (const auto &op : d.operators) {
    std::vector<std::string> types;
    for (const auto &prm : op.params) types.push_back(prm.type);
    detail::for_each_tuple(d, lp.objects, types, [&](const std::vector<std::string> &args) {
      auto subst = [&](const std::vector<LiftedAtom> &atoms) {
        FluentSet out;
        for (const auto &a : atoms) {
          Fluent f{a.predicate, {}};
          for (const auto &arg : a.args) {
            if (arg[0] != '?') {
              f.args.push_back(arg);
              continue;
            }
            for (std::size_t i = 0; i < op.params.size(); ++i)
              if (op.params[i].name == arg) f.args.push_back(args[i]);
          }
          out.push_back(lookup(f));
        }
        return out;
      };
      GroundAction ga;
      ga.name = op.name;
      ga.params = args;
      ga.pre = subst(op.pre);
      ga.add = subst(op.add);
      ga.del = subst(op.del);
      ga.cost = op.cost;
      p.add_action(std::move(ga));
    });
  }
  return p;
}

inline std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Replaces a "<HYPOTHESIS>" placeholder in a problem template with the given
/// goal text; templates without the placeholder are returned unchanged.
inline std::string instantiate_template(std::string text, const std::string &goal_text) {
  static constexpr std::string_view tag = "<HYPOTHESIS>";
  for (auto pos = text.find(tag); pos != std::string::npos; pos = text.find(tag))
    text.replace(pos, tag.size(), goal_text);
  return text;
}

struct LoadedTask {
  DomainSchema domain;
  LiftedProblem lifted;
  PlanningProblem problem;
};

/// Parses and grounds a domain/problem pair. A template's placeholder goal is
/// replaced by an empty conjunction.
inline LoadedTask load_task(std::string_view domain_text, std::string_view problem_text) {
  LoadedTask t;
  t.domain = parse_domain(domain_text);
  t.lifted = parse_problem(instantiate_template(std::string(problem_text), ""), t.domain);
  t.problem = ground(t.domain, t.lifted);
  return t;
}

namespace detail {

inline FluentSet fluents_from_sexprs(const PlanningProblem &p, const std::vector<Sexpr> &es) {
  FluentSet out;
  for (const auto &e : es) {
    for (const auto *c : conjuncts(e)) {
      auto a = to_atom(*c);
      Fluent f{a.predicate, a.args};
      auto id = p.fluents.find(f);
      if (!id) c->fail("unknown fluent " + f.to_string());
      out.push_back(*id);
    }
  }
  return make_fluent_set(std::move(out));
}

}  // namespace detail

/// Parses a conjunction of ground fluents written as "(p a) (q b)" or with
/// commas between atoms.
inline FluentSet parse_fluent_list(const PlanningProblem &p, std::string text) {
  std::replace(text.begin(), text.end(), ',', ' ');
  return detail::fluents_from_sexprs(p, parse_sexprs(text));
}

/// hyps.dat: one goal per non-empty line.
inline std::vector<FluentSet> parse_hypotheses(const PlanningProblem &p, std::string_view text) {
  std::vector<FluentSet> out;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    auto stripped = line.substr(0, line.find(';'));
    if (stripped.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back(parse_fluent_list(p, stripped));
  }
  return out;
}

inline std::string format_fluents(const PlanningProblem &p, const FluentSet &fs,
                                  std::string_view sep = " ") {
  std::string out;
  for (auto f : fs) {
    if (!out.empty()) out += sep;
    out += p.fluents.name(f);
  }
  return out;
}

/// One "(op arg ...)" per step; ';' comments (e.g. "; cost = 3") ignored.
inline Plan parse_plan(const PlanningProblem &p, std::string_view text) {
  Plan plan;
  for (const auto &e : parse_sexprs(text)) {
    if (!e.is_list) e.fail("expected action, got '" + e.atom + "'");
    auto id = p.find_action(e.to_string());
    if (!id) e.fail("unknown action " + e.to_string());
    plan.push_back(*id);
  }
  return plan;
}

namespace detail {

inline std::string pddl_identifier(const std::string &s) {
  std::string out;
  for (char c : s) {
    if (c == '(' || c == ')') continue;
    out += (c == ' ') ? '-' : c;
  }
  return out;
}

}  // namespace detail

/// Writes a grounded problem as a parameter-free PDDL domain/problem pair.
inline std::pair<std::string, std::string> write_grounded_pddl(const PlanningProblem &p,
                                                               const std::string &name) {
  std::map<std::string, std::size_t> arity;
  std::set<std::string> objects;
  for (std::size_t i = 0; i < p.num_fluents(); ++i) {
    const auto &f = p.fluents[static_cast<FluentId>(i)];
    arity[f.predicate] = f.args.size();
    objects.insert(f.args.begin(), f.args.end());
  }
  std::ostringstream dom;
  dom << "(define (domain " << name << ")\n  (:requirements :strips :action-costs)\n";
  if (!objects.empty()) {
    dom << "  (:constants";
    for (const auto &o : objects) dom << ' ' << o;
    dom << ")\n";
  }
  dom << "  (:predicates";
  for (const auto &[pred, n] : arity) {
    dom << " (" << pred;
    for (std::size_t i = 0; i < n; ++i) dom << " ?x" << i;
    dom << ')';
  }
  dom << ")\n  (:functions (total-cost) - number)\n";
  auto conj = [&](const FluentSet &fs, bool negate) {
    std::string out = "(and";
    for (auto f : fs)
      out += negate ? " (not " + p.fluents.name(f) + ")" : " " + p.fluents.name(f);
    return out;
  };
  for (const auto &a : p.actions()) {
    dom << "  (:action " << detail::pddl_identifier(a.signature()) << "\n    :parameters ()\n"
        << "    :precondition " << conj(a.pre, false) << ")\n"
        << "    :effect " << conj(a.add, false) << conj(a.del, true).substr(4)
        << " (increase (total-cost) " << a.cost << ")))\n";
  }
  dom << ")\n";
  std::ostringstream prob;
  prob << "(define (problem " << name << "-problem)\n  (:domain " << name << ")\n  (:init";
  for (auto f : p.init) prob << ' ' << p.fluents.name(f);
  prob << " (= (total-cost) 0))\n  (:goal " << conj(p.goal, false) << "))\n"
       << "  (:metric minimize (total-cost)))\n";
  return {dom.str(), prob.str()};
}

}  // namespace plancog

#endif  // PLANCOG_PDDL_HPP
