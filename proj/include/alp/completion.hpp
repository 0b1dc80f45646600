#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "alp/formula.hpp"
#include "alp/ground.hpp"

namespace alp {

// ---------------------------------------------------------------------------
// Cycle detection on the ground dependency graph
// ---------------------------------------------------------------------------

struct CycleReport {
  bool ok = true;
  std::vector<std::string> cycle;  // one offending cycle, in edge order
};

inline CycleReport check_acyclic(const GroundProgram& gp) {
  std::map<std::string, std::vector<std::string>> edges;
  for (const Clause& c : gp.rules) {
    auto& out = edges[c.head.text()];
    for (const Literal& l : c.body) out.push_back(l.atom.text());
  }

  enum class Color { White, Grey, Black };
  std::map<std::string, Color> color;
  std::vector<std::string> stack;
  CycleReport report;

  std::function<bool(const std::string&)> dfs = [&](const std::string& node) -> bool {
    color[node] = Color::Grey;
    stack.push_back(node);
    for (const std::string& next : edges[node]) {
      Color c = color.count(next) ? color[next] : Color::White;
      if (c == Color::Grey) {
        auto it = std::find(stack.begin(), stack.end(), next);
        report.cycle.assign(it, stack.end());
        return false;
      }
      if (c == Color::White && !dfs(next)) return false;
    }
    stack.pop_back();
    color[node] = Color::Black;
    return true;
  };

  for (const auto& [node, _] : edges) {
    if ((!color.count(node) || color[node] == Color::White) && !dfs(node)) {
      report.ok = false;
      return report;
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Clark's completion
// ---------------------------------------------------------------------------

namespace detail {

// Variable insertion order: labeled facts first (program order), then rule
// heads and bodies, then query atoms. Compilation splits in this order.
inline void seed_variables(PropositionalTheory& t, const GroundProgram& gp) {
  for (const GroundFact& f : gp.facts)
    if (!f.decl.is_distributional()) t.var_id(f.decl.atom.text());
  for (const Clause& c : gp.rules) {
    t.var_id(c.head.text());
    for (const Literal& l : c.body) t.var_id(l.atom.text());
  }
  for (const Atom& q : gp.query_atoms) t.var_id(q.text());
}

}  // namespace detail

// For each derived head h: h <-> (body_1 | body_2 | ...). Logical facts are
// unit conjuncts, labeled facts stay free, atoms with no source at all are
// completed to false. Exactly-one cell groups contribute their constraint.
// Fails on cyclic input; run check_acyclic first for a detailed report.
inline PropositionalTheory clark_completion(const GroundProgram& gp) {
  CycleReport cycles = check_acyclic(gp);
  if (!cycles.ok) {
    std::string msg = "ground program is cyclic:";
    for (const std::string& a : cycles.cycle) msg += " " + a + " ->";
    msg += " " + cycles.cycle.front() + "; cycle breaking is not supported";
    throw CycleError(msg, cycles.cycle);
  }

  PropositionalTheory t;
  detail::seed_variables(t, gp);

  std::set<std::string> fact_atoms;      // any fact source (labeled or logical)
  std::set<std::string> logical_atoms;
  for (const GroundFact& f : gp.facts) {
    if (f.decl.is_distributional()) continue;
    fact_atoms.insert(f.decl.atom.text());
    if (f.decl.is_logical()) logical_atoms.insert(f.decl.atom.text());
  }

  // rule bodies per head, in rule order
  std::map<std::string, std::vector<FormulaId>> bodies;
  std::vector<std::string> head_order;
  for (const Clause& c : gp.rules) {
    std::vector<FormulaId> lits;
    lits.reserve(c.body.size());
    for (const Literal& l : c.body) {
      FormulaId v = t.arena.mk_var(t.var_id(l.atom.text()));
      lits.push_back(l.positive ? v : t.arena.mk_not(v));
    }
    std::string head = c.head.text();
    if (!bodies.count(head)) head_order.push_back(head);
    bodies[head].push_back(t.arena.mk_and(std::move(lits)));
  }

  std::vector<FormulaId> conjuncts;
  for (const std::string& name : t.variables) {
    if (logical_atoms.count(name)) {
      conjuncts.push_back(t.arena.mk_var(t.var_id(name)));
    }
  }
  for (const std::string& head : head_order) {
    if (fact_atoms.count(head))
      throw ValidationError("atom " + head + " is both a fact and a rule head");
    FormulaId lhs = t.arena.mk_var(t.var_id(head));
    conjuncts.push_back(t.arena.mk_iff(lhs, t.arena.mk_or(bodies[head])));
  }
  // Atoms mentioned anywhere with no defining fact or rule: h <-> false.
  for (const std::string& name : t.variables) {
    if (fact_atoms.count(name) || bodies.count(name)) continue;
    conjuncts.push_back(t.arena.mk_not(t.arena.mk_var(t.var_id(name))));
  }
  // exactly-one constraint per cell group
  for (const auto& group : gp.exclusive_groups) {
    std::vector<FormulaId> members;
    for (int idx : group)
      members.push_back(t.arena.mk_var(t.var_id(gp.facts[idx].decl.atom.text())));
    conjuncts.push_back(t.arena.mk_or(members));
    for (std::size_t i = 0; i < members.size(); ++i)
      for (std::size_t j = i + 1; j < members.size(); ++j)
        conjuncts.push_back(
            t.arena.mk_or({t.arena.mk_not(members[i]), t.arena.mk_not(members[j])}));
  }

  t.formula = t.arena.mk_and(std::move(conjuncts));
  return t;
}

// Conjoins the query atom to the completion; the standard theory whose
// weighted count is the query's success probability.
inline PropositionalTheory completion_with_query(const GroundProgram& gp, const Atom& query,
                                                 bool negate_query = false) {
  PropositionalTheory t = clark_completion(gp);
  FormulaId q = t.arena.mk_var(t.var_id(query.text()));
  if (negate_query) q = t.arena.mk_not(q);
  t.formula = t.arena.mk_and({t.formula, q});
  return t;
}

// ---------------------------------------------------------------------------
// Proof-based translation
// ---------------------------------------------------------------------------

// G <-> disjunction over proofs of the conjunction of the labeled facts each
// proof used (with sign). Logical facts are always true and drop out.
inline PropositionalTheory proofs_to_formula(const std::vector<Proof>& proofs, const Atom& goal) {
  PropositionalTheory t;
  FormulaId g = t.arena.mk_var(t.var_id(goal.text()));
  std::vector<FormulaId> disjuncts;
  for (const Proof& proof : proofs) {
    if (goal.is_ground() && !(proof.goal_instance == goal)) continue;
    std::vector<FormulaId> lits;
    for (const Proof::Use& u : proof.used_facts) {
      if (u.fact.is_logical()) continue;
      FormulaId v = t.arena.mk_var(t.var_id(u.fact.atom.text()));
      lits.push_back(u.positive ? v : t.arena.mk_not(v));
    }
    disjuncts.push_back(t.arena.mk_and(std::move(lits)));
  }
  t.formula = t.arena.mk_iff(g, t.arena.mk_or(std::move(disjuncts)));
  return t;
}

}  // namespace alp
