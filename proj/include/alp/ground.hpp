#pragma once

#include <algorithm>
#include <functional>
#include <memory>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "alp/ast.hpp"
#include "alp/errors.hpp"
#include "alp/parser.hpp"
#include "alp/unify.hpp"

namespace alp {

// ---------------------------------------------------------------------------
// Desugaring of annotated rules
// ---------------------------------------------------------------------------
//
// `label :: h :- body` becomes a fresh fact `label :: aux(args)` plus the
// rule `h :- aux(args), body`. The auxiliary predicate is named after the
// head and the first body predicate (collision-avoided), and its arguments
// are the head's argument terms followed by body-only variables, so every
// ground instance of the rule owns an independent labeled choice.

namespace detail {

inline void collect_vars(const Term& t, std::vector<std::string>& out,
                         std::set<std::string>& seen) {
  if (t.is_variable()) {
    if (seen.insert(t.name).second) out.push_back(t.name);
    return;
  }
  for (const Term& a : t.args) collect_vars(a, out, seen);
}

inline std::vector<std::string> clause_vars(const Clause& c) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const Term& t : c.head.args) collect_vars(t, out, seen);
  for (const Literal& l : c.body)
    for (const Term& t : l.atom.args) collect_vars(t, out, seen);
  return out;
}

}  // namespace detail

inline Program desugar_annotated_rules(const Program& p) {
  Program out;
  out.facts = p.facts;
  out.rules = p.rules;
  out.exclusive_groups = p.exclusive_groups;

  std::set<std::string> taken;
  for (const FactDecl& f : p.facts)
    if (!f.is_distributional()) taken.insert(f.atom.predicate);
  auto take_clause = [&taken](const Clause& c) {
    taken.insert(c.head.predicate);
    for (const Literal& l : c.body) taken.insert(l.atom.predicate);
  };
  for (const Clause& c : p.rules) take_clause(c);
  for (const AnnotatedRule& r : p.annotated_rules) take_clause(r.clause);

  for (const AnnotatedRule& r : p.annotated_rules) {
    const Clause& c = r.clause;
    std::string base = c.head.predicate + "_on_" + c.body.front().atom.predicate;
    std::string name = base;
    for (int k = 2; taken.count(name); ++k) name = base + "_" + std::to_string(k);
    taken.insert(name);

    // head argument terms, then body-only variables
    std::vector<Term> aux_args = c.head.args;
    std::set<std::string> head_vars;
    {
      std::vector<std::string> hv;
      for (const Term& t : c.head.args) detail::collect_vars(t, hv, head_vars);
    }
    std::vector<std::string> body_vars;
    std::set<std::string> seen = head_vars;
    for (const Literal& l : c.body)
      for (const Term& t : l.atom.args) detail::collect_vars(t, body_vars, seen);
    for (const std::string& v : body_vars) aux_args.push_back(Term::variable(v));

    Atom aux{name, std::move(aux_args)};
    out.facts.push_back({r.label, aux});
    Clause desugared{c.head, {}};
    desugared.body.push_back({aux, true});
    for (const Literal& l : c.body) desugared.body.push_back(l);
    out.rules.push_back(std::move(desugared));
  }
  return out;
}

// ---------------------------------------------------------------------------
// SLD proof search
// ---------------------------------------------------------------------------

struct Proof {
  struct Use {
    FactDecl fact;   // ground instance
    int origin;      // index into the program's fact list
    bool positive;   // negated labeled facts are recorded with sign
  };
  std::vector<Use> used_facts;
  Substitution answer;  // restricted to the query's variables
  Atom goal_instance;
};

struct GroundFact {
  FactDecl decl;  // ground instance
  int origin;     // index into the source program's fact list
};

struct GroundProgram {
  std::vector<GroundFact> facts;
  std::vector<Clause> rules;
  std::vector<Atom> query_atoms;
  std::vector<std::vector<int>> exclusive_groups;  // indices into facts

  const GroundFact* find_fact(const std::string& atom_text) const {
    for (const GroundFact& f : facts)
      if (!f.decl.is_distributional() && f.decl.atom.text() == atom_text) return &f;
    return nullptr;
  }

  std::string text() const {
    Program p;
    for (const GroundFact& f : facts) p.facts.push_back(f.decl);
    p.rules = rules;
    p.exclusive_groups = exclusive_groups;
    return pretty_print(p);
  }
};

namespace detail {

// Ancestor goals on the current derivation path, shared across branches.
struct AncestorNode {
  std::string goal;
  std::shared_ptr<const AncestorNode> parent;
};
using AncestorPath = std::shared_ptr<const AncestorNode>;

inline bool on_path(const AncestorPath& path, const std::string& goal) {
  for (const AncestorNode* n = path.get(); n; n = n->parent.get())
    if (n->goal == goal) return true;
  return false;
}

class SldEngine {
 public:
  struct PendingUse {
    int origin;
    Atom atom;  // renamed template instance; resolve with the final substitution
    bool positive;
  };

  struct GoalItem {
    Literal lit;
    AncestorPath ancestors;
  };

  // Called on each successful derivation; return false to stop the search.
  using Sink = std::function<bool(const Substitution&, const std::vector<PendingUse>&)>;

  SldEngine(const Program& prog, long depth_limit, bool proof_mode)
      : prog_(prog), depth_limit_(depth_limit), proof_mode_(proof_mode) {
    if (!prog.annotated_rules.empty())
      throw ValidationError("internal: SLD search requires a desugared program");
    for (std::size_t i = 0; i < prog.facts.size(); ++i) {
      const FactDecl& f = prog.facts[i];
      if (!f.is_distributional()) fact_index_[f.atom.indicator()].push_back((int)i);
    }
    for (std::size_t i = 0; i < prog.rules.size(); ++i)
      rule_index_[prog.rules[i].head.indicator()].push_back((int)i);
  }

  void solve(const Atom& goal, const Substitution& start, const Sink& sink) {
    steps_ = 0;
    std::vector<GoalItem> goals{{Literal{goal, true}, nullptr}};
    std::vector<PendingUse> uses;
    stop_ = false;
    step(goals, start, uses, sink);
  }

  bool has_solution(const Atom& goal) {
    bool found = false;
    solve(goal, {}, [&found](const Substitution&, const std::vector<PendingUse>&) {
      found = true;
      return false;
    });
    return found;
  }

 private:
  const Program& prog_;
  long depth_limit_;
  bool proof_mode_;
  long steps_ = 0;
  int rename_counter_ = 0;
  bool stop_ = false;
  std::unordered_map<std::string, std::vector<int>> fact_index_;
  std::unordered_map<std::string, std::vector<int>> rule_index_;

  Term rename(const Term& t, const std::string& suffix) const {
    if (t.is_variable()) return Term::variable(t.name + suffix);
    if (t.is_compound()) {
      Term out = t;
      for (Term& a : out.args) a = rename(a, suffix);
      return out;
    }
    return t;
  }
  Atom rename(const Atom& a, const std::string& suffix) const {
    Atom out{a.predicate, {}};
    for (const Term& t : a.args) out.args.push_back(rename(t, suffix));
    return out;
  }
  Clause rename(const Clause& c, const std::string& suffix) const {
    Clause out{rename(c.head, suffix), {}};
    for (const Literal& l : c.body) out.body.push_back({rename(l.atom, suffix), l.positive});
    return out;
  }

  void step(const std::vector<GoalItem>& goals, const Substitution& s,
            const std::vector<PendingUse>& uses, const Sink& sink) {
    if (stop_) return;
    if (goals.empty()) {
      if (!sink(s, uses)) stop_ = true;
      return;
    }
    const GoalItem& item = goals.front();
    Atom goal = s.apply(item.lit.atom);
    if (++steps_ > depth_limit_) throw NonterminationError(goal.text(), depth_limit_);

    if (!item.lit.positive) {
      resolve_negative(goal, goals, s, uses, sink);
      return;
    }

    const bool ground = goal.is_ground();
    const std::string goal_text = ground ? goal.text() : std::string();
    if (ground && on_path(item.ancestors, goal_text)) return;  // looping branch

    std::vector<GoalItem> rest(goals.begin() + 1, goals.end());

    // facts, in program order
    auto fit = fact_index_.find(goal.indicator());
    if (fit != fact_index_.end()) {
      for (int idx : fit->second) {
        if (stop_) return;
        std::string suffix = "#" + std::to_string(++rename_counter_);
        Atom fact_atom = rename(prog_.facts[idx].atom, suffix);
        if (auto s2 = unify(goal, fact_atom, s)) {
          std::vector<PendingUse> uses2 = uses;
          if (proof_mode_) uses2.push_back({idx, fact_atom, true});
          step(rest, *s2, uses2, sink);
        }
      }
    }

    // rules, in program order
    auto rit = rule_index_.find(goal.indicator());
    if (rit == rule_index_.end()) return;
    AncestorPath deeper =
        ground ? std::make_shared<AncestorNode>(AncestorNode{goal_text, item.ancestors})
               : item.ancestors;
    for (int idx : rit->second) {
      if (stop_) return;
      std::string suffix = "#" + std::to_string(++rename_counter_);
      Clause clause = rename(prog_.rules[idx], suffix);
      auto s2 = unify(goal, clause.head, s);
      if (!s2) continue;
      std::vector<GoalItem> next;
      next.reserve(clause.body.size() + rest.size());
      for (const Literal& l : clause.body) next.push_back({l, deeper});
      for (const GoalItem& g : rest) next.push_back(g);
      step(next, *s2, uses, sink);
    }
  }

  void resolve_negative(const Atom& goal, const std::vector<GoalItem>& goals,
                        const Substitution& s, const std::vector<PendingUse>& uses,
                        const Sink& sink) {
    if (!goal.is_ground())
      throw ValidationError("negated literal \\+ " + goal.text() +
                            " is not ground when selected");
    std::vector<GoalItem> rest(goals.begin() + 1, goals.end());
    if (!proof_mode_) {
      // relevance search: a negated literal holds in some world
      step(rest, s, uses, sink);
      return;
    }
    // proof mode: negation is only supported on fact atoms
    auto fit = fact_index_.find(goal.indicator());
    if (fit != fact_index_.end()) {
      for (int idx : fit->second) {
        const FactDecl& f = prog_.facts[idx];
        std::string suffix = "#" + std::to_string(++rename_counter_);
        Atom fact_atom = rename(f.atom, suffix);
        if (auto s2 = unify(goal, fact_atom, s)) {
          if (f.is_logical()) return;  // \+ on an always-true fact fails
          std::vector<PendingUse> uses2 = uses;
          uses2.push_back({idx, fact_atom, false});
          step(rest, *s2, uses2, sink);
          return;
        }
      }
    }
    if (rule_index_.count(goal.indicator()))
      throw UnsupportedError("proof enumeration cannot negate derived atom " + goal.text());
    step(rest, s, uses, sink);  // no source at all: vacuously true
  }
};

}  // namespace detail

// All SLD derivations of `goal`, each recording the ground labeled and
// logical facts it used (negated labeled facts with sign). Duplicate
// fact-sets per answer are deduplicated.
inline std::vector<Proof> sld_proofs(const Program& p, const Atom& goal,
                                     long depth_limit = 10000) {
  detail::SldEngine engine(p, depth_limit, /*proof_mode=*/true);
  std::vector<Proof> proofs;
  std::set<std::string> keys;

  std::vector<std::string> goal_vars;
  {
    std::set<std::string> seen;
    for (const Term& t : goal.args) detail::collect_vars(t, goal_vars, seen);
  }

  engine.solve(goal, {}, [&](const Substitution& s,
                             const std::vector<detail::SldEngine::PendingUse>& uses) {
    Proof proof;
    proof.answer = s.restrict_to(goal_vars);
    proof.goal_instance = s.apply(goal);
    std::set<std::string> use_keys;
    for (const auto& u : uses) {
      Atom ground = s.apply(u.atom);
      if (!ground.is_ground())
        throw ValidationError("proof uses non-ground fact " + ground.text());
      std::string k = (u.positive ? "+" : "-") + ground.text();
      if (!use_keys.insert(k).second) continue;
      FactDecl instance = p.facts[u.origin];
      instance.atom = std::move(ground);
      proof.used_facts.push_back({std::move(instance), u.origin, u.positive});
    }
    std::sort(proof.used_facts.begin(), proof.used_facts.end(),
              [](const Proof::Use& a, const Proof::Use& b) {
                return a.fact.atom.text() + (a.positive ? "+" : "-") <
                       b.fact.atom.text() + (b.positive ? "+" : "-");
              });
    std::string key = proof.goal_instance.text() + "|";
    for (const auto& u : proof.used_facts)
      key += (u.positive ? "+" : "-") + u.fact.atom.text() + ";";
    if (keys.insert(key).second) proofs.push_back(std::move(proof));
    return true;
  });
  return proofs;
}

// ---------------------------------------------------------------------------
// Relevant grounding
// ---------------------------------------------------------------------------

namespace detail {

class Grounder {
 public:
  Grounder(const Program& prog, long depth_limit)
      : prog_(prog), engine_(prog, depth_limit, /*proof_mode=*/false) {}

  GroundProgram run(const Atom& query) {
    // answer substitutions of the query
    std::set<std::string> answer_seen;
    engine_.solve(query, {}, [&](const Substitution& s, const auto&) {
      Atom inst = s.apply(query);
      if (!inst.is_ground())
        throw ValidationError("query answer " + inst.text() + " is not ground");
      if (answer_seen.insert(inst.text()).second) answers_.push_back(inst);
      return true;
    });

    if (query.is_ground()) {
      gp_.query_atoms.push_back(query);
    } else {
      gp_.query_atoms = answers_;
    }
    for (const Atom& a : gp_.query_atoms) need(a);
    attach_exclusive_groups();
    return std::move(gp_);
  }

 private:
  const Program& prog_;
  SldEngine engine_;
  GroundProgram gp_;
  std::vector<Atom> answers_;
  std::set<std::string> needed_;
  std::set<std::string> emitted_rules_;
  std::set<std::string> emitted_facts_;
  std::unordered_map<std::string, bool> derivable_;

  bool derivable(const Atom& ground_atom) {
    auto [it, fresh] = derivable_.try_emplace(ground_atom.text(), false);
    if (fresh) it->second = engine_.has_solution(ground_atom);
    return it->second;
  }

  void emit_fact(const FactDecl& decl, int origin) {
    std::string key = std::to_string(origin) + "|" + decl.atom.text();
    if (!emitted_facts_.insert(key).second) return;
    gp_.facts.push_back({decl, origin});
  }

  void need(const Atom& atom) {
    if (!needed_.insert(atom.text()).second) return;

    for (std::size_t i = 0; i < prog_.facts.size(); ++i) {
      const FactDecl& f = prog_.facts[i];
      if (f.is_distributional()) continue;
      if (f.atom.predicate != atom.predicate || f.atom.arity() != atom.arity()) continue;
      if (auto s = unify(f.atom, atom)) {
        FactDecl instance = f;
        instance.atom = atom;
        emit_fact(instance, (int)i);
      }
    }

    for (const Clause& rule : prog_.rules) {
      if (rule.head.predicate != atom.predicate || rule.head.arity() != atom.arity()) continue;
      auto s0 = unify(rule.head, atom);
      if (!s0) continue;
      expand(rule, atom, *s0, 0, {});
    }
  }

  // Enumerates groundings of rule body literals left to right, keeping only
  // instances whose positive literals are derivable in some world. Negated
  // literals with no derivable instance are vacuously true and dropped.
  void expand(const Clause& rule, const Atom& head, const Substitution& s, std::size_t i,
              std::vector<Literal> kept) {
    if (i == rule.body.size()) {
      Clause ground{head, std::move(kept)};
      if (!ground.is_ground())
        throw ValidationError("rule instance " + ground.text() + " is not ground");
      if (emitted_rules_.insert(ground.text()).second) {
        std::vector<Atom> deps;
        for (const Literal& l : ground.body) deps.push_back(l.atom);
        gp_.rules.push_back(std::move(ground));
        for (const Atom& a : deps) need(a);
      }
      return;
    }
    Literal lit = s.apply(rule.body[i]);
    if (!lit.positive) {
      if (!lit.atom.is_ground())
        throw ValidationError("negated literal \\+ " + lit.atom.text() +
                              " is not ground during grounding");
      if (derivable(lit.atom)) {
        kept.push_back(lit);
        expand(rule, head, s, i + 1, std::move(kept));
      } else {
        expand(rule, head, s, i + 1, std::move(kept));  // vacuously true
      }
      return;
    }
    // positive literal: enumerate derivable instances
    std::set<std::string> seen;
    std::vector<Substitution> extensions;
    engine_.solve(lit.atom, s, [&](const Substitution& s2, const auto&) {
      Atom inst = s2.apply(lit.atom);
      if (seen.insert(inst.text()).second) extensions.push_back(s2);
      return true;
    });
    for (const Substitution& s2 : extensions) {
      std::vector<Literal> kept2 = kept;
      kept2.push_back(s2.apply(lit));
      expand(rule, head, s2, i + 1, std::move(kept2));
    }
  }

  // Exactly-one groups are atomic: if any member is relevant, all are.
  void attach_exclusive_groups() {
    for (const auto& group : prog_.exclusive_groups) {
      bool touched = false;
      for (int origin : group) {
        for (const GroundFact& f : gp_.facts)
          if (f.origin == origin) touched = true;
      }
      if (!touched) continue;
      std::vector<int> indices;
      for (int origin : group) {
        const FactDecl& decl = prog_.facts[origin];
        emit_fact(decl, origin);
        for (std::size_t k = 0; k < gp_.facts.size(); ++k)
          if (gp_.facts[k].origin == origin) indices.push_back((int)k);
      }
      gp_.exclusive_groups.push_back(std::move(indices));
    }
  }
};

}  // namespace detail

// Ground facts and rules reachable in some derivation of `query`, with all
// answer substitutions instantiated. For a ground query the atom itself is
// always in query_atoms, derivable or not.
inline GroundProgram relevant_ground_program(const Program& p, const Atom& query,
                                             long depth_limit = 10000) {
  return detail::Grounder(p, depth_limit).run(query);
}

// Verbatim ground program (no relevance filter); the program must already
// be ground, which is the case for world enumeration inputs.
inline GroundProgram full_ground_program(const Program& p) {
  if (!p.annotated_rules.empty())
    throw ValidationError("internal: full grounding requires a desugared program");
  GroundProgram gp;
  for (std::size_t i = 0; i < p.facts.size(); ++i) {
    const FactDecl& f = p.facts[i];
    if (f.is_distributional()) continue;
    if (!f.atom.is_ground())
      throw ValidationError("fact " + f.atom.text() +
                            " is not ground; use a query for relevant grounding");
    gp.facts.push_back({f, (int)i});
  }
  for (const Clause& c : p.rules) {
    if (!c.is_ground())
      throw ValidationError("rule " + c.text() +
                            " is not ground; use a query for relevant grounding");
    gp.rules.push_back(c);
  }
  // fact indices survive the distributional-fact filter
  std::unordered_map<int, int> origin_to_index;
  for (std::size_t k = 0; k < gp.facts.size(); ++k) origin_to_index[gp.facts[k].origin] = (int)k;
  for (const auto& group : p.exclusive_groups) {
    std::vector<int> indices;
    for (int origin : group) indices.push_back(origin_to_index.at(origin));
    gp.exclusive_groups.push_back(std::move(indices));
  }
  return gp;
}

}  // namespace alp
