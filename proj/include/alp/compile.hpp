#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "alp/circuit.hpp"
#include "alp/errors.hpp"
#include "alp/formula.hpp"

namespace alp {

enum class VarOrder { Appearance, MinDegree };

struct CompileOptions {
  VarOrder order = VarOrder::Appearance;
  std::size_t node_budget = 10'000'000;
  bool use_cache = true;
};

namespace detail {

class Compiler {
 public:
  Compiler(PropositionalTheory& theory, const CompileOptions& opts)
      : theory_(theory), opts_(opts), circuit_(theory.variables) {
    priority_.resize(theory.variables.size());
    std::vector<std::int32_t> order = split_order();
    for (std::size_t i = 0; i < order.size(); ++i) priority_[order[i]] = static_cast<int>(i);
  }

  NnfCircuit run() {
    FormulaId nnf = theory_.arena.to_nnf(theory_.formula);
    circuit_.set_root(compile(nnf));
    return circuit_.compacted();
  }

 private:
  PropositionalTheory& theory_;
  CompileOptions opts_;
  NnfCircuit circuit_;
  std::vector<int> priority_;
  std::unordered_map<FormulaId, NodeId> cache_;
  std::unordered_map<std::uint64_t, FormulaId> cond_memo_;

  FormulaArena& arena() { return theory_.arena; }

  void check_budget() {
    if (circuit_.node_count() > opts_.node_budget)
      throw ResourceError("circuit node budget of " + std::to_string(opts_.node_budget) +
                          " nodes exceeded");
  }

  // And/Or with constant folding; plain node constructors do not fold.
  NodeId folded_and(std::vector<NodeId> kids) {
    std::vector<NodeId> out;
    for (NodeId k : kids) {
      if (circuit_.node(k).kind == NodeKind::False) return circuit_.mk_false();
      if (circuit_.node(k).kind == NodeKind::True) continue;
      out.push_back(k);
    }
    check_budget();
    return circuit_.mk_and(std::move(out));
  }
  NodeId folded_or(std::vector<NodeId> kids, std::int32_t decision) {
    std::vector<NodeId> out;
    for (NodeId k : kids) {
      if (circuit_.node(k).kind == NodeKind::True) return circuit_.mk_true();
      if (circuit_.node(k).kind == NodeKind::False) continue;
      out.push_back(k);
    }
    check_budget();
    const bool keep_decision = out.size() > 1;
    return circuit_.mk_or(std::move(out), keep_decision ? decision : -1);
  }

  // Shannon expansion with unit propagation and formula caching.
  NodeId compile(FormulaId f) {
    const BoolNode& n = arena().node(f);
    if (n.op == BoolOp::True) return circuit_.mk_true();
    if (n.op == BoolOp::False) return circuit_.mk_false();
    if (opts_.use_cache) {
      auto it = cache_.find(f);
      if (it != cache_.end()) return it->second;
    }

    // implied literals at the top level
    std::vector<NodeId> factors;
    FormulaId g = f;
    for (;;) {
      std::vector<std::pair<std::int32_t, bool>> units = collect_units(g);
      if (units.empty()) break;
      for (auto [var, val] : units) {
        factors.push_back(circuit_.mk_literal(var, val));
        g = condition(g, var, val);
      }
    }

    NodeId inner;
    const BoolNode& gn = arena().node(g);
    if (gn.op == BoolOp::True) {
      inner = circuit_.mk_true();
    } else if (gn.op == BoolOp::False) {
      inner = circuit_.mk_false();
    } else {
      std::int32_t v = pick_variable(g);
      NodeId pos = compile(condition(g, v, true));
      NodeId neg = compile(condition(g, v, false));
      NodeId branch_pos = folded_and({circuit_.mk_literal(v, true), pos});
      NodeId branch_neg = folded_and({circuit_.mk_literal(v, false), neg});
      inner = folded_or({branch_pos, branch_neg}, v);
    }

    factors.push_back(inner);
    NodeId result = folded_and(std::move(factors));
    if (opts_.use_cache) cache_.emplace(f, result);
    return result;
  }

  // Literal, or -1. f is in NNF.
  std::int32_t as_literal(FormulaId f, bool& positive) {
    const BoolNode& n = arena().node(f);
    if (n.op == BoolOp::Var) {
      positive = true;
      return n.var;
    }
    if (n.op == BoolOp::Not) {
      positive = false;
      return arena().node(n.kids[0]).var;
    }
    return -1;
  }

  std::vector<std::pair<std::int32_t, bool>> collect_units(FormulaId f) {
    std::vector<std::pair<std::int32_t, bool>> units;
    bool pos;
    std::int32_t v = as_literal(f, pos);
    if (v >= 0) {
      units.push_back({v, pos});
      return units;
    }
    const BoolNode& n = arena().node(f);
    if (n.op != BoolOp::And) return units;
    std::set<std::int32_t> seen;
    for (FormulaId k : n.kids) {
      v = as_literal(k, pos);
      if (v >= 0 && seen.insert(v).second) units.push_back({v, pos});
    }
    return units;
  }

  FormulaId condition(FormulaId f, std::int32_t var, bool val) {
    const std::uint64_t key = (static_cast<std::uint64_t>(static_cast<std::uint32_t>(f)) << 33) |
                              (static_cast<std::uint64_t>(static_cast<std::uint32_t>(var)) << 1) |
                              (val ? 1u : 0u);
    auto it = cond_memo_.find(key);
    if (it != cond_memo_.end()) return it->second;
    const BoolNode n = arena().node(f);  // copy; arena may reallocate
    FormulaId out = f;
    switch (n.op) {
      case BoolOp::True:
      case BoolOp::False:
        break;
      case BoolOp::Var:
        if (n.var == var) out = val ? arena().mk_true() : arena().mk_false();
        break;
      case BoolOp::Not:
        out = arena().mk_not(condition(n.kids[0], var, val));
        break;
      case BoolOp::And:
      case BoolOp::Or: {
        std::vector<FormulaId> kids;
        kids.reserve(n.kids.size());
        bool changed = false;
        for (FormulaId k : n.kids) {
          FormulaId ck = condition(k, var, val);
          changed |= ck != k;
          kids.push_back(ck);
        }
        if (changed)
          out = n.op == BoolOp::And ? arena().mk_and(std::move(kids))
                                    : arena().mk_or(std::move(kids));
        break;
      }
      case BoolOp::Iff:
        throw Error("internal: iff survived NNF conversion");
    }
    cond_memo_.emplace(key, out);
    return out;
  }

  std::int32_t pick_variable(FormulaId f) {
    std::int32_t best = -1;
    std::set<FormulaId> visited;
    scan(f, visited, best);
    if (best < 0) throw Error("internal: no free variable in non-constant formula");
    return best;
  }

  void scan(FormulaId f, std::set<FormulaId>& visited, std::int32_t& best) {
    if (!visited.insert(f).second) return;
    const BoolNode& n = arena().node(f);
    if (n.op == BoolOp::Var) {
      if (best < 0 || priority_[n.var] < priority_[best]) best = n.var;
      return;
    }
    for (FormulaId k : n.kids) scan(k, visited, best);
  }

  // Appearance: theory insertion order. MinDegree: reverse greedy
  // min-degree elimination order on the co-occurrence graph of the
  // top-level conjuncts, so central variables split first.
  std::vector<std::int32_t> split_order() {
    const std::int32_t n = static_cast<std::int32_t>(theory_.variables.size());
    std::vector<std::int32_t> order(n);
    for (std::int32_t i = 0; i < n; ++i) order[i] = i;
    if (opts_.order == VarOrder::Appearance || n == 0) return order;

    std::vector<std::set<std::int32_t>> adj(n);
    const BoolNode& top = theory_.arena.node(theory_.formula);
    std::vector<FormulaId> conjuncts =
        top.op == BoolOp::And ? top.kids : std::vector<FormulaId>{theory_.formula};
    for (FormulaId c : conjuncts) {
      std::set<FormulaId> visited;
      std::vector<std::int32_t> vars;
      collect_formula_vars(c, visited, vars);
      for (std::size_t i = 0; i < vars.size(); ++i)
        for (std::size_t j = i + 1; j < vars.size(); ++j) {
          adj[vars[i]].insert(vars[j]);
          adj[vars[j]].insert(vars[i]);
        }
    }
    std::vector<bool> eliminated(n, false);
    std::vector<std::int32_t> elimination;
    for (std::int32_t round = 0; round < n; ++round) {
      std::int32_t best = -1;
      std::size_t best_degree = 0;
      for (std::int32_t v = 0; v < n; ++v) {
        if (eliminated[v]) continue;
        std::size_t degree = 0;
        for (std::int32_t u : adj[v])
          if (!eliminated[u]) ++degree;
        if (best < 0 || degree < best_degree) {
          best = v;
          best_degree = degree;
        }
      }
      eliminated[best] = true;
      elimination.push_back(best);
      std::vector<std::int32_t> live;
      for (std::int32_t u : adj[best])
        if (!eliminated[u]) live.push_back(u);
      for (std::size_t i = 0; i < live.size(); ++i)
        for (std::size_t j = i + 1; j < live.size(); ++j) {
          adj[live[i]].insert(live[j]);
          adj[live[j]].insert(live[i]);
        }
    }
    std::reverse(elimination.begin(), elimination.end());
    return elimination;
  }

  void collect_formula_vars(FormulaId f, std::set<FormulaId>& visited,
                            std::vector<std::int32_t>& out) {
    if (!visited.insert(f).second) return;
    const BoolNode& n = theory_.arena.node(f);
    if (n.op == BoolOp::Var) {
      out.push_back(n.var);
      return;
    }
    for (FormulaId k : n.kids) collect_formula_vars(k, visited, out);
  }
};

}  // namespace detail

// Compiles a theory into a deterministic decomposable NNF circuit via
// top-down Shannon expansion. Not smoothed; run smooth() for counting-style
// semirings. The theory's arena grows with conditioned subformulas.
inline NnfCircuit compile_dnnf(PropositionalTheory& t, const CompileOptions& opts = {}) {
  return detail::Compiler(t, opts).run();
}

inline std::vector<std::int32_t> all_variable_ids(const PropositionalTheory& t) {
  std::vector<std::int32_t> ids(t.variables.size());
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<std::int32_t>(i);
  return ids;
}

}  // namespace alp
