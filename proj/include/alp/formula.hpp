#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "alp/errors.hpp"
#include "alp/util.hpp"

namespace alp {

using FormulaId = std::int32_t;

enum class BoolOp : std::uint8_t { False, True, Var, Not, And, Or, Iff };

struct BoolNode {
  BoolOp op;
  std::int32_t var = -1;  // Var only
  std::vector<FormulaId> kids;
};

// Hash-consed Boolean expressions with light canonicalization: flattened
// and sorted n-ary and/or, constant folding, double-negation removal and
// complementary-literal detection.
class FormulaArena {
 public:
  FormulaArena() {
    false_ = add({BoolOp::False, -1, {}});
    true_ = add({BoolOp::True, -1, {}});
  }

  FormulaId mk_false() const { return false_; }
  FormulaId mk_true() const { return true_; }

  FormulaId mk_var(std::int32_t v) { return add({BoolOp::Var, v, {}}); }

  FormulaId mk_not(FormulaId f) {
    const BoolNode& n = node(f);
    if (n.op == BoolOp::False) return true_;
    if (n.op == BoolOp::True) return false_;
    if (n.op == BoolOp::Not) return n.kids[0];
    return add({BoolOp::Not, -1, {f}});
  }

  FormulaId mk_and(std::vector<FormulaId> kids) { return mk_nary(BoolOp::And, std::move(kids)); }
  FormulaId mk_or(std::vector<FormulaId> kids) { return mk_nary(BoolOp::Or, std::move(kids)); }

  FormulaId mk_iff(FormulaId a, FormulaId b) {
    if (a == b) return true_;
    if (node(a).op == BoolOp::True) return b;
    if (node(b).op == BoolOp::True) return a;
    if (node(a).op == BoolOp::False) return mk_not(b);
    if (node(b).op == BoolOp::False) return mk_not(a);
    if (a > b) std::swap(a, b);
    return add({BoolOp::Iff, -1, {a, b}});
  }

  const BoolNode& node(FormulaId f) const { return nodes_[f]; }
  std::size_t size() const { return nodes_.size(); }

  bool eval(FormulaId f, const std::vector<bool>& assignment) const {
    const BoolNode& n = node(f);
    switch (n.op) {
      case BoolOp::False: return false;
      case BoolOp::True: return true;
      case BoolOp::Var: return assignment[n.var];
      case BoolOp::Not: return !eval(n.kids[0], assignment);
      case BoolOp::And:
        for (FormulaId k : n.kids)
          if (!eval(k, assignment)) return false;
        return true;
      case BoolOp::Or:
        for (FormulaId k : n.kids)
          if (eval(k, assignment)) return true;
        return false;
      case BoolOp::Iff: return eval(n.kids[0], assignment) == eval(n.kids[1], assignment);
    }
    return false;
  }

  // Negation-normal form: not only over variables, iff expanded into the
  // conjunction of both implications.
  FormulaId to_nnf(FormulaId f, bool positive = true) {
    const BoolNode n = node(f);  // copy: nodes_ may reallocate below
    switch (n.op) {
      case BoolOp::False: return positive ? false_ : true_;
      case BoolOp::True: return positive ? true_ : false_;
      case BoolOp::Var: return positive ? f : mk_not(f);
      case BoolOp::Not: return to_nnf(n.kids[0], !positive);
      case BoolOp::And: {
        std::vector<FormulaId> kids;
        kids.reserve(n.kids.size());
        for (FormulaId k : n.kids) kids.push_back(to_nnf(k, positive));
        return positive ? mk_and(std::move(kids)) : mk_or(std::move(kids));
      }
      case BoolOp::Or: {
        std::vector<FormulaId> kids;
        kids.reserve(n.kids.size());
        for (FormulaId k : n.kids) kids.push_back(to_nnf(k, positive));
        return positive ? mk_or(std::move(kids)) : mk_and(std::move(kids));
      }
      case BoolOp::Iff: {
        FormulaId a = n.kids[0], b = n.kids[1];
        if (positive) {
          FormulaId left = mk_or({to_nnf(a, false), to_nnf(b, true)});
          FormulaId right = mk_or({to_nnf(a, true), to_nnf(b, false)});
          return mk_and({left, right});
        }
        FormulaId left = mk_or({to_nnf(a, true), to_nnf(b, true)});
        FormulaId right = mk_or({to_nnf(a, false), to_nnf(b, false)});
        return mk_and({left, right});
      }
    }
    return f;
  }

  std::string to_text(FormulaId f, const std::vector<std::string>& names) const {
    const BoolNode& n = node(f);
    switch (n.op) {
      case BoolOp::False: return "false";
      case BoolOp::True: return "true";
      case BoolOp::Var: return names[n.var];
      case BoolOp::Not: return "!" + wrap(n.kids[0], names);
      case BoolOp::And: return join(n.kids, " & ", names);
      case BoolOp::Or: return join(n.kids, " | ", names);
      case BoolOp::Iff:
        return wrap(n.kids[0], names) + " <-> " + wrap(n.kids[1], names);
    }
    return "?";
  }

 private:
  std::vector<BoolNode> nodes_;
  std::unordered_map<std::string, FormulaId> intern_;
  FormulaId false_ = 0, true_ = 0;

  static std::string key_of(const BoolNode& n) {
    std::string k = std::to_string(static_cast<int>(n.op)) + ":" + std::to_string(n.var);
    for (FormulaId c : n.kids) k += "," + std::to_string(c);
    return k;
  }

  FormulaId add(BoolNode n) {
    std::string key = key_of(n);
    auto it = intern_.find(key);
    if (it != intern_.end()) return it->second;
    FormulaId id = static_cast<FormulaId>(nodes_.size());
    nodes_.push_back(std::move(n));
    intern_.emplace(std::move(key), id);
    return id;
  }

  // Literal's variable, or -1. Sign via `positive`.
  std::int32_t literal_var(FormulaId f, bool& positive) const {
    const BoolNode& n = node(f);
    if (n.op == BoolOp::Var) {
      positive = true;
      return n.var;
    }
    if (n.op == BoolOp::Not && node(n.kids[0]).op == BoolOp::Var) {
      positive = false;
      return node(n.kids[0]).var;
    }
    return -1;
  }

  FormulaId mk_nary(BoolOp op, std::vector<FormulaId> kids) {
    const FormulaId absorbing = op == BoolOp::And ? false_ : true_;
    const FormulaId neutral = op == BoolOp::And ? true_ : false_;
    std::vector<FormulaId> flat;
    for (FormulaId k : kids) {
      if (k == absorbing) return absorbing;
      if (k == neutral) continue;
      if (node(k).op == op) {
        for (FormulaId kk : node(k).kids) flat.push_back(kk);
      } else {
        flat.push_back(k);
      }
    }
    std::sort(flat.begin(), flat.end());
    flat.erase(std::unique(flat.begin(), flat.end()), flat.end());
    if (flat.empty()) return neutral;
    if (flat.size() == 1) return flat[0];
    // x & !x -> false, x | !x -> true
    std::unordered_map<std::int32_t, int> signs;
    for (FormulaId k : flat) {
      bool pos;
      std::int32_t v = literal_var(k, pos);
      if (v < 0) continue;
      int bit = pos ? 1 : 2;
      if ((signs[v] |= bit) == 3) return absorbing;
    }
    return add({op, -1, std::move(flat)});
  }

  std::string wrap(FormulaId f, const std::vector<std::string>& names) const {
    const BoolOp op = node(f).op;
    bool atomic = op == BoolOp::Var || op == BoolOp::True || op == BoolOp::False ||
                  op == BoolOp::Not;
    return atomic ? to_text(f, names) : "(" + to_text(f, names) + ")";
  }

  std::string join(const std::vector<FormulaId>& kids, const char* sep,
                   const std::vector<std::string>& names) const {
    std::string out;
    for (std::size_t i = 0; i < kids.size(); ++i) {
      if (i) out += sep;
      out += wrap(kids[i], names);
    }
    return out;
  }
};

// Boolean formula over named variables; one variable per ground atom, the
// variable name being the atom's canonical text.
struct PropositionalTheory {
  FormulaArena arena;
  std::vector<std::string> variables;
  std::unordered_map<std::string, std::int32_t> var_ids;
  FormulaId formula = 1;  // true

  std::int32_t var_id(const std::string& name) {
    auto it = var_ids.find(name);
    if (it != var_ids.end()) return it->second;
    std::int32_t id = static_cast<std::int32_t>(variables.size());
    variables.push_back(name);
    var_ids.emplace(name, id);
    return id;
  }

  const std::int32_t* find_var(const std::string& name) const {
    auto it = var_ids.find(name);
    return it == var_ids.end() ? nullptr : &it->second;
  }

  std::string to_text() const { return arena.to_text(formula, variables); }

  // Equivalent CNF over the same variables, obtained by NNF conversion and
  // distribution. Diagnostic export; feasible at desk scale only.
  std::vector<std::vector<int>> to_clauses() {
    FormulaId nnf = arena.to_nnf(formula);
    std::vector<std::vector<int>> clauses;
    distribute(nnf, clauses);
    return clauses;
  }

  std::string to_dimacs() {
    std::vector<std::vector<int>> clauses = to_clauses();
    std::string out;
    for (std::size_t v = 0; v < variables.size(); ++v)
      out += "c var " + std::to_string(v + 1) + " = " + variables[v] + "\n";
    out += "p cnf " + std::to_string(variables.size()) + " " + std::to_string(clauses.size()) +
           "\n";
    for (const auto& cl : clauses) {
      for (int lit : cl) out += std::to_string(lit) + " ";
      out += "0\n";
    }
    return out;
  }

 private:
  // f is in NNF; appends clauses (DIMACS literals, 1-based).
  void distribute(FormulaId f, std::vector<std::vector<int>>& clauses) {
    const BoolNode& n = arena.node(f);
    switch (n.op) {
      case BoolOp::True: return;
      case BoolOp::False:
        clauses.push_back({});
        return;
      case BoolOp::Var:
        clauses.push_back({n.var + 1});
        return;
      case BoolOp::Not:
        clauses.push_back({-(arena.node(n.kids[0]).var + 1)});
        return;
      case BoolOp::And:
        for (FormulaId k : n.kids) distribute(k, clauses);
        return;
      case BoolOp::Or: {
        std::vector<std::vector<int>> acc{{}};
        for (FormulaId k : n.kids) {
          std::vector<std::vector<int>> sub;
          distribute(k, sub);
          std::vector<std::vector<int>> next;
          for (const auto& a : acc)
            for (const auto& b : sub) {
              std::vector<int> merged = a;
              merged.insert(merged.end(), b.begin(), b.end());
              next.push_back(std::move(merged));
            }
          acc = std::move(next);
        }
        for (auto& cl : acc) {
          std::sort(cl.begin(), cl.end(), [](int a, int b) {
            return std::abs(a) != std::abs(b) ? std::abs(a) < std::abs(b) : a < b;
          });
          cl.erase(std::unique(cl.begin(), cl.end()), cl.end());
          bool tautology = false;
          for (std::size_t i = 0; i + 1 < cl.size(); ++i)
            if (std::abs(cl[i]) == std::abs(cl[i + 1])) tautology = true;
          if (!tautology) clauses.push_back(std::move(cl));
        }
        return;
      }
      case BoolOp::Iff:
        throw Error("internal: iff in NNF formula");
    }
  }
};

}  // namespace alp
