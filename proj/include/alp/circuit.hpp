#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "alp/errors.hpp"

namespace alp {

using NodeId = std::int32_t;

enum class NodeKind : std::uint8_t { False, True, Literal, And, Or };

struct CircuitNode {
  NodeKind kind;
  std::int32_t var = -1;        // Literal
  bool positive = true;         // Literal
  std::int32_t decision = -1;   // Or: Shannon decision variable, -1 if none
  std::vector<NodeId> kids;     // And/Or; evaluation order is child order
};

// Rooted NNF DAG with hash-consed nodes. Children always precede parents,
// so index order is a topological order.
class NnfCircuit {
 public:
  NnfCircuit() = default;
  explicit NnfCircuit(std::vector<std::string> var_names)
      : var_names_(std::move(var_names)) {}

  NodeId mk_false() { return add({NodeKind::False, -1, true, -1, {}}); }
  NodeId mk_true() { return add({NodeKind::True, -1, true, -1, {}}); }
  NodeId mk_literal(std::int32_t var, bool positive) {
    return add({NodeKind::Literal, var, positive, -1, {}});
  }
  NodeId mk_and(std::vector<NodeId> kids) {
    if (kids.empty()) return mk_true();
    if (kids.size() == 1) return kids[0];
    return add({NodeKind::And, -1, true, -1, std::move(kids)});
  }
  NodeId mk_or(std::vector<NodeId> kids, std::int32_t decision = -1) {
    if (kids.empty()) return mk_false();
    if (kids.size() == 1) return kids[0];
    return add({NodeKind::Or, -1, true, decision, std::move(kids)});
  }

  void set_root(NodeId r) { root_ = r; }
  NodeId root() const { return root_; }
  const CircuitNode& node(NodeId id) const { return nodes_[id]; }
  std::size_t node_count() const { return nodes_.size(); }
  const std::vector<std::string>& var_names() const { return var_names_; }
  const std::string& var_name(std::int32_t v) const { return var_names_[v]; }

  // Sorted variable ids mentioned at-or-below each node.
  const std::vector<std::int32_t>& varset(NodeId id) const {
    if (varsets_.size() != nodes_.size()) compute_varsets();
    return varsets_[id];
  }

  bool evaluate(NodeId id, const std::vector<bool>& assignment) const {
    const CircuitNode& n = nodes_[id];
    switch (n.kind) {
      case NodeKind::False: return false;
      case NodeKind::True: return true;
      case NodeKind::Literal: return assignment[n.var] == n.positive;
      case NodeKind::And:
        for (NodeId k : n.kids)
          if (!evaluate(k, assignment)) return false;
        return true;
      case NodeKind::Or:
        for (NodeId k : n.kids)
          if (evaluate(k, assignment)) return true;
        return false;
    }
    return false;
  }

  // Copy with only the nodes reachable from the root, preserving order.
  NnfCircuit compacted() const {
    NnfCircuit out(var_names_);
    std::vector<NodeId> remap(nodes_.size(), -1);
    std::vector<bool> live(nodes_.size(), false);
    mark(root_, live);
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      if (!live[i]) continue;
      CircuitNode n = nodes_[i];
      for (NodeId& k : n.kids) k = remap[k];
      remap[i] = out.add(std::move(n));
    }
    out.set_root(remap[root_]);
    return out;
  }

  // One node per line: id, kind, payload, child ids. Stable golden format.
  std::string serialize() const {
    std::string out =
        "nnf " + std::to_string(nodes_.size()) + " " + std::to_string(root_) + "\n";
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      const CircuitNode& n = nodes_[i];
      out += std::to_string(i) + " ";
      switch (n.kind) {
        case NodeKind::False: out += "F"; break;
        case NodeKind::True: out += "T"; break;
        case NodeKind::Literal:
          out += "L " + std::string(n.positive ? "" : "-") + var_names_[n.var];
          break;
        case NodeKind::And:
          out += "A";
          for (NodeId k : n.kids) out += " " + std::to_string(k);
          break;
        case NodeKind::Or:
          out += "O " + (n.decision >= 0 ? var_names_[n.decision] : std::string("-"));
          for (NodeId k : n.kids) out += " " + std::to_string(k);
          break;
      }
      out += "\n";
    }
    return out;
  }

  // Graphviz rendering; node ids are topological indices, so repeated
  // exports of the same circuit are byte-identical.
  std::string export_dot() const {
    std::string out = "digraph nnf {\n  rankdir=TB;\n";
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      const CircuitNode& n = nodes_[i];
      std::string label, shape = "ellipse";
      switch (n.kind) {
        case NodeKind::False: label = "false"; shape = "box"; break;
        case NodeKind::True: label = "true"; shape = "box"; break;
        case NodeKind::Literal:
          label = (n.positive ? "" : "!") + var_names_[n.var];
          shape = "box";
          break;
        case NodeKind::And: label = "AND"; break;
        case NodeKind::Or: label = "OR"; break;
      }
      out += "  n" + std::to_string(i) + " [label=\"" + label + "\" shape=" + shape + "];\n";
    }
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      for (NodeId k : nodes_[i].kids)
        out += "  n" + std::to_string(i) + " -> n" + std::to_string(k) + ";\n";
    }
    out += "}\n";
    return out;
  }

  NodeId add(CircuitNode n) {
    std::string key = key_of(n);
    auto it = intern_.find(key);
    if (it != intern_.end()) return it->second;
    NodeId id = static_cast<NodeId>(nodes_.size());
    nodes_.push_back(std::move(n));
    intern_.emplace(std::move(key), id);
    varsets_.clear();
    return id;
  }

 private:
  std::vector<CircuitNode> nodes_;
  std::unordered_map<std::string, NodeId> intern_;
  std::vector<std::string> var_names_;
  NodeId root_ = -1;
  mutable std::vector<std::vector<std::int32_t>> varsets_;

  static std::string key_of(const CircuitNode& n) {
    std::string k = std::to_string(static_cast<int>(n.kind)) + ":" + std::to_string(n.var) +
                    (n.positive ? "+" : "-") + std::to_string(n.decision);
    for (NodeId c : n.kids) k += "," + std::to_string(c);
    return k;
  }

  void mark(NodeId id, std::vector<bool>& live) const {
    if (id < 0 || live[id]) return;
    live[id] = true;
    for (NodeId k : nodes_[id].kids) mark(k, live);
  }

  void compute_varsets() const {
    varsets_.assign(nodes_.size(), {});
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      const CircuitNode& n = nodes_[i];
      if (n.kind == NodeKind::Literal) {
        varsets_[i] = {n.var};
        continue;
      }
      std::vector<std::int32_t> acc;
      for (NodeId k : n.kids) {
        std::vector<std::int32_t> merged;
        std::set_union(acc.begin(), acc.end(), varsets_[k].begin(), varsets_[k].end(),
                       std::back_inserter(merged));
        acc = std::move(merged);
      }
      varsets_[i] = std::move(acc);
    }
  }
};

// ---------------------------------------------------------------------------
// Smoothing
// ---------------------------------------------------------------------------

// Inserts (v | !v) factors so every disjunction's children mention the same
// variables and the root mentions all of `all_vars`. Logically equivalent;
// determinism and decomposability are preserved.
inline NnfCircuit smooth(const NnfCircuit& c, const std::vector<std::int32_t>& all_vars) {
  NnfCircuit out(c.var_names());
  std::vector<NodeId> remap(c.node_count(), -1);

  auto pad = [&out](NodeId base, const std::vector<std::int32_t>& missing) {
    if (missing.empty()) return base;
    std::vector<NodeId> factors{base};
    for (std::int32_t v : missing) {
      NodeId pos = out.mk_literal(v, true);
      NodeId neg = out.mk_literal(v, false);
      factors.push_back(out.mk_or({pos, neg}, v));
    }
    return out.mk_and(std::move(factors));
  };

  for (std::size_t i = 0; i < c.node_count(); ++i) {
    const CircuitNode& n = c.node(i);
    switch (n.kind) {
      case NodeKind::False: remap[i] = out.mk_false(); break;
      case NodeKind::True: remap[i] = out.mk_true(); break;
      case NodeKind::Literal: remap[i] = out.mk_literal(n.var, n.positive); break;
      case NodeKind::And: {
        std::vector<NodeId> kids;
        for (NodeId k : n.kids) kids.push_back(remap[k]);
        remap[i] = out.mk_and(std::move(kids));
        break;
      }
      case NodeKind::Or: {
        const std::vector<std::int32_t>& whole = c.varset(static_cast<NodeId>(i));
        std::vector<NodeId> kids;
        for (NodeId k : n.kids) {
          const std::vector<std::int32_t>& have = c.varset(k);
          std::vector<std::int32_t> missing;
          std::set_difference(whole.begin(), whole.end(), have.begin(), have.end(),
                              std::back_inserter(missing));
          kids.push_back(pad(remap[k], missing));
        }
        remap[i] = out.mk_or(std::move(kids), n.decision);
        break;
      }
    }
  }

  NodeId root = remap[c.root()];
  const std::vector<std::int32_t>& have = c.varset(c.root());
  std::vector<std::int32_t> want = all_vars;
  std::sort(want.begin(), want.end());
  std::vector<std::int32_t> missing;
  std::set_difference(want.begin(), want.end(), have.begin(), have.end(),
                      std::back_inserter(missing));
  // constant roots mention no variables; pad only satisfiable ones
  if (c.node(c.root()).kind == NodeKind::False) missing.clear();
  out.set_root(pad(root, missing));
  return out.compacted();
}

// ---------------------------------------------------------------------------
// Structural verification
// ---------------------------------------------------------------------------

struct StructuralReport {
  bool smooth = true;
  bool deterministic = true;
  bool decomposable = true;
  bool all() const { return smooth && deterministic && decomposable; }
};

namespace detail {

// Sign the child forces on `var` by its own structure: a literal on var,
// or an And with a direct literal child on var.
inline std::optional<bool> forced_sign(const NnfCircuit& c, NodeId id, std::int32_t var) {
  const CircuitNode& n = c.node(id);
  if (n.kind == NodeKind::Literal && n.var == var) return n.positive;
  if (n.kind == NodeKind::And) {
    for (NodeId k : n.kids) {
      const CircuitNode& kid = c.node(k);
      if (kid.kind == NodeKind::Literal && kid.var == var) return kid.positive;
    }
  }
  return std::nullopt;
}

inline bool pair_consistent(const NnfCircuit& c, NodeId a, NodeId b) {
  std::vector<std::int32_t> vars;
  std::set_union(c.varset(a).begin(), c.varset(a).end(), c.varset(b).begin(), c.varset(b).end(),
                 std::back_inserter(vars));
  if (vars.size() > 22)
    throw ResourceError("determinism check needs a SAT test over " +
                        std::to_string(vars.size()) + " variables; annotate decision variables");
  std::vector<bool> assignment(c.var_names().size(), false);
  const std::uint64_t total = 1ULL << vars.size();
  for (std::uint64_t m = 0; m < total; ++m) {
    for (std::size_t i = 0; i < vars.size(); ++i) assignment[vars[i]] = (m >> i) & 1;
    if (c.evaluate(a, assignment) && c.evaluate(b, assignment)) return true;
  }
  return false;
}

}  // namespace detail

// Checks the three sd-DNNF properties. Determinism uses the decision-variable
// annotation when a disjunction carries one and falls back to pairwise
// satisfiability tests otherwise.
inline StructuralReport verify_sd_dnnf(const NnfCircuit& c) {
  StructuralReport report;
  for (std::size_t i = 0; i < c.node_count(); ++i) {
    const CircuitNode& n = c.node(i);
    if (n.kind == NodeKind::And) {
      for (std::size_t a = 0; a < n.kids.size() && report.decomposable; ++a) {
        for (std::size_t b = a + 1; b < n.kids.size(); ++b) {
          const auto& va = c.varset(n.kids[a]);
          const auto& vb = c.varset(n.kids[b]);
          std::vector<std::int32_t> shared;
          std::set_intersection(va.begin(), va.end(), vb.begin(), vb.end(),
                                std::back_inserter(shared));
          if (!shared.empty()) {
            report.decomposable = false;
            break;
          }
        }
      }
    }
    if (n.kind == NodeKind::Or) {
      for (std::size_t a = 1; a < n.kids.size(); ++a)
        if (c.varset(n.kids[a]) != c.varset(n.kids[0])) report.smooth = false;

      bool via_annotation = false;
      if (n.decision >= 0) {
        via_annotation = true;
        std::optional<bool> seen_pos, seen_neg;
        for (NodeId k : n.kids) {
          std::optional<bool> sign = detail::forced_sign(c, k, n.decision);
          if (!sign) {
            via_annotation = false;  // annotation inconclusive, use SAT tests
            break;
          }
          auto& slot = *sign ? seen_pos : seen_neg;
          if (slot) {
            via_annotation = false;  // two children on the same branch
            break;
          }
          slot = true;
        }
      }
      if (!via_annotation && report.deterministic) {
        for (std::size_t a = 0; a < n.kids.size() && report.deterministic; ++a)
          for (std::size_t b = a + 1; b < n.kids.size(); ++b)
            if (detail::pair_consistent(c, n.kids[a], n.kids[b])) {
              report.deterministic = false;
              break;
            }
      }
    }
  }
  return report;
}

}  // namespace alp
