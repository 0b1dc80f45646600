#pragma once

#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "alp/errors.hpp"
#include "alp/util.hpp"

namespace alp {

// ---------------------------------------------------------------------------
// Terms, atoms, literals, clauses
// ---------------------------------------------------------------------------

struct Term {
  enum class Kind { Constant, Variable, Compound };

  Kind kind = Kind::Constant;
  // Constant text, variable name, or compound functor.
  std::string name;
  // Set when the constant was written as a number; name holds its
  // canonical decimal form.
  std::optional<double> number;
  std::vector<Term> args;  // compound only

  static Term constant(std::string n) { return {Kind::Constant, std::move(n), std::nullopt, {}}; }
  static Term number_constant(double v) {
    return {Kind::Constant, format_real(v), v, {}};
  }
  static Term variable(std::string n) { return {Kind::Variable, std::move(n), std::nullopt, {}}; }
  static Term compound(std::string functor, std::vector<Term> a) {
    return {Kind::Compound, std::move(functor), std::nullopt, std::move(a)};
  }

  bool is_constant() const { return kind == Kind::Constant; }
  bool is_variable() const { return kind == Kind::Variable; }
  bool is_compound() const { return kind == Kind::Compound; }
  bool is_numeric() const { return kind == Kind::Constant && number.has_value(); }

  bool is_ground() const {
    if (kind == Kind::Variable) return false;
    for (const Term& a : args)
      if (!a.is_ground()) return false;
    return true;
  }

  bool operator==(const Term& o) const {
    return kind == o.kind && name == o.name && args == o.args;
  }
  bool operator!=(const Term& o) const { return !(*this == o); }

  std::string text() const {
    if (kind != Kind::Compound) return name;
    std::string out = name + "(";
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (i) out += ",";
      out += args[i].text();
    }
    return out + ")";
  }
};

struct Atom {
  std::string predicate;
  std::vector<Term> args;

  std::size_t arity() const { return args.size(); }
  // Name/arity pair identifying the predicate.
  std::string indicator() const { return predicate + "/" + std::to_string(args.size()); }

  bool is_ground() const {
    for (const Term& a : args)
      if (!a.is_ground()) return false;
    return true;
  }

  bool operator==(const Atom& o) const { return predicate == o.predicate && args == o.args; }
  bool operator!=(const Atom& o) const { return !(*this == o); }

  std::string text() const {
    if (args.empty()) return predicate;
    std::string out = predicate + "(";
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (i) out += ",";
      out += args[i].text();
    }
    return out + ")";
  }
};

struct Literal {
  Atom atom;
  bool positive = true;

  bool operator==(const Literal& o) const { return positive == o.positive && atom == o.atom; }
  std::string text() const { return positive ? atom.text() : "\\+ " + atom.text(); }
};

struct Clause {
  Atom head;
  std::vector<Literal> body;  // empty body = fact

  bool is_fact() const { return body.empty(); }
  bool is_ground() const {
    if (!head.is_ground()) return false;
    for (const Literal& l : body)
      if (!l.atom.is_ground()) return false;
    return true;
  }
  bool operator==(const Clause& o) const { return head == o.head && body == o.body; }

  std::string text() const {
    if (body.empty()) return head.text();
    std::string out = head.text() + " :- ";
    for (std::size_t i = 0; i < body.size(); ++i) {
      if (i) out += ", ";
      out += body[i].text();
    }
    return out;
  }
};

// ---------------------------------------------------------------------------
// Distributions and measurable-set constraints
// ---------------------------------------------------------------------------

struct DistributionExpr {
  enum class Kind { Flip, Beta, Normal, Uniform };

  Kind kind = Kind::Flip;
  std::vector<double> params;

  static const char* kind_name(Kind k) {
    switch (k) {
      case Kind::Flip: return "flip";
      case Kind::Beta: return "beta";
      case Kind::Normal: return "normal";
      case Kind::Uniform: return "uniform";
    }
    return "?";
  }

  void validate() const {
    switch (kind) {
      case Kind::Flip:
        if (params.size() != 1 || params[0] < 0.0 || params[0] > 1.0)
          throw ValidationError("flip/1 expects one probability in [0,1]");
        break;
      case Kind::Beta:
        if (params.size() != 2 || params[0] <= 0.0 || params[1] <= 0.0)
          throw ValidationError("beta/2 expects two positive shape parameters");
        break;
      case Kind::Normal:
        if (params.size() != 2 || params[1] <= 0.0)
          throw ValidationError("normal/2 expects a mean and a positive deviation");
        break;
      case Kind::Uniform:
        if (params.size() != 2 || params[0] >= params[1])
          throw ValidationError("uniform/2 expects bounds lo < hi");
        break;
    }
  }

  bool is_discrete() const { return kind == Kind::Flip; }

  bool operator==(const DistributionExpr& o) const {
    return kind == o.kind && params == o.params;
  }

  std::string text() const {
    std::string out = kind_name(kind);
    out += "(";
    for (std::size_t i = 0; i < params.size(); ++i) {
      if (i) out += ", ";
      out += format_real(params[i]);
    }
    return out + ")";
  }
};

struct ConstraintExpr {
  enum class Rel { Eq, Lt, Gt, Le, Ge };

  Term var;  // ground term naming the random variable
  Rel rel = Rel::Eq;
  double bound = 0.0;

  static const char* rel_text(Rel r) {
    switch (r) {
      case Rel::Eq: return "=";
      case Rel::Lt: return "<";
      case Rel::Gt: return ">";
      case Rel::Le: return "=<";
      case Rel::Ge: return ">=";
    }
    return "?";
  }

  bool holds(double x) const {
    switch (rel) {
      case Rel::Eq: return x == bound;
      case Rel::Lt: return x < bound;
      case Rel::Gt: return x > bound;
      case Rel::Le: return x <= bound;
      case Rel::Ge: return x >= bound;
    }
    return false;
  }

  bool operator==(const ConstraintExpr& o) const {
    return var == o.var && rel == o.rel && bound == o.bound;
  }

  std::string text() const {
    return var.text() + " " + rel_text(rel) + " " + format_real(bound);
  }
};

// ---------------------------------------------------------------------------
// Fact declarations
// ---------------------------------------------------------------------------

struct LogicalFact {
  bool operator==(const LogicalFact&) const { return true; }
};

struct ProbabilisticFact {
  double prob = 0.0;
  bool learnable = false;  // written t(p)

  bool operator==(const ProbabilisticFact& o) const {
    return prob == o.prob && learnable == o.learnable;
  }
};

// Opaque semiring-domain label; interpreted by the active semiring.
struct AlgebraicFact {
  std::string label;
  bool operator==(const AlgebraicFact& o) const { return label == o.label; }
};

struct NeuralFact {
  std::string model_id;
  std::vector<Term> inputs;  // ground constants
  bool operator==(const NeuralFact& o) const {
    return model_id == o.model_id && inputs == o.inputs;
  }
};

// x ~ d : the atom slot of the FactDecl is unused.
struct DistributionalFact {
  Term var;
  DistributionExpr dist;
  bool operator==(const DistributionalFact& o) const {
    return var == o.var && dist == o.dist;
  }
};

struct IndicatorFact {
  ConstraintExpr constraint;
  bool operator==(const IndicatorFact& o) const { return constraint == o.constraint; }
};

// Member of an exactly-one cell group produced by interval partitioning.
// Labeled (weight, e_otimes); never written in source programs.
struct PartitionFact {
  double weight = 0.0;
  int group = 0;
  bool operator==(const PartitionFact& o) const {
    return weight == o.weight && group == o.group;
  }
};

using FactLabel = std::variant<LogicalFact, ProbabilisticFact, AlgebraicFact, NeuralFact,
                               DistributionalFact, IndicatorFact, PartitionFact>;

struct FactDecl {
  FactLabel label;
  Atom atom;  // empty for distributional facts

  bool is_logical() const { return std::holds_alternative<LogicalFact>(label); }
  bool is_distributional() const { return std::holds_alternative<DistributionalFact>(label); }
  // Carries a semiring label (everything except plain logical facts and
  // distributional declarations).
  bool is_labeled() const { return !is_logical() && !is_distributional(); }

  bool operator==(const FactDecl& o) const { return label == o.label && atom == o.atom; }

  std::string text() const {
    struct Printer {
      const Atom& atom;
      std::string operator()(const LogicalFact&) const { return atom.text(); }
      std::string operator()(const ProbabilisticFact& f) const {
        std::string p = format_real(f.prob);
        return (f.learnable ? "t(" + p + ")" : p) + " :: " + atom.text();
      }
      std::string operator()(const AlgebraicFact& f) const {
        return "{" + f.label + "} :: " + atom.text();
      }
      std::string operator()(const NeuralFact& f) const {
        std::string out = "nn(" + f.model_id + ", [";
        for (std::size_t i = 0; i < f.inputs.size(); ++i) {
          if (i) out += ", ";
          out += f.inputs[i].text();
        }
        return out + "]) :: " + atom.text();
      }
      std::string operator()(const DistributionalFact& f) const {
        return f.var.text() + " ~ " + f.dist.text();
      }
      std::string operator()(const IndicatorFact& f) const {
        return "[" + f.constraint.text() + "] :: " + atom.text();
      }
      std::string operator()(const PartitionFact& f) const {
        return "{" + format_real(f.weight) + " ; 1} :: " + atom.text();
      }
    };
    return std::visit(Printer{atom}, label);
  }
};

struct AnnotatedRule {
  FactLabel label;
  Clause clause;
  bool operator==(const AnnotatedRule& o) const {
    return label == o.label && clause == o.clause;
  }

  std::string text() const {
    FactDecl tmp{label, clause.head};
    std::string head = tmp.text();
    std::string out = head + " :- ";
    for (std::size_t i = 0; i < clause.body.size(); ++i) {
      if (i) out += ", ";
      out += clause.body[i].text();
    }
    return out;
  }
};

// ---------------------------------------------------------------------------
// Programs
// ---------------------------------------------------------------------------

struct Program {
  std::vector<FactDecl> facts;
  std::vector<Clause> rules;
  std::vector<AnnotatedRule> annotated_rules;
  // Indices into `facts` forming exactly-one groups (reduction output).
  std::vector<std::vector<int>> exclusive_groups;

  bool operator==(const Program& o) const {
    return facts == o.facts && rules == o.rules && annotated_rules == o.annotated_rules &&
           exclusive_groups == o.exclusive_groups;
  }
};

// Canonical source form; parse(pretty_print(p)) is structurally p for
// programs without partition facts.
inline std::string pretty_print(const Program& p) {
  std::ostringstream out;
  for (const FactDecl& f : p.facts) out << f.text() << ".\n";
  for (const AnnotatedRule& r : p.annotated_rules) out << r.text() << ".\n";
  for (const Clause& c : p.rules) out << c.text() << ".\n";
  return out.str();
}

}  // namespace alp
