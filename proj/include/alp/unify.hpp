#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "alp/ast.hpp"

namespace alp {

// Variable bindings. Kept fully resolved: no bound term contains a
// variable that is itself bound, so application is idempotent.
class Substitution {
 public:
  using Map = std::map<std::string, Term>;

  bool empty() const { return bindings_.empty(); }
  std::size_t size() const { return bindings_.size(); }
  const Map& bindings() const { return bindings_; }

  const Term* lookup(const std::string& var) const {
    auto it = bindings_.find(var);
    return it == bindings_.end() ? nullptr : &it->second;
  }

  Term apply(const Term& t) const {
    switch (t.kind) {
      case Term::Kind::Constant:
        return t;
      case Term::Kind::Variable: {
        const Term* bound = lookup(t.name);
        return bound ? *bound : t;
      }
      case Term::Kind::Compound: {
        Term out = t;
        for (Term& a : out.args) a = apply(a);
        return out;
      }
    }
    return t;
  }

  Atom apply(const Atom& a) const {
    Atom out{a.predicate, {}};
    out.args.reserve(a.args.size());
    for (const Term& t : a.args) out.args.push_back(apply(t));
    return out;
  }

  Literal apply(const Literal& l) const { return {apply(l.atom), l.positive}; }

  Clause apply(const Clause& c) const {
    Clause out{apply(c.head), {}};
    out.body.reserve(c.body.size());
    for (const Literal& l : c.body) out.body.push_back(apply(l));
    return out;
  }

  // Binds var to term, resolving existing bindings in `term` first and
  // rewriting previous bindings that mention var. Occurs check enforced.
  bool bind(const std::string& var, const Term& term) {
    Term resolved = apply(term);
    if (occurs(var, resolved)) return false;
    for (auto& [v, t] : bindings_) t = substitute_one(t, var, resolved);
    bindings_[var] = std::move(resolved);
    return true;
  }

  // this ∘ next: apply `next` to every binding, then adopt bindings of
  // `next` for variables not already bound.
  Substitution compose(const Substitution& next) const {
    Substitution out;
    for (const auto& [v, t] : bindings_) out.bindings_[v] = next.apply(t);
    for (const auto& [v, t] : next.bindings_) out.bindings_.emplace(v, t);
    return out;
  }

  Substitution restrict_to(const std::vector<std::string>& vars) const {
    Substitution out;
    for (const std::string& v : vars) {
      if (const Term* t = lookup(v)) out.bindings_[v] = *t;
    }
    return out;
  }

  std::string text() const {
    std::string out = "{";
    bool first = true;
    for (const auto& [v, t] : bindings_) {
      if (!first) out += ", ";
      first = false;
      out += v + " = " + t.text();
    }
    return out + "}";
  }

  static bool occurs(const std::string& var, const Term& t) {
    if (t.is_variable()) return t.name == var;
    for (const Term& a : t.args)
      if (occurs(var, a)) return true;
    return false;
  }

 private:
  static Term substitute_one(const Term& t, const std::string& var, const Term& value) {
    if (t.is_variable()) return t.name == var ? value : t;
    if (t.is_compound()) {
      Term out = t;
      for (Term& a : out.args) a = substitute_one(a, var, value);
      return out;
    }
    return t;
  }

  Map bindings_;
};

namespace detail {

inline bool unify_terms(const Term& a, const Term& b, Substitution& s) {
  Term x = s.apply(a);
  Term y = s.apply(b);
  if (x.is_variable()) {
    if (y.is_variable() && y.name == x.name) return true;
    return s.bind(x.name, y);
  }
  if (y.is_variable()) return s.bind(y.name, x);
  if (x.kind != y.kind || x.name != y.name || x.args.size() != y.args.size()) return false;
  for (std::size_t i = 0; i < x.args.size(); ++i)
    if (!unify_terms(x.args[i], y.args[i], s)) return false;
  return true;
}

}  // namespace detail

// Most general unifier with occurs check; std::nullopt when none exists.
inline std::optional<Substitution> unify(const Term& a, const Term& b,
                                         const Substitution& start = {}) {
  Substitution s = start;
  if (!detail::unify_terms(a, b, s)) return std::nullopt;
  return s;
}

inline std::optional<Substitution> unify(const Atom& a, const Atom& b,
                                         const Substitution& start = {}) {
  if (a.predicate != b.predicate || a.args.size() != b.args.size()) return std::nullopt;
  Substitution s = start;
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (!detail::unify_terms(a.args[i], b.args[i], s)) return std::nullopt;
  return s;
}

}  // namespace alp
