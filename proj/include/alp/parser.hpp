#pragma once

#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "alp/ast.hpp"
#include "alp/lexer.hpp"

namespace alp {

namespace detail {

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Program parse_program() {
    Program p;
    while (!done()) parse_statement(p);
    return p;
  }

  Atom parse_single_atom() {
    Atom a = parse_atom();
    if (at(Token::Kind::Dot)) ++pos_;
    if (!done()) fail("trailing input after query atom");
    return a;
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  int fresh_counter_ = 0;

  bool done() const { return pos_ >= toks_.size(); }
  const Token& peek(std::size_t k = 0) const {
    static const Token eof{Token::Kind::Dot, "", 0.0, 0, 0};
    return pos_ + k < toks_.size() ? toks_[pos_ + k] : eof;
  }
  bool at(Token::Kind k, std::size_t ahead = 0) const {
    return pos_ + ahead < toks_.size() && toks_[pos_ + ahead].kind == k;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    if (pos_ < toks_.size())
      throw ParseError(msg, toks_[pos_].line, toks_[pos_].column);
    int line = toks_.empty() ? 1 : toks_.back().line;
    int col = toks_.empty() ? 1 : toks_.back().column;
    throw ParseError(msg + " at end of input", line, col);
  }
  Token expect(Token::Kind k, const char* what) {
    if (!at(k)) fail(std::string("expected ") + what);
    return toks_[pos_++];
  }

  // --- terms -------------------------------------------------------------

  Term parse_term() {
    if (at(Token::Kind::Number)) {
      return Term::number_constant(toks_[pos_++].number);
    }
    if (at(Token::Kind::Variable)) {
      Token t = toks_[pos_++];
      if (t.text == "_")  // each anonymous variable is distinct
        return Term::variable("_G" + std::to_string(++fresh_counter_));
      return Term::variable(t.text);
    }
    if (at(Token::Kind::Atom)) {
      Token t = toks_[pos_++];
      if (at(Token::Kind::LParen)) {
        ++pos_;
        std::vector<Term> args;
        args.push_back(parse_term());
        while (at(Token::Kind::Comma)) {
          ++pos_;
          args.push_back(parse_term());
        }
        expect(Token::Kind::RParen, "')'");
        return Term::compound(t.text, std::move(args));
      }
      return Term::constant(t.text);
    }
    fail("expected a term");
  }

  Atom term_to_atom(Term t) {
    if (t.is_variable() || t.is_numeric()) fail("expected an atom");
    if (t.is_compound()) return Atom{std::move(t.name), std::move(t.args)};
    return Atom{std::move(t.name), {}};
  }

  Atom parse_atom() { return term_to_atom(parse_term()); }

  std::vector<Literal> parse_body() {
    std::vector<Literal> body;
    for (;;) {
      bool positive = true;
      if (at(Token::Kind::NegBody)) {
        ++pos_;
        positive = false;
      }
      body.push_back({parse_atom(), positive});
      if (!at(Token::Kind::Comma)) break;
      ++pos_;
    }
    return body;
  }

  // --- labels ------------------------------------------------------------

  double parse_probability() {
    Token t = expect(Token::Kind::Number, "a probability");
    if (t.number < 0.0 || t.number > 1.0)
      throw ValidationError("probability " + t.text + " outside [0,1] (line " +
                            std::to_string(t.line) + ")");
    return t.number;
  }

  bool at_learnable_label() const {
    return at(Token::Kind::Atom) && peek().text == "t" && at(Token::Kind::LParen, 1) &&
           at(Token::Kind::Number, 2) && at(Token::Kind::RParen, 3) &&
           at(Token::Kind::DoubleColon, 4);
  }

  // nn is a reserved functor; `nn(...)` in label position is always neural.
  bool at_neural_label() const {
    return at(Token::Kind::Atom) && peek().text == "nn" && at(Token::Kind::LParen, 1);
  }

  FactLabel parse_neural_label() {
    expect(Token::Kind::Atom, "nn");
    expect(Token::Kind::LParen, "'('");
    Token id = expect(Token::Kind::Atom, "a model identifier");
    expect(Token::Kind::Comma, "','");
    expect(Token::Kind::LBracket, "'['");
    std::vector<Term> inputs;
    if (!at(Token::Kind::RBracket)) {
      inputs.push_back(parse_neural_input());
      while (at(Token::Kind::Comma)) {
        ++pos_;
        inputs.push_back(parse_neural_input());
      }
    }
    expect(Token::Kind::RBracket, "']'");
    expect(Token::Kind::RParen, "')'");
    return NeuralFact{id.text, std::move(inputs)};
  }

  Term parse_neural_input() {
    Term t = parse_term();
    if (!t.is_constant()) fail("neural-fact inputs must be ground constants");
    return t;
  }

  ConstraintExpr parse_constraint() {
    Term var = parse_term();
    if (!var.is_ground()) fail("constraint variable must be a ground term");
    ConstraintExpr c;
    c.var = std::move(var);
    if (at(Token::Kind::RelEq)) c.rel = ConstraintExpr::Rel::Eq;
    else if (at(Token::Kind::RelLt)) c.rel = ConstraintExpr::Rel::Lt;
    else if (at(Token::Kind::RelGt)) c.rel = ConstraintExpr::Rel::Gt;
    else if (at(Token::Kind::RelLe)) c.rel = ConstraintExpr::Rel::Le;
    else if (at(Token::Kind::RelGe)) c.rel = ConstraintExpr::Rel::Ge;
    else fail("expected a comparison operator");
    ++pos_;
    Token b = expect(Token::Kind::Number, "a numeric bound");
    c.bound = b.number;
    return c;
  }

  DistributionExpr parse_distribution() {
    Token f = expect(Token::Kind::Atom, "a distribution");
    DistributionExpr d;
    if (f.text == "flip") d.kind = DistributionExpr::Kind::Flip;
    else if (f.text == "beta") d.kind = DistributionExpr::Kind::Beta;
    else if (f.text == "normal") d.kind = DistributionExpr::Kind::Normal;
    else if (f.text == "uniform") d.kind = DistributionExpr::Kind::Uniform;
    else fail("unknown distribution '" + f.text + "' (supported: flip, beta, normal, uniform)");
    expect(Token::Kind::LParen, "'('");
    d.params.push_back(expect(Token::Kind::Number, "a numeric parameter").number);
    while (at(Token::Kind::Comma)) {
      ++pos_;
      d.params.push_back(expect(Token::Kind::Number, "a numeric parameter").number);
    }
    expect(Token::Kind::RParen, "')'");
    d.validate();
    return d;
  }

  // --- statements ----------------------------------------------------------

  void finish_statement(Program& p, FactLabel label, Atom atom) {
    if (at(Token::Kind::Implies)) {
      ++pos_;
      Clause c{std::move(atom), parse_body()};
      expect(Token::Kind::Dot, "'.'");
      if (std::holds_alternative<LogicalFact>(label))
        p.rules.push_back(std::move(c));
      else
        p.annotated_rules.push_back({std::move(label), std::move(c)});
      return;
    }
    expect(Token::Kind::Dot, "'.'");
    p.facts.push_back({std::move(label), std::move(atom)});
  }

  void parse_statement(Program& p) {
    if (at(Token::Kind::Number)) {  // p :: f
      double prob = parse_probability();
      expect(Token::Kind::DoubleColon, "'::'");
      finish_statement(p, ProbabilisticFact{prob, false}, parse_atom());
      return;
    }
    if (at_learnable_label()) {  // t(p) :: f
      pos_ += 2;
      double prob = parse_probability();
      pos_ += 1;  // ')'
      expect(Token::Kind::DoubleColon, "'::'");
      finish_statement(p, ProbabilisticFact{prob, true}, parse_atom());
      return;
    }
    if (at_neural_label()) {  // nn(m, [x...]) :: f
      FactLabel label = parse_neural_label();
      expect(Token::Kind::DoubleColon, "'::'");
      finish_statement(p, std::move(label), parse_atom());
      return;
    }
    if (at(Token::Kind::Opaque)) {  // {a} :: f
      std::string payload = toks_[pos_++].text;
      expect(Token::Kind::DoubleColon, "'::'");
      finish_statement(p, AlgebraicFact{std::move(payload)}, parse_atom());
      return;
    }
    if (at(Token::Kind::LBracket)) {  // [x > 0.6] :: f
      ++pos_;
      ConstraintExpr c = parse_constraint();
      expect(Token::Kind::RBracket, "']'");
      expect(Token::Kind::DoubleColon, "'::'");
      finish_statement(p, IndicatorFact{std::move(c)}, parse_atom());
      return;
    }
    // atom | rule | distributional fact
    Term t = parse_term();
    if (at(Token::Kind::Tilde)) {  // x ~ d
      ++pos_;
      if (!t.is_ground()) fail("distributional variable must be ground");
      DistributionExpr d = parse_distribution();
      expect(Token::Kind::Dot, "'.'");
      p.facts.push_back({DistributionalFact{std::move(t), std::move(d)}, Atom{}});
      return;
    }
    finish_statement(p, LogicalFact{}, term_to_atom(std::move(t)));
  }
};

}  // namespace detail

// Parses a program source; throws ParseError / ValidationError.
inline Program parse_program(std::string_view source) {
  return detail::Parser(tokenize(source)).parse_program();
}

// Parses a single (possibly non-ground) query atom.
inline Atom parse_query(std::string_view text) {
  detail::Parser p(tokenize(text));
  return p.parse_single_atom();
}

// Structural invariants that span statements. Expects a desugared program
// (no annotated rules); the pipeline calls this after desugaring.
inline void validate_program(const Program& p) {
  std::set<std::string> rule_heads;
  for (const Clause& c : p.rules) rule_heads.insert(c.head.predicate);
  if (!p.annotated_rules.empty())
    throw ValidationError("internal: validate_program expects a desugared program");

  std::set<std::string> labeled_preds;
  std::set<std::string> fact_atom_texts;
  std::unordered_map<std::string, int> dist_vars;  // var text -> fact index

  for (std::size_t i = 0; i < p.facts.size(); ++i) {
    const FactDecl& f = p.facts[i];
    if (f.is_distributional()) {
      const auto& d = std::get<DistributionalFact>(f.label);
      if (!d.var.is_ground())
        throw ValidationError("distributional variable " + d.var.text() + " is not ground");
      if (!dist_vars.emplace(d.var.text(), static_cast<int>(i)).second)
        throw ValidationError("random variable " + d.var.text() + " declared more than once");
      continue;
    }
    if (f.is_labeled()) {
      labeled_preds.insert(f.atom.predicate);
      if (f.atom.is_ground() && !fact_atom_texts.insert(f.atom.text()).second)
        throw ValidationError("fact " + f.atom.text() + " declared more than once");
    }
  }
  for (const std::string& pred : labeled_preds) {
    if (rule_heads.count(pred))
      throw ValidationError("predicate " + pred +
                            " appears both as a labeled fact and as a rule head");
  }
  for (const FactDecl& f : p.facts) {
    if (f.is_logical() && labeled_preds.count(f.atom.predicate) && f.atom.is_ground() &&
        fact_atom_texts.count(f.atom.text()))
      throw ValidationError("atom " + f.atom.text() + " has both a logical and a labeled source");
    if (const auto* ind = std::get_if<IndicatorFact>(&f.label)) {
      if (!dist_vars.count(ind->constraint.var.text()))
        throw ValidationError("indicator constraint on undeclared random variable " +
                              ind->constraint.var.text());
    }
  }
}

}  // namespace alp
