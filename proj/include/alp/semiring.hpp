#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "alp/errors.hpp"
#include "alp/util.hpp"

namespace alp {

// A semiring supplies: Value, zero(), one(), plus(), times(), eq(), show().
// Instances must satisfy the commutative-semiring laws; check_semiring_axioms
// below property-tests them before a ring is registered.

struct ProbabilitySemiring {
  using Value = double;
  static constexpr const char* name = "prob";
  Value zero() const { return 0.0; }
  Value one() const { return 1.0; }
  Value plus(Value a, Value b) const { return a + b; }
  Value times(Value a, Value b) const { return a * b; }
  bool eq(Value a, Value b) const { return std::fabs(a - b) <= 1e-9; }
  std::string show(Value v) const { return format_real(v); }
  static Value sample(std::mt19937_64& rng) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  }
};

// Most probable explanation: keeps the best model weight.
struct MaxTimesSemiring {
  using Value = double;
  static constexpr const char* name = "mpe";
  Value zero() const { return 0.0; }
  Value one() const { return 1.0; }
  Value plus(Value a, Value b) const { return a > b ? a : b; }
  Value times(Value a, Value b) const { return a * b; }
  bool eq(Value a, Value b) const { return std::fabs(a - b) <= 1e-9; }
  std::string show(Value v) const { return format_real(v); }
  static Value sample(std::mt19937_64& rng) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  }
};

struct BooleanSemiring {
  using Value = bool;
  static constexpr const char* name = "bool";
  Value zero() const { return false; }
  Value one() const { return true; }
  Value plus(Value a, Value b) const { return a || b; }
  Value times(Value a, Value b) const { return a && b; }
  bool eq(Value a, Value b) const { return a == b; }
  std::string show(Value v) const { return v ? "true" : "false"; }
  static Value sample(std::mt19937_64& rng) { return (rng() & 1) != 0; }
};

struct CountingSemiring {
  using Value = std::uint64_t;
  static constexpr const char* name = "count";
  Value zero() const { return 0; }
  Value one() const { return 1; }
  Value plus(Value a, Value b) const { return a + b; }
  Value times(Value a, Value b) const { return a * b; }
  bool eq(Value a, Value b) const { return a == b; }
  std::string show(Value v) const { return std::to_string(v); }
  static Value sample(std::mt19937_64& rng) { return rng() % 16; }
};

// ---------------------------------------------------------------------------
// Gradient semiring
// ---------------------------------------------------------------------------

// Pair of a probability and its gradient over the learnable parameters.
// An empty gradient acts as a zero vector of any length, which lets the
// neutral elements stay length-agnostic.
struct GradientValue {
  double p = 0.0;
  std::vector<double> grad;

  static GradientValue constant(double p) { return {p, {}}; }
  static GradientValue with_slot(double p, std::size_t slot, std::size_t slots,
                                 double seed = 1.0) {
    GradientValue v{p, std::vector<double>(slots, 0.0)};
    v.grad[slot] = seed;
    return v;
  }
  double grad_at(std::size_t i) const { return i < grad.size() ? grad[i] : 0.0; }
};

namespace detail {

inline std::size_t joint_length(const GradientValue& a, const GradientValue& b) {
  if (!a.grad.empty() && !b.grad.empty() && a.grad.size() != b.grad.size())
    throw DimensionError("gradient length mismatch: " + std::to_string(a.grad.size()) +
                         " vs " + std::to_string(b.grad.size()));
  return std::max(a.grad.size(), b.grad.size());
}

}  // namespace detail

// (p1, g1) + (p2, g2) = (p1 + p2, g1 + g2)
inline GradientValue grad_plus(const GradientValue& a, const GradientValue& b) {
  std::size_t n = detail::joint_length(a, b);
  GradientValue out{a.p + b.p, std::vector<double>(n, 0.0)};
  for (std::size_t i = 0; i < n; ++i) out.grad[i] = a.grad_at(i) + b.grad_at(i);
  return out;
}

// (p1, g1) * (p2, g2) = (p1 p2, p2 g1 + p1 g2)
inline GradientValue grad_times(const GradientValue& a, const GradientValue& b) {
  std::size_t n = detail::joint_length(a, b);
  GradientValue out{a.p * b.p, std::vector<double>(n, 0.0)};
  for (std::size_t i = 0; i < n; ++i) out.grad[i] = b.p * a.grad_at(i) + a.p * b.grad_at(i);
  return out;
}

struct GradientSemiring {
  using Value = GradientValue;
  static constexpr const char* name = "gradient";
  Value zero() const { return GradientValue::constant(0.0); }
  Value one() const { return GradientValue::constant(1.0); }
  Value plus(const Value& a, const Value& b) const { return grad_plus(a, b); }
  Value times(const Value& a, const Value& b) const { return grad_times(a, b); }
  bool eq(const Value& a, const Value& b) const {
    if (std::fabs(a.p - b.p) > 1e-9) return false;
    std::size_t n = std::max(a.grad.size(), b.grad.size());
    for (std::size_t i = 0; i < n; ++i)
      if (std::fabs(a.grad_at(i) - b.grad_at(i)) > 1e-9) return false;
    return true;
  }
  std::string show(const Value& v) const {
    std::string out = "(" + format_real(v.p) + ", [";
    for (std::size_t i = 0; i < v.grad.size(); ++i) {
      if (i) out += ", ";
      out += format_real(v.grad[i]);
    }
    return out + "])";
  }
  static Value sample(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    GradientValue v{u(rng), {u(rng), u(rng), u(rng)}};
    return v;
  }
};

// ---------------------------------------------------------------------------
// Axiom property testing
// ---------------------------------------------------------------------------

struct AxiomFailure {
  std::string law;
  std::string witnesses;
};

// Tests associativity, commutativity, distributivity, identities and
// absorption on sampled triples. Returns the first violated law.
template <class S, class Gen>
std::optional<AxiomFailure> check_semiring_axioms(const S& ring, Gen&& gen, int triples = 1000,
                                                  std::uint64_t seed = 0x5eed) {
  std::mt19937_64 rng(seed);
  using Value = typename S::Value;
  auto fail = [&](const char* law, const Value& a, const Value& b,
                  const Value& c) -> AxiomFailure {
    return {law, "a=" + ring.show(a) + " b=" + ring.show(b) + " c=" + ring.show(c)};
  };
  for (int i = 0; i < triples; ++i) {
    Value a = gen(rng), b = gen(rng), c = gen(rng);
    if (!ring.eq(ring.plus(a, b), ring.plus(b, a)))
      return fail("plus is not commutative", a, b, c);
    if (!ring.eq(ring.times(a, b), ring.times(b, a)))
      return fail("times is not commutative", a, b, c);
    if (!ring.eq(ring.plus(ring.plus(a, b), c), ring.plus(a, ring.plus(b, c))))
      return fail("plus is not associative", a, b, c);
    if (!ring.eq(ring.times(ring.times(a, b), c), ring.times(a, ring.times(b, c))))
      return fail("times is not associative", a, b, c);
    if (!ring.eq(ring.times(a, ring.plus(b, c)), ring.plus(ring.times(a, b), ring.times(a, c))))
      return fail("times does not distribute over plus", a, b, c);
    if (!ring.eq(ring.plus(a, ring.zero()), a)) return fail("zero is not neutral for plus", a, b, c);
    if (!ring.eq(ring.times(a, ring.one()), a)) return fail("one is not neutral for times", a, b, c);
    if (!ring.eq(ring.times(a, ring.zero()), ring.zero()))
      return fail("zero is not absorbing for times", a, b, c);
  }
  return std::nullopt;
}

}  // namespace alp
