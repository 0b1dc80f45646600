#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace alp {

// Error taxonomy. The CLI maps these onto stable exit codes:
//   usage 1, parse 2, semantic 3, resource 4.
class Error : public std::runtime_error {
 public:
  explicit Error(std::string msg) : std::runtime_error(std::move(msg)) {}
};

// Lexical or syntactic problem; carries a 1-based source position.
class ParseError : public Error {
 public:
  ParseError(std::string msg, int line, int column)
      : Error(std::move(msg) + " (line " + std::to_string(line) + ", column " +
              std::to_string(column) + ")"),
        line(line),
        column(column) {}
  int line;
  int column;
};

// Well-formed syntax violating a program invariant (probability range,
// duplicate fact/rule sources, bad distribution parameters, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// SLD search exceeded its resolution-step limit on an open branch.
class NonterminationError : public Error {
 public:
  NonterminationError(std::string goal, long limit)
      : Error("depth limit of " + std::to_string(limit) +
              " resolution steps exceeded while solving " + goal),
        goal(std::move(goal)) {}
  std::string goal;
};

// Positive cycle in the ground dependency graph; lists one offending cycle.
class CycleError : public Error {
 public:
  CycleError(std::string msg, std::vector<std::string> cycle)
      : Error(std::move(msg)), cycle(std::move(cycle)) {}
  std::vector<std::string> cycle;
};

// A labeling function was consulted for a literal it does not cover.
class LabelingError : public Error {
 public:
  using Error::Error;
};

// Node budget, world-enumeration cap or similar resource limit exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

// Gradient vectors of unequal length combined.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Construct the engine cannot reduce (multivariate constraints, ...).
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

// Neural-fact input term that cannot be encoded as a feature.
class EncodingError : public Error {
 public:
  using Error::Error;
};

// Training aborted (non-finite loss); carries the partial loss trace.
class TrainingError : public Error {
 public:
  TrainingError(std::string msg, std::vector<double> trace)
      : Error(std::move(msg)), trace(std::move(trace)) {}
  std::vector<double> trace;
};

}  // namespace alp
