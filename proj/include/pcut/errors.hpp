#pragma once

#include <stdexcept>
#include <string>

namespace pcut {

struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

struct TooFewPoints : std::runtime_error {
  explicit TooFewPoints(const std::string& msg) : std::runtime_error(msg) {}
};

struct SpecError : std::runtime_error {
  explicit SpecError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ParamError : std::runtime_error {
  explicit ParamError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ShapeError : std::runtime_error {
  explicit ShapeError(const std::string& msg) : std::runtime_error(msg) {}
};

struct DataError : std::runtime_error {
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

struct IsolatedNodeError : std::runtime_error {
  int node;
  explicit IsolatedNodeError(int v)
      : std::runtime_error("node " + std::to_string(v) +
                           " has no neighbors in the baseline graph"),
        node(v) {}
};

struct NoFeasiblePartition : std::runtime_error {
  explicit NoFeasiblePartition(const std::string& msg)
      : std::runtime_error(msg) {}
};

}  // namespace pcut
