#pragma once

#include <stdexcept>
#include <string>

namespace ontikit {

// A computed quantity landed outside its mathematically valid range by more
// than the accepted tolerance. Signals invalid inputs, not a solver failure.
class numeric_violation : public std::runtime_error {
public:
  explicit numeric_violation(const std::string& msg) : std::runtime_error(msg) {}
};

// Conditioning on an outcome whose marginal likelihood is zero.
class conditioning_on_null : public std::runtime_error {
public:
  explicit conditioning_on_null(const std::string& msg) : std::runtime_error(msg) {}
};

// A stated precondition of the operation does not hold for the input.
class precondition_error : public std::runtime_error {
public:
  explicit precondition_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace ontikit
