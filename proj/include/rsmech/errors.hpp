#pragma once

#include <stdexcept>
#include <string>

namespace rsmech {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Time step outside [0, T].
class RangeError : public Error {
 public:
  using Error::Error;
};

/// No directed path between two vertices.
class NoPathError : public Error {
 public:
  using Error::Error;
};

/// A precondition of an operation was violated by the caller.
class ContractError : public Error {
 public:
  using Error::Error;
};

/// Tensor or vector dimensions disagree with the instance.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Construction of a random object failed (parameters cannot be satisfied).
class ConstructionError : public Error {
 public:
  using Error::Error;
};

/// Exact search exceeded its configured state budget.
class SizeError : public Error {
 public:
  using Error::Error;
};

/// No feasible allocation exists within the horizon.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

/// A single greedy step found no no-taxi route for its rider.
class StepInfeasibleError : public InfeasibleError {
 public:
  StepInfeasibleError(int rider, const std::string& what)
      : InfeasibleError(what), rider_(rider) {}
  int rider() const noexcept { return rider_; }

 private:
  int rider_;
};

}  // namespace rsmech
