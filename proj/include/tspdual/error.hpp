#pragma once

#include <stdexcept>
#include <string>

namespace tspdual {

enum class ErrorKind {
  InvalidInstance,
  AsymmetricMatrix,
  NegativeDistance,
  NonzeroDiagonal,
  TriangleViolation,
  DimensionMismatch,
  InvalidTour,
  InstanceTooLarge,
  TourDoesNotFixCityOne,
  NotDualFeasible,
  StartNotDualFeasible,
  InfeasibleTarget,
  ConfigError,
};

const char* to_string(ErrorKind kind);

// All library failures are reported through this exception. Messages use
// 1-based city and position indices.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace tspdual
