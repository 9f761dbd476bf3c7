#pragma once

#include <stdexcept>
#include <string>

namespace outcode {

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad arguments to an operation (dimension mismatch, out-of-range parameter).
struct InvalidInput : Error {
  explicit InvalidInput(const std::string& msg) : Error(msg) {}
};

// A generator could not realize the requested instance.
struct GenerationError : Error {
  explicit GenerationError(const std::string& msg) : Error(msg) {}
};

// Level set is empty at the requested level.
struct EmptyLevelSet : Error {
  explicit EmptyLevelSet(const std::string& msg) : Error(msg) {}
};

// The connection-radius constraints cannot be met at the given target error.
struct InfeasibleRadius : Error {
  explicit InfeasibleRadius(const std::string& msg) : Error(msg) {}
};

// An instance invariant was found violated at runtime.
struct InstanceInvariantViolation : Error {
  explicit InstanceInvariantViolation(const std::string& msg) : Error(msg) {}
};

// Rejection sampler acceptance rate collapsed.
struct SamplerEfficiencyError : Error {
  explicit SamplerEfficiencyError(const std::string& msg) : Error(msg) {}
};

// Query issued for a point outside the support.
struct NoClassError : Error {
  explicit NoClassError(const std::string& msg) : Error(msg) {}
};

// All points were marked inactive by the activity filter.
struct DegenerateInstance : Error {
  explicit DegenerateInstance(const std::string& msg) : Error(msg) {}
};

// Plane detection accepted no half-balls.
struct NoPlanesDetected : Error {
  explicit NoPlanesDetected(const std::string& msg) : Error(msg) {}
};

// Oracle label budget exhausted.
struct BudgetExhausted : Error {
  explicit BudgetExhausted(const std::string& msg) : Error(msg) {}
};

struct IoError : Error {
  explicit IoError(const std::string& msg) : Error(msg) {}
};

}  // namespace outcode
