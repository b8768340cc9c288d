// Error types shared across the library.
#pragma once

#include <stdexcept>
#include <string>

namespace sectorlab {

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// linalg
struct SingularMatrixError : Error { using Error::Error; };
struct NotHermitianError : Error { using Error::Error; };
struct DimensionMismatchError : Error { using Error::Error; };

// function spaces
struct UnresolvedFunctionError : Error { using Error::Error; };
struct OrderTooLowError : Error { using Error::Error; };

// functional calculus
struct SpectrumHitError : Error { using Error::Error; };
struct ContourNotConvergedError : Error { using Error::Error; };
struct IllConditionedEigenbasisError : Error { using Error::Error; };
struct SpectrumNotCoveredError : Error { using Error::Error; };

// experiment layer
struct InvalidSpecError : Error { using Error::Error; };
struct UnknownExperimentError : Error { using Error::Error; };
struct SchemaViolationError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

}  // namespace sectorlab
