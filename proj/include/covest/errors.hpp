#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace covest {

// Base for all toolkit errors. `code()` is a stable machine-readable tag;
// what() carries the human-readable detail (offending element, residual, ...).
class Error : public std::runtime_error {
public:
  Error(std::string code, const std::string& detail)
      : std::runtime_error(code + ": " + detail), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

private:
  std::string code_;
};

#define COVEST_ERROR(Name)                                            \
  struct Name : Error {                                               \
    explicit Name(const std::string& detail) : Error(#Name, detail) {} \
  }

COVEST_ERROR(NotHermitian);
COVEST_ERROR(NoConvergence);
COVEST_ERROR(NegativeEigenvalue);
COVEST_ERROR(ShapeMismatch);
COVEST_ERROR(NotAssociative);
COVEST_ERROR(NoIdentity);
COVEST_ERROR(NoInverse);
COVEST_ERROR(NotIntegral);
COVEST_ERROR(IncompleteTable);
COVEST_ERROR(NumericalDegeneracy);
COVEST_ERROR(NotInBicommutant);
COVEST_ERROR(BadProbability);
COVEST_ERROR(IncompleteSeed);
COVEST_ERROR(NotAPurification);
COVEST_ERROR(PositiveCoefficient);
COVEST_ERROR(NotRightInvariant);
COVEST_ERROR(DegenerateLeadingSpace);
COVEST_ERROR(ParseError);
COVEST_ERROR(ValidationError);

#undef COVEST_ERROR

}  // namespace covest
