#pragma once

#include <stdexcept>
#include <string>

namespace interdesign {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define INTERDESIGN_DEFINE_ERROR(Name)      \
  class Name : public Error {               \
   public:                                  \
    using Error::Error;                     \
  }

INTERDESIGN_DEFINE_ERROR(InvalidInstance);
INTERDESIGN_DEFINE_ERROR(NumericalFailure);
INTERDESIGN_DEFINE_ERROR(RankDeficient);
INTERDESIGN_DEFINE_ERROR(SingularMatrix);
INTERDESIGN_DEFINE_ERROR(DegreeMismatch);
INTERDESIGN_DEFINE_ERROR(WeightSumError);
INTERDESIGN_DEFINE_ERROR(Infeasible);
INTERDESIGN_DEFINE_ERROR(NegativeWeight);
INTERDESIGN_DEFINE_ERROR(ZeroSum);
INTERDESIGN_DEFINE_ERROR(NotDivisible);
INTERDESIGN_DEFINE_ERROR(TooLarge);
INTERDESIGN_DEFINE_ERROR(ZeroProbability);
INTERDESIGN_DEFINE_ERROR(GuaranteeViolated);
INTERDESIGN_DEFINE_ERROR(ParseError);

#undef INTERDESIGN_DEFINE_ERROR

}  // namespace interdesign
