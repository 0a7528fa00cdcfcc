#pragma once

#include <stdexcept>
#include <string>

namespace realstab {

// Every failure raised by the library derives from Error so callers (and the
// CLI exit-code mapping) can catch one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define REALSTAB_DEFINE_ERROR(Name)         \
  class Name : public Error {               \
   public:                                  \
    using Error::Error;                     \
  };

REALSTAB_DEFINE_ERROR(ParseError)
REALSTAB_DEFINE_ERROR(ZeroDenominator)
REALSTAB_DEFINE_ERROR(DimensionMismatch)
REALSTAB_DEFINE_ERROR(SingularMatrix)
REALSTAB_DEFINE_ERROR(NotStable)
REALSTAB_DEFINE_ERROR(ImproperBlock)
REALSTAB_DEFINE_ERROR(NotStrictlyProper)
REALSTAB_DEFINE_ERROR(NoStabilityMatrix)
REALSTAB_DEFINE_ERROR(SingularPerturbedLoop)
REALSTAB_DEFINE_ERROR(NotStabilizing)
REALSTAB_DEFINE_ERROR(IdentityCheckFailed)
REALSTAB_DEFINE_ERROR(SingularFactor)
REALSTAB_DEFINE_ERROR(EmptyMask)
REALSTAB_DEFINE_ERROR(InfiniteMargin)
REALSTAB_DEFINE_ERROR(MissingBlock)
REALSTAB_DEFINE_ERROR(InvalidArgument)

#undef REALSTAB_DEFINE_ERROR

class PoleOnGrid : public Error {
 public:
  PoleOnGrid(double omega, const std::string& what) : Error(what), omega_(omega) {}
  double omega() const { return omega_; }

 private:
  double omega_;
};

}  // namespace realstab
