#ifndef PORTSYNTH_ERRORS_HPP_
#define PORTSYNTH_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace portsynth {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define PORTSYNTH_DEFINE_ERROR(Name)                                \
  class Name : public Error {                                       \
   public:                                                          \
    explicit Name(const std::string& what) : Error(#Name ": " + what) {} \
  }

// polynomial / rational algebra
PORTSYNTH_DEFINE_ERROR(ZeroPolynomial);
PORTSYNTH_DEFINE_ERROR(ConstantPolynomial);
PORTSYNTH_DEFINE_ERROR(PoleHit);
PORTSYNTH_DEFINE_ERROR(PoleOnAxis);

// state-space realization
PORTSYNTH_DEFINE_ERROR(NotStrictlyProper);
PORTSYNTH_DEFINE_ERROR(SingularSylvester);
PORTSYNTH_DEFINE_ERROR(NotAntistable);
PORTSYNTH_DEFINE_ERROR(AxisPole);
PORTSYNTH_DEFINE_ERROR(RepeatedPole);

// coprime fractions
PORTSYNTH_DEFINE_ERROR(NotProper);
PORTSYNTH_DEFINE_ERROR(QCollision);
PORTSYNTH_DEFINE_ERROR(NotCoprime);
PORTSYNTH_DEFINE_ERROR(MismatchedQ);

// H-infinity engine
PORTSYNTH_DEFINE_ERROR(AxisZero);
PORTSYNTH_DEFINE_ERROR(NotSymmetric);
PORTSYNTH_DEFINE_ERROR(NotPositive);
PORTSYNTH_DEFINE_ERROR(BetaTooSmall);
PORTSYNTH_DEFINE_ERROR(Infeasible);

// synthesis pipeline
PORTSYNTH_DEFINE_ERROR(FitFailed);
PORTSYNTH_DEFINE_ERROR(SingularParametrization);
PORTSYNTH_DEFINE_ERROR(DegenerateSum);

// configuration and I/O
PORTSYNTH_DEFINE_ERROR(ParseError);
PORTSYNTH_DEFINE_ERROR(ValidationError);
PORTSYNTH_DEFINE_ERROR(IoError);

#undef PORTSYNTH_DEFINE_ERROR

}  // namespace portsynth

#endif  // PORTSYNTH_ERRORS_HPP_
