#ifndef HENON_ERRORS_HPP
#define HENON_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace henon {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

#define HENON_DEFINE_ERROR(Name)                \
  struct Name : Error {                         \
    using Error::Error;                         \
    Name() : Error(#Name) {}                    \
  }

HENON_DEFINE_ERROR(NonEscaping);
HENON_DEFINE_ERROR(BranchFailure);
HENON_DEFINE_ERROR(PrecisionLoss);
HENON_DEFINE_ERROR(ZeroJacobian);
HENON_DEFINE_ERROR(NotEscaping);
HENON_DEFINE_ERROR(NotEscapingBackward);
HENON_DEFINE_ERROR(NotInUplus);
HENON_DEFINE_ERROR(SubdivisionLimit);
HENON_DEFINE_ERROR(ContinuationStall);
HENON_DEFINE_ERROR(WrongComponent);
HENON_DEFINE_ERROR(NotSameLeaf);
HENON_DEFINE_ERROR(DegenerateTriple);
HENON_DEFINE_ERROR(ZeroGauge);
HENON_DEFINE_ERROR(NotPeriodic);
HENON_DEFINE_ERROR(MatchFailure);
HENON_DEFINE_ERROR(NoConvergence);
HENON_DEFINE_ERROR(NotIdentified);
HENON_DEFINE_ERROR(CertificateFailure);
HENON_DEFINE_ERROR(PreconditionUnmet);

#undef HENON_DEFINE_ERROR

}  // namespace henon

#endif
