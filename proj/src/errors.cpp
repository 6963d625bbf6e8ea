#include "nnls/errors.hpp"

namespace nnls {

const char* to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::Config: return "config";
    case ErrorKind::SingularPoint: return "singular-point";
    case ErrorKind::NumericalFailure: return "numerical-failure";
    case ErrorKind::AssumptionViolation: return "assumption-violation";
    case ErrorKind::BifurcationProximity: return "bifurcation-proximity";
    case ErrorKind::NotAZero: return "not-a-zero";
    case ErrorKind::BoxTouchesZero: return "box-touches-zero";
    case ErrorKind::RefinementFailure: return "refinement-failure";
    case ErrorKind::NearZeroOnContour: return "near-zero-on-contour";
    case ErrorKind::MissingCrossing: return "missing-crossing";
    case ErrorKind::NearSingular: return "near-singular";
    case ErrorKind::Branch: return "branch";
    case ErrorKind::TransitionZone: return "transition-zone";
    case ErrorKind::DegenerateReflection: return "degenerate-reflection";
    case ErrorKind::Pole: return "pole";
    case ErrorKind::BlowUpPoint: return "blow-up-point";
    case ErrorKind::BlowUpDetected: return "blow-up-detected";
    case ErrorKind::OutOfDomain: return "out-of-domain";
    case ErrorKind::SectorInconsistency: return "sector-inconsistency";
    }
    return "unknown";
}

ErrorClass error_class(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::Config:
    case ErrorKind::OutOfDomain:
        return ErrorClass::Config;
    case ErrorKind::AssumptionViolation:
    case ErrorKind::BifurcationProximity:
    case ErrorKind::MissingCrossing:
    case ErrorKind::TransitionZone:
    case ErrorKind::SectorInconsistency:
        return ErrorClass::Assumption;
    case ErrorKind::BlowUpPoint:
    case ErrorKind::BlowUpDetected:
        return ErrorClass::BlowUp;
    default:
        return ErrorClass::Numeric;
    }
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind)
{
}

BlowUpError::BlowUpError(double t, double x, const std::string& what)
    : Error(ErrorKind::BlowUpDetected, what), time_(t), position_(x)
{
}

}  // namespace nnls
