#pragma once

#include <stdexcept>
#include <string>

namespace nnls {

enum class ErrorKind {
    Config,
    SingularPoint,
    NumericalFailure,
    AssumptionViolation,
    BifurcationProximity,
    NotAZero,
    BoxTouchesZero,
    RefinementFailure,
    NearZeroOnContour,
    MissingCrossing,
    NearSingular,
    Branch,
    TransitionZone,
    DegenerateReflection,
    Pole,
    BlowUpPoint,
    BlowUpDetected,
    OutOfDomain,
    SectorInconsistency,
};

// Exit-code class used by the CLI.
enum class ErrorClass { Config = 2, Numeric = 3, Assumption = 4, BlowUp = 5 };

const char* to_string(ErrorKind kind);
ErrorClass error_class(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what);

    ErrorKind kind() const { return kind_; }
    ErrorClass error_class() const { return nnls::error_class(kind_); }

private:
    ErrorKind kind_;
};

// Blow-up detected during time stepping; carries the detection time.
class BlowUpError : public Error {
public:
    BlowUpError(double t, double x, const std::string& what);

    double time() const { return time_; }
    double position() const { return position_; }

private:
    double time_;
    double position_;
};

}  // namespace nnls
