#pragma once

#include <stdexcept>
#include <string>

namespace varjac {

// Every failure raised by the library carries a machine-readable code and the
// name of the module it came from, so the CLI can report provenance and pick
// an exit code without parsing message text.
enum class ErrorCode {
    ParametersOutOfScope,
    BranchPointOnPath,
    OnCutEvaluation,
    QuadratureFailure,
    NotInStripDomain,
    TraceStalled,
    NoTermination,
    ShortTrajectoryNotFound,
    GraphMismatch,
    PointOnCurve,
    NotOnSupport,
    NearSingular,
    Pole,
    InvalidContour,
    EndpointRegion,
    DegenerateParameters,
    OracleRangeExceeded,
    RootfindingFailure,
    ContinuationError,
    InvalidEvaluationPath,
    DerivativeUnderflow,
    InvalidArgument,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string module, const std::string& what)
        : std::runtime_error(module + ": " + what), code_(code), module_(std::move(module)) {}

    ErrorCode code() const noexcept { return code_; }
    const std::string& module() const noexcept { return module_; }

private:
    ErrorCode code_;
    std::string module_;
};

}  // namespace varjac
