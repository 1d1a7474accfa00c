#include "varjac/error.hpp"

namespace varjac {

const char* to_string(ErrorCode code)
{
    switch (code) {
        case ErrorCode::ParametersOutOfScope: return "parameters outside scope";
        case ErrorCode::BranchPointOnPath: return "branch point on path";
        case ErrorCode::OnCutEvaluation: return "on-cut evaluation";
        case ErrorCode::QuadratureFailure: return "quadrature failure";
        case ErrorCode::NotInStripDomain: return "not in strip domain";
        case ErrorCode::TraceStalled: return "trace stalled";
        case ErrorCode::NoTermination: return "no termination";
        case ErrorCode::ShortTrajectoryNotFound: return "short trajectory not found";
        case ErrorCode::GraphMismatch: return "critical graph structure mismatch";
        case ErrorCode::PointOnCurve: return "point on curve";
        case ErrorCode::NotOnSupport: return "not on support";
        case ErrorCode::NearSingular: return "near-singular evaluation";
        case ErrorCode::Pole: return "pole";
        case ErrorCode::InvalidContour: return "invalid contour";
        case ErrorCode::EndpointRegion: return "endpoint region";
        case ErrorCode::DegenerateParameters: return "degenerate parameters";
        case ErrorCode::OracleRangeExceeded: return "oracle range exceeded";
        case ErrorCode::RootfindingFailure: return "rootfinding failure";
        case ErrorCode::ContinuationError: return "continuation error";
        case ErrorCode::InvalidEvaluationPath: return "invalid evaluation path";
        case ErrorCode::DerivativeUnderflow: return "derivative underflow";
        case ErrorCode::InvalidArgument: return "invalid argument";
    }
    return "unknown error";
}

}  // namespace varjac
