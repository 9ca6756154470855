#include "fsf/common.hpp"

namespace fsf {

const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::Parse: return "Parse";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotRealizable: return "NotRealizable";
    case ErrorKind::Degenerate: return "Degenerate";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::NotInterior: return "NotInterior";
    case ErrorKind::CombinatorialLimit: return "CombinatorialLimit";
    case ErrorKind::BracketFailure: return "BracketFailure";
    case ErrorKind::MaxIterations: return "MaxIterations";
    case ErrorKind::DegenerateInput: return "DegenerateInput";
    case ErrorKind::BadWeights: return "BadWeights";
    case ErrorKind::DegenerateSubSimplex: return "DegenerateSubSimplex";
    case ErrorKind::DegenerateSubset: return "DegenerateSubset";
    case ErrorKind::Infeasible: return "Infeasible";
    case ErrorKind::WeightsInfeasible: return "WeightsInfeasible";
    case ErrorKind::ParallelEdges: return "ParallelEdges";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::DegenerateTree: return "DegenerateTree";
    case ErrorKind::ThresholdViolation: return "ThresholdViolation";
    case ErrorKind::NoRealizableAssignment: return "NoRealizableAssignment";
    case ErrorKind::IllConditioned: return "IllConditioned";
    case ErrorKind::Unsupported: return "Unsupported";
  }
  return "Unknown";
}

int exit_code_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::Parse:
    case ErrorKind::DimensionMismatch:
      return 2;
    case ErrorKind::NotRealizable:
    case ErrorKind::Infeasible:
    case ErrorKind::WeightsInfeasible:
    case ErrorKind::NoRealizableAssignment:
    case ErrorKind::ThresholdViolation:
    case ErrorKind::NotInterior:
      return 3;
    case ErrorKind::MaxIterations:
    case ErrorKind::NoConvergence:
      return 4;
    default:
      return 1;
  }
}

}  // namespace fsf
