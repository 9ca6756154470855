#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace fsf {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Points = std::vector<Vec>;

enum class ErrorKind {
  Parse,
  DimensionMismatch,
  NotRealizable,
  Degenerate,
  DomainError,
  NotInterior,
  CombinatorialLimit,
  BracketFailure,
  MaxIterations,
  DegenerateInput,
  BadWeights,
  DegenerateSubSimplex,
  DegenerateSubset,
  Infeasible,
  WeightsInfeasible,
  ParallelEdges,
  NoConvergence,
  DegenerateTree,
  ThresholdViolation,
  NoRealizableAssignment,
  IllConditioned,
  Unsupported,
};

const char* error_kind_name(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

// Process exit code for an error kind: 2 parse, 3 infeasible, 4 no convergence, 1 otherwise.
int exit_code_for(ErrorKind k);

inline double deg(double rad) { return rad * 180.0 / 3.14159265358979323846; }
inline double rad(double degrees) { return degrees * 3.14159265358979323846 / 180.0; }

}  // namespace fsf
