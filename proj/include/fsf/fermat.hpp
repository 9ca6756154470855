#pragma once

#include "fsf/common.hpp"

namespace fsf {

enum class FermatKind { Floating, Absorbed };

struct FermatSolution {
  Vec point;
  double objective = 0.0;
  FermatKind kind = FermatKind::Floating;
  int absorbed_at = -1;  // vertex index when absorbed
  int iterations = 0;
  double gradient_residual = 0.0;
};

struct FermatOptions {
  int max_iterations = 100000;
  double rel_tol = 1e-10;  // residual relative to the weight sum
};

// Unit vector from a toward b (zero when they coincide).
Vec unit(const Vec& from, const Vec& to);

double fermat_objective(const Points& pts, const std::vector<double>& w, const Vec& x);

// ||sum_{j != i} b_j u(A_j, A_i)|| <= b_i
bool absorbing_test(const Points& pts, const std::vector<double>& w, int i);

// Thrown as Error(MaxIterations); the best iterate is kept here for callers that catch it.
struct FermatNoConvergence : Error {
  FermatSolution best;
  explicit FermatNoConvergence(FermatSolution b)
      : Error(ErrorKind::MaxIterations, "weighted Fermat iteration did not converge"), best(std::move(b)) {}
};

FermatSolution solve_fermat(const Points& pts, const std::vector<double>& w, const FermatOptions& opts = {});

}  // namespace fsf
