#pragma once

#include "fsf/realizability.hpp"

namespace fsf {

struct EmbeddedSimplex {
  int N = 0;
  Points vertices;  // N+1 points in R^N, rigid normal form
  EdgeAssignment source;
  double max_distance_error = 0.0;  // relative
  bool degenerate = false;          // final pivot within tolerance of zero
};

// Vertex 1 at the origin, vertex k in the span of the first k-1 axes, last
// coordinate of vertex k nonnegative.
EmbeddedSimplex embed_simplex(const EdgeAssignment& assign);
EmbeddedSimplex embed_simplex(const DistanceMatrix& dm);

Vec interior_point(const EmbeddedSimplex& simplex, const std::vector<double>& barycentric);

// Barycentric coordinates of p with respect to the simplex vertices.
Vec barycentric_coordinates(const Points& vertices, const Vec& p);

}  // namespace fsf
