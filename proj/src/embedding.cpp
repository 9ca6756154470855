#include "fsf/embedding.hpp"

#include <algorithm>
#include <cmath>

namespace fsf {

EmbeddedSimplex embed_simplex(const EdgeAssignment& assign) {
  const DistanceMatrix& dm = assign.edges;
  dm.validate();
  const int N = dm.size() - 1;
  const double scale = dm.max_length() * dm.max_length();
  const double tol = 1e-10 * scale;

  Mat g(N, N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      double a1i = dm(0, i + 1), a1j = dm(0, j + 1), aij = dm(i + 1, j + 1);
      g(i, j) = 0.5 * (a1i * a1i + a1j * a1j - aij * aij);
    }

  // Unpivoted Cholesky: row k of L is vertex k+2 in the first k+1 axes.
  Mat l = Mat::Zero(N, N);
  bool degenerate = false;
  for (int k = 0; k < N; ++k) {
    double piv = g(k, k) - l.row(k).head(k).squaredNorm();
    if (piv < -tol) throw Error(ErrorKind::NotRealizable, "negative Gram pivot");
    if (piv <= tol) {
      if (k < N - 1) throw Error(ErrorKind::Degenerate, "lower-dimensional face");
      degenerate = true;
      piv = std::max(0.0, piv);
    }
    l(k, k) = std::sqrt(piv);
    for (int i = k + 1; i < N; ++i) {
      double s = g(i, k) - l.row(i).head(k).dot(l.row(k).head(k));
      l(i, k) = (l(k, k) > 0.0) ? s / l(k, k) : 0.0;
    }
  }

  EmbeddedSimplex out;
  out.N = N;
  out.source = assign;
  out.degenerate = degenerate;
  out.vertices.push_back(Vec::Zero(N));
  for (int k = 0; k < N; ++k) out.vertices.push_back(l.row(k).transpose());
  double err = 0.0;
  for (int i = 0; i <= N; ++i)
    for (int j = i + 1; j <= N; ++j) {
      double d = (out.vertices[i] - out.vertices[j]).norm();
      err = std::max(err, std::fabs(d - dm(i, j)) / dm(i, j));
    }
  out.max_distance_error = err;
  return out;
}

EmbeddedSimplex embed_simplex(const DistanceMatrix& dm) { return embed_simplex(EdgeAssignment::from_matrix(dm)); }

Vec interior_point(const EmbeddedSimplex& simplex, const std::vector<double>& barycentric) {
  if (barycentric.size() != simplex.vertices.size())
    throw Error(ErrorKind::BadWeights, "need one barycentric weight per vertex");
  double sum = 0.0;
  for (double w : barycentric) {
    if (!(w >= 0.0)) throw Error(ErrorKind::BadWeights, "barycentric weights must be nonnegative");
    sum += w;
  }
  if (std::fabs(sum - 1.0) > 1e-12 * barycentric.size())
    throw Error(ErrorKind::BadWeights, "barycentric weights must sum to 1");
  Vec p = Vec::Zero(simplex.N);
  for (size_t i = 0; i < barycentric.size(); ++i) p += barycentric[i] * simplex.vertices[i];
  return p;
}

Vec barycentric_coordinates(const Points& vertices, const Vec& p) {
  const int N = static_cast<int>(vertices.size()) - 1;
  Mat m(N + 1, N + 1);
  Vec rhs(N + 1);
  for (int i = 0; i <= N; ++i) {
    m.block(0, i, N, 1) = vertices[i];
    m(N, i) = 1.0;
  }
  rhs.head(N) = p;
  rhs(N) = 1.0;
  return m.fullPivLu().solve(rhs);
}

}  // namespace fsf
