#include "fsf/geometry_core.hpp"

#include <algorithm>
#include <cmath>

namespace fsf {

namespace {

double clamp_unit(double c) { return std::max(-1.0, std::min(1.0, c)); }

double law_cos(double adj1, double adj2, double opp) {
  return (adj1 * adj1 + adj2 * adj2 - opp * opp) / (2.0 * adj1 * adj2);
}

long double det_ld(std::vector<long double> a, int n) {
  long double det = 1.0L;
  for (int c = 0; c < n; ++c) {
    int p = c;
    for (int r = c + 1; r < n; ++r)
      if (std::fabs(a[r * n + c]) > std::fabs(a[p * n + c])) p = r;
    if (a[p * n + c] == 0.0L) return 0.0L;
    if (p != c) {
      for (int k = 0; k < n; ++k) std::swap(a[p * n + k], a[c * n + k]);
      det = -det;
    }
    det *= a[c * n + c];
    for (int r = c + 1; r < n; ++r) {
      long double f = a[r * n + c] / a[c * n + c];
      if (f == 0.0L) continue;
      for (int k = c; k < n; ++k) a[r * n + k] -= f * a[c * n + k];
    }
  }
  return det;
}

// Fraction-free elimination; exact for integer matrices as long as minors fit.
__int128 det_bareiss(std::vector<__int128> a, int n) {
  __int128 sign = 1, prev = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (a[k * n + k] == 0) {
      int p = -1;
      for (int r = k + 1; r < n; ++r)
        if (a[r * n + k] != 0) { p = r; break; }
      if (p < 0) return 0;
      for (int c = 0; c < n; ++c) std::swap(a[p * n + c], a[k * n + c]);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j)
        a[i * n + j] = (a[i * n + j] * a[k * n + k] - a[i * n + k] * a[k * n + j]) / prev;
    prev = a[k * n + k];
  }
  return sign * a[(n - 1) * n + (n - 1)];
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

DistanceMatrix DistanceMatrix::from_points(const Points& pts) {
  DistanceMatrix dm(static_cast<int>(pts.size()));
  for (int i = 0; i < dm.n_; ++i)
    for (int j = i + 1; j < dm.n_; ++j) dm.set(i, j, (pts[i] - pts[j]).norm());
  return dm;
}

DistanceMatrix DistanceMatrix::submatrix(const std::vector<int>& idx) const {
  DistanceMatrix s(static_cast<int>(idx.size()));
  for (size_t i = 0; i < idx.size(); ++i)
    for (size_t j = i + 1; j < idx.size(); ++j) s.set(int(i), int(j), (*this)(idx[i], idx[j]));
  return s;
}

double DistanceMatrix::max_length() const {
  double m = 0.0;
  for (double v : d_) m = std::max(m, v);
  return m;
}

void DistanceMatrix::validate() const {
  if (n_ < 2 || d_.size() != static_cast<size_t>(n_) * n_)
    throw Error(ErrorKind::DimensionMismatch, "distance matrix needs at least two vertices");
  for (int i = 0; i < n_; ++i) {
    if ((*this)(i, i) != 0.0) throw Error(ErrorKind::DomainError, "nonzero diagonal");
    for (int j = i + 1; j < n_; ++j) {
      if ((*this)(i, j) != (*this)(j, i)) throw Error(ErrorKind::DomainError, "asymmetric distances");
      if (!((*this)(i, j) > 0.0)) throw Error(ErrorKind::DomainError, "nonpositive edge length");
    }
  }
}

double cayley_menger_det(const DistanceMatrix& dm) {
  if (auto exact = cayley_menger_det_exact(dm)) return static_cast<double>(*exact);
  const int n = dm.size();
  const int m = n + 1;
  std::vector<long double> a(static_cast<size_t>(m) * m, 0.0L);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      long double d = dm(i, j);
      a[i * m + j] = d * d;
    }
    a[i * m + n] = 1.0L;
    a[n * m + i] = 1.0L;
  }
  return static_cast<double>(det_ld(std::move(a), m));
}

std::optional<__int128> cayley_menger_det_exact(const DistanceMatrix& dm) {
  const int n = dm.size();
  if (n > 8) return std::nullopt;
  const int m = n + 1;
  std::vector<__int128> a(static_cast<size_t>(m) * m, 0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double sq = dm(i, j) * dm(i, j);
      double r = std::nearbyint(sq);
      if (std::fabs(sq - r) > 1e-9 * std::max(1.0, sq) || r > 1e6) return std::nullopt;
      a[i * m + j] = static_cast<__int128>(r);
    }
    a[i * m + n] = 1;
    a[n * m + i] = 1;
  }
  return det_bareiss(std::move(a), m);
}

double signed_volume_sq(const DistanceMatrix& dm) {
  const int N = dm.size() - 1;
  double det = cayley_menger_det(dm);
  double sign = (N % 2 == 1) ? 1.0 : -1.0;  // (-1)^(N+1)
  return sign * det / (std::pow(2.0, N) * factorial(N) * factorial(N));
}

double cm_tolerance(const DistanceMatrix& dm) {
  const int N = dm.size() - 1;
  return 1e-9 * std::pow(dm.max_length(), 2.0 * N);
}

double simplex_volume(const DistanceMatrix& dm) {
  dm.validate();
  const int N = dm.size() - 1;
  double det = cayley_menger_det(dm);
  double signed_det = (N % 2 == 1) ? det : -det;
  if (signed_det < -cm_tolerance(dm))
    throw Error(ErrorKind::NotRealizable, "Cayley-Menger determinant has the wrong sign");
  double v2 = std::max(0.0, signed_det) / (std::pow(2.0, N) * factorial(N) * factorial(N));
  return std::sqrt(v2);
}

double coordinate_volume(const Points& vertices) {
  const int N = static_cast<int>(vertices.size()) - 1;
  if (N < 1 || vertices[0].size() != N)
    throw Error(ErrorKind::DimensionMismatch, "need N+1 points in R^N");
  Mat m(N, N);
  for (int k = 0; k < N; ++k) m.col(k) = vertices[k + 1] - vertices[0];
  return std::fabs(m.determinant()) / factorial(N);
}

Vec circumcenter(const Points& vertices) {
  const int k = static_cast<int>(vertices.size()) - 1;
  if (k < 1) throw Error(ErrorKind::DimensionMismatch, "need at least two points");
  const Vec& p0 = vertices[0];
  Mat g(k, k);
  Vec rhs(k);
  for (int i = 0; i < k; ++i) {
    Vec di = vertices[i + 1] - p0;
    rhs(i) = di.squaredNorm();
    for (int j = 0; j < k; ++j) g(i, j) = 2.0 * di.dot(vertices[j + 1] - p0);
  }
  Eigen::FullPivLU<Mat> lu(g);
  lu.setThreshold(1e-12);
  if (lu.rank() < k) throw Error(ErrorKind::Degenerate, "circumcenter system is singular");
  Vec t = lu.solve(rhs);
  Vec c = p0;
  for (int j = 0; j < k; ++j) c += t(j) * (vertices[j + 1] - p0);
  return c;
}

double circumradius(const Points& vertices) { return (circumcenter(vertices) - vertices[0]).norm(); }

double height_over_line(double a10, double a20, double a12) {
  if (a10 <= 0.0 || a20 <= 0.0) return 0.0;
  double c = law_cos(a10, a20, a12);
  double s2 = 1.0 - c * c;
  if (s2 <= 0.0) return 0.0;
  return a10 * a20 / a12 * std::sqrt(s2);
}

double generalized_cosine_r2(double a20, double a2i, double h012, double angle_12i) {
  double tol = 1e-12 * std::max(1.0, a20 * a20);
  double r = a20 * a20 - h012 * h012;
  if (r < -tol || h012 < 0.0) throw Error(ErrorKind::DomainError, "height exceeds a20");
  double foot = std::sqrt(std::max(0.0, r));
  double v = a20 * a20 + a2i * a2i -
             2.0 * a2i * (foot * std::cos(angle_12i) + h012 * std::sin(angle_12i));
  if (v < -1e-12 * std::max(1.0, a20 * a20 + a2i * a2i))
    throw Error(ErrorKind::DomainError, "negative squared distance");
  return std::sqrt(std::max(0.0, v));
}

namespace {

double r3_from(double anchor0, double foot, double anchor_i, double angle, double h, double dalpha) {
  double v = anchor0 * anchor0 + anchor_i * anchor_i -
             2.0 * anchor_i * (foot * std::cos(angle) + h * std::sin(angle) * std::cos(dalpha));
  if (v < -1e-10 * std::max(1.0, anchor0 * anchor0 + anchor_i * anchor_i))
    throw Error(ErrorKind::DomainError, "negative squared distance");
  return std::sqrt(std::max(0.0, v));
}

void check_dihedral(const DihedralConfig& c) {
  if (!(c.a12 > 0.0) || !(c.a1i > 0.0) || !(c.a2i > 0.0) || c.a10 < 0.0 || c.a20 < 0.0)
    throw Error(ErrorKind::DomainError, "lengths must be positive");
  if (c.h012 < 0.0 || c.h012 > std::min(c.a10, c.a20) + 1e-12 * std::max(1.0, c.a12))
    throw Error(ErrorKind::DomainError, "invalid height h012");
}

}  // namespace

double generalized_cosine_r3(const DihedralConfig& c) {
  check_dihedral(c);
  double foot2 = (c.a20 * c.a20 + c.a12 * c.a12 - c.a10 * c.a10) / (2.0 * c.a12);
  double ang = std::acos(clamp_unit(law_cos(c.a12, c.a2i, c.a1i)));
  return r3_from(c.a20, foot2, c.a2i, ang, c.h012, c.alpha_g - c.alpha);
}

double generalized_cosine_r3_alt(const DihedralConfig& c) {
  check_dihedral(c);
  double foot1 = (c.a10 * c.a10 + c.a12 * c.a12 - c.a20 * c.a20) / (2.0 * c.a12);
  double ang = std::acos(clamp_unit(law_cos(c.a12, c.a1i, c.a2i)));
  return r3_from(c.a10, foot1, c.a1i, ang, c.h012, c.alpha_g - c.alpha);
}

double dihedral_from_distances(double p1, double p2, double p3, double a12, double a13, double a23) {
  double h = height_over_line(p1, p2, a12);
  double scale = std::max({a12, a13, a23});
  if (h <= 1e-12 * scale) return 0.0;
  double foot2 = (p2 * p2 + a12 * a12 - p1 * p1) / (2.0 * a12);
  double c123 = clamp_unit(law_cos(a12, a23, a13));
  double s123 = std::sqrt(1.0 - c123 * c123);
  double arg = ((p2 * p2 + a23 * a23 - p3 * p3) / (2.0 * a23) - foot2 * c123) / (h * s123);
  if (std::fabs(arg) > 1.0 + 1e-7)
    throw Error(ErrorKind::NotInterior, "recovered dihedral angle is outside [0, pi]");
  return std::acos(clamp_unit(arg));
}

double a40_from_interior_distances(double a10, double a20, double a30, const Sextuple& e, int side) {
  const double a12 = e[0], a13 = e[1], a14 = e[2], a23 = e[3], a24 = e[4], a34 = e[5];
  double alpha = dihedral_from_distances(a10, a20, a30, a12, a13, a23);
  double alpha_g4 = dihedral_from_distances(a14, a24, a34, a12, a13, a23);
  DihedralConfig cfg;
  cfg.a10 = a10;
  cfg.a20 = a20;
  cfg.a12 = a12;
  cfg.a1i = a14;
  cfg.a2i = a24;
  cfg.alpha = side < 0 ? -alpha : alpha;
  cfg.alpha_g = alpha_g4;
  cfg.h012 = height_over_line(a10, a20, a12);
  return generalized_cosine_r3(cfg);
}

double schlafli_gauge(const Tentuple& e) {
  // Gram matrix of A2..A5 relative to A1.
  const double a1[4] = {e[0], e[1], e[2], e[3]};
  auto edge = [&](int i, int j) -> double {  // i<j, indices 2..5
    if (i == 2 && j == 3) return e[4];
    if (i == 2 && j == 4) return e[5];
    if (i == 2 && j == 5) return e[6];
    if (i == 3 && j == 4) return e[7];
    if (i == 3 && j == 5) return e[8];
    return e[9];
  };
  Eigen::Matrix4d g;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      double dij = (i == j) ? 0.0 : edge(std::min(i, j) + 2, std::max(i, j) + 2);
      g(i, j) = 0.5 * (a1[i] * a1[i] + a1[j] * a1[j] - dij * dij);
    }
  Eigen::Matrix2d s = g.block<2, 2>(2, 2) - g.block<2, 2>(2, 0) * g.block<2, 2>(0, 0).inverse() * g.block<2, 2>(0, 2);
  if (s(0, 0) <= 0.0 || s(1, 1) <= 0.0) throw Error(ErrorKind::DomainError, "degenerate 4-simplex");
  return std::acos(clamp_unit(s(0, 1) / std::sqrt(s(0, 0) * s(1, 1))));
}

std::pair<double, double> generalized_cosine_r4(SchlafliConfig& cfg, const Tentuple& e) {
  const double a12 = e[0], a13 = e[1], a14 = e[2], a15 = e[3], a23 = e[4], a24 = e[5], a25 = e[6],
               a34 = e[7], a35 = e[8], a45 = e[9];
  if (cfg.beta < 0.0 || cfg.beta > 3.14159265358979323846 + 1e-12)
    throw Error(ErrorKind::DomainError, "beta outside [0, pi]");
  cfg.h012 = height_over_line(cfg.a10, cfg.a20, a12);
  double alpha = dihedral_from_distances(cfg.a10, cfg.a20, cfg.a30, a12, a13, a23);
  cfg.h0123 = cfg.h012 * std::sin(alpha);
  cfg.h01234 = cfg.h0123 * std::sin(cfg.beta);
  double gamma = schlafli_gauge(e);
  cfg.h01235 = cfg.h0123 * std::fabs(std::sin(cfg.beta - gamma));

  double foot2 = (cfg.a20 * cfg.a20 + a12 * a12 - cfg.a10 * cfg.a10) / (2.0 * a12);
  auto far_vertex = [&](double a1k, double a2k, double a3k, double hk, double tilt) {
    // Inside the 3-space spanned by A1A2A3 and A_k, the projection of A0 sits at
    // distance d from line A1A2, turned by alpha_p from the plane A1A2A3.
    double d = std::sqrt(std::max(0.0, cfg.h012 * cfg.h012 - hk * hk));
    double alpha_p = std::atan2(std::sin(alpha) * tilt, std::cos(alpha));
    double alpha_gk = dihedral_from_distances(a1k, a2k, a3k, a12, a13, a23);
    double ang = std::acos(clamp_unit(law_cos(a12, a2k, a1k)));
    double v = cfg.a20 * cfg.a20 + a2k * a2k -
               2.0 * a2k * (foot2 * std::cos(ang) + d * std::sin(ang) * std::cos(alpha_gk - alpha_p));
    if (v < -1e-10 * std::max(1.0, cfg.a20 * cfg.a20 + a2k * a2k))
      throw Error(ErrorKind::DomainError, "negative squared distance");
    return std::sqrt(std::max(0.0, v));
  };
  double a40 = far_vertex(a14, a24, a34, cfg.h01234, std::cos(cfg.beta));
  double a50 = far_vertex(a15, a25, a35, cfg.h01235, std::cos(cfg.beta - gamma));
  (void)a45;
  return {a40, a50};
}

}  // namespace fsf
