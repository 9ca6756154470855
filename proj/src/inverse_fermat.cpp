#include "fsf/inverse_fermat.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace fsf {

namespace {

void check_simplex(const Points& v, const Vec& p) {
  const int N = static_cast<int>(v.size()) - 1;
  if (N < 2) throw Error(ErrorKind::DimensionMismatch, "need at least a triangle");
  for (const auto& x : v)
    if (x.size() != N) throw Error(ErrorKind::DimensionMismatch, "need N+1 points in R^N");
  if (p.size() != N) throw Error(ErrorKind::DimensionMismatch, "point dimension mismatch");
}

// Volume of the simplex with p replacing vertex i.
double replaced_volume(const Points& v, const Vec& p, int i) {
  Points w = v;
  w[i] = p;
  return coordinate_volume(w);
}

Vec interior_barycentric(const Points& v, const Vec& p) {
  double scale = 0.0;
  for (const auto& x : v) scale = std::max(scale, (x - v[0]).norm());
  double vol = coordinate_volume(v);
  if (vol <= 1e-12 * std::pow(scale, static_cast<double>(v.size() - 1)))
    throw Error(ErrorKind::DegenerateSubSimplex, "simplex has zero volume");
  Vec lam = barycentric_coordinates(v, p);
  for (int i = 0; i < lam.size(); ++i)
    if (!(lam(i) > 1e-14)) throw Error(ErrorKind::NotInterior, "point is not strictly inside the simplex");
  return lam;
}

// Unit normal to the span of the given N-1 vectors in R^N; empty when they are dependent.
std::optional<Vec> normal_to(const std::vector<Vec>& vs, int N) {
  Mat m(N, static_cast<int>(vs.size()));
  for (size_t k = 0; k < vs.size(); ++k) m.col(static_cast<int>(k)) = vs[k];
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullU);
  const Vec& s = svd.singularValues();
  if (s.size() > 0 && s(s.size() - 1) <= 1e-10 * std::max(1.0, s(0))) return std::nullopt;
  return Vec(svd.matrixU().col(N - 1));
}

InverseSolution finish(const Points& v, const Vec& p, std::vector<double> w, double C, bool roundtrip) {
  double sum = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& x : w) x *= C / sum;
  InverseSolution s;
  s.weights = std::move(w);
  s.C = C;
  s.residual = volume_equality_residual(v, p, s.weights);
  if (roundtrip) {
    try {
      s.roundtrip_distance = (solve_fermat(v, s.weights).point - p).norm();
    } catch (const FermatNoConvergence& e) {
      s.roundtrip_distance = (e.best.point - p).norm();
    }
  }
  return s;
}

}  // namespace

double volume_equality_residual(const Points& v, const Vec& p, const std::vector<double>& w) {
  const int n = static_cast<int>(v.size());
  std::vector<double> ratio(n);
  for (int i = 0; i < n; ++i) {
    double vol = replaced_volume(v, p, i);
    ratio[i] = w[i] / ((v[i] - p).norm() * vol);
  }
  double r = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r = std::max(r, std::fabs(ratio[i] - ratio[j]));
  return r / ratio[0];
}

InverseSolution invert_weights(const Points& v, const Vec& p, double C, bool roundtrip) {
  check_simplex(v, p);
  if (!(C > 0.0)) throw Error(ErrorKind::BadWeights, "C must be positive");
  Vec lam = interior_barycentric(v, p);
  std::vector<double> w(v.size());
  for (size_t i = 0; i < v.size(); ++i) w[i] = (v[i] - p).norm() * lam(static_cast<int>(i));
  return finish(v, p, std::move(w), C, roundtrip);
}

InverseSolution invert_weights(const EmbeddedSimplex& simplex, const Vec& point, double C) {
  return invert_weights(simplex.vertices, point, C, true);
}

InverseSolution sine_ratio_weights(const Points& v, const Vec& p, double C) {
  check_simplex(v, p);
  if (!(C > 0.0)) throw Error(ErrorKind::BadWeights, "C must be positive");
  interior_barycentric(v, p);
  const int n = static_cast<int>(v.size());
  const int N = n - 1;
  std::vector<Vec> u(n);
  for (int i = 0; i < n; ++i) u[i] = unit(p, v[i]);
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) {
    double denom = 1.0;
    for (int k = 0; k < n; ++k) {
      if (k == i) continue;
      std::vector<Vec> rest;
      for (int j = 0; j < n; ++j)
        if (j != i && j != k) rest.push_back(u[j]);
      auto nk = normal_to(rest, N);
      if (!nk) throw Error(ErrorKind::DegenerateSubSimplex, "dependent unit vectors");
      denom += std::fabs(nk->dot(u[i])) / std::fabs(nk->dot(u[k]));
    }
    w[i] = C / denom;
  }
  return finish(v, p, std::move(w), C, false);
}

InverseSolution sine_ratio_weights(const EmbeddedSimplex& simplex, const Vec& point, double C) {
  return sine_ratio_weights(simplex.vertices, point, C);
}

Vec PlasticityModel::weights(const Vec& driver) const {
  Vec out(N + 1 + drivers());
  out.head(N + 1) = a * driver + b;
  out.tail(drivers()) = driver;
  return out;
}

PlasticityModel plasticity_general(const Points& rays, int N, double c) {
  const int total = static_cast<int>(rays.size());
  const int d = total - (N + 1);
  if (d < 1) throw Error(ErrorKind::DimensionMismatch, "need at least N+2 rays");
  for (const auto& r : rays)
    if (r.size() != N || r.norm() == 0.0) throw Error(ErrorKind::DimensionMismatch, "rays must be nonzero vectors in R^N");
  Points u;
  for (const auto& r : rays) u.push_back(r / r.norm());

  // s_j = n_i . u_j, with n_i normal to the rays 0..N-1 except i.
  std::vector<Vec> normals(N);
  for (int i = 0; i < N; ++i) {
    std::vector<Vec> rest;
    for (int j = 0; j < N; ++j)
      if (j != i) rest.push_back(u[j]);
    auto n = normal_to(rest, N);
    if (!n) throw Error(ErrorKind::DegenerateSubset, "ray subset does not span");
    normals[i] = *n;
  }
  const double tiny = 1e-10;
  std::vector<double> r(N);
  for (int i = 0; i < N; ++i) {
    double si = normals[i].dot(u[i]);
    double sn = normals[i].dot(u[N]);
    if (std::fabs(si) < tiny || std::fabs(sn) < tiny) throw Error(ErrorKind::DegenerateSubset, "ray subset does not span");
    r[i] = -sn / si;
  }
  double rsum = std::accumulate(r.begin(), r.end(), 0.0);
  if (std::fabs(1.0 + rsum) < tiny) throw Error(ErrorKind::DegenerateSubset, "base weights are unbounded");

  PlasticityModel m;
  m.N = N;
  m.rays = u;
  m.base_ratios = r;
  m.c = c;
  m.a = Mat(N + 1, d);
  m.b = Vec(N + 1);
  m.b(N) = c / (1.0 + rsum);
  for (int i = 0; i < N; ++i) m.b(i) = r[i] * m.b(N);
  for (int j = 0; j < d; ++j) {
    const Vec& ud = u[N + 1 + j];
    double rp = 0.0;
    std::vector<double> p(N);
    for (int i = 0; i < N; ++i) {
      double sn = normals[i].dot(u[N]);
      p[i] = -normals[i].dot(ud) / sn;
      rp += r[i] * p[i];
    }
    double aN = (rp - 1.0) / (rsum + 1.0);
    m.a(N, j) = aN;
    for (int i = 0; i < N; ++i) m.a(i, j) = r[i] * aN - r[i] * p[i];
  }
  return m;
}

PlasticityModel plasticity_coefficients(const Points& rays, double c) {
  if (rays.empty()) throw Error(ErrorKind::DimensionMismatch, "no rays");
  const int N = static_cast<int>(rays[0].size());
  if (static_cast<int>(rays.size()) != N + 2) throw Error(ErrorKind::DimensionMismatch, "need exactly N+2 rays");
  return plasticity_general(rays, N, c);
}

namespace {

// Lawson-Hanson nonnegative least squares.
Vec nnls(const Mat& A, const Vec& y) {
  const int n = static_cast<int>(A.cols());
  Vec x = Vec::Zero(n);
  std::vector<bool> passive(n, false);
  const double tol = 1e-12 * std::max(1.0, A.norm() * y.norm());
  for (int outer = 0; outer < 3 * n + 10; ++outer) {
    Vec w = A.transpose() * (y - A * x);
    int best = -1;
    double bw = tol;
    for (int j = 0; j < n; ++j)
      if (!passive[j] && w(j) > bw) {
        bw = w(j);
        best = j;
      }
    if (best < 0) break;
    passive[best] = true;
    for (int inner = 0; inner < 3 * n + 10; ++inner) {
      std::vector<int> idx;
      for (int j = 0; j < n; ++j)
        if (passive[j]) idx.push_back(j);
      Mat Ap(A.rows(), static_cast<int>(idx.size()));
      for (size_t k = 0; k < idx.size(); ++k) Ap.col(static_cast<int>(k)) = A.col(idx[k]);
      Vec zp = Ap.completeOrthogonalDecomposition().solve(y);
      Vec z = Vec::Zero(n);
      for (size_t k = 0; k < idx.size(); ++k) z(idx[k]) = zp(static_cast<int>(k));
      bool ok = true;
      for (int j : idx)
        if (z(j) <= 0.0) ok = false;
      if (ok) {
        x = z;
        break;
      }
      double alpha = 1.0;
      for (int j : idx)
        if (z(j) <= 0.0) alpha = std::min(alpha, x(j) / (x(j) - z(j)));
      x += alpha * (z - x);
      for (int j : idx)
        if (x(j) <= 1e-15) {
          passive[j] = false;
          x(j) = 0.0;
        }
    }
  }
  return x;
}

}  // namespace

Vec mutation_weights(const PlasticityModel& model, int k, double c, double storage) {
  const int N = model.N;
  const int d = model.drivers();
  const int M = N + 1 + d;
  if (k < 1 || k > M) throw Error(ErrorKind::DomainError, "inflow count out of range");
  if (!(c > 0.0)) throw Error(ErrorKind::BadWeights, "c must be positive");
  const double scale = c / model.c;
  Mat A = Mat::Zero(N + 3, M);
  Vec y(N + 3);
  for (int i = 0; i <= N; ++i) {
    A(i, i) = 1.0;
    for (int j = 0; j < d; ++j) A(i, N + 1 + j) = -model.a(i, j);
    y(i) = model.b(i) * scale;
  }
  for (int i = 0; i < M; ++i) {
    A(N + 1, i) = (i < k) ? 1.0 : -1.0;
    A(N + 2, i) = 1.0;
  }
  y(N + 1) = storage;
  y(N + 2) = c;
  Vec x = A.completeOrthogonalDecomposition().solve(y);
  const double tol = 1e-12 * std::max(1.0, c);
  if ((A * x - y).norm() > 1e-10 * std::max(1.0, c))
    throw Error(ErrorKind::Infeasible, "flow constraints are inconsistent with the plasticity system");
  if (x.minCoeff() < -tol) {
    x = nnls(A, y);
    if ((A * x - y).norm() > 1e-10 * std::max(1.0, c))
      throw Error(ErrorKind::Infeasible, "no nonnegative weights satisfy the flow constraints");
  }
  return x.cwiseMax(0.0);
}

BesselPath bessel_path(const BesselOptions& o) {
  if (!(o.r0 >= 0.0) || !(o.dt > 0.0) || !(o.m >= 2.0) || !(o.t_end >= 0.0))
    throw Error(ErrorKind::DomainError, "need r0 >= 0, dt > 0, m >= 2");
  BesselPath path;
  path.m = o.m;
  path.seed = o.seed;
  path.r_floor = 1e-8 * std::max(o.r0, std::sqrt(o.t_end));
  std::mt19937_64 gen(o.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const long steps = static_cast<long>(std::ceil(o.t_end / o.dt - 1e-9));
  double r = o.r0, t = 0.0;
  path.times.push_back(t);
  path.values.push_back(r);
  for (long s = 0; s < steps; ++s) {
    double h = std::min(o.dt, o.t_end - t);
    double dw = o.noise ? std::sqrt(h) * normal(gen) : 0.0;
    if (o.scheme == BesselScheme::DriftImplicit) {
      double y = r + dw;
      r = 0.5 * (y + std::sqrt(y * y + 2.0 * (o.m - 1.0) * h));
    } else {
      r = r + dw + (o.m - 1.0) / (2.0 * std::max(r, path.r_floor)) * h;
    }
    r = std::max(r, path.r_floor);
    t = (s + 1 == steps) ? o.t_end : t + h;
    path.times.push_back(t);
    path.values.push_back(r);
  }
  path.values[0] = o.r0;
  return path;
}

BesselWeights bessel_plasticity(const PlasticityModel& model, const BesselPath& path, double c) {
  if (model.drivers() != 1) throw Error(ErrorKind::DimensionMismatch, "Bessel plasticity needs a single driver");
  BesselWeights out;
  for (double r : path.values) {
    Vec w = model.weights(Vec::Constant(1, r));
    double sum = w.sum();
    w *= c / sum;
    bool ok = true;
    for (int i = 0; i < w.size(); ++i)
      if (w(i) < 0.0 || w(i) > c) ok = false;
    out.weights.push_back(w);
    out.admissible.push_back(ok);
  }
  return out;
}

EpsilonWeights epsilon_weights(const EmbeddedSimplex& simplex, double eps, double C) {
  const int N = simplex.N;
  if (C <= 0.0) C = N + 1.0;
  const Vec& apex = simplex.vertices[N];
  Vec o = circumcenter(simplex.vertices);
  double dist = (o - apex).norm();
  if (!(eps > 0.0) || !(eps < dist)) throw Error(ErrorKind::Degenerate, "eps must lie in (0, |A O|)");
  EpsilonWeights out;
  out.point = apex + eps * (o - apex) / dist;
  out.weights = sine_ratio_weights(simplex.vertices, out.point, C);
  Vec s = Vec::Zero(N);
  for (int i = 0; i < N; ++i) s += out.weights.weights[i] * unit(apex, simplex.vertices[i]);
  out.error_estimate = std::fabs(s.norm() - out.weights.weights[N]);
  return out;
}

}  // namespace fsf
