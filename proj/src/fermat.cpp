#include "fsf/fermat.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace fsf {

Vec unit(const Vec& from, const Vec& to) {
  Vec d = to - from;
  double n = d.norm();
  return n > 0.0 ? Vec(d / n) : Vec(Vec::Zero(d.size()));
}

double fermat_objective(const Points& pts, const std::vector<double>& w, const Vec& x) {
  double f = 0.0;
  for (size_t i = 0; i < pts.size(); ++i) f += w[i] * (pts[i] - x).norm();
  return f;
}

namespace {

Vec pull_at_vertex(const Points& pts, const std::vector<double>& w, int i) {
  Vec s = Vec::Zero(pts[i].size());
  for (size_t j = 0; j < pts.size(); ++j)
    if (static_cast<int>(j) != i) s += w[j] * unit(pts[i], pts[j]);
  return s;
}

// Sum of weighted unit vectors from x toward the points; zero at a floating optimum.
Vec pull(const Points& pts, const std::vector<double>& w, const Vec& x) {
  Vec s = Vec::Zero(x.size());
  for (size_t i = 0; i < pts.size(); ++i) s += w[i] * unit(x, pts[i]);
  return s;
}

void validate(const Points& pts, const std::vector<double>& w) {
  if (pts.size() < 2 || w.size() != pts.size())
    throw Error(ErrorKind::DimensionMismatch, "need matching points and weights");
  const long dim = pts[0].size();
  int positive = 0;
  for (size_t i = 0; i < pts.size(); ++i) {
    if (pts[i].size() != dim) throw Error(ErrorKind::DimensionMismatch, "mixed point dimensions");
    if (!(w[i] >= 0.0) || !std::isfinite(w[i])) throw Error(ErrorKind::BadWeights, "weights must be nonnegative");
    if (w[i] > 0.0) ++positive;
    for (size_t j = 0; j < i; ++j)
      if ((pts[i] - pts[j]).norm() == 0.0) throw Error(ErrorKind::DegenerateInput, "coincident points");
  }
  if (positive < 2) throw Error(ErrorKind::BadWeights, "need at least two positive weights");
}

}  // namespace

bool absorbing_test(const Points& pts, const std::vector<double>& w, int i) {
  return pull_at_vertex(pts, w, i).norm() <= w[i];
}

FermatSolution solve_fermat(const Points& pts, const std::vector<double>& w, const FermatOptions& opts) {
  validate(pts, w);
  const double wsum = std::accumulate(w.begin(), w.end(), 0.0);
  const int m = static_cast<int>(pts.size());
  double scale = 0.0;
  for (const auto& p : pts) scale = std::max(scale, (p - pts[0]).norm());

  for (int i = 0; i < m; ++i) {
    if (w[i] > 0.0 && absorbing_test(pts, w, i)) {
      FermatSolution s;
      s.point = pts[i];
      s.objective = fermat_objective(pts, w, pts[i]);
      s.kind = FermatKind::Absorbed;
      s.absorbed_at = i;
      s.gradient_residual = std::max(0.0, pull_at_vertex(pts, w, i).norm() - w[i]);
      return s;
    }
  }

  Vec x = Vec::Zero(pts[0].size());
  for (int i = 0; i < m; ++i) x += w[i] * pts[i];
  x /= wsum;
  double fx = fermat_objective(pts, w, x);
  const double vertex_eps = 1e-12 * std::max(1.0, scale);

  FermatSolution s;
  for (int it = 0; it < opts.max_iterations; ++it) {
    // Iterate sitting on a vertex: step off along the reduced pull (not absorbed there).
    int at = -1;
    for (int i = 0; i < m; ++i)
      if ((x - pts[i]).norm() < vertex_eps) at = i;
    if (at >= 0) {
      Vec r = pull_at_vertex(pts, w, at);
      double step = 1e-6 * std::max(1.0, scale);
      Vec cand = x + step * r / r.norm();
      while (fermat_objective(pts, w, cand) >= fx && step > 1e-16 * scale) {
        step *= 0.5;
        cand = x + step * r / r.norm();
      }
      x = cand;
      fx = fermat_objective(pts, w, x);
    }

    Vec g = pull(pts, w, x);
    double res = g.norm();
    if (res <= opts.rel_tol * wsum) {
      s.point = x;
      s.objective = fx;
      s.kind = FermatKind::Floating;
      s.iterations = it;
      s.gradient_residual = res;
      return s;
    }

    // Weiszfeld candidate.
    Vec num = Vec::Zero(x.size());
    double den = 0.0;
    Mat hess = Mat::Zero(x.size(), x.size());
    for (int i = 0; i < m; ++i) {
      double d = (pts[i] - x).norm();
      num += w[i] * pts[i] / d;
      den += w[i] / d;
      Vec u = (x - pts[i]) / d;
      hess += w[i] / d * (Mat::Identity(x.size(), x.size()) - u * u.transpose());
    }
    Vec xw = num / den;
    double fw = fermat_objective(pts, w, xw);

    // Newton candidate with backtracking; gradient of the objective is -g.
    Vec dir = hess.ldlt().solve(g);
    Vec xn = x;
    double fn = fx;
    if (dir.allFinite() && dir.dot(g) > 0.0) {
      double t = 1.0;
      for (int k = 0; k < 40; ++k) {
        Vec c = x + t * dir;
        double fc = fermat_objective(pts, w, c);
        if (fc < fx) {
          xn = c;
          fn = fc;
          break;
        }
        t *= 0.5;
      }
    }

    Vec next = (fn < fw) ? xn : xw;
    double fnext = std::min(fn, fw);
    if (fnext > fx) {
      next = x;
      fnext = fx;
    }
    if ((next - x).norm() == 0.0 && dir.allFinite()) {
      // Objective flat at working precision: take Newton steps that shrink the pull instead.
      double t = 1.0;
      for (int k = 0; k < 40; ++k) {
        Vec c = x + t * dir;
        if (pull(pts, w, c).norm() < res) {
          next = c;
          fnext = fermat_objective(pts, w, c);
          break;
        }
        t *= 0.5;
      }
    }
    if ((next - x).norm() == 0.0) {
      // No progress in floating point: accept the current point.
      s.point = x;
      s.objective = fx;
      s.kind = FermatKind::Floating;
      s.iterations = it;
      s.gradient_residual = res;
      if (res <= 1e-8 * wsum) return s;
      throw FermatNoConvergence(s);
    }
    x = next;
    fx = fnext;
  }
  s.point = x;
  s.objective = fx;
  s.iterations = opts.max_iterations;
  s.gradient_residual = pull(pts, w, x).norm();
  throw FermatNoConvergence(s);
}

}  // namespace fsf
