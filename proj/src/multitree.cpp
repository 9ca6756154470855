#include "fsf/multitree.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <thread>

namespace fsf {

int thread_count() {
  if (const char* env = std::getenv("FSF_THREADS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc ? static_cast<int>(hc) : 1;
}

namespace {

template <class Fn>
void parallel_for(int n, int threads, Fn fn) {
  if (threads <= 0) threads = thread_count();
  threads = std::max(1, std::min(threads, n));
  if (threads == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&, t] {
      try {
        for (int i = next++; i < n; i = next++) fn(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

std::vector<double> resolve_weights(const EdgeTuple& tuple, const std::vector<double>& weights) {
  std::vector<double> w = weights.empty() ? std::vector<double>(tuple.N + 1, 1.0) : weights;
  if (static_cast<int>(w.size()) != tuple.N + 1) throw Error(ErrorKind::DimensionMismatch, "need one weight per vertex");
  for (double x : w)
    if (!(x > 0.0)) throw Error(ErrorKind::BadWeights, "weights must be positive");
  return w;
}

FermatSolution fermat_or_best(const Points& pts, const std::vector<double>& w) {
  try {
    return solve_fermat(pts, w);
  } catch (const FermatNoConvergence& e) {
    return e.best;
  }
}

std::vector<double> permuted(const std::vector<double>& w, const std::vector<int>& perm) {
  std::vector<double> out(w.size());
  for (size_t i = 0; i < w.size(); ++i) out[i] = w[perm[i]];
  return out;
}

SteinerTree steiner_for(const Points& pts, const std::vector<double>& w, double bst) {
  if (pts.size() == 4) return solve_steiner_tetrahedron(pts, {w[0], w[1], w[2], w[3]}, bst).best;
  if (pts.size() < 4) {
    SteinerTopology star;
    star.terminals = static_cast<int>(pts.size());
    star.steiner = 1;
    for (int i = 0; i < star.terminals; ++i) star.edges.emplace_back(i, star.terminals);
    return solve_steiner_topology(pts, w, bst, star);
  }
  return solve_steiner_topology(pts, w, bst, SteinerTopology::caterpillar(static_cast<int>(pts.size())));
}

MultitreeRow base_row(const EdgeAssignment& a) {
  MultitreeRow r;
  r.assignment = a;
  r.simplex = embed_simplex(a);
  r.volume = simplex_volume(a.edges);
  try {
    r.circumradius = circumradius(r.simplex.vertices);
  } catch (const Error&) {
    r.circumradius = std::nan("");
  }
  r.cm_det = cayley_menger_det(a.edges);
  r.cm_det_exact = cayley_menger_det_exact(a.edges);
  return r;
}

void select_indices(MultitreeReport& rep) {
  for (int i = 0; i < static_cast<int>(rep.rows.size()); ++i) {
    const auto& r = rep.rows[i];
    if (rep.global_min_index < 0) {
      rep.global_min_index = rep.max_volume_index = i;
      continue;
    }
    const auto& g = rep.rows[rep.global_min_index];
    if (r.length < g.length || (r.length == g.length && r.assignment.key < g.assignment.key)) rep.global_min_index = i;
    const auto& m = rep.rows[rep.max_volume_index];
    if (r.volume > m.volume || (r.volume == m.volume && r.assignment.key < m.assignment.key)) rep.max_volume_index = i;
  }
}

std::vector<EdgeAssignment> realizable_assignments(const EdgeTuple& tuple, bool paper_order) {
  EnumerateOptions eo;
  eo.realizable_only = true;
  auto assigns = enumerate_incongruent(tuple, eo);
  if (assigns.empty()) throw Error(ErrorKind::NoRealizableAssignment, "no assignment of the tuple is realizable");
  if (paper_order && tuple.N == 3) sort_paper_order(assigns);
  return assigns;
}

}  // namespace

MultitreeReport build_multitree(const EdgeTuple& tuple, const std::vector<double>& weights, double bst,
                                const MultitreeOptions& opts) {
  tuple.validate();
  auto w = resolve_weights(tuple, weights);
  if (opts.mode == TreeMode::Steiner && !(bst > 0.0)) throw Error(ErrorKind::BadWeights, "bST must be positive");
  auto assigns = realizable_assignments(tuple, opts.paper_order);

  MultitreeReport rep;
  rep.tuple = tuple;
  rep.weights = w;
  rep.bst = bst;
  rep.mode = opts.mode;
  rep.rows.resize(assigns.size());
  parallel_for(static_cast<int>(assigns.size()), opts.threads, [&](int i) {
    MultitreeRow r = base_row(assigns[i]);
    const Points& pts = r.simplex.vertices;
    std::vector<int> ident(w.size());
    std::iota(ident.begin(), ident.end(), 0);
    r.weight_permutation = ident;
    r.fermat = fermat_or_best(pts, w);
    r.length = r.fermat.objective;
    if (opts.mode == TreeMode::Steiner) {
      std::vector<int> perm = ident;
      do {
        auto pw = permuted(w, perm);
        SteinerTree t = steiner_for(pts, pw, bst);
        if (!r.steiner || t.weighted_length < r.steiner->weighted_length) {
          r.steiner = t;
          r.weight_permutation = perm;
        }
      } while (opts.permute_weights && std::next_permutation(perm.begin(), perm.end()));
      r.length = r.steiner->weighted_length;
    }
    rep.rows[i] = std::move(r);
  });
  select_indices(rep);
  return rep;
}

MultitreeReport intermediate_multitree(const EdgeTuple& tuple, const std::vector<double>& weights, double bst,
                                       const SteinerTopology& topology, const MultitreeOptions& opts) {
  tuple.validate();
  auto w = resolve_weights(tuple, weights);
  if (topology.terminals != tuple.N + 1) throw Error(ErrorKind::DimensionMismatch, "topology terminal count must be N+1");
  auto assigns = realizable_assignments(tuple, opts.paper_order);
  MultitreeReport rep;
  rep.tuple = tuple;
  rep.weights = w;
  rep.bst = bst;
  rep.mode = TreeMode::Steiner;
  rep.rows.resize(assigns.size());
  parallel_for(static_cast<int>(assigns.size()), opts.threads, [&](int i) {
    MultitreeRow r = base_row(assigns[i]);
    r.weight_permutation.resize(w.size());
    std::iota(r.weight_permutation.begin(), r.weight_permutation.end(), 0);
    r.fermat = fermat_or_best(r.simplex.vertices, w);
    r.steiner = solve_steiner_topology(r.simplex.vertices, w, bst, topology);
    r.length = r.steiner->weighted_length;
    rep.rows[i] = std::move(r);
  });
  select_indices(rep);
  return rep;
}

SteinerTopology intermediate_topology_n5() {
  SteinerTopology t;
  t.terminals = 6;
  t.steiner = 3;
  t.edges = {{0, 6}, {1, 6}, {6, 7}, {2, 7}, {7, 8}, {3, 8}, {4, 8}, {5, 8}};
  return t;
}

namespace {

// Coordinates of p in an orthonormal basis of the plane through a, b, c (origin a).
Points planar(const Vec& a, const Vec& b, const Vec& c, const Vec& p) {
  Mat m(a.size(), 2);
  m.col(0) = b - a;
  m.col(1) = c - a;
  Eigen::HouseholderQR<Mat> qr(m);
  Mat q = qr.householderQ() * Mat::Identity(a.size(), 2);
  return {Vec(q.transpose() * (a - a)), Vec(q.transpose() * (b - a)), Vec(q.transpose() * (c - a)),
          Vec(q.transpose() * (p - a))};
}

double node_inverse_residual(const Vec& a, const Vec& b, const Vec& c, const Vec& node, const std::vector<double>& w) {
  try {
    Points pl = planar(a, b, c, node);
    Points tri{pl[0], pl[1], pl[2]};
    return volume_equality_residual(tri, pl[3], w);
  } catch (const Error&) {
    return std::nan("");
  }
}

}  // namespace

LagrangianSystem lagrangian_residual(const Points& terminals, const std::array<double, 4>& b, double bst,
                                     const Pairing& pairing, const Vec& node0, const Vec& node1) {
  if (terminals.size() != 4 || terminals[0].size() != 3)
    throw Error(ErrorKind::Unsupported, "the Lagrangian layer is implemented for tetrahedra only");
  Points A;
  std::array<double, 4> bw;
  for (int k = 0; k < 4; ++k) {
    A.push_back(terminals[pairing[k]]);
    bw[k] = b[pairing[k]];
  }
  auto d = [&](int i, int j) { return (A[i - 1] - A[j - 1]).norm(); };
  double scale = 0.0;
  for (int i = 1; i <= 4; ++i)
    for (int j = i + 1; j <= 4; ++j) scale = std::max(scale, d(i, j));

  LagrangianSystem sys;
  sys.names = {"a10", "a20", "a30", "a2'0", "a3'0", "a4'0", "a00'"};
  sys.x = {(node0 - A[0]).norm(), (node0 - A[1]).norm(), (node0 - A[2]).norm(), (node1 - A[1]).norm(),
           (node1 - A[2]).norm(), (node1 - A[3]).norm(), (node0 - node1).norm()};
  const int n = static_cast<int>(sys.x.size());

  auto f0 = [&](const std::vector<double>& x) {
    return bw[0] * x[0] + bw[1] * x[1] + bw[2] * x[4] + bw[3] * x[5] + bst * x[6];
  };
  // Side of p relative to the plane (a, b, c), compared with q.
  auto side = [](const Vec& a, const Vec& b, const Vec& c, const Vec& p, const Vec& q) {
    Eigen::Vector3d u = b - a, v = c - a;
    Vec n = u.cross(v);
    return (n.dot(p - a) * n.dot(q - a) < 0.0) ? -1 : 1;
  };
  const int s1 = side(A[1], A[2], A[3], node1, A[0]);
  const int s0 = side(A[0], A[1], A[2], node0, node1);
  // a00' against the same distance composed through the generalized cosine laws.
  auto f1 = [&](const std::vector<double>& x) {
    double a10p =
        a40_from_interior_distances(x[3], x[4], x[5], {d(2, 3), d(2, 4), d(2, 1), d(3, 4), d(3, 1), d(4, 1)}, s1);
    double e = a40_from_interior_distances(x[0], x[1], x[2], {d(1, 2), d(1, 3), a10p, d(2, 3), x[3], x[4]}, s0);
    return x[6] - e;
  };
  // Central differences from h = 1e-6 scale with Ridders extrapolation over shrinking steps;
  // near-coplanar nodes make the plain difference inaccurate.
  auto ridders = [&](auto&& f, int k) {
    constexpr int kLevels = 10;
    constexpr double kShrink = 1.4, kShrink2 = kShrink * kShrink;
    double h = 1e-6 * scale;
    auto central = [&](double step) {
      for (int tries = 0; tries < 20; ++tries, step *= 0.5) {
        try {
          auto xp = sys.x, xm = sys.x;
          xp[k] += step;
          xm[k] -= step;
          return std::make_pair((f(xp) - f(xm)) / (2 * step), step);
        } catch (const Error&) {
        }
      }
      throw Error(ErrorKind::IllConditioned, "difference steps leave the realizable domain");
    };
    double t[kLevels][kLevels];
    auto [d0, h0] = central(h);
    h = h0;
    t[0][0] = d0;
    double best = d0, err = 1e300;
    for (int i = 1; i < kLevels; ++i) {
      h /= kShrink;
      t[0][i] = central(h).first;
      double fac = kShrink2;
      for (int j = 1; j <= i; ++j) {
        t[j][i] = (t[j - 1][i] * fac - t[j - 1][i - 1]) / (fac - 1.0);
        fac *= kShrink2;
        double e = std::max(std::fabs(t[j][i] - t[j - 1][i]), std::fabs(t[j][i] - t[j - 1][i - 1]));
        if (e <= err) {
          err = e;
          best = t[j][i];
        }
      }
      if (std::fabs(t[i][i] - t[i - 1][i - 1]) >= 2.0 * err) break;
    }
    return best;
  };
  auto grad = [&](auto&& f) {
    Vec g(n);
    for (int k = 0; k < n; ++k) g(k) = ridders(f, k);
    return g;
  };
  sys.constraints = {f1(sys.x)};
  Vec g0 = grad(f0);
  Mat J(n, 1);
  J.col(0) = grad(f1);
  sys.grad_f0_norm = g0.norm();
  Eigen::JacobiSVD<Mat> svd(J, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vec& sv = svd.singularValues();
  if (sv(sv.size() - 1) <= 1e-12 * std::max(1.0, sv(0)))
    throw Error(ErrorKind::IllConditioned, "constraint gradients are rank deficient");
  sys.condition = sv(0) / sv(sv.size() - 1);
  Vec lam = svd.solve(-g0);
  sys.lambda = {1.0};
  for (int k = 0; k < lam.size(); ++k) sys.lambda.push_back(lam(k));
  sys.stationarity_residual = (g0 + J * lam).norm();
  sys.node_inverse_residuals = {node_inverse_residual(A[0], A[1], node1, node0, {bw[0], bw[1], bst}),
                                node_inverse_residual(A[2], A[3], node0, node1, {bw[2], bw[3], bst})};
  return sys;
}

MostNaturalResult most_natural(int N, int a, int grid_points) {
  if (N < 2) throw Error(ErrorKind::DimensionMismatch, "N must be at least 2");
  int threshold = (N == 3) ? 7 : static_cast<int>(std::ceil(min_consecutive_start(N)));
  if (a < threshold) throw Error(ErrorKind::ThresholdViolation, "consecutive start below the realizability threshold");
  EdgeTuple tuple;
  tuple.N = N;
  for (int k = 0; k < EdgeTuple::edge_count(N); ++k) tuple.lengths.push_back(a + k);
  auto assigns = realizable_assignments(tuple, N == 3);
  std::vector<MultitreeRow> rows(assigns.size());
  parallel_for(static_cast<int>(assigns.size()), 0, [&](int i) { rows[i] = base_row(assigns[i]); });

  MostNaturalResult res;
  res.N = N;
  res.start = a;
  for (int i = 0; i < static_cast<int>(rows.size()); ++i)
    if (res.max_volume_index < 0 || rows[i].volume > rows[res.max_volume_index].volume) res.max_volume_index = i;
  res.max_volume = assigns[res.max_volume_index];

  const std::vector<double> w(N + 1, 1.0);
  auto holds = [&](double bst) {
    std::vector<double> len(rows.size());
    parallel_for(static_cast<int>(rows.size()), 0,
                 [&](int i) { len[i] = steiner_for(rows[i].simplex.vertices, w, bst).weighted_length; });
    double mine = len[res.max_volume_index];
    for (size_t i = 0; i < len.size(); ++i)
      if (static_cast<int>(i) != res.max_volume_index && len[i] < mine - 1e-12 * mine) return false;
    return true;
  };
  res.global_min_at_unit = holds(1.0);

  // Weight-triangle bound for unit weights: bST < 2.
  const double upper = 2.0;
  int last = -1;
  for (int k = 1; k <= grid_points; ++k) {
    double b = upper * k / (grid_points + 1);
    res.grid.push_back(b);
    res.grid_holds.push_back(holds(b));
    if (res.grid_holds.back()) last = k - 1;
  }
  if (last < 0) return res;
  double lo = res.grid[last];
  double hi = (last + 1 < grid_points) ? res.grid[last + 1] : upper;
  for (int it = 0; it < 60 && hi - lo > 1e-6; ++it) {
    double mid = 0.5 * (lo + hi);
    if (holds(mid)) lo = mid; else hi = mid;
  }
  res.bst_bound = std::make_pair(lo, hi);
  return res;
}

}  // namespace fsf
