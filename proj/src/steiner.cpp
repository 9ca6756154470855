#include "fsf/steiner.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace fsf {

namespace {

double acos_checked(double c) {
  if (std::fabs(c) > 1.0 + 1e-12) throw Error(ErrorKind::WeightsInfeasible, "weights violate the triangle inequality");
  return std::acos(std::max(-1.0, std::min(1.0, c)));
}

constexpr double kPi = 3.14159265358979323846;

}  // namespace

std::array<double, 4> steiner_angles(double b1, double b2, double b3, double b4, double bst) {
  for (double b : {b1, b2, b3, b4, bst})
    if (!(b > 0.0)) throw Error(ErrorKind::BadWeights, "weights must be positive");
  auto strict = [](double p, double q, double r) { return p < q + r && q < p + r && r < p + q; };
  if (!strict(b1, b2, bst) || !strict(b3, b4, bst))
    throw Error(ErrorKind::WeightsInfeasible, "weights violate the triangle inequality");
  return {acos_checked((bst * bst - b1 * b1 - b2 * b2) / (2 * b1 * b2)),
          acos_checked((b1 * b1 - b2 * b2 - bst * bst) / (2 * b2 * bst)),
          acos_checked((bst * bst - b3 * b3 - b4 * b4) / (2 * b3 * b4)),
          acos_checked((b4 * b4 - b3 * b3 - bst * bst) / (2 * b3 * bst))};
}

std::string pairing_name(const Pairing& p) {
  std::string s;
  s += char('1' + p[0]);
  s += char('1' + p[1]);
  s += ';';
  s += char('1' + p[2]);
  s += char('1' + p[3]);
  return s;
}

SimpsonScaffold simpson_geometry(const Points& pts, const std::array<double, 4>& b, double bst, const Pairing& pairing) {
  if (pts.size() != 4) throw Error(ErrorKind::DimensionMismatch, "need four terminals");
  for (const auto& p : pts)
    if (p.size() != 3) throw Error(ErrorKind::DimensionMismatch, "terminals must lie in R^3");
  SimpsonScaffold sc;
  for (int k = 0; k < 4; ++k) {
    sc.terminals.push_back(pts[pairing[k]]);
    sc.weights[k] = b[pairing[k]];
  }
  sc.bst = bst;
  const auto& [b1, b2, b3, b4] = sc.weights;
  steiner_angles(b1, b2, b3, b4, bst);
  const Vec &A1 = sc.terminals[0], &A2 = sc.terminals[1], &A3 = sc.terminals[2], &A4 = sc.terminals[3];
  sc.a12 = (A2 - A1).norm();
  sc.a34 = (A3 - A4).norm();
  Vec u = (A2 - A1) / sc.a12;
  Vec w = (A3 - A4) / sc.a34;
  double cphi = u.dot(w);
  double sphi = std::sqrt(std::max(0.0, 1.0 - cphi * cphi));
  if (sphi < 1e-9) throw Error(ErrorKind::ParallelEdges, "paired edges are parallel");
  sc.phi = std::atan2(sphi, cphi);
  sc.phi_in_range = sc.phi > kPi / 4 && sc.phi < kPi / 2;

  // Closest points M12 = A1 + s u, M34 = A4 + t w.
  Vec r = A1 - A4;
  double d = u.dot(r), e = w.dot(r), den = 1.0 - cphi * cphi;
  double s = (cphi * e - d) / den;
  double t = (e - cphi * d) / den;
  sc.M12 = A1 + s * u;
  sc.M34 = A4 + t * w;
  sc.H = (sc.M34 - sc.M12).norm();
  double scale = std::max(sc.a12, sc.a34);
  if (sc.H <= 1e-12 * scale) throw Error(ErrorKind::Degenerate, "paired edges are coplanar");
  sc.M12A1 = -s;
  sc.M34A4 = -t;
  sc.ex = u;
  sc.ey = (w - cphi * u).normalized();
  sc.ez = (sc.M34 - sc.M12) / sc.H;

  double c1 = (bst * bst + b2 * b2 - b1 * b1) / (2 * b2 * bst);
  sc.A1H12 = sc.a12 * b2 / bst * c1;
  sc.h12 = sc.a12 * b2 / bst * std::sqrt(std::max(0.0, 1.0 - c1 * c1));
  double c4 = (bst * bst + b3 * b3 - b4 * b4) / (2 * b3 * bst);
  sc.A4H34 = sc.a34 * b3 / bst * c4;
  sc.h34 = sc.a34 * b3 / bst * std::sqrt(std::max(0.0, 1.0 - c4 * c4));
  sc.M12H12 = sc.M12A1 + sc.A1H12;
  sc.M34H34 = sc.M34A4 + sc.A4H34;
  return sc;
}

namespace {

double map_g(const SimpsonScaffold& sc, double x) {
  double q = std::sqrt(1 + x * x);
  return (sc.M12H12 * std::sin(sc.phi) * q + sc.h12 * std::cos(sc.phi) * x) / (sc.H * q + sc.h12);
}

double map_f(const SimpsonScaffold& sc, double y) {
  double q = std::sqrt(1 + y * y);
  return (sc.M34H34 * std::sin(sc.phi) * q + sc.h34 * std::cos(sc.phi) * y) / (sc.H * q + sc.h34);
}

}  // namespace

DihedralSolution dihedral_fixed_point(const SimpsonScaffold& sc, std::optional<double> start, int max_iterations) {
  double x = start.value_or(1.0 / std::sqrt(3.0));
  double lambda = 0.5;
  double prev_res = std::fabs(map_f(sc, map_g(sc, x)) - x);
  DihedralSolution sol;
  int it = 0;
  for (; it < max_iterations; ++it) {
    double fx = map_f(sc, map_g(sc, x));
    double res = std::fabs(fx - x);
    if (res > prev_res) {
      lambda *= 0.5;
      sol.non_contraction = true;
    }
    prev_res = res;
    double nx = (1.0 - lambda) * x + lambda * fx;
    double dx = std::fabs(nx - x);
    x = nx;
    if (dx <= 1e-12 * std::max(1.0, std::fabs(x))) break;
    if (lambda < 1e-12) break;
  }
  if (it >= max_iterations || !std::isfinite(x))
    throw Error(ErrorKind::NoConvergence, "dihedral fixed point did not converge");

  double y = map_g(sc, x);
  double sphi = std::sin(sc.phi), cphi = std::cos(sc.phi);
  sol.x = x;
  sol.y = y;
  sol.iterations = it + 1;
  sol.residual = std::max(std::fabs(y - map_g(sc, x)), std::fabs(x - map_f(sc, y)));
  sol.delta12 = std::atan2(1.0, x);
  sol.delta34 = std::atan2(1.0, y);
  sol.alpha = std::atan2(sphi, std::sqrt(std::max(0.0, x * x + y * y - 2 * x * y * cphi)));
  sol.phi = sc.phi;
  sol.H = sc.H;
  sol.h12 = sc.h12;
  sol.h34 = sc.h34;
  sol.M12H12 = sc.M12H12;
  sol.M34H34 = sc.M34H34;
  sol.t34 = sc.H * x / sphi;
  sol.t12 = sc.H * y / sphi;
  sol.T12 = sc.M12 + sol.t12 * sc.ex;
  sol.T34 = sc.M34 + sol.t34 * (cphi * sc.ex + sphi * sc.ey);
  return sol;
}

Points concircular_points(const DihedralSolution& sol) {
  double c = std::cos(sol.phi), s = std::sin(sol.phi);
  Vec t34p(3), t12(3), e12(3), e34(3);
  t34p << sol.t34 * c, sol.t34 * s, 0;
  t12 << sol.t12, 0, 0;
  e12 << sol.t34 * c, 0, 0;
  e34 << sol.t12 * c * c, sol.t12 * c * s, 0;
  Vec p = t12 + t34p - e34;
  return {t34p, p, t12, e12, e34};
}

double concircularity_deviation(const Points& pts) {
  if (pts.size() < 4) return 0.0;
  Points three{pts[0], pts[1], pts[2]};
  Vec c = circumcenter(three);
  double r = (pts[0] - c).norm();
  // Orthonormal basis of the circle's plane; off-plane components count as deviation.
  Mat basis(pts[0].size(), 2);
  basis.col(0) = pts[1] - pts[0];
  basis.col(1) = pts[2] - pts[0];
  Eigen::HouseholderQR<Mat> qr(basis);
  Mat q = qr.householderQ() * Mat::Identity(pts[0].size(), 2);
  double dev = 0.0;
  for (const auto& p : pts) {
    Vec d = p - c;
    Vec in = q * (q.transpose() * d);
    dev = std::max(dev, std::hypot(in.norm() - r, (d - in).norm()) / r);
  }
  return dev;
}

double concircularity_check(const DihedralSolution& sol) { return concircularity_deviation(concircular_points(sol)); }

std::pair<Vec, Vec> locate_nodes(DihedralSolution& sol, const SimpsonScaffold& sc) {
  const auto& [b1, b2, b3, b4] = sc.weights;
  auto ang = steiner_angles(b1, b2, b3, b4, sc.bst);
  const Vec &A1 = sc.terminals[0], &A2 = sc.terminals[1], &A3 = sc.terminals[2], &A4 = sc.terminals[3];
  double len = (sol.T34 - sol.T12).norm();
  if (len <= 1e-12 * std::max(sc.a12, sc.a34)) throw Error(ErrorKind::DegenerateTree, "Simpson line has zero length");
  Vec v = (sol.T34 - sol.T12) / len;
  const double tiny = 1e-10 * std::max(sc.a12, sc.a34);

  auto place = [&](const Vec& near, const Vec& far, double bn, double bf, double edge, double angle,
                   const Vec& anchor, const Vec& dir) {
    double dn = (anchor - near).norm(), df = (anchor - far).norm();
    if (dn <= tiny || df <= tiny) throw Error(ErrorKind::DegenerateTree, "node anchor coincides with a terminal");
    double k = (df / dn) * (bf / bn);
    double rad = edge / std::sqrt(k * k - 2 * k * std::cos(angle) + 1);
    Vec rel = anchor - near;
    double bq = dir.dot(rel), cq = rel.squaredNorm() - rad * rad;
    double disc = bq * bq - cq;
    if (disc < 0.0) throw Error(ErrorKind::DegenerateTree, "node circle misses the Simpson line");
    return Vec(anchor + (-bq + std::sqrt(disc)) * dir);
  };
  sol.O12 = place(A1, A2, b1, b2, sc.a12, ang[0], sol.T12, v);
  sol.O34 = place(A4, A3, b4, b3, sc.a34, ang[2], sol.T34, Vec(-v));
  if ((sol.O12 - sol.O34).norm() <= tiny) throw Error(ErrorKind::DegenerateTree, "nodes coincide");
  for (const auto& a : sc.terminals)
    if ((a - sol.O12).norm() <= tiny || (a - sol.O34).norm() <= tiny)
      throw Error(ErrorKind::DegenerateTree, "node coincides with a terminal");
  return {sol.O12, sol.O34};
}

double tree_length(const Points& nodes, const std::vector<std::pair<int, int>>& edges, const std::vector<double>& w) {
  double s = 0.0;
  for (size_t e = 0; e < edges.size(); ++e) s += w[e] * (nodes[edges[e].first] - nodes[edges[e].second]).norm();
  return s;
}

namespace {

// Balance residual of node k: norm of the weighted unit-vector sum over incident edges.
// A node sitting on a neighbour uses the absorbed form max(0, |pull of the rest| - merged weight).
double node_residual(const Points& nodes, const std::vector<std::pair<int, int>>& edges, const std::vector<double>& w,
                     int k, double tiny) {
  Vec s = Vec::Zero(nodes[k].size());
  double merged = 0.0;
  for (size_t e = 0; e < edges.size(); ++e) {
    int other = -1;
    if (edges[e].first == k) other = edges[e].second;
    if (edges[e].second == k) other = edges[e].first;
    if (other < 0) continue;
    Vec d = nodes[other] - nodes[k];
    if (d.norm() <= tiny) merged += w[e];
    else s += w[e] * d / d.norm();
  }
  return merged > 0.0 ? std::max(0.0, s.norm() - merged) : s.norm();
}

SteinerTree make_tree(const SteinerTopology& topo, Points nodes, const std::vector<double>& tw, double bst) {
  SteinerTree t;
  t.topology = topo;
  t.nodes = std::move(nodes);
  for (const auto& [a, b] : topo.edges) {
    if (a < topo.terminals) t.edge_weights.push_back(tw[a]);
    else if (b < topo.terminals) t.edge_weights.push_back(tw[b]);
    else t.edge_weights.push_back(bst);
  }
  t.weighted_length = tree_length(t.nodes, topo.edges, t.edge_weights);
  double scale = 0.0;
  for (int i = 0; i < topo.terminals; ++i) scale = std::max(scale, (t.nodes[i] - t.nodes[0]).norm());
  double tiny = 1e-8 * std::max(scale, 1e-300);
  for (int k = topo.terminals; k < topo.terminals + topo.steiner; ++k) {
    t.balance_residuals.push_back(node_residual(t.nodes, topo.edges, t.edge_weights, k, tiny));
    for (int j = 0; j < static_cast<int>(t.nodes.size()); ++j)
      if (j != k && (t.nodes[j] - t.nodes[k]).norm() <= tiny) t.degenerate = true;
  }
  return t;
}

}  // namespace

void SteinerTopology::validate() const {
  const int n = terminals + steiner;
  if (terminals < 2 || steiner < 0) throw Error(ErrorKind::DimensionMismatch, "bad topology size");
  if (static_cast<int>(edges.size()) != n - 1) throw Error(ErrorKind::DomainError, "a tree needs n-1 edges");
  std::vector<int> parent(n), deg(n, 0);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& [a, b] : edges) {
    if (a < 0 || b < 0 || a >= n || b >= n || a == b) throw Error(ErrorKind::DomainError, "bad edge");
    int ra = find(a), rb = find(b);
    if (ra == rb) throw Error(ErrorKind::DomainError, "topology has a cycle");
    parent[ra] = rb;
    ++deg[a];
    ++deg[b];
  }
  if (steiner > 0)
    for (int i = 0; i < terminals; ++i)
      if (deg[i] != 1) throw Error(ErrorKind::DomainError, "terminals must be leaves");
  for (int i = terminals; i < n; ++i)
    if (deg[i] < 3) throw Error(ErrorKind::DomainError, "Steiner nodes need degree at least 3");
}

int SteinerTopology::node_type(int steiner_index) const {
  const int k = terminals + steiner_index;
  int t = 0;
  for (const auto& [a, b] : edges) {
    if (a == k && b < terminals) ++t;
    if (b == k && a < terminals) ++t;
  }
  return t >= 2 ? 1 : (t == 1 ? 2 : 3);
}

SteinerTopology SteinerTopology::caterpillar(int n) {
  if (n < 4) throw Error(ErrorKind::DimensionMismatch, "caterpillar needs at least four terminals");
  SteinerTopology t;
  t.terminals = n;
  t.steiner = n - 2;
  t.edges = {{0, n}, {1, n}};
  for (int k = 1; k < n - 3; ++k) t.edges.emplace_back(k + 1, n + k);
  for (int k = 0; k + 1 < t.steiner; ++k) t.edges.emplace_back(n + k, n + k + 1);
  t.edges.emplace_back(n - 2, n + t.steiner - 1);
  t.edges.emplace_back(n - 1, n + t.steiner - 1);
  return t;
}

TetrahedronCandidate solve_pairing(const Points& pts, const std::array<double, 4>& b, double bst, const Pairing& pairing) {
  TetrahedronCandidate c;
  c.pairing = pairing;
  try {
    SimpsonScaffold sc = simpson_geometry(pts, b, bst, pairing);
    DihedralSolution sol = dihedral_fixed_point(sc);
    locate_nodes(sol, sc);
    c.solution = sol;

    SteinerTopology topo;
    topo.terminals = 4;
    topo.steiner = 2;
    topo.edges = {{pairing[0], 4}, {pairing[1], 4}, {pairing[2], 5}, {pairing[3], 5}, {4, 5}};
    Points nodes = pts;
    nodes.push_back(sol.O12);
    nodes.push_back(sol.O34);
    std::vector<double> tw(b.begin(), b.end());
    c.tree = make_tree(topo, nodes, tw, bst);
    c.tree.label = "steiner " + pairing_name(pairing);

    const Vec &A1 = sc.terminals[0], &A2 = sc.terminals[1], &A3 = sc.terminals[2], &A4 = sc.terminals[3];
    double l12 = (sol.T12 - A1).dot(sc.ex) / sc.a12;
    Vec w = (A3 - A4) / sc.a34;
    double l34 = (sol.T34 - A4).dot(w) / sc.a34;
    Vec v = sol.T34 - sol.T12;
    double len = v.norm();
    v /= len;
    double o12 = (sol.O12 - sol.T12).dot(v), o34 = (sol.O34 - sol.T12).dot(v);
    const double wsum = *std::max_element(b.begin(), b.end()) + bst;
    const auto& bw = sc.weights;
    if (!(l12 > 0 && l12 < 1 && l34 > 0 && l34 < 1)) c.reason = "Simpson line misses a paired edge";
    else if (!(o12 > 0 && o12 < o34 && o34 < len)) c.reason = "nodes out of order on the Simpson line";
    else if (absorbing_test({A1, A2, sol.O34}, {bw[0], bw[1], bst}, 0) ||
             absorbing_test({A1, A2, sol.O34}, {bw[0], bw[1], bst}, 1) ||
             absorbing_test({A1, A2, sol.O34}, {bw[0], bw[1], bst}, 2) ||
             absorbing_test({A3, A4, sol.O12}, {bw[2], bw[3], bst}, 0) ||
             absorbing_test({A3, A4, sol.O12}, {bw[2], bw[3], bst}, 1) ||
             absorbing_test({A3, A4, sol.O12}, {bw[2], bw[3], bst}, 2))
      c.reason = "partner triangle is absorbed";
    else if (*std::max_element(c.tree.balance_residuals.begin(), c.tree.balance_residuals.end()) > 1e-7 * wsum)
      c.reason = "nodes are not balanced";
    else c.valid = true;
  } catch (const Error& e) {
    c.reason = e.what();
  }
  return c;
}

bool existence_check(const Points& pts, const std::array<double, 4>& b, double bst, const Pairing& pairing) {
  return solve_pairing(pts, b, bst, pairing).valid;
}

SteinerTetrahedronResult solve_steiner_tetrahedron(const Points& pts, const std::array<double, 4>& b, double bst) {
  SteinerTetrahedronResult r;
  std::vector<double> tw(b.begin(), b.end());
  try {
    r.fermat = solve_fermat(pts, tw);
  } catch (const FermatNoConvergence& e) {
    r.fermat = e.best;
  }
  SteinerTopology topo;
  topo.terminals = 4;
  topo.steiner = 2;
  topo.edges = {{0, 4}, {1, 4}, {2, 5}, {3, 5}, {4, 5}};
  Points nodes = pts;
  nodes.push_back(r.fermat.point);
  nodes.push_back(r.fermat.point);
  r.best = make_tree(topo, nodes, tw, bst);
  r.best.degenerate = true;
  r.best.label = "fermat";
  for (const auto& p : kPairings) {
    r.candidates.push_back(solve_pairing(pts, b, bst, p));
    const auto& c = r.candidates.back();
    if (c.valid && c.tree.weighted_length < r.best.weighted_length) r.best = c.tree;
  }
  return r;
}

SteinerTree solve_steiner_topology(const Points& terminals, const std::vector<double>& b, double bst,
                                   const SteinerTopology& topo, const TopologyOptions& opts) {
  topo.validate();
  if (static_cast<int>(terminals.size()) != topo.terminals || b.size() != terminals.size())
    throw Error(ErrorKind::DimensionMismatch, "terminal count does not match the topology");
  if (!(bst > 0.0)) throw Error(ErrorKind::BadWeights, "bST must be positive");
  for (double x : b)
    if (!(x > 0.0)) throw Error(ErrorKind::BadWeights, "weights must be positive");
  if (topo.steiner == 0) return make_tree(topo, terminals, b, bst);
  const int t = topo.terminals, s = topo.steiner, n = t + s;
  const long dim = terminals[0].size();

  std::vector<double> w;
  for (const auto& [p, q] : topo.edges) w.push_back(p < t ? b[p] : (q < t ? b[q] : bst));
  std::vector<std::vector<std::pair<int, double>>> adj(n);
  for (size_t e = 0; e < topo.edges.size(); ++e) {
    adj[topo.edges[e].first].emplace_back(topo.edges[e].second, w[e]);
    adj[topo.edges[e].second].emplace_back(topo.edges[e].first, w[e]);
  }
  double scale = 0.0;
  Vec centroid = Vec::Zero(dim);
  for (const auto& p : terminals) centroid += p / t;
  for (const auto& p : terminals) scale = std::max(scale, (p - centroid).norm());
  const double tiny = 1e-12 * scale;

  Points nodes = terminals;
  for (int k = 0; k < s; ++k) {
    Vec p = Vec::Zero(dim);
    int cnt = 0;
    for (const auto& [o, ww] : adj[t + k])
      if (o < t) {
        p += terminals[o];
        ++cnt;
      }
    nodes.push_back(cnt ? Vec(0.5 * (p / cnt) + 0.5 * centroid) : centroid);
  }

  auto length = [&](const Points& x) { return tree_length(x, topo.edges, w); };
  double f = length(nodes);
  bool converged = false;
  for (int sweep = 0; sweep < opts.max_sweeps; ++sweep) {
    for (int k = t; k < n; ++k) {
      Points nb;
      std::vector<double> nw;
      for (const auto& [o, ww] : adj[k]) {
        bool merged = false;
        for (size_t j = 0; j < nb.size(); ++j)
          if ((nb[j] - nodes[o]).norm() <= tiny) {
            nw[j] += ww;
            merged = true;
          }
        if (!merged) {
          nb.push_back(nodes[o]);
          nw.push_back(ww);
        }
      }
      if (nb.size() == 1) {
        nodes[k] = nb[0];
        continue;
      }
      try {
        nodes[k] = solve_fermat(nb, nw).point;
      } catch (const FermatNoConvergence& e) {
        nodes[k] = e.best.point;
      }
    }
    double nf = length(nodes);
    if (f - nf <= opts.rel_tol * f) {
      f = std::min(f, nf);
      converged = true;
      break;
    }
    f = nf;
  }

  // Descent stalls where nodes meet (the length is not differentiable there). Finish with
  // damped Newton on the smoothed length sum w sqrt(|d|^2 + eps^2), eps driven to zero.
  auto smoothed = [&](const Points& x, double eps) {
    double v = 0.0;
    for (size_t e = 0; e < topo.edges.size(); ++e)
      v += w[e] * std::sqrt((x[topo.edges[e].first] - x[topo.edges[e].second]).squaredNorm() + eps * eps);
    return v;
  };
  Points best = nodes;
  for (double eps = 1e-2 * scale; eps >= 1e-14 * scale; eps *= 1e-2) {
    for (int it = 0; it < 100; ++it) {
      Vec g = Vec::Zero(s * dim);
      Mat h = Mat::Zero(s * dim, s * dim);
      for (size_t e = 0; e < topo.edges.size(); ++e) {
        auto [p, q] = topo.edges[e];
        Vec d = nodes[p] - nodes[q];
        double r = std::sqrt(d.squaredNorm() + eps * eps);
        Mat blk = w[e] / r * (Mat::Identity(dim, dim) - d * d.transpose() / (r * r));
        if (p >= t) {
          g.segment((p - t) * dim, dim) += w[e] * d / r;
          h.block((p - t) * dim, (p - t) * dim, dim, dim) += blk;
        }
        if (q >= t) {
          g.segment((q - t) * dim, dim) -= w[e] * d / r;
          h.block((q - t) * dim, (q - t) * dim, dim, dim) += blk;
        }
        if (p >= t && q >= t) {
          h.block((p - t) * dim, (q - t) * dim, dim, dim) -= blk;
          h.block((q - t) * dim, (p - t) * dim, dim, dim) -= blk;
        }
      }
      if (g.norm() <= 1e-15 * f) break;
      Vec step = h.ldlt().solve(-g);
      if (!step.allFinite() || step.dot(g) >= 0.0) step = -g;
      double cur = smoothed(nodes, eps), tau = 1.0;
      bool improved = false;
      for (int k = 0; k < 60; ++k) {
        Points trial = nodes;
        for (int j = 0; j < s; ++j) trial[t + j] += tau * step.segment(j * dim, dim);
        if (smoothed(trial, eps) < cur) {
          nodes = trial;
          improved = true;
          break;
        }
        tau *= 0.5;
      }
      if (!improved) break;
    }
    double nf = length(nodes);
    if (nf < f) {
      f = nf;
      best = nodes;
    }
  }
  nodes = best;
  SteinerTree tree = make_tree(topo, nodes, b, bst);
  double worst = 0.0, wmax = bst;
  for (double x : b) wmax = std::max(wmax, x);
  for (double r : tree.balance_residuals) worst = std::max(worst, r);
  if (!converged && worst > 1e-8 * wmax) throw Error(ErrorKind::MaxIterations, "tree did not settle");
  return tree;
}

}  // namespace fsf
