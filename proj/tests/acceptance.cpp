// One PASS/FAIL line per acceptance criterion; exits nonzero if any criterion fails.
#include "fsf/multitree.hpp"
#include "oracles.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numeric>
#include <set>
#include <sstream>

using namespace fsf;

namespace {

int failures = 0;

void report(bool ok, const std::string& id, const std::string& name, const std::string& detail) {
  std::printf("%s %s %s: %s\n", ok ? "PASS" : "FAIL", id.c_str(), name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

// Runs a criterion body; an exception counts as a failure.
void criterion(const std::string& id, const std::string& name, const std::function<bool(std::string&)>& body) {
  std::string detail;
  bool ok = false;
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail += std::string(" exception: ") + e.what();
  }
  report(ok, id, name, detail);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string num(double x, int sig = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", sig, x);
  return buf;
}

// (a12, a43, a13, a23, a24, a14) to a12, a13, a14, a23, a24, a34.
std::vector<double> from_display(const std::array<double, 6>& d) { return {d[0], d[2], d[5], d[3], d[4], d[1]}; }

struct TableRow {
  std::array<double, 6> edges;
  double minf, R;
  long long D;
};

// Reference table for the consecutive tuple 7..12, unit weights.
const std::vector<TableRow> kTable{
    {{12, 7, 11, 10, 9, 8}, 22.8131, 6.62431, 1905982},  {{12, 7, 11, 10, 8, 9}, 22.7838, 6.59837, 1994518},
    {{12, 7, 11, 9, 10, 8}, 23.0364, 6.29963, 1843168},  {{12, 7, 11, 9, 8, 10}, 22.9123, 6.28226, 2200288},
    {{12, 7, 11, 8, 9, 10}, 22.9827, 6.1946, 2179582},   {{12, 7, 11, 8, 10, 9}, 23.0773, 6.18682, 1910998},
    {{12, 8, 11, 10, 9, 7}, 22.8788, 6.69308, 1808302},  {{12, 8, 11, 10, 7, 9}, 22.8186, 6.64231, 1914478},
    {{12, 8, 11, 9, 10, 7}, 23.149, 6.33008, 1811038},   {{12, 8, 11, 9, 7, 10}, 22.955, 6.29235, 2133358},
    {{12, 8, 11, 7, 10, 9}, 23.2132, 6.15014, 1918558},  {{12, 8, 11, 7, 9, 10}, 23.0802, 6.16018, 2134702},
    {{12, 9, 11, 10, 8, 7}, 22.9099, 6.77582, 1642518},  {{12, 9, 11, 10, 7, 8}, 22.8789, 6.7513, 1660158},
    {{12, 9, 11, 8, 7, 10}, 23.0802, 6.1715, 1986750},   {{12, 9, 11, 8, 10, 7}, 23.3948, 6.17336, 1823958},
    {{12, 9, 11, 7, 10, 8}, 23.4179, 6.10726, 1863648},  {{12, 9, 11, 7, 8, 10}, 23.1348, 6.12701, 2008800},
    {{12, 10, 11, 9, 8, 7}, 23.7593, 6.35084, 1397038},  {{12, 10, 11, 9, 7, 8}, 23.8075, 6.32303, 1362238},
    {{12, 10, 11, 8, 9, 7}, 23.433, 6.1913, 1575742},    {{12, 10, 11, 8, 7, 9}, 23.2132, 6.17608, 1469950},
    {{12, 10, 11, 7, 8, 9}, 23.3136, 6.09502, 1557550},  {{12, 10, 11, 7, 9, 8}, 23.4634, 6.09011, 1628542},
    {{12, 11, 10, 9, 8, 7}, 23.4331, 6.24487, 664558},   {{12, 11, 10, 9, 7, 8}, 23.3949, 6.24406, 612118},
    {{12, 11, 10, 8, 9, 7}, 23.4178, 6.05007, 863968},   {{12, 11, 10, 8, 7, 9}, 23.5755, 6.05327, 652000},
    {{12, 11, 10, 7, 8, 9}, 23.5829, 6.00785, 717550},   {{12, 11, 10, 7, 9, 8}, 23.4634, 6.00985, 877078},
};

EdgeTuple seven_to_twelve() { return {3, {7, 8, 9, 10, 11, 12}}; }

Vec v3(double x, double y, double z) {
  Vec v(3);
  v << x, y, z;
  return v;
}

Points worked_points() { return {v3(2, 0, 0), v3(6.86, 1.37, 0), v3(0, 6, 5), v3(0, 0, 5)}; }
constexpr std::array<double, 4> kWorkedWeights{0.85, 0.88, 0.83, 1.08};

const MultitreeReport& table_report(double* seconds = nullptr) {
  static double elapsed = 0;
  static const MultitreeReport rep = [] {
    auto t0 = std::chrono::steady_clock::now();
    MultitreeOptions o;
    o.paper_order = true;
    auto r = build_multitree(seven_to_twelve(), {1, 1, 1, 1}, 1.0, o);
    elapsed = seconds_since(t0);
    return r;
  }();
  if (seconds) *seconds = elapsed;
  return rep;
}

int row_with_key(const MultitreeReport& rep, const std::vector<double>& key) {
  for (size_t i = 0; i < rep.rows.size(); ++i)
    if (rep.rows[i].assignment.key == key) return static_cast<int>(i);
  return -1;
}

std::vector<double> key_of(const std::array<double, 6>& display) {
  return EdgeAssignment::from_flat(3, from_display(display)).key;
}

Vec random_unit(std::mt19937_64& g, int N) { return oracle::random_vec(g, N).normalized(); }

// N+1 rays positively spanning R^N, then drivers inside the negative cone of the first N.
Points random_rays(std::mt19937_64& g, int N, int drivers) {
  std::uniform_real_distribution<double> mu(0.3, 1.0);
  while (true) {
    Points r;
    for (int i = 0; i < N; ++i) r.push_back(random_unit(g, N));
    Vec s = Vec::Zero(N);
    for (int i = 0; i < N; ++i) s += mu(g) * r[i];
    if (s.norm() < 1e-3) continue;
    r.push_back(-s.normalized());
    for (int d = 0; d < drivers; ++d) {
      Vec t = Vec::Zero(N);
      for (int i = 0; i < N; ++i) t += mu(g) * r[i];
      r.push_back(-t.normalized());
    }
    Eigen::MatrixXd m(N, N);
    for (int i = 0; i < N; ++i) m.col(i) = r[i];
    if (std::fabs(m.determinant()) > 0.05) return r;
  }
}

}  // namespace

int main() {
  criterion("1", "table regression", [](std::string& d) {
    double secs = 0;
    const auto& rep = table_report(&secs);
    std::set<std::vector<double>> keys;
    std::vector<int> bad;
    for (size_t i = 0; i < kTable.size(); ++i) {
      const auto& t = kTable[i];
      auto key = key_of(t.edges);
      keys.insert(key);
      int k = row_with_key(rep, key);
      if (k < 0) {
        bad.push_back(static_cast<int>(i) + 1);
        std::cerr << "  table row " << i + 1 << ": no computed tetrahedron with these edges\n";
        continue;
      }
      const auto& r = rep.rows[k];
      double df = std::fabs(r.length - t.minf), dr = std::fabs(r.circumradius - t.R);
      bool dok = r.cm_det_exact && static_cast<long long>(*r.cm_det_exact) == t.D;
      if (df > 1e-3 || dr > 1e-4 || !dok) {
        bad.push_back(static_cast<int>(i) + 1);
        std::cerr << "  table row " << i + 1 << ": minf " << num(r.length) << " vs " << num(t.minf) << ", R "
                  << num(r.circumradius) << " vs " << num(t.R) << ", D "
                  << (r.cm_det_exact ? std::to_string(static_cast<long long>(*r.cm_det_exact)) : "?") << " vs "
                  << t.D << "\n";
      }
    }
    std::ostringstream os;
    os << kTable.size() - bad.size() << "/30 rows within tolerance, " << keys.size() << " distinct reference rows, "
       << rep.rows.size() << " computed rows, " << num(secs, 3) << " s";
    if (!bad.empty()) {
      os << "; mismatched rows";
      for (int b : bad) os << " " << b;
    }
    d = os.str();
    return bad.empty() && rep.rows.size() == 30 && secs < 5.0;
  });

  criterion("2", "global minimum vs maximum volume", [](std::string& d) {
    const auto& rep = table_report();
    int gmin = row_with_key(rep, key_of({12, 7, 11, 10, 8, 9}));
    int vmax = row_with_key(rep, key_of({12, 7, 11, 9, 8, 10}));
    d = "global min row " + std::to_string(rep.global_min_index + 1) + " (" +
        num(rep.rows[rep.global_min_index].length) + "), max volume row " + std::to_string(rep.max_volume_index + 1) +
        " (" + num(rep.rows[rep.max_volume_index].length) + ")";
    return gmin >= 0 && vmax >= 0 && rep.global_min_index == gmin && rep.max_volume_index == vmax &&
           rep.rows[vmax].length > rep.rows[gmin].length;
  });

  criterion("3", "worked example", [](std::string& d) {
    auto sc = simpson_geometry(worked_points(), kWorkedWeights, 1.0);
    auto s = dihedral_fixed_point(sc);
    locate_nodes(s, sc);
    auto deg = [](double r) { return r * 180.0 / M_PI; };
    Points ref{v3(0, 2.61, 0), v3(3.16, 2.61, 0), v3(3.16, 0.33, 0), v3(0.83, -0.33, 0), v3(0, 0.33, 0)};
    double cref = concircularity_deviation(ref), csol = concircularity_check(s);
    struct Item {
      const char* name;
      double got, want, tol;
    };
    std::vector<Item> items{{"phi", deg(s.phi), 74.25, 0.05},        {"H", s.H, 5.0, 1e-9},
                            {"delta12", deg(s.delta12), 58.58, 0.05}, {"delta34", deg(s.delta34), 57.75, 0.05},
                            {"alpha", deg(s.alpha), 52.08, 0.05}};
    bool ok = cref <= 5e-3 && csol <= 1e-8;
    std::ostringstream os;
    for (const auto& it : items) {
      bool good = std::fabs(it.got - it.want) <= it.tol;
      ok = ok && good;
      os << it.name << " " << num(it.got) << (good ? "" : " (want " + num(it.want) + ")") << ", ";
    }
    os << "concircular ref " << num(cref, 3) << ", computed " << num(csol, 3);
    d = os.str();
    return ok;
  });

  criterion("4", "thresholds", [](std::string& d) {
    std::ostringstream os;
    bool ok = true;
    auto timed = [&](const char* name, const std::function<double()>& f, double lo, double hi) {
      auto t0 = std::chrono::steady_clock::now();
      double v = f();
      double s = seconds_since(t0);
      bool good = v > lo && v < hi && s < 1.0;
      ok = ok && good;
      os << name << " " << num(v, 9) << " (" << num(s, 2) << " s)" << (good ? "" : " OUT") << ", ";
    };
    timed("hertog", hertog_consecutive_root, 6.09, 6.10);
    timed("blumenthal", blumenthal_ratio_threshold, 1.91, 1.92);
    timed("lambda3", [] { return dekster_wilker_min_edge(3, 1.0); }, 1 / std::sqrt(2.0) - 1e-12,
          1 / std::sqrt(2.0) + 1e-12);
    timed("lambda4", [] { return dekster_wilker_min_edge(4, 1.0); }, std::sqrt(7.0 / 12) - 1e-12,
          std::sqrt(7.0 / 12) + 1e-12);
    // Smallest integer start whose consecutive sextuple lies in the guaranteed domain.
    int dw_start = 0;
    for (int a = 1; a < 100 && !dw_start; ++a) {
      EdgeTuple t{3, {}};
      for (int k = 0; k < 6; ++k) t.lengths.push_back(a + k);
      if (dekster_wilker_guaranteed(t)) dw_start = a;
    }
    int hertog_start = static_cast<int>(std::ceil(hertog_consecutive_root()));
    EdgeTuple six{3, {6, 7, 8, 9, 10, 11}}, seven{3, {7, 8, 9, 10, 11, 12}};
    bool complete_ok = !is_complete_tetrahedral(six) && is_complete_tetrahedral(seven);
    ok = ok && dw_start == 13 && hertog_start == 7 && complete_ok;
    os << "dw start " << dw_start << ", hertog start " << hertog_start << (complete_ok ? "" : ", completeness OUT");
    d = os.str();
    return ok;
  });

  criterion("5", "counts", [](std::string& d) {
    auto six = enumerate_incongruent(seven_to_twelve(), {false});
    EdgeTuple ten{4, {}};
    for (int k = 0; k < 10; ++k) ten.lengths.push_back(1.0 + 0.1 * k);
    double formula = 1;
    for (int k = 2; k <= 10; ++k) formula *= k;
    formula /= 120.0;
    auto all = enumerate_incongruent(ten, {false});
    std::set<std::vector<double>> keys;
    for (auto& a : all) keys.insert(a.key);
    std::mt19937_64 g(15);
    int hits = 0;
    for (int s = 0; s < 500; ++s) {
      auto lab = ten.lengths;
      std::shuffle(lab.begin(), lab.end(), g);
      hits += static_cast<int>(keys.count(EdgeAssignment::from_flat(4, lab).key));
    }
    d = "sextuple " + std::to_string(six.size()) + ", tentuple formula " + num(formula, 10) + ", enumerated " +
        std::to_string(all.size()) + " (" + std::to_string(keys.size()) + " distinct), sampled orbits " +
        std::to_string(hits) + "/500";
    return six.size() == 30 && formula == 30240 && all.size() == 30240 && keys.size() == 30240 && hits == 500;
  });

  criterion("6a", "inverse/forward round trip", [](std::string& d) {
    std::mt19937_64 g(601);
    double worst = 0;
    int n = 0;
    for (int N = 2; N <= 5; ++N)
      for (int k = 0; k < 60; ++k, ++n) {
        Points s = oracle::random_simplex(g, N, 10.0);
        Vec p = Vec::Zero(N);
        auto bar = oracle::random_barycentric(g, N + 1);
        for (int i = 0; i <= N; ++i) p += bar[i] * s[i];
        auto inv = invert_weights(s, p, N + 1.0, false);
        worst = std::max(worst, (solve_fermat(s, inv.weights).point - p).norm());
      }
    d = std::to_string(n) + " instances, worst distance " + num(worst, 3);
    return n >= 200 && worst <= 1e-6;
  });

  criterion("6b", "volume-equality residual", [](std::string& d) {
    std::mt19937_64 g(602);
    double worst = 0;
    for (int N = 2; N <= 5; ++N)
      for (int k = 0; k < 50; ++k) {
        Points s = oracle::random_simplex(g, N, 10.0);
        Vec p = Vec::Zero(N);
        auto bar = oracle::random_barycentric(g, N + 1);
        for (int i = 0; i <= N; ++i) p += bar[i] * s[i];
        auto inv = invert_weights(s, p, N + 1.0, false);
        worst = std::max({worst, inv.residual, volume_equality_residual(s, p, inv.weights)});
      }
    d = "worst residual " + num(worst, 3);
    return worst <= 1e-9;
  });

  criterion("6c", "sine-ratio vs volume weights", [](std::string& d) {
    std::mt19937_64 g(603);
    double worst = 0;
    for (int N = 2; N <= 5; ++N)
      for (int k = 0; k < 50; ++k) {
        Points s = oracle::random_simplex(g, N, 10.0);
        Vec p = Vec::Zero(N);
        auto bar = oracle::random_barycentric(g, N + 1);
        for (int i = 0; i <= N; ++i) p += bar[i] * s[i];
        auto a = invert_weights(s, p, N + 1.0, false), b = sine_ratio_weights(s, p, N + 1.0);
        for (int i = 0; i <= N; ++i) worst = std::max(worst, std::fabs(a.weights[i] - b.weights[i]));
      }
    d = "worst difference " + num(worst, 3);
    return worst <= 1e-8;
  });

  criterion("6d", "plasticity keeps the Fermat point", [](std::string& d) {
    std::mt19937_64 g(604);
    std::uniform_real_distribution<double> len(1.0, 4.0), frac(0.05, 0.95);
    double worst = 0;
    int samples = 0;
    for (int trial = 0; trial < 45; ++trial) {
      int N = 2 + trial % 3, drivers = 1 + trial % 2;
      auto rays = random_rays(g, N, drivers);
      auto m = plasticity_general(rays, N, 1.0 + trial % 3);
      Points ends;
      for (auto& r : rays) ends.push_back(len(g) * r);
      for (int s = 0; s < 5; ++s) {
        // Random driver values scaled back into the nonnegative window.
        Vec dv(drivers);
        for (int k = 0; k < drivers; ++k) dv(k) = frac(g);
        double t = 1e300;
        for (int i = 0; i <= N; ++i) {
          double slope = m.a.row(i).dot(dv);
          if (slope < 0) t = std::min(t, m.b(i) / -slope);
        }
        if (!(t < 1e300)) t = 1.0;
        Vec w = m.weights(frac(g) * t * dv);
        if (w.minCoeff() < 0) continue;
        std::vector<double> wv(w.data(), w.data() + w.size());
        worst = std::max(worst, solve_fermat(ends, wv).point.norm());
        ++samples;
      }
    }
    d = std::to_string(samples) + " driver samples, worst displacement " + num(worst, 3);
    return samples >= 100 && worst <= 1e-6;
  });

  criterion("6e", "mutation flow constraints", [](std::string& d) {
    std::mt19937_64 g(605);
    double worst = 0;
    for (int trial = 0; trial < 60; ++trial) {
      int N = 2 + trial % 3;
      auto rays = random_rays(g, N, 1);
      auto m = plasticity_coefficients(rays, 1.0);
      double t = 1e300;
      for (int i = 0; i <= N; ++i)
        if (m.a(i, 0) < 0) t = std::min(t, m.b(i) / -m.a(i, 0));
      Vec target = m.weights(Vec::Constant(1, 0.5 * t));
      const int M = N + 2;
      int k = 1 + trial % M;
      double storage = target.head(k).sum() - target.tail(M - k).sum();
      double c = target.sum();
      Vec w = mutation_weights(m, k, c, storage);
      worst = std::max({worst, std::fabs(w.head(k).sum() - w.tail(M - k).sum() - storage), std::fabs(w.sum() - c)});
      Vec bal = Vec::Zero(N);
      for (int j = 0; j < M; ++j) bal += w(j) * rays[j];
      worst = std::max(worst, bal.norm());
    }
    d = "worst constraint violation " + num(worst, 3);
    return worst <= 1e-12;
  });

  criterion("6f", "bessel paths", [](std::string& d) {
    BesselOptions o;
    o.m = 3;
    o.seed = 42;
    auto a = bessel_path(o), b = bessel_path(o);
    bool nonneg = true;
    for (double r : a.values) nonneg = nonneg && r >= 0.0;
    o.seed = 43;
    bool differs = bessel_path(o).values != a.values;
    // Criterion at the horizon; the worst error along the whole path is reported alongside.
    double worst = 0, worst_path = 0;
    for (double r0 : {0.0, 1.0, 2.0})
      for (double m : {2.0, 3.0, 5.0})
        for (auto scheme : {BesselScheme::DriftImplicit, BesselScheme::EulerMaruyama}) {
          if (scheme == BesselScheme::EulerMaruyama && r0 == 0.0) continue;
          BesselOptions q;
          q.r0 = r0;
          q.m = m;
          q.t_end = 2.0;
          q.dt = 1e-4;
          q.noise = false;
          q.scheme = scheme;
          auto p = bessel_path(q);
          auto err = [&](size_t k) {
            double want = r0 * r0 + (m - 1) * p.times[k];
            return std::fabs(p.values[k] * p.values[k] - want) / want;
          };
          worst = std::max(worst, err(p.times.size() - 1));
          for (size_t k = p.times.size() / 10; k < p.times.size(); k += p.times.size() / 10)
            worst_path = std::max(worst_path, err(k));
        }
    d = std::string(nonneg ? "nonnegative" : "NEGATIVE") + ", " + (a.values == b.values ? "seeded" : "NOT SEEDED") +
        ", " + (differs ? "seed-sensitive" : "seed-insensitive") + ", drift-only error at t_end " + num(worst, 3) +
        " (worst from t = 0.2 on: " + num(worst_path, 3) + ")";
    return nonneg && a.values == b.values && differs && worst <= 1e-3;
  });

  // Shared random Steiner instances for 6g and 6h.
  struct SteinerCase {
    double balance = 0;
    double steiner = 0, fermat = 0;
  };
  static std::vector<SteinerCase> cases;
  {
    std::mt19937_64 g(607);
    std::uniform_real_distribution<double> u(0.6, 1.4), bs(0.5, 1.8);
    for (int trial = 0; trial < 40; ++trial) {
      Points p = oracle::random_simplex(g, 3, 5.0);
      std::array<double, 4> w{u(g), u(g), u(g), u(g)};
      double bst = bs(g);
      auto r = solve_steiner_tetrahedron(p, w, bst);
      SteinerCase c;
      for (const auto& cand : r.candidates)
        if (cand.valid)
          for (double x : cand.tree.balance_residuals) c.balance = std::max(c.balance, x);
      c.steiner = r.best.weighted_length;
      c.fermat = r.fermat.objective;
      cases.push_back(c);
    }
    for (int trial = 0; trial < 20; ++trial) {
      int T = 5 + trial % 2;
      Points p;
      for (int i = 0; i < T; ++i) p.push_back(oracle::random_vec(g, 3, -5, 5));
      std::vector<double> w;
      for (int i = 0; i < T; ++i) w.push_back(u(g));
      double bst = bs(g);
      SteinerCase c;
      try {
        auto t = solve_steiner_topology(p, w, bst, SteinerTopology::caterpillar(T));
        for (double x : t.balance_residuals) c.balance = std::max(c.balance, x);
        c.steiner = t.weighted_length;
      } catch (const Error&) {
        c.balance = 1.0;
      }
      c.fermat = solve_fermat(p, w).objective;
      // The best tree over a fixed topology may be worse than the star when the topology is poor,
      // so only the pipeline comparison below enters 6h for these.
      c.steiner = std::min(c.steiner, c.fermat);
      cases.push_back(c);
    }
  }

  criterion("6g", "steiner balance", [](std::string& d) {
    double worst = 0;
    for (const auto& c : cases) worst = std::max(worst, c.balance);
    d = std::to_string(cases.size()) + " instances, worst node balance residual " + num(worst, 3);
    return worst <= 1e-8;
  });

  criterion("6h", "steiner not longer than fermat", [](std::string& d) {
    double worst = -1e300;
    int n = 0;
    for (const auto& c : cases) {
      worst = std::max(worst, c.steiner - c.fermat);
      ++n;
    }
    const auto& rep = table_report();
    MultitreeOptions o;
    o.mode = TreeMode::Steiner;
    auto st = build_multitree(seven_to_twelve(), {1, 1, 1, 1}, 1.0, o);
    for (size_t i = 0; i < st.rows.size(); ++i) {
      int k = row_with_key(rep, st.rows[i].assignment.key);
      worst = std::max(worst, st.rows[i].length - rep.rows[k].length);
      ++n;
    }
    d = std::to_string(n) + " instances, max (steiner - fermat) " + num(worst, 3);
    return worst <= 1e-12;
  });

  criterion("6i", "lagrangian stationarity", [](std::string& d) {
    std::mt19937_64 g(609);
    std::uniform_real_distribution<double> u(0.8, 1.2);
    double worst_ratio = 0, weakest_sep = 1e300;
    int converged = 0;
    for (int trial = 0; trial < 60; ++trial) {
      Points p = oracle::random_simplex(g, 3, 5.0);
      std::array<double, 4> w{u(g), u(g), u(g), u(g)};
      auto r = solve_steiner_tetrahedron(p, w, 1.0);
      for (const auto& c : r.candidates) {
        if (!c.valid) continue;
        auto sys = lagrangian_residual(p, w, 1.0, c.pairing, c.tree.nodes[4], c.tree.nodes[5]);
        worst_ratio = std::max(worst_ratio, sys.stationarity_residual / sys.grad_f0_norm);
        ++converged;
        for (int k = 0; k < 5; ++k) {
          Vec n0 = c.tree.nodes[4] + oracle::random_vec(g, 3, -0.5, 0.5);
          Vec n1 = c.tree.nodes[5] + oracle::random_vec(g, 3, -0.5, 0.5);
          try {
            auto other = lagrangian_residual(p, w, 1.0, c.pairing, n0, n1);
            weakest_sep = std::min(weakest_sep, other.stationarity_residual / std::max(sys.stationarity_residual, 1e-300));
          } catch (const Error&) {
          }
        }
      }
    }
    d = std::to_string(converged) + " converged trees, worst residual/|grad f0| " + num(worst_ratio, 3) +
        ", weakest random/converged ratio " + num(weakest_sep, 3);
    return converged >= 10 && worst_ratio <= 1e-4 && weakest_sep >= 10.0;
  });

  criterion("6j", "generalized cosine laws", [](std::string& d) {
    std::mt19937_64 g(610);
    std::uniform_real_distribution<double> u(0.1, 5.0), s(-3.0, 3.0), sp(0.2, 3.0);
    auto rel = [](double got, double want) { return std::fabs(got - want) / std::max(1.0, std::fabs(want)); };
    double w2 = 0, w3 = 0, w4 = 0;
    for (int k = 0; k < 100; ++k) {
      Vec a2 = v3(0, 0, 0), a1 = v3(u(g) + 1, 0, 0), a0 = v3(u(g), u(g), 0), ai = v3(u(g) - 2.5, u(g), 0);
      double ang = std::acos((a1 - a2).normalized().dot((ai - a2).normalized()));
      w2 = std::max(w2, rel(generalized_cosine_r2((a0 - a2).norm(), (ai - a2).norm(), a0(1), ang), (ai - a0).norm()));
    }
    for (int k = 0; k < 100; ++k) {
      Vec a1 = v3(s(g) - 4, 0, 0), a2 = v3(s(g) + 4, 0, 0);
      Vec a0 = v3(s(g), s(g), sp(g)), ai = v3(s(g), s(g), sp(g));
      DihedralConfig c;
      c.a10 = (a0 - a1).norm();
      c.a20 = (a0 - a2).norm();
      c.a12 = (a2 - a1).norm();
      c.a1i = (ai - a1).norm();
      c.a2i = (ai - a2).norm();
      c.alpha = std::atan2(a0(2), a0(1));
      c.alpha_g = std::atan2(ai(2), ai(1));
      c.h012 = std::hypot(a0(1), a0(2));
      double ref = (ai - a0).norm();
      w3 = std::max({w3, rel(generalized_cosine_r3(c), ref), rel(generalized_cosine_r3_alt(c), ref)});
    }
    for (int k = 0; k < 100; ++k) {
      Points p = oracle::random_simplex(g, 4, 5.0);
      Vec a0 = Vec::Zero(4);
      auto bar = oracle::random_barycentric(g, 5);
      for (int i = 0; i < 5; ++i) a0 += bar[i] * p[i];
      a0 += oracle::random_vec(g, 4, -0.5, 0.5);
      std::vector<Vec> e;
      for (int j = 1; j <= 4; ++j) {
        Vec v = p[j] - p[0];
        for (auto& b : e) v -= v.dot(b) * b;
        e.push_back(v.normalized());
      }
      double c4 = (a0 - p[0]).dot(e[3]);
      if (c4 < 0) a0 -= 2 * c4 * e[3];
      Vec r = a0 - p[0];
      auto dd = [&](int i, int j) { return (p[i] - p[j]).norm(); };
      Tentuple t{dd(0, 1), dd(0, 2), dd(0, 3), dd(0, 4), dd(1, 2), dd(1, 3), dd(1, 4), dd(2, 3), dd(2, 4), dd(3, 4)};
      SchlafliConfig cfg;
      cfg.a10 = (a0 - p[0]).norm();
      cfg.a20 = (a0 - p[1]).norm();
      cfg.a30 = (a0 - p[2]).norm();
      cfg.beta = std::atan2(r.dot(e[3]), r.dot(e[2]));
      auto [a40, a50] = generalized_cosine_r4(cfg, t);
      w4 = std::max({w4, rel(a40, (a0 - p[3]).norm()), rel(a50, (a0 - p[4]).norm())});
    }
    d = "worst relative error R2 " + num(w2, 3) + ", R3 " + num(w3, 3) + ", R4 " + num(w4, 3);
    return std::max({w2, w3, w4}) <= 1e-8;
  });

  std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
