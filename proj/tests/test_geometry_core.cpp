#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fsf/geometry_core.hpp"
#include "oracles.hpp"

#include <cmath>

using namespace fsf;

namespace {

DistanceMatrix tetra(double a12, double a13, double a14, double a23, double a24, double a34) {
  DistanceMatrix d(4);
  d.set(0, 1, a12);
  d.set(0, 2, a13);
  d.set(0, 3, a14);
  d.set(1, 2, a23);
  d.set(1, 3, a24);
  d.set(2, 3, a34);
  return d;
}

Vec v3(double x, double y, double z) {
  Vec v(3);
  v << x, y, z;
  return v;
}

// Signed dihedral about the x-axis of a point's (y, z) offset, measured from +y.
double axis_angle(const Vec& p) { return std::atan2(p(2), p(1)); }

}  // namespace

TEST_CASE("cayley-menger determinant matches the cofactor expansion") {
  std::mt19937_64 g(1);
  for (int trial = 0; trial < 50; ++trial) {
    int N = 2 + trial % 3;
    Points p = oracle::random_simplex(g, N);
    auto dm = DistanceMatrix::from_points(p);
    double ref = oracle::cm_from_points(p);
    CHECK(cayley_menger_det(dm) == doctest::Approx(ref).epsilon(1e-9));
  }
}

TEST_CASE("exact determinant on integer tetrahedra") {
  // a12=12, a43=7, a13=11, a23=10, a24=8, a14=9
  auto d = tetra(12, 11, 9, 10, 8, 7);
  auto exact = cayley_menger_det_exact(d);
  REQUIRE(exact.has_value());
  CHECK(static_cast<long long>(*exact) == 1994518);
  CHECK(288.0 * std::pow(simplex_volume(d), 2) == doctest::Approx(1994518.0).epsilon(1e-12));
  CHECK_FALSE(cayley_menger_det_exact(tetra(1.5, 1, 1, 1, 1, 1)).has_value());
}

TEST_CASE("regular simplex volumes") {
  auto d = tetra(1, 1, 1, 1, 1, 1);
  CHECK(simplex_volume(d) == doctest::Approx(1.0 / (6.0 * std::sqrt(2.0))).epsilon(1e-12));
  DistanceMatrix tri(3);
  tri.set(0, 1, 1);
  tri.set(0, 2, 1);
  tri.set(1, 2, 1);
  CHECK(simplex_volume(tri) == doctest::Approx(std::sqrt(3.0) / 4.0).epsilon(1e-12));
  CHECK_THROWS_AS(simplex_volume(tetra(1, 1, 1, 1, 1, 10)), Error);
}

TEST_CASE("coordinate volume equals distance volume") {
  std::mt19937_64 g(2);
  for (int trial = 0; trial < 40; ++trial) {
    int N = 2 + trial % 4;
    Points p = oracle::random_simplex(g, N);
    CHECK(coordinate_volume(p) == doctest::Approx(simplex_volume(DistanceMatrix::from_points(p))).epsilon(1e-9));
  }
}

TEST_CASE("circumcenter is equidistant, also for a triangle in R^3") {
  std::mt19937_64 g(3);
  Points p = oracle::random_simplex(g, 3);
  Vec c = circumcenter(p);
  for (auto& x : p) CHECK((x - c).norm() == doctest::Approx(circumradius(p)).epsilon(1e-10));
  Points tri{p[0], p[1], p[2]};
  Vec ct = circumcenter(tri);
  for (auto& x : tri) CHECK((x - ct).norm() == doctest::Approx((tri[0] - ct).norm()).epsilon(1e-10));
  CHECK_THROWS_AS(circumcenter({v3(0, 0, 0), v3(1, 0, 0), v3(2, 0, 0)}), Error);
}

TEST_CASE("planar generalized cosine law against coordinates") {
  std::mt19937_64 g(4);
  std::uniform_real_distribution<double> u(0.1, 5.0);
  int checked = 0;
  while (checked < 100) {
    // A2 at the origin, A1 on the positive x-axis, A0 and Ai above it, A0's foot on A1's side.
    Vec a2 = v3(0, 0, 0), a1 = v3(u(g) + 1, 0, 0);
    Vec a0 = v3(u(g), u(g), 0), ai = v3(u(g) - 2.5, u(g), 0);
    double a20 = (a0 - a2).norm(), a2i = (ai - a2).norm();
    double ang = std::acos((a1 - a2).normalized().dot((ai - a2).normalized()));
    double got = generalized_cosine_r2(a20, a2i, a0(1), ang);
    CHECK(got == doctest::Approx((ai - a0).norm()).epsilon(1e-8));
    ++checked;
  }
  CHECK_THROWS_AS(generalized_cosine_r2(1.0, 1.0, 2.0, 0.3), Error);
}

TEST_CASE("R^3 generalized cosine law, both anchors, against coordinates") {
  std::mt19937_64 g(5);
  std::uniform_real_distribution<double> u(-3.0, 3.0), up(0.2, 3.0);
  for (int trial = 0; trial < 100; ++trial) {
    // Line A1A2 is the x-axis, A3 in the half-plane z=0, y>0; A0, Ai on the side z>0.
    Vec a1 = v3(u(g) - 4, 0, 0), a2 = v3(u(g) + 4, 0, 0), a3 = v3(u(g), up(g), 0);
    Vec a0 = v3(u(g), u(g), up(g)), ai = v3(u(g), u(g), up(g));
    DihedralConfig c;
    c.a10 = (a0 - a1).norm();
    c.a20 = (a0 - a2).norm();
    c.a12 = (a2 - a1).norm();
    c.a1i = (ai - a1).norm();
    c.a2i = (ai - a2).norm();
    c.alpha = axis_angle(a0);
    c.alpha_g = axis_angle(ai);
    c.h012 = std::hypot(a0(1), a0(2));
    double ref = (ai - a0).norm();
    CHECK(generalized_cosine_r3(c) == doctest::Approx(ref).epsilon(1e-8));
    CHECK(generalized_cosine_r3_alt(c) == doctest::Approx(ref).epsilon(1e-8));
    CHECK(c.h012 == doctest::Approx(height_over_line(c.a10, c.a20, c.a12)).epsilon(1e-9));
    CHECK(dihedral_from_distances(c.a10, c.a20, (a0 - a3).norm(), c.a12, (a3 - a1).norm(), (a3 - a2).norm()) ==
          doctest::Approx(c.alpha).epsilon(1e-8));
    Sextuple e{c.a12, (a3 - a1).norm(), c.a1i, (a3 - a2).norm(), c.a2i, (ai - a3).norm()};
    CHECK(a40_from_interior_distances(c.a10, c.a20, (a0 - a3).norm(), e) == doctest::Approx(ref).epsilon(1e-8));
  }
}

TEST_CASE("dihedral recovery rejects inconsistent distances") {
  // P at distance 1 from A1 and A2 but far from A3 beyond what any rotation allows.
  CHECK_THROWS_AS(dihedral_from_distances(1.0, 1.0, 10.0, 1.0, 1.0, 1.0), Error);
}

TEST_CASE("R^4 generalized cosine law with the Schlafli gauge against coordinates") {
  std::mt19937_64 g(6);
  int checked = 0;
  while (checked < 100) {
    Points p = oracle::random_simplex(g, 4, 5.0);
    Vec a0 = p[0] * 0.0;
    auto bar = oracle::random_barycentric(g, 5);
    for (int i = 0; i < 5; ++i) a0 += bar[i] * p[i];
    a0 += oracle::random_vec(g, 4, -0.5, 0.5);
    // Orthonormal frame: e1..e3 span A1A2A3A4, e4 oriented toward A5.
    std::vector<Vec> e;
    for (int k = 1; k <= 4; ++k) {
      Vec v = p[k] - p[0];
      for (auto& b : e) v -= v.dot(b) * b;
      e.push_back(v.normalized());
    }
    Vec r = a0 - p[0];
    double c4 = r.dot(e[3]);
    if (c4 < 0) a0 -= 2 * c4 * e[3];
    r = a0 - p[0];
    double beta = std::atan2(r.dot(e[3]), r.dot(e[2]));
    auto d = [&](int i, int j) { return (p[i] - p[j]).norm(); };
    Tentuple t{d(0, 1), d(0, 2), d(0, 3), d(0, 4), d(1, 2), d(1, 3), d(1, 4), d(2, 3), d(2, 4), d(3, 4)};
    SchlafliConfig cfg;
    cfg.a10 = (a0 - p[0]).norm();
    cfg.a20 = (a0 - p[1]).norm();
    cfg.a30 = (a0 - p[2]).norm();
    cfg.beta = beta;
    auto [a40, a50] = generalized_cosine_r4(cfg, t);
    CHECK(a40 == doctest::Approx((a0 - p[3]).norm()).epsilon(1e-8));
    CHECK(a50 == doctest::Approx((a0 - p[4]).norm()).epsilon(1e-8));
    // Distance to the hyperplane A1A2A3A4 is the e4 component.
    CHECK(cfg.h01234 == doctest::Approx(std::fabs((a0 - p[0]).dot(e[3]))).epsilon(1e-8));
    // Gauge angle: between the off-plane directions of A4 and A5.
    Vec f4 = (p[3] - p[0]), f5 = (p[4] - p[0]);
    for (int k = 0; k < 2; ++k) {
      f4 -= f4.dot(e[k]) * e[k];
      f5 -= f5.dot(e[k]) * e[k];
    }
    CHECK(schlafli_gauge(t) == doctest::Approx(std::acos(f4.normalized().dot(f5.normalized()))).epsilon(1e-8));
    ++checked;
  }
}

TEST_CASE("distance matrix validation") {
  DistanceMatrix d(3);
  d.set(0, 1, 1);
  d.set(0, 2, 1);
  CHECK_THROWS_AS(d.validate(), Error);
  d.set(1, 2, 1);
  CHECK_NOTHROW(d.validate());
}
