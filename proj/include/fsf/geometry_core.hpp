#pragma once

#include "fsf/common.hpp"

#include <array>
#include <optional>
#include <utility>

namespace fsf {

// Symmetric matrix of pairwise lengths between n points (zero diagonal).
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(int n) : n_(n), d_(static_cast<size_t>(n) * n, 0.0) {}

  static DistanceMatrix from_points(const Points& pts);

  int size() const { return n_; }
  double operator()(int i, int j) const { return d_[static_cast<size_t>(i) * n_ + j]; }
  void set(int i, int j, double v) {
    d_[static_cast<size_t>(i) * n_ + j] = v;
    d_[static_cast<size_t>(j) * n_ + i] = v;
  }
  DistanceMatrix submatrix(const std::vector<int>& idx) const;
  double max_length() const;

  // Throws DimensionMismatch / DomainError when the invariants fail.
  void validate() const;

 private:
  int n_ = 0;
  std::vector<double> d_;
};

// Bordered determinant: squared lengths in the leading n x n block, a row and
// column of ones last, zero in the corner.
double cayley_menger_det(const DistanceMatrix& dm);

// Exact value when every squared length is an integer (and fits), else nullopt.
std::optional<__int128> cayley_menger_det_exact(const DistanceMatrix& dm);

// Signed squared volume of the (n-1)-simplex; negative means not realizable.
double signed_volume_sq(const DistanceMatrix& dm);

// Realizability tolerance for the CM determinant: -1e-9 * maxedge^(2N).
double cm_tolerance(const DistanceMatrix& dm);

double simplex_volume(const DistanceMatrix& dm);

// Volume of the simplex spanned by N+1 points in R^N (absolute value).
double coordinate_volume(const Points& vertices);

Vec circumcenter(const Points& vertices);
double circumradius(const Points& vertices);

// Height of A0 over the line A1A2 from the three side lengths.
double height_over_line(double a10, double a20, double a12);

// Planar law: a_{i0} from a20, a2i, h_{0,12} and the angle at A2 between A1 and A_i,
// with A0 and A_i on the same side of line A1A2.
double generalized_cosine_r2(double a20, double a2i, double h012, double angle_12i);

struct DihedralConfig {
  double a10 = 0, a20 = 0;
  double a12 = 0;  // optional (0 = unknown); when set, foot positions are signed
  double a1i = 0, a2i = 0;
  double alpha = 0;    // dihedral between planes (A0 A1 A2) and (A1 A2 A3)
  double alpha_g = 0;  // dihedral between planes (A1 A2 A3) and (A1 A2 Ai)
  double h012 = 0;
};

// a_{i0} through the A2-anchored form.
double generalized_cosine_r3(const DihedralConfig& cfg);
// a_{i0} through the A1-anchored form.
double generalized_cosine_r3_alt(const DihedralConfig& cfg);

// Dihedral angle of the plane (P A1 A2) measured from the half-plane of A3,
// recovered from the distances of P to A1, A2, A3 and the triangle A1A2A3.
// Throws NotInterior when the cosine argument leaves [-1, 1].
double dihedral_from_distances(double p1, double p2, double p3, double a12, double a13, double a23);

// Edge order: a12, a13, a14, a23, a24, a34.
using Sextuple = std::array<double, 6>;
// side = -1 when A0 lies across the plane A1A2A3 from A4.
double a40_from_interior_distances(double a10, double a20, double a30, const Sextuple& edges, int side = 1);

struct SchlafliConfig {
  double a10 = 0, a20 = 0, a30 = 0;
  double beta = 0;  // angle at the foot on plane A1A2A3 between A0 and its projection on hyperplane A1A2A3A4
  // derived
  double h012 = 0, h0123 = 0, h01234 = 0, h01235 = 0;
};

// Edge order: a12, a13, a14, a15, a23, a24, a25, a34, a35, a45.
using Tentuple = std::array<double, 10>;
std::pair<double, double> generalized_cosine_r4(SchlafliConfig& cfg, const Tentuple& edges);

// Angle between the two 3-spaces A1A2A3A4 and A1A2A3A5 along the plane A1A2A3.
double schlafli_gauge(const Tentuple& edges);

}  // namespace fsf
