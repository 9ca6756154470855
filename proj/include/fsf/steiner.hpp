#pragma once

#include "fsf/embedding.hpp"
#include "fsf/fermat.hpp"

#include <array>
#include <optional>
#include <string>

namespace fsf {

// (alpha_102, alpha_012, alpha_30'4, alpha_340'), radians.
std::array<double, 4> steiner_angles(double b1, double b2, double b3, double b4, double bst);

// Edge pairing of a tetrahedron: vertices (p[0] p[1] ; p[2] p[3]) with line 34 anchored at p[3].
using Pairing = std::array<int, 4>;
inline constexpr std::array<Pairing, 3> kPairings{{{0, 1, 2, 3}, {0, 2, 1, 3}, {0, 3, 1, 2}}};
std::string pairing_name(const Pairing& p);

struct SimpsonScaffold {
  Points terminals;               // A1..A4 reordered by the pairing
  std::array<double, 4> weights;  // b1..b4 reordered by the pairing
  double bst = 1.0;
  double a12 = 0, a34 = 0;
  double phi = 0;  // angle between the directions of line 12 and line 34
  double H = 0;    // common perpendicular length
  Vec M12, M34;    // feet of the common perpendicular
  double M12A1 = 0, M34A4 = 0;
  double h12 = 0, h34 = 0;
  double A1H12 = 0, A4H34 = 0;
  double M12H12 = 0, M34H34 = 0;
  Vec ex, ey, ez;          // frame: ex along line 12, ey completes line 34's direction, ez toward M34
  bool phi_in_range = true;  // 45 deg < phi < 90 deg
};

SimpsonScaffold simpson_geometry(const Points& pts, const std::array<double, 4>& b, double bst,
                                 const Pairing& pairing = kPairings[0]);

struct DihedralSolution {
  double x = 0, y = 0;  // cot(delta12), cot(delta34)
  double delta12 = 0, delta34 = 0, alpha = 0, phi = 0;
  double H = 0, h12 = 0, h34 = 0, M12H12 = 0, M34H34 = 0;
  double t12 = 0, t34 = 0;  // positions of T12, T34 along their lines from M12, M34
  Vec T12, T34;
  Vec O12, O34;
  int iterations = 0;
  double residual = 0;  // max of the two fixed-point equation residuals
  bool non_contraction = false;
};

// Damped iteration x <- (1-lambda) x + lambda f(g(x)) from x0 = cot(60 deg) unless given.
DihedralSolution dihedral_fixed_point(const SimpsonScaffold& sc, std::optional<double> start = std::nullopt,
                                      int max_iterations = 10000);

// T34', P, T12, E12, E34 in the frame of the scaffold (z = 0 plane).
Points concircular_points(const DihedralSolution& sol);
// Max relative deviation of the points from the circle through the first three.
double concircularity_deviation(const Points& pts);
double concircularity_check(const DihedralSolution& sol);

// Fills O12 and O34 of sol; returns them.
std::pair<Vec, Vec> locate_nodes(DihedralSolution& sol, const SimpsonScaffold& sc);

struct SteinerTopology {
  int terminals = 0;
  int steiner = 0;
  std::vector<std::pair<int, int>> edges;  // terminals 0..t-1, Steiner nodes t..t+s-1

  void validate() const;
  // 1: two terminal neighbours, 2: one, 3: none.
  int node_type(int steiner_index) const;
  static SteinerTopology caterpillar(int terminal_count);
};

struct SteinerTree {
  SteinerTopology topology;
  Points nodes;  // terminals followed by Steiner nodes
  std::vector<double> edge_weights;
  double weighted_length = 0;
  std::vector<double> balance_residuals;  // per Steiner node
  bool degenerate = false;                // nodes collapsed onto each other or a terminal
  std::string label;
};

double tree_length(const Points& nodes, const std::vector<std::pair<int, int>>& edges, const std::vector<double>& w);

struct TetrahedronCandidate {
  Pairing pairing;
  bool valid = false;  // pipeline produced a nondegenerate tree
  std::string reason;
  std::optional<DihedralSolution> solution;
  SteinerTree tree;
};

// Pipeline validity for one pairing.
bool existence_check(const Points& pts, const std::array<double, 4>& b, double bst, const Pairing& pairing);

TetrahedronCandidate solve_pairing(const Points& pts, const std::array<double, 4>& b, double bst, const Pairing& pairing);

struct SteinerTetrahedronResult {
  SteinerTree best;
  std::vector<TetrahedronCandidate> candidates;
  FermatSolution fermat;  // degenerate candidate
};

SteinerTetrahedronResult solve_steiner_tetrahedron(const Points& pts, const std::array<double, 4>& b, double bst);

struct TopologyOptions {
  int max_sweeps = 20000;
  double rel_tol = 1e-12;
};

// Terminal edges carry the terminal weight, Steiner-Steiner edges carry bst.
SteinerTree solve_steiner_topology(const Points& terminals, const std::vector<double>& b, double bst,
                                   const SteinerTopology& topology, const TopologyOptions& opts = {});

}  // namespace fsf
