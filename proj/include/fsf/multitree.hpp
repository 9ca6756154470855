#pragma once

#include "fsf/inverse_fermat.hpp"
#include "fsf/steiner.hpp"

#include <optional>
#include <string>

namespace fsf {

enum class TreeMode { Fermat, Steiner };

struct MultitreeOptions {
  TreeMode mode = TreeMode::Fermat;
  bool paper_order = false;      // N=3: relabel and sort rows in the (a12,a43,a13,a23,a24,a14) convention
  bool permute_weights = false;  // N=3 Steiner: best tree over all weight permutations
  int threads = 0;               // 0: FSF_THREADS or hardware concurrency
};

struct MultitreeRow {
  EdgeAssignment assignment;
  EmbeddedSimplex simplex;
  double volume = 0;
  double circumradius = 0;
  double cm_det = 0;
  std::optional<__int128> cm_det_exact;
  FermatSolution fermat;
  std::optional<SteinerTree> steiner;
  std::vector<int> weight_permutation;  // terminal i carries weight b[perm[i]]
  double length = 0;                    // selected tree length
};

struct MultitreeReport {
  EdgeTuple tuple;
  std::vector<double> weights;
  double bst = 1.0;
  TreeMode mode = TreeMode::Fermat;
  std::vector<MultitreeRow> rows;
  int global_min_index = -1;
  int max_volume_index = -1;
  std::optional<std::pair<double, double>> bst_bound;
};

int thread_count();

MultitreeReport build_multitree(const EdgeTuple& tuple, const std::vector<double>& weights, double bst,
                                const MultitreeOptions& opts = {});

// Each assignment solved with a fixed topology over its N+1 vertices.
MultitreeReport intermediate_multitree(const EdgeTuple& tuple, const std::vector<double>& weights, double bst,
                                       const SteinerTopology& topology, const MultitreeOptions& opts = {});

// Six-node intermediate topology for N=5: A01-{A1,A2,A02}, A02-{A3,A01,A03}, A03-{A4,A5,A6,A02}.
SteinerTopology intermediate_topology_n5();

struct LagrangianSystem {
  std::vector<std::string> names;
  std::vector<double> x;
  std::vector<double> constraints;     // f1.. at x
  std::vector<double> lambda;          // lambda[0] = 1 for f0
  double stationarity_residual = 0;    // ||grad_x L||
  double grad_f0_norm = 0;
  double condition = 0;                // of the constraint Jacobian
  std::vector<double> node_inverse_residuals;  // volume-equality residual at each node
};

// Two-node tree of a tetrahedron: node0 joins p[0], p[1]; node1 joins p[2], p[3].
LagrangianSystem lagrangian_residual(const Points& terminals, const std::array<double, 4>& b, double bst,
                                     const Pairing& pairing, const Vec& node0, const Vec& node1);

struct MostNaturalResult {
  int N = 0;
  int start = 0;
  int max_volume_index = -1;
  EdgeAssignment max_volume;
  bool global_min_at_unit = false;  // max-volume tree minimal at bST = 1
  std::optional<std::pair<double, double>> bst_bound;
  std::vector<double> grid;
  std::vector<bool> grid_holds;
};

// Threshold: a >= 7 for N=3, a >= ceil(a(N)) otherwise.
MostNaturalResult most_natural(int N, int a, int grid_points = 20);

}  // namespace fsf
