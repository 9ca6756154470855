#pragma once

#include "fsf/geometry_core.hpp"

#include <array>
#include <cstdint>
#include <utility>

namespace fsf {

// Multiset of N(N+1)/2 positive lengths for an N-simplex.
struct EdgeTuple {
  int N = 0;
  std::vector<double> lengths;

  static int edge_count(int N) { return N * (N + 1) / 2; }
  void validate() const;
};

// Vertex pairs (i,j), i<j, in row-major upper-triangular order: (0,1),(0,2),...,(1,2),...
std::vector<std::pair<int, int>> edge_order(int N);

std::vector<double> flatten(const DistanceMatrix& dm);
DistanceMatrix unflatten(int N, const std::vector<double>& flat);

// Relabel vertices: result(i,j) = dm(perm[i], perm[j]).
DistanceMatrix permute_vertices(const DistanceMatrix& dm, const std::vector<int>& perm);

// Lexicographically minimal flattened edge vector over all vertex permutations.
std::vector<double> canonical_key(const DistanceMatrix& dm);

struct EdgeAssignment {
  int N = 0;
  DistanceMatrix edges;
  std::vector<double> key;

  static EdgeAssignment from_flat(int N, const std::vector<double>& flat);
  static EdgeAssignment from_matrix(const DistanceMatrix& dm);
};

bool is_realizable(const EdgeAssignment& assign);
bool is_realizable(const DistanceMatrix& dm);

struct EnumerateOptions {
  bool realizable_only = true;
  std::uint64_t cap = 1000000;  // max labelings scanned
};

std::vector<EdgeAssignment> enumerate_incongruent(const EdgeTuple& tuple, const EnumerateOptions& opts = {});

// lambda_N(ell): smallest edge that guarantees realizability when the largest is ell.
double dekster_wilker_min_edge(int N, double ell);

// a(N) such that the consecutive tuple a, a+1, ..., a+m-1 lies in the DW domain for a >= a(N).
double min_consecutive_start(int N);

// True when min/max of the tuple is at least lambda_N(1).
bool dekster_wilker_guaranteed(const EdgeTuple& tuple);

// CM determinant of the consecutive sextuple x..x+5 in the last assignment to become realizable.
double hertog_critical_det(double x);
double hertog_consecutive_root();

// Smallest a/d for which sqrt(a + n d), n = 0..5, realizes all 30 tetrahedra.
bool is_complete_tetrahedral(const EdgeTuple& tuple);
double blumenthal_ratio_threshold();

// Display of a tetrahedron in the (a12, a43, a13, a23, a24, a14) convention: the
// largest edge is a12; the second largest is a13 when it shares a vertex with a12,
// otherwise a43 with the largest remaining cross edge at a13.
EdgeAssignment to_paper_labeling(const EdgeAssignment& assign);
std::array<double, 6> paper_order_row(const EdgeAssignment& assign);
void sort_paper_order(std::vector<EdgeAssignment>& assigns);

}  // namespace fsf
