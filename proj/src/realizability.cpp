#include "fsf/realizability.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace fsf {

void EdgeTuple::validate() const {
  if (N < 2) throw Error(ErrorKind::DimensionMismatch, "N must be at least 2");
  if (static_cast<int>(lengths.size()) != edge_count(N))
    throw Error(ErrorKind::DimensionMismatch, "expected N(N+1)/2 lengths");
  for (double l : lengths)
    if (!(l > 0.0) || !std::isfinite(l)) throw Error(ErrorKind::DomainError, "lengths must be positive");
}

std::vector<std::pair<int, int>> edge_order(int N) {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i <= N; ++i)
    for (int j = i + 1; j <= N; ++j) out.emplace_back(i, j);
  return out;
}

std::vector<double> flatten(const DistanceMatrix& dm) {
  std::vector<double> out;
  const int n = dm.size();
  out.reserve(static_cast<size_t>(n) * (n - 1) / 2);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) out.push_back(dm(i, j));
  return out;
}

DistanceMatrix unflatten(int N, const std::vector<double>& flat) {
  if (static_cast<int>(flat.size()) != EdgeTuple::edge_count(N))
    throw Error(ErrorKind::DimensionMismatch, "expected N(N+1)/2 lengths");
  DistanceMatrix dm(N + 1);
  auto order = edge_order(N);
  for (size_t k = 0; k < order.size(); ++k) dm.set(order[k].first, order[k].second, flat[k]);
  return dm;
}

DistanceMatrix permute_vertices(const DistanceMatrix& dm, const std::vector<int>& perm) {
  DistanceMatrix out(dm.size());
  for (int i = 0; i < dm.size(); ++i)
    for (int j = i + 1; j < dm.size(); ++j) out.set(i, j, dm(perm[i], perm[j]));
  return out;
}

namespace {

// Compares the relabeled flattening against `best` lexicographically without building it.
int compare_relabeled(const DistanceMatrix& dm, const std::vector<int>& perm, const std::vector<double>& best) {
  const int n = dm.size();
  size_t k = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j, ++k) {
      double v = dm(perm[i], perm[j]);
      if (v < best[k]) return -1;
      if (v > best[k]) return 1;
    }
  return 0;
}

// True when no relabeling gives a lexicographically smaller flattening.
bool is_canonical(const DistanceMatrix& dm, const std::vector<double>& flat) {
  std::vector<int> perm(dm.size());
  std::iota(perm.begin(), perm.end(), 0);
  while (std::next_permutation(perm.begin(), perm.end()))
    if (compare_relabeled(dm, perm, flat) < 0) return false;
  return true;
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

std::vector<double> canonical_key(const DistanceMatrix& dm) {
  std::vector<int> perm(dm.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<double> best = flatten(dm);
  while (std::next_permutation(perm.begin(), perm.end()))
    if (compare_relabeled(dm, perm, best) < 0) best = flatten(permute_vertices(dm, perm));
  return best;
}

EdgeAssignment EdgeAssignment::from_flat(int N, const std::vector<double>& flat) {
  return from_matrix(unflatten(N, flat));
}

EdgeAssignment EdgeAssignment::from_matrix(const DistanceMatrix& dm) {
  EdgeAssignment a;
  a.N = dm.size() - 1;
  a.edges = dm;
  a.key = canonical_key(dm);
  return a;
}

bool is_realizable(const DistanceMatrix& dm) {
  const int n = dm.size();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      if (!(dm(i, j) > 0.0)) return false;
      for (int k = j + 1; k < n; ++k) {
        double a = dm(i, j), b = dm(i, k), c = dm(j, k);
        if (!(a < b + c && b < a + c && c < a + b)) return false;
      }
    }
  // Every face with at least 4 vertices: (-1)^(k) det >= -tol, k = face dimension + 1.
  for (int mask = 0; mask < (1 << n); ++mask) {
    int cnt = __builtin_popcount(static_cast<unsigned>(mask));
    if (cnt < 4) continue;
    std::vector<int> idx;
    for (int i = 0; i < n; ++i)
      if (mask & (1 << i)) idx.push_back(i);
    DistanceMatrix face = dm.submatrix(idx);
    int dim = cnt - 1;
    double det = cayley_menger_det(face);
    double signed_det = (dim % 2 == 1) ? det : -det;
    if (signed_det < -cm_tolerance(face)) return false;
  }
  return true;
}

bool is_realizable(const EdgeAssignment& assign) { return is_realizable(assign.edges); }

std::vector<EdgeAssignment> enumerate_incongruent(const EdgeTuple& tuple, const EnumerateOptions& opts) {
  tuple.validate();
  const int N = tuple.N;
  std::vector<double> flat = tuple.lengths;
  std::sort(flat.begin(), flat.end());

  // Labelings with the minimum at edge (1,2): multinomial count over the rest.
  double labelings = factorial(static_cast<int>(flat.size()) - 1);
  for (size_t i = 1; i < flat.size();) {
    size_t j = i;
    while (j < flat.size() && flat[j] == flat[i]) ++j;
    labelings /= factorial(static_cast<int>(j - i));
    i = j;
  }
  if (labelings > static_cast<double>(opts.cap))
    throw Error(ErrorKind::CombinatorialLimit, "labeling count exceeds the enumeration cap");

  std::vector<EdgeAssignment> out;
  do {
    DistanceMatrix dm = unflatten(N, flat);
    if (!is_canonical(dm, flat)) continue;
    if (opts.realizable_only && !is_realizable(dm)) continue;
    EdgeAssignment a;
    a.N = N;
    a.edges = dm;
    a.key = flat;
    out.push_back(std::move(a));
  } while (std::next_permutation(flat.begin() + 1, flat.end()));
  return out;
}

double dekster_wilker_min_edge(int N, double ell) {
  if (N < 2) throw Error(ErrorKind::DomainError, "N must be at least 2");
  if (!(ell > 0.0)) throw Error(ErrorKind::DomainError, "ell must be positive");
  double n = N;
  double f = (N % 2 == 0) ? 1.0 - 2.0 * (n + 1.0) / (n * (n + 2.0)) : 1.0 - 2.0 / (n + 1.0);
  return ell * std::sqrt(f);
}

double min_consecutive_start(int N) {
  double lam = dekster_wilker_min_edge(N, 1.0);
  double m = EdgeTuple::edge_count(N);
  return (m - 1.0) * lam / (1.0 - lam);
}

bool dekster_wilker_guaranteed(const EdgeTuple& tuple) {
  tuple.validate();
  auto [lo, hi] = std::minmax_element(tuple.lengths.begin(), tuple.lengths.end());
  return *lo >= dekster_wilker_min_edge(tuple.N, *hi);
}

double hertog_critical_det(double x) {
  // a12, a13, a14, a23, a24, a34
  return cayley_menger_det(unflatten(3, {x + 5, x, x + 2, x + 1, x + 3, x + 4}));
}

double hertog_consecutive_root() {
  // Scan for the last sign change from negative to positive, then bisect.
  double lo = -1.0;
  double prev = hertog_critical_det(1.0);
  for (int x = 2; x <= 100; ++x) {
    double cur = hertog_critical_det(x);
    if (prev < 0.0 && cur > 0.0) lo = x - 1;
    prev = cur;
  }
  if (lo < 0.0) throw Error(ErrorKind::BracketFailure, "no sign change of the critical determinant");
  double hi = lo + 1.0;
  for (int it = 0; it < 200 && hi - lo > 1e-9; ++it) {
    double mid = 0.5 * (lo + hi);
    if (hertog_critical_det(mid) < 0.0) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

bool is_complete_tetrahedral(const EdgeTuple& tuple) {
  EnumerateOptions opts;
  opts.realizable_only = false;
  auto all = enumerate_incongruent(tuple, opts);
  for (const auto& a : all)
    if (!is_realizable(a)) return false;
  return true;
}

double blumenthal_ratio_threshold() {
  auto complete = [](double r) {
    EdgeTuple t;
    t.N = 3;
    for (int n = 0; n < 6; ++n) t.lengths.push_back(std::sqrt(r + n));
    return is_complete_tetrahedral(t);
  };
  double lo = 1.0, hi = 4.0;
  if (complete(lo) || !complete(hi)) throw Error(ErrorKind::BracketFailure, "ratio bracket [1, 4] does not straddle");
  while (hi - lo > 1e-7) {
    double mid = 0.5 * (lo + hi);
    if (complete(mid)) hi = mid; else lo = mid;
  }
  return 0.5 * (lo + hi);
}

EdgeAssignment to_paper_labeling(const EdgeAssignment& assign) {
  if (assign.N != 3) throw Error(ErrorKind::Unsupported, "display labeling is defined for tetrahedra");
  const DistanceMatrix& dm = assign.edges;
  // Choose the relabeling maximizing (a12, a13) lexicographically, preferring a
  // second-largest a13 when possible, otherwise a34 second-largest and a13 maximal.
  std::vector<int> perm{0, 1, 2, 3}, best_perm;
  std::array<double, 3> best{-1, -1, -1};
  do {
    double a12 = dm(perm[0], perm[1]);
    double a13 = dm(perm[0], perm[2]);
    double a34 = dm(perm[2], perm[3]);
    double second = std::max(a13, a34);
    std::array<double, 3> score{a12, second, a13};
    if (score > best) {
      best = score;
      best_perm = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  EdgeAssignment out;
  out.N = 3;
  out.edges = permute_vertices(dm, best_perm);
  out.key = assign.key;
  return out;
}

std::array<double, 6> paper_order_row(const EdgeAssignment& assign) {
  EdgeAssignment p = to_paper_labeling(assign);
  const DistanceMatrix& d = p.edges;
  return {d(0, 1), d(3, 2), d(0, 2), d(1, 2), d(1, 3), d(0, 3)};
}

void sort_paper_order(std::vector<EdgeAssignment>& assigns) {
  for (auto& a : assigns) a = to_paper_labeling(a);
  std::stable_sort(assigns.begin(), assigns.end(), [](const EdgeAssignment& x, const EdgeAssignment& y) {
    auto rx = paper_order_row(x), ry = paper_order_row(y);
    if (rx[1] != ry[1]) return rx[1] < ry[1];
    if (rx[3] != ry[3]) return rx[3] > ry[3];
    return rx[4] > ry[4];
  });
}

}  // namespace fsf
