#pragma once

#include "fsf/embedding.hpp"
#include "fsf/fermat.hpp"

#include <cstdint>

namespace fsf {

struct InverseSolution {
  std::vector<double> weights;
  double C = 0.0;
  double residual = 0.0;            // volume-equality residual
  double roundtrip_distance = 0.0;  // |Fermat point of the weights - prescribed point|
};

// B_i proportional to |A0 Ai| times the volume of the simplex with A0 replacing Ai.
InverseSolution invert_weights(const EmbeddedSimplex& simplex, const Vec& point, double C);
InverseSolution invert_weights(const Points& vertices, const Vec& point, double C, bool roundtrip = true);

// max_{i,j} |ratio_i - ratio_j| / ratio_1, ratio_i = B_i / (|A0 Ai| Vol_i).
double volume_equality_residual(const Points& vertices, const Vec& point, const std::vector<double>& weights);

// Same weights through ratios of normal projections of the unit vectors u(A0, Ai).
InverseSolution sine_ratio_weights(const Points& vertices, const Vec& point, double C);
InverseSolution sine_ratio_weights(const EmbeddedSimplex& simplex, const Vec& point, double C);

// Weights of N+1+d rays from A0 (d drivers): B_i = sum_j a(i,j) B_{driver j} + b_i for
// i = 0..N, with the drivers free. Weights sum to c.
struct PlasticityModel {
  int N = 0;
  Points rays;                     // unit directions, N+1+d of them
  std::vector<double> base_ratios; // B_i / B_{N+1} of the base simplex, i = 0..N-1
  Mat a;                           // (N+1) x d
  Vec b;                           // N+1
  double c = 0.0;

  int drivers() const { return static_cast<int>(a.cols()); }
  // Full weight vector for the given driver weights.
  Vec weights(const Vec& driver) const;
};

PlasticityModel plasticity_coefficients(const Points& rays, double c);
PlasticityModel plasticity_general(const Points& rays, int N, double c);

// Weights with sum_{i<k} B - sum_{i>=k} B = storage and sum = c, on the plasticity system.
Vec mutation_weights(const PlasticityModel& model, int k, double c, double storage);

enum class BesselScheme { DriftImplicit, EulerMaruyama };

struct BesselOptions {
  double r0 = 0.0;
  double m = 3.0;  // dimension parameter
  double t_end = 1.0;
  double dt = 1e-3;
  std::uint64_t seed = 0;
  BesselScheme scheme = BesselScheme::DriftImplicit;
  bool noise = true;
};

struct BesselPath {
  std::vector<double> times;
  std::vector<double> values;
  double m = 0.0;
  std::uint64_t seed = 0;
  double r_floor = 0.0;
};

BesselPath bessel_path(const BesselOptions& opts);

struct BesselWeights {
  std::vector<Vec> weights;
  std::vector<bool> admissible;  // every component in [0, c]
};

BesselWeights bessel_plasticity(const PlasticityModel& model, const BesselPath& path, double c);

struct EpsilonWeights {
  Vec point;
  InverseSolution weights;
  double error_estimate = 0.0;
};

// A0 at distance eps from the last vertex toward the circumcenter.
EpsilonWeights epsilon_weights(const EmbeddedSimplex& simplex, double eps, double C = -1.0);

}  // namespace fsf
