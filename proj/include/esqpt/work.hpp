#pragma once

// Two-point-measurement work statistics of a sudden quench from a pure
// eigenstate: P(W) = sum_k c_k^2 delta(W - (E_k^f - E_n^0)).

#include <complex>
#include <cstddef>
#include <vector>

#include "esqpt/quench.hpp"

namespace esqpt {

enum class DistributionKind { work, spectral };

struct WeightedPoint {
  double value = 0.0;
  double mass = 0.0;
};

struct DiscreteDistribution {
  std::vector<WeightedPoint> points;
  DistributionKind kind = DistributionKind::work;

  std::size_t size() const { return points.size(); }
};

struct WorkSummary {
  double mean = 0.0;
  double std = 0.0;
  std::vector<double> moments;  // <W^l> for the requested orders
};

// points[k] = (E_k^f - E_n^0, c_k^2), in final-state order.
DiscreteDistribution work_distribution(const OverlapVector& ov);

// sum_k mass_k value_k^l with compensated summation; l = 0 gives 1.
double work_moment(const DiscreteDistribution& dist, int l);

WorkSummary work_summary(const DiscreteDistribution& dist, const std::vector<int>& orders = {});

// chi(t) = sum_k mass_k exp(i value_k t), normalized so that chi(0) = 1.
std::complex<double> characteristic_function(const DiscreteDistribution& dist, double t);

struct SampledCurve {
  std::vector<double> x;
  std::vector<double> y;
};

struct SpectralResult {
  DiscreteDistribution sticks;  // kind = spectral
  SampledCurve curve;           // empty unless broadening > 0
};

// broadening = 0: the stick spectrum A(w). broadening > 0: additionally the
// Gaussian-broadened curve on `grid_points` uniform points spanning the
// support padded by 4 sigma.
SpectralResult spectral_function(const DiscreteDistribution& dist, double broadening,
                                 std::size_t grid_points = 2001);

// Merge points whose values agree within tol (masses add). Input order is
// preserved for the first member of each group; used before serialization.
DiscreteDistribution merge_coincident(const DiscreteDistribution& dist, double tol = 1e-12);

}  // namespace esqpt
