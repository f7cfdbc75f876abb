#include "esqpt/work.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace esqpt {

namespace {

// Neumaier summation.
struct CompensatedSum {
  double sum = 0.0;
  double c = 0.0;
  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      c += (sum - t) + x;
    else
      c += (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + c; }
};

void require_work(const DiscreteDistribution& dist, const char* who) {
  if (dist.kind != DistributionKind::work)
    throw std::invalid_argument(std::string(who) + ": expected a work distribution");
  if (dist.points.empty()) throw std::invalid_argument(std::string(who) + ": empty distribution");
}

}  // namespace

DiscreteDistribution work_distribution(const OverlapVector& ov) {
  DiscreteDistribution d;
  d.kind = DistributionKind::work;
  d.points.resize(ov.dim());
  for (std::size_t k = 0; k < ov.dim(); ++k)
    d.points[k] = {ov.final_energies[k] - ov.initial_energy, ov.coeffs[k] * ov.coeffs[k]};
  return d;
}

double work_moment(const DiscreteDistribution& dist, int l) {
  require_work(dist, "work_moment");
  if (l < 0) throw std::invalid_argument("work_moment: order must be >= 0");
  if (l == 0) return 1.0;
  CompensatedSum acc;
  for (const auto& p : dist.points) {
    double term = p.mass;
    for (int i = 0; i < l; ++i) term *= p.value;
    acc.add(term);
  }
  return acc.value();
}

WorkSummary work_summary(const DiscreteDistribution& dist, const std::vector<int>& orders) {
  require_work(dist, "work_summary");
  WorkSummary s;
  s.mean = work_moment(dist, 1);
  const double second = work_moment(dist, 2);
  double var = second - s.mean * s.mean;
  const double scale = std::max(second, s.mean * s.mean);
  if (var < 0.0) {
    if (var < -1e-12 * scale) throw std::runtime_error("work_summary: negative variance");
    var = 0.0;
  }
  s.std = std::sqrt(var);
  s.moments.reserve(orders.size());
  for (int l : orders) s.moments.push_back(work_moment(dist, l));
  return s;
}

std::complex<double> characteristic_function(const DiscreteDistribution& dist, double t) {
  require_work(dist, "characteristic_function");
  double norm = 0.0, re = 0.0, im = 0.0;
  for (const auto& p : dist.points) {
    const double phase = p.value * t;
    norm += p.mass;
    re += p.mass * std::cos(phase);
    im += p.mass * std::sin(phase);
  }
  return {re / norm, im / norm};
}

SpectralResult spectral_function(const DiscreteDistribution& dist, double broadening,
                                 std::size_t grid_points) {
  require_work(dist, "spectral_function");
  if (!(broadening >= 0.0)) throw std::invalid_argument("spectral_function: broadening must be >= 0");
  SpectralResult r;
  r.sticks = dist;
  r.sticks.kind = DistributionKind::spectral;
  if (broadening == 0.0) return r;
  if (grid_points < 2) throw std::invalid_argument("spectral_function: need at least 2 grid points");

  auto [lo_it, hi_it] = std::minmax_element(dist.points.begin(), dist.points.end(),
                                            [](const auto& a, const auto& b) { return a.value < b.value; });
  const double lo = lo_it->value - 4.0 * broadening;
  const double hi = hi_it->value + 4.0 * broadening;
  const double norm = 1.0 / (broadening * std::sqrt(2.0 * M_PI));
  r.curve.x.resize(grid_points);
  r.curve.y.assign(grid_points, 0.0);
  for (std::size_t i = 0; i < grid_points; ++i) {
    const double w = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(grid_points - 1);
    r.curve.x[i] = w;
    double acc = 0.0;
    for (const auto& p : dist.points) {
      const double z = (w - p.value) / broadening;
      acc += p.mass * std::exp(-0.5 * z * z);
    }
    r.curve.y[i] = norm * acc;
  }
  return r;
}

DiscreteDistribution merge_coincident(const DiscreteDistribution& dist, double tol) {
  DiscreteDistribution out;
  out.kind = dist.kind;
  std::vector<std::size_t> order(dist.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return dist.points[a].value < dist.points[b].value; });
  std::vector<std::size_t> group(dist.size());
  std::vector<std::size_t> leader;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const std::size_t k = order[i];
    if (i > 0 && dist.points[k].value - dist.points[order[i - 1]].value <= tol) {
      group[k] = group[order[i - 1]];
    } else {
      group[k] = leader.size();
      leader.push_back(k);
    }
  }
  std::vector<double> mass(leader.size(), 0.0);
  for (std::size_t k = 0; k < dist.size(); ++k) mass[group[k]] += dist.points[k].mass;
  std::vector<bool> emitted(leader.size(), false);
  for (std::size_t k = 0; k < dist.size(); ++k) {
    const std::size_t g = group[k];
    if (emitted[g]) continue;
    emitted[g] = true;
    out.points.push_back({dist.points[leader[g]].value, mass[g]});
  }
  return out;
}

}  // namespace esqpt
