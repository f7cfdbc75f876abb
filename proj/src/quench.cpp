#include "esqpt/quench.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "esqpt/simd/kernels.hpp"
#include "esqpt/sweep.hpp"

namespace esqpt {

namespace {

constexpr std::size_t kEchoBlock = 256;
constexpr double kDropWeight = 1e-14;
constexpr double kDropBudget = 5e-13;

void check_pair(const Spectrum& init, const Spectrum& final) {
  if (init.parity != final.parity) throw std::invalid_argument("overlap: parity sectors differ");
  if (init.dim() != final.dim()) throw std::invalid_argument("overlap: sector dimensions differ");
}

// Support of the expansion, with energies measured from E_n^0. L(t) is blind to a
// global phase, and the shift keeps the phase arguments small.
struct Support {
  std::vector<double> weights;
  std::vector<double> shifted_energies;
};

Support truncated_support(const OverlapVector& ov) {
  std::vector<std::size_t> order(ov.dim());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return ov.coeffs[a] * ov.coeffs[a] < ov.coeffs[b] * ov.coeffs[b]; });
  std::vector<bool> keep(ov.dim(), true);
  double dropped = 0.0;
  for (std::size_t k : order) {
    const double w = ov.coeffs[k] * ov.coeffs[k];
    if (w >= kDropWeight || dropped + w > kDropBudget) break;
    dropped += w;
    keep[k] = false;
  }
  Support s;
  for (std::size_t k = 0; k < ov.dim(); ++k) {
    if (!keep[k]) continue;
    s.weights.push_back(ov.coeffs[k] * ov.coeffs[k]);
    s.shifted_energies.push_back(ov.final_energies[k] - ov.initial_energy);
  }
  return s;
}

}  // namespace

OverlapVector overlap_coefficients(const Spectrum& init, const Spectrum& final, std::size_t n) {
  check_pair(init, final);
  if (n >= init.dim())
    throw std::out_of_range("overlap: initial index " + std::to_string(n) + " outside sector of dimension " +
                            std::to_string(init.dim()));
  const auto& K = simd::kernels();
  OverlapVector ov;
  ov.parity = init.parity;
  ov.initial_index = n;
  ov.initial_energy = init.energies[n];
  ov.final_energies = final.energies;
  ov.coeffs.resize(final.dim());
  const auto v0 = init.vector(n);
  for (std::size_t k = 0; k < final.dim(); ++k)
    ov.coeffs[k] = K.dot(final.vector(k).data(), v0.data(), v0.size());
  return ov;
}

std::vector<OverlapVector> all_overlaps(const Spectrum& init, const Spectrum& final) {
  check_pair(init, final);
  std::vector<OverlapVector> out;
  out.reserve(init.dim());
  for (std::size_t n = 0; n < init.dim(); ++n) out.push_back(overlap_coefficients(init, final, n));
  return out;
}

OverlapVector sudden_quench(const ModelParams& params, Parity parity, std::size_t n) {
  params.validate();
  const Spectrum init = eigh_tridiagonal(build_block(params, params.alpha, parity));
  const Spectrum final = eigh_tridiagonal(build_block(params, params.final_alpha(), parity));
  return overlap_coefficients(init, final, n);
}

double loschmidt_echo_at(const OverlapVector& ov, double t) {
  double norm = 0.0, re = 0.0, im = 0.0;
  for (std::size_t k = 0; k < ov.dim(); ++k) {
    const double w = ov.coeffs[k] * ov.coeffs[k];
    const double phase = (ov.final_energies[k] - ov.initial_energy) * t;
    norm += w;
    re += w * std::cos(phase);
    im -= w * std::sin(phase);
  }
  if (norm == 0.0) throw std::invalid_argument("loschmidt_echo_at: empty expansion");
  return std::clamp((re * re + im * im) / (norm * norm), 0.0, 1.0);
}

double max_alias_free_step(const OverlapVector& ov) {
  double lo = INFINITY, hi = -INFINITY;
  for (std::size_t k = 0; k < ov.dim(); ++k) {
    if (ov.coeffs[k] * ov.coeffs[k] <= 1e-10) continue;
    lo = std::min(lo, ov.final_energies[k]);
    hi = std::max(hi, ov.final_energies[k]);
  }
  const double spread = hi - lo;
  return spread > 0.0 ? (M_PI / 2.0) / spread : INFINITY;
}

TimeSeries le_time_series(const OverlapVector& ov, double t_max, std::size_t samples, unsigned jobs) {
  if (!(t_max > 0.0)) throw std::invalid_argument("le_time_series: t_max must be > 0");
  if (samples < 2) throw std::invalid_argument("le_time_series: need at least 2 samples");

  const Support sup = truncated_support(ov);
  if (sup.weights.empty()) throw std::invalid_argument("le_time_series: empty expansion");
  const auto& K = simd::kernels();
  const double denom = static_cast<double>(samples - 1);
  const double dt = t_max / denom;

  TimeSeries ts;
  ts.times.resize(samples);
  ts.values.resize(samples);
  for (std::size_t i = 0; i < samples; ++i) ts.times[i] = static_cast<double>(i) * t_max / denom;

  double norm = 0.0;
  K.echo_block(sup.weights.data(), sup.shifted_energies.data(), sup.weights.size(), 0.0, dt, 1, &norm);

  // Blocks are anchored at absolute sample indices, so any partition of the
  // grid reproduces the same values bit for bit.
  const std::size_t blocks = (samples + kEchoBlock - 1) / kEchoBlock;
  parallel_map(blocks, [&](std::size_t b) {
    const std::size_t first = b * kEchoBlock;
    const std::size_t count = std::min(kEchoBlock, samples - first);
    double* out = ts.values.data() + first;
    K.echo_block(sup.weights.data(), sup.shifted_energies.data(), sup.weights.size(), ts.times[first], dt,
                 count, out);
    for (std::size_t j = 0; j < count; ++j) out[j] = std::clamp(out[j] / norm, 0.0, 1.0);
    return 0;
  }, jobs);
  return ts;
}

Histogram le_distribution(const TimeSeries& series, std::size_t bins) {
  if (bins < 2) throw std::invalid_argument("le_distribution: need at least 2 bins");
  if (series.values.empty()) throw std::invalid_argument("le_distribution: empty series");
  Histogram h;
  h.bin_edges.resize(bins + 1);
  for (std::size_t b = 0; b <= bins; ++b) h.bin_edges[b] = static_cast<double>(b) / static_cast<double>(bins);
  std::vector<std::size_t> counts(bins, 0);
  for (double v : series.values) {
    if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("le_distribution: value outside [0, 1]");
    const auto b = std::min(bins - 1, static_cast<std::size_t>(v * static_cast<double>(bins)));
    ++counts[b];
  }
  h.masses.resize(bins);
  const double total = static_cast<double>(series.values.size());
  for (std::size_t b = 0; b < bins; ++b) h.masses[b] = static_cast<double>(counts[b]) / total;
  return h;
}

double averaged_le(const OverlapVector& ov) {
  double acc = 0.0;
  for (double c : ov.coeffs) acc += (c * c) * (c * c);
  return acc;
}

double participation_ratio(const OverlapVector& ov) { return 1.0 / averaged_le(ov); }

}  // namespace esqpt
