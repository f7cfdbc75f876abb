#pragma once

// Sudden quench alpha -> alpha + delta_alpha from one eigenstate |n> of H(alpha).
// All quantities follow from the expansion |n> = sum_k c_k |k_f>.

#include <cstddef>
#include <vector>

#include "esqpt/eigensolve.hpp"
#include "esqpt/model.hpp"

namespace esqpt {

struct OverlapVector {
  std::vector<double> coeffs;          // c_k = <k_f|n>
  std::vector<double> final_energies;  // E_k^f
  double initial_energy = 0.0;         // E_n^0
  std::size_t initial_index = 0;       // n, sector index
  Parity parity = Parity::even;

  std::size_t dim() const { return coeffs.size(); }
};

struct TimeSeries {
  std::vector<double> times;
  std::vector<double> values;
};

struct Histogram {
  std::vector<double> bin_edges;  // B + 1 ascending edges
  std::vector<double> masses;     // B masses summing to 1

  std::size_t bins() const { return masses.size(); }
};

OverlapVector overlap_coefficients(const Spectrum& init, const Spectrum& final, std::size_t n);

// Overlaps of every initial state at once; entry n equals
// overlap_coefficients(init, final, n).
std::vector<OverlapVector> all_overlaps(const Spectrum& init, const Spectrum& final);

// Diagonalize H(alpha) and H(alpha + delta_alpha) in one sector and expand
// sector state n.
OverlapVector sudden_quench(const ModelParams& params, Parity parity, std::size_t n);

// L(t) = | sum_k c_k^2 exp(-i E_k^f t) |^2, evaluated directly.
double loschmidt_echo_at(const OverlapVector& ov, double t);

// Uniform grid t_i = i t_max / (samples - 1). Terms with c_k^2 < 1e-14 are
// dropped while their total weight stays below 5e-13.
TimeSeries le_time_series(const OverlapVector& ov, double t_max, std::size_t samples, unsigned jobs = 0);

// Largest grid step that keeps dt * (spread of E_k^f over c_k^2 > 1e-10) < pi/2.
double max_alias_free_step(const OverlapVector& ov);

// Equal-width histogram of the series values over [0, 1]; L = 1 lands in the
// top bin.
Histogram le_distribution(const TimeSeries& series, std::size_t bins);

// Time average of L(t): sum_k c_k^4.
double averaged_le(const OverlapVector& ov);

// 1 / sum_k c_k^4.
double participation_ratio(const OverlapVector& ov);

}  // namespace esqpt
