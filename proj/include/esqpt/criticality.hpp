#pragma once

// ESQPT diagnostics: level curves and their curvature, density of states, the
// cusp of d(<W>/N)/d(alpha) and the finite-size scaling fits
//
//   ln|depth(N)|              = kappa1 ln N + C
//   ln|d(<W>/N)/d(alpha)|     = kappa2 ln(alpha_m - alpha) + D,   nu_e = |kappa2 / kappa1|

#include <cstddef>
#include <optional>
#include <vector>

#include "esqpt/model.hpp"
#include "esqpt/quench.hpp"

namespace esqpt {

struct AlphaGrid {
  double start = 0.0;
  double stop = 0.0;
  double step = 0.0;

  // start + i*step for i = 0 .. round((stop - start) / step). Throws on
  // step <= 0 or stop < start.
  std::vector<double> points() const;
};

struct Curve {
  std::vector<double> x;
  std::vector<double> y;

  std::size_t size() const { return x.size(); }
};

struct LevelCurve {
  std::vector<double> alphas;
  std::vector<double> energies;
  std::size_t level_index = 0;  // sector index
  Parity parity = Parity::even;

  Curve curve() const { return {alphas, energies}; }
};

LevelCurve level_curve(int n_spins, const AlphaGrid& grid, std::size_t sector_index, Parity parity,
                       unsigned jobs = 0);

// Central second difference on the interior points. Needs a uniform grid with
// at least 5 points.
Curve second_derivative(const Curve& curve);
inline Curve second_derivative(const LevelCurve& c) { return second_derivative(c.curve()); }

// Central first difference on the interior points, same grid rules.
Curve first_derivative(const Curve& curve);

// Histogram of values on the given ascending edges, normalized to the number
// of values; the last bin is closed. Values outside the edges are rejected.
Histogram bin_values(const std::vector<double>& values, std::vector<double> edges);

// Equal-width histogram over [min, max] of the energies; the maximum lands in
// the top bin.
Histogram density_of_states(const std::vector<double>& energies, std::size_t bins);

// Merged-ladder DOS of H(alpha), both sectors.
Histogram density_of_states(int n_spins, double alpha, std::size_t bins);

// round(N / 5) - 3; throws when negative.
std::size_t critical_state_index(int n_spins);

// Resolve a ladder level (or the critical level when empty) to a sector state.
SectorState resolve_initial_state(int n_spins, std::optional<std::size_t> level, Parity parity);

// Observables of one sudden quench alpha -> alpha + delta_alpha from a sector state.
struct QuenchPoint {
  double alpha = 0.0;
  double energy = 0.0;  // E_n^0
  double averaged_le = 0.0;
  double participation_ratio = 0.0;
  double mean_work = 0.0;
  double std_work = 0.0;
};

QuenchPoint quench_point(int n_spins, double alpha, double delta_alpha, SectorState state);

std::vector<QuenchPoint> alpha_sweep(int n_spins, const AlphaGrid& grid, double delta_alpha,
                                     SectorState state, unsigned jobs = 0);

// Every initial state of one sector at fixed alpha, in sector order.
struct StatePoint {
  std::size_t sector_index = 0;
  std::size_t ladder_level = 0;
  QuenchPoint q;
};

std::vector<StatePoint> energy_sweep(int n_spins, double alpha, double delta_alpha, Parity parity);

// d(<W>/N)/d(alpha) with a fresh quench at every grid point.
Curve work_derivative_curve(int n_spins, double delta_alpha, const AlphaGrid& grid, SectorState state,
                            unsigned jobs = 0);

struct Extremum {
  double x = 0.0;
  double value = 0.0;
  std::size_t index = 0;
};

// Grid argmin refined by a 3-point parabola. Throws when the argmin sits on the
// boundary of the curve.
Extremum locate_minimum(const Curve& curve);

// Interior local extremum with the largest |second difference|.
Extremum locate_cusp(const Curve& curve);

struct ScalingFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double residual_std_error = 0.0;
  std::vector<std::pair<double, double>> points;  // (x, y) as fitted
};

// Ordinary least squares. Points are sorted first, so the result does not
// depend on input order.
ScalingFit fit_line(std::vector<std::pair<double, double>> points);

// Line through (ln x, ln |y|).
ScalingFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y);

struct DepthPoint {
  int n_spins = 0;
  SectorState state;
  double alpha_m = 0.0;
  double depth = 0.0;
};

// ln|depth| vs ln N; needs at least 4 distinct N.
ScalingFit fit_kappa1(const std::vector<DepthPoint>& depths);

// Fit window in the distance u = alpha_m - alpha. scaled: u in [lo/N, hi/N];
// absolute: u in [lo, hi].
struct Kappa2Window {
  enum class Mode { scaled, absolute };
  Mode mode = Mode::scaled;
  double lo = 1.0;
  double hi = 10.0;

  double lower(int n_spins) const { return mode == Mode::scaled ? lo / n_spins : lo; }
  double upper(int n_spins) const { return mode == Mode::scaled ? hi / n_spins : hi; }
};

// ln|curve| vs ln(alpha_m - alpha) over the window; needs >= 6 points.
ScalingFit fit_kappa2(const Curve& derivative, double alpha_m, int n_spins, const Kappa2Window& window);

double critical_exponent(const ScalingFit& k1, const ScalingFit& k2);

struct ScalingConfig {
  std::vector<int> n_set{200, 300, 400, 500, 600, 800};
  double delta_alpha = 0.01;
  AlphaGrid grid{0.42, 0.54, 5e-4};
  Kappa2Window window{};
  std::optional<std::size_t> level;  // ladder level; critical when empty
  Parity parity = Parity::even;
  unsigned jobs = 0;
};

struct ScalingResult {
  std::vector<DepthPoint> depths;  // ascending N
  ScalingFit kappa1;
  ScalingFit kappa2;
  double nu_e = 0.0;
  int kappa2_n_spins = 0;  // largest N of the set
  double kappa2_alpha_m = 0.0;
  double kappa2_u_lo = 0.0;  // window actually used, in alpha_m - alpha
  double kappa2_u_hi = 0.0;
};

ScalingResult run_scaling(const ScalingConfig& config);

}  // namespace esqpt
