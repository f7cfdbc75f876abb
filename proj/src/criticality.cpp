#include "esqpt/criticality.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>

#include "esqpt/eigensolve.hpp"
#include "esqpt/sweep.hpp"
#include "esqpt/work.hpp"

namespace esqpt {

namespace {

double uniform_step(const Curve& c, const char* who) {
  if (c.x.size() != c.y.size()) throw std::invalid_argument(std::string(who) + ": x and y lengths differ");
  if (c.size() < 5) throw std::invalid_argument(std::string(who) + ": need a grid of at least 5 points");
  const double h = (c.x.back() - c.x.front()) / static_cast<double>(c.size() - 1);
  if (!(h > 0.0)) throw std::invalid_argument(std::string(who) + ": grid must ascend");
  for (std::size_t i = 1; i < c.size(); ++i)
    if (std::abs((c.x[i] - c.x[i - 1]) - h) > 1e-9 * h)
      throw std::invalid_argument(std::string(who) + ": grid is not uniform");
  return h;
}

QuenchPoint observe(const OverlapVector& ov, double alpha) {
  QuenchPoint q;
  q.alpha = alpha;
  q.energy = ov.initial_energy;
  q.averaged_le = averaged_le(ov);
  q.participation_ratio = 1.0 / q.averaged_le;
  const WorkSummary w = work_summary(work_distribution(ov));
  q.mean_work = w.mean;
  q.std_work = w.std;
  return q;
}

}  // namespace

std::vector<double> AlphaGrid::points() const {
  if (!(step > 0.0)) throw std::invalid_argument("alpha grid: step must be > 0");
  if (!(stop >= start)) throw std::invalid_argument("alpha grid: stop must be >= start");
  const auto n = static_cast<std::size_t>(std::llround((stop - start) / step)) + 1;
  std::vector<double> a(n);
  for (std::size_t i = 0; i < n; ++i) a[i] = start + static_cast<double>(i) * step;
  return a;
}

LevelCurve level_curve(int n_spins, const AlphaGrid& grid, std::size_t sector_index, Parity parity,
                       unsigned jobs) {
  const std::size_t d = block_dimension(n_spins, parity);
  if (sector_index >= d)
    throw std::out_of_range("level_curve: index " + std::to_string(sector_index) + " outside sector of dimension " +
                            std::to_string(d));
  LevelCurve c;
  c.alphas = grid.points();
  c.level_index = sector_index;
  c.parity = parity;
  c.energies = parallel_map(
      c.alphas.size(),
      [&](std::size_t i) { return eigvals_tridiagonal(build_block(n_spins, c.alphas[i], parity))[sector_index]; },
      jobs);
  return c;
}

Curve second_derivative(const Curve& curve) {
  const double h = uniform_step(curve, "second_derivative");
  Curve out;
  for (std::size_t i = 1; i + 1 < curve.size(); ++i) {
    out.x.push_back(curve.x[i]);
    out.y.push_back((curve.y[i + 1] - 2.0 * curve.y[i] + curve.y[i - 1]) / (h * h));
  }
  return out;
}

Curve first_derivative(const Curve& curve) {
  const double h = uniform_step(curve, "first_derivative");
  Curve out;
  for (std::size_t i = 1; i + 1 < curve.size(); ++i) {
    out.x.push_back(curve.x[i]);
    out.y.push_back((curve.y[i + 1] - curve.y[i - 1]) / (2.0 * h));
  }
  return out;
}

Histogram bin_values(const std::vector<double>& values, std::vector<double> edges) {
  if (edges.size() < 3) throw std::invalid_argument("bin_values: need at least 2 bins");
  for (std::size_t i = 1; i < edges.size(); ++i)
    if (!(edges[i] > edges[i - 1])) throw std::invalid_argument("bin_values: edges must ascend");
  if (values.empty()) throw std::invalid_argument("bin_values: no values");
  const std::size_t bins = edges.size() - 1;
  std::vector<std::size_t> counts(bins, 0);
  for (double v : values) {
    if (!(v >= edges.front() && v <= edges.back())) throw std::invalid_argument("bin_values: value outside the edges");
    const auto it = std::upper_bound(edges.begin(), edges.end(), v);
    const auto b = static_cast<std::size_t>(it - edges.begin()) - 1;
    ++counts[std::min(b, bins - 1)];
  }
  Histogram h;
  h.bin_edges = std::move(edges);
  h.masses.resize(bins);
  for (std::size_t b = 0; b < bins; ++b)
    h.masses[b] = static_cast<double>(counts[b]) / static_cast<double>(values.size());
  return h;
}

Histogram density_of_states(const std::vector<double>& energies, std::size_t bins) {
  if (bins < 2) throw std::invalid_argument("density_of_states: need at least 2 bins");
  if (energies.empty()) throw std::invalid_argument("density_of_states: no energies");
  const auto [lo_it, hi_it] = std::minmax_element(energies.begin(), energies.end());
  const double lo = *lo_it;
  const double hi = *hi_it > lo ? *hi_it : lo + 1.0;
  std::vector<double> edges(bins + 1);
  for (std::size_t b = 0; b <= bins; ++b) edges[b] = lo + (hi - lo) * static_cast<double>(b) / static_cast<double>(bins);
  edges[bins] = hi;
  return bin_values(energies, std::move(edges));
}

Histogram density_of_states(int n_spins, double alpha, std::size_t bins) {
  std::vector<double> e;
  for (const auto& l : merged_ladder(n_spins, alpha)) e.push_back(l.energy);
  return density_of_states(e, bins);
}

std::size_t critical_state_index(int n_spins) {
  const long long idx = std::llround(static_cast<double>(n_spins) / 5.0) - 3;
  if (idx < 0) throw std::invalid_argument("critical_state_index: N/5 - 3 < 0 for N = " + std::to_string(n_spins));
  return static_cast<std::size_t>(idx);
}

SectorState resolve_initial_state(int n_spins, std::optional<std::size_t> level, Parity parity) {
  return ladder_state(n_spins, level ? *level : critical_state_index(n_spins), parity);
}

QuenchPoint quench_point(int n_spins, double alpha, double delta_alpha, SectorState state) {
  const ModelParams p{n_spins, alpha, delta_alpha};
  return observe(sudden_quench(p, state.parity, state.index), alpha);
}

std::vector<QuenchPoint> alpha_sweep(int n_spins, const AlphaGrid& grid, double delta_alpha, SectorState state,
                                     unsigned jobs) {
  const auto alphas = grid.points();
  return parallel_map(
      alphas.size(), [&](std::size_t i) { return quench_point(n_spins, alphas[i], delta_alpha, state); }, jobs);
}

std::vector<StatePoint> energy_sweep(int n_spins, double alpha, double delta_alpha, Parity parity) {
  const ModelParams p{n_spins, alpha, delta_alpha};
  p.validate();
  const Spectrum init = eigh_tridiagonal(build_block(p, p.alpha, parity));
  const Spectrum final = eigh_tridiagonal(build_block(p, p.final_alpha(), parity));
  std::vector<StatePoint> out(init.dim());
  for (std::size_t n = 0; n < init.dim(); ++n) {
    out[n].sector_index = n;
    out[n].ladder_level = ladder_position(parity, n);
    out[n].q = observe(overlap_coefficients(init, final, n), alpha);
  }
  return out;
}

Curve work_derivative_curve(int n_spins, double delta_alpha, const AlphaGrid& grid, SectorState state,
                            unsigned jobs) {
  const auto sweep = alpha_sweep(n_spins, grid, delta_alpha, state, jobs);
  Curve w;
  for (const auto& q : sweep) {
    w.x.push_back(q.alpha);
    w.y.push_back(q.mean_work / n_spins);
  }
  return first_derivative(w);
}

Extremum locate_minimum(const Curve& curve) {
  if (curve.size() < 3) throw std::invalid_argument("locate_minimum: need at least 3 points");
  const auto i = static_cast<std::size_t>(std::min_element(curve.y.begin(), curve.y.end()) - curve.y.begin());
  if (i == 0 || i + 1 == curve.size())
    throw std::runtime_error("locate_minimum: minimum at the grid boundary (alpha = " + std::to_string(curve.x[i]) +
                             "); widen the window");
  const double x0 = curve.x[i - 1], x1 = curve.x[i], x2 = curve.x[i + 1];
  const double y0 = curve.y[i - 1], y1 = curve.y[i], y2 = curve.y[i + 1];
  // Vertex of the interpolating parabola.
  const double d01 = (y1 - y0) / (x1 - x0), d12 = (y2 - y1) / (x2 - x1);
  const double a = (d12 - d01) / (x2 - x0);
  Extremum e{x1, y1, i};
  if (a > 0.0) {
    const double b = d01 - a * (x0 + x1);
    e.x = -b / (2.0 * a);
    e.value = y1 + (e.x - x1) * (d01 + a * (e.x - x0));
  }
  return e;
}

Extremum locate_cusp(const Curve& curve) {
  std::optional<Extremum> best;
  double best_curv = -1.0;
  for (std::size_t i = 1; i + 1 < curve.size(); ++i) {
    const double l = curve.y[i - 1], c = curve.y[i], r = curve.y[i + 1];
    const bool is_max = c > l && c > r, is_min = c < l && c < r;
    if (!is_max && !is_min) continue;
    const double curv = std::abs(r - 2.0 * c + l);
    if (curv > best_curv) {
      best_curv = curv;
      best = Extremum{curve.x[i], c, i};
    }
  }
  if (!best) throw std::runtime_error("locate_cusp: curve has no interior extremum");
  return *best;
}

ScalingFit fit_line(std::vector<std::pair<double, double>> points) {
  if (points.size() < 2) throw std::invalid_argument("fit_line: need at least 2 points");
  std::sort(points.begin(), points.end());
  const double n = static_cast<double>(points.size());
  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : points) {
    mx += x;
    my += y;
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& [x, y] : points) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
    syy += (y - my) * (y - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_line: all x values coincide");
  ScalingFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double sse = 0.0;
  for (const auto& [x, y] : points) {
    const double r = y - (f.intercept + f.slope * x);
    sse += r * r;
  }
  f.r_squared = syy > 0.0 ? std::clamp(1.0 - sse / syy, 0.0, 1.0) : 1.0;
  f.residual_std_error = points.size() > 2 ? std::sqrt(sse / (n - 2.0)) : 0.0;
  f.points = std::move(points);
  return f;
}

ScalingFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("fit_power_law: x and y lengths differ");
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0)) throw std::invalid_argument("fit_power_law: x must be > 0");
    if (y[i] == 0.0 || !std::isfinite(y[i])) throw std::invalid_argument("fit_power_law: |y| must be > 0");
    pts.emplace_back(std::log(x[i]), std::log(std::abs(y[i])));
  }
  return fit_line(std::move(pts));
}

ScalingFit fit_kappa1(const std::vector<DepthPoint>& depths) {
  std::set<int> distinct;
  for (const auto& d : depths) distinct.insert(d.n_spins);
  if (distinct.size() < 4) throw std::invalid_argument("fit_kappa1: need at least 4 distinct N");
  std::vector<double> x, y;
  for (const auto& d : depths) {
    if (d.depth == 0.0) throw std::invalid_argument("fit_kappa1: zero depth at N = " + std::to_string(d.n_spins));
    x.push_back(d.n_spins);
    y.push_back(d.depth);
  }
  return fit_power_law(x, y);
}

ScalingFit fit_kappa2(const Curve& derivative, double alpha_m, int n_spins, const Kappa2Window& window) {
  const double u_lo = window.lower(n_spins), u_hi = window.upper(n_spins);
  if (!(u_lo > 0.0)) throw std::invalid_argument("fit_kappa2: window contains alpha >= alpha_m");
  if (!(u_hi > u_lo)) throw std::invalid_argument("fit_kappa2: empty window");
  if (derivative.size() == 0 || alpha_m - u_hi < derivative.x.front())
    throw std::invalid_argument("fit_kappa2: window extends below the sampled alpha grid");
  std::vector<double> u, y;
  for (std::size_t i = 0; i < derivative.size(); ++i) {
    const double d = alpha_m - derivative.x[i];
    if (d >= u_lo && d <= u_hi) {
      u.push_back(d);
      y.push_back(derivative.y[i]);
    }
  }
  if (u.size() < 6)
    throw std::invalid_argument("fit_kappa2: window holds " + std::to_string(u.size()) + " grid points, need >= 6");
  return fit_power_law(u, y);
}

double critical_exponent(const ScalingFit& k1, const ScalingFit& k2) {
  if (k1.slope == 0.0) throw std::invalid_argument("critical_exponent: kappa1 slope is zero");
  return std::abs(k2.slope / k1.slope);
}

ScalingResult run_scaling(const ScalingConfig& config) {
  if (config.n_set.empty()) throw std::invalid_argument("scaling: empty N set");
  std::vector<int> ns = config.n_set;
  std::sort(ns.begin(), ns.end());
  ns.erase(std::unique(ns.begin(), ns.end()), ns.end());

  ScalingResult r;
  Curve largest;
  for (int n : ns) {
    const SectorState s = resolve_initial_state(n, config.level, config.parity);
    Curve d = work_derivative_curve(n, config.delta_alpha, config.grid, s, config.jobs);
    const Extremum m = locate_minimum(d);
    r.depths.push_back({n, s, m.x, m.value});
    if (n == ns.back()) largest = std::move(d);
  }
  r.kappa1 = fit_kappa1(r.depths);

  const int n_max = ns.back();
  r.kappa2_n_spins = n_max;
  r.kappa2_alpha_m = r.depths.back().alpha_m;
  r.kappa2_u_lo = config.window.lower(n_max);
  r.kappa2_u_hi = config.window.upper(n_max);
  const double needed = r.kappa2_alpha_m - r.kappa2_u_hi;
  if (needed < largest.x.front()) {
    // Extend the grid downwards on the same lattice.
    const double h = config.grid.step;
    const double extra = std::ceil((config.grid.start - needed) / h) + 2.0;
    const AlphaGrid g{config.grid.start - extra * h, config.grid.stop, h};
    if (g.start < 0.0) throw std::invalid_argument("scaling: kappa2 window reaches alpha < 0");
    largest = work_derivative_curve(n_max, config.delta_alpha, g, r.depths.back().state, config.jobs);
  }
  r.kappa2 = fit_kappa2(largest, r.kappa2_alpha_m, n_max, config.window);
  r.nu_e = critical_exponent(r.kappa1, r.kappa2);
  return r;
}

}  // namespace esqpt
