#include <cmath>
#include <stdexcept>

#include "esqpt/cli.hpp"
#include "esqpt/eigensolve.hpp"
#include "esqpt/quench.hpp"
#include "esqpt/simd/kernels.hpp"
#include "esqpt/sweep.hpp"
#include "esqpt/work.hpp"

namespace esqpt::cli {

namespace {

const AlphaGrid kScalingGrid{0.42, 0.54, 5e-4};

Cell num(double v) { return v; }
Cell idx(std::size_t v) { return static_cast<std::int64_t>(v); }

void describe_state(Table& t, int n_spins, SectorState s) {
  t.add_meta("sector_index", std::to_string(s.index));
  t.add_meta("ladder_level", std::to_string(ladder_position(s.parity, s.index)));
  t.add_meta("sector_parity", std::string(to_string(s.parity)));
  t.add_meta("sector_dim", std::to_string(block_dimension(n_spins, s.parity)));
}

OverlapVector quench_of(const RunConfig& c, Table& t) {
  const SectorState s = resolve_initial_state(c.n_spins, c.ini, c.parity);
  describe_state(t, c.n_spins, s);
  OverlapVector ov = sudden_quench({c.n_spins, c.alpha, c.delta_alpha}, s.parity, s.index);
  t.add_meta("initial_energy", format_exact(ov.initial_energy));
  return ov;
}

Table cmd_spectrum(const RunConfig& c, Table t, unsigned jobs) {
  const std::vector<double> alphas = c.grid ? c.grid->points() : std::vector<double>{c.alpha};
  const auto ladders =
      parallel_map(alphas.size(), [&](std::size_t i) { return merged_ladder(c.n_spins, alphas[i]); }, jobs);
  t.columns = {"alpha", "level", "energy", "energy_per_n", "parity", "sector_index"};
  for (std::size_t i = 0; i < alphas.size(); ++i)
    for (std::size_t m = 0; m < ladders[i].size(); ++m) {
      const auto& l = ladders[i][m];
      t.rows.push_back({num(alphas[i]), idx(m), num(l.energy), num(l.energy / c.n_spins),
                        std::string(to_string(l.parity)), idx(l.sector_index)});
    }
  return t;
}

Table cmd_le(const RunConfig& c, Table t, bool distribution, unsigned jobs) {
  const OverlapVector ov = quench_of(c, t);
  const double step = max_alias_free_step(ov);
  const double dt = c.t_max / static_cast<double>(c.samples - 1);
  t.add_meta("dt", format_exact(dt));
  t.add_meta("alias_free_step", std::isfinite(step) ? format_exact(step) : "inf");
  t.add_meta("aliasing", dt < step ? "ok" : "warn");
  const TimeSeries ts = le_time_series(ov, c.t_max, c.samples, jobs);
  if (!distribution) {
    t.columns = {"t", "L"};
    for (std::size_t i = 0; i < ts.times.size(); ++i) t.rows.push_back({num(ts.times[i]), num(ts.values[i])});
    return t;
  }
  const Histogram h = le_distribution(ts, c.bin_count());
  t.add_meta("averaged_le", format_exact(averaged_le(ov)));
  t.columns = {"bin_lo", "bin_hi", "mass"};
  for (std::size_t b = 0; b < h.bins(); ++b)
    t.rows.push_back({num(h.bin_edges[b]), num(h.bin_edges[b + 1]), num(h.masses[b])});
  return t;
}

std::vector<Cell> observables(const std::string& cmd, const QuenchPoint& q, int n) {
  if (cmd == "avg-le") return {num(q.averaged_le)};
  if (cmd == "pr") return {num(q.participation_ratio)};
  return {num(q.mean_work / n), num(q.std_work / n)};
}

std::vector<std::string> observable_columns(const std::string& cmd) {
  if (cmd == "avg-le") return {"averaged_le"};
  if (cmd == "pr") return {"participation_ratio"};
  return {"mean_work_per_n", "std_work_per_n"};
}

Table cmd_sweep(const RunConfig& c, Table t, unsigned jobs) {
  const auto obs_cols = observable_columns(c.command);
  if (c.grid || c.ini_given) {
    const SectorState s = resolve_initial_state(c.n_spins, c.ini, c.parity);
    describe_state(t, c.n_spins, s);
    const std::vector<QuenchPoint> pts =
        c.grid ? alpha_sweep(c.n_spins, *c.grid, c.delta_alpha, s, jobs)
               : std::vector<QuenchPoint>{quench_point(c.n_spins, c.alpha, c.delta_alpha, s)};
    t.columns = {"alpha", "energy_per_n"};
    t.columns.insert(t.columns.end(), obs_cols.begin(), obs_cols.end());
    for (const auto& q : pts) {
      std::vector<Cell> row{num(q.alpha), num(q.energy / c.n_spins)};
      for (auto& v : observables(c.command, q, c.n_spins)) row.push_back(std::move(v));
      t.rows.push_back(std::move(row));
    }
    return t;
  }
  const auto pts = energy_sweep(c.n_spins, c.alpha, c.delta_alpha, c.parity);
  t.columns = {"sector_index", "ladder_level", "energy_per_n"};
  t.columns.insert(t.columns.end(), obs_cols.begin(), obs_cols.end());
  for (const auto& p : pts) {
    std::vector<Cell> row{idx(p.sector_index), idx(p.ladder_level), num(p.q.energy / c.n_spins)};
    for (auto& v : observables(c.command, p.q, c.n_spins)) row.push_back(std::move(v));
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table cmd_work_scaling(const RunConfig& c, Table t, unsigned jobs) {
  ScalingConfig sc;
  sc.n_set = c.n_set;
  sc.delta_alpha = c.delta_alpha;
  sc.grid = *c.grid;
  sc.window = c.window;
  sc.level = c.ini;
  sc.parity = c.parity;
  sc.jobs = jobs;
  const ScalingResult r = run_scaling(sc);

  t.add_meta("kappa1", format_real(r.kappa1.slope));
  t.add_meta("kappa2", format_real(r.kappa2.slope));
  t.add_meta("nu_e", format_real(r.nu_e));
  t.add_meta("kappa2_n_spins", std::to_string(r.kappa2_n_spins));
  t.add_meta("kappa2_alpha_m", format_real(r.kappa2_alpha_m));
  t.add_meta("kappa2_u_lo", format_real(r.kappa2_u_lo));
  t.add_meta("kappa2_u_hi", format_real(r.kappa2_u_hi));

  t.columns = {"record", "n_spins", "sector_index", "x", "y", "slope", "intercept", "r_squared",
               "residual_std_error"};
  const Cell none{};
  for (const auto& d : r.depths)
    t.rows.push_back({std::string("depth"), idx(static_cast<std::size_t>(d.n_spins)), idx(d.state.index),
                      num(d.alpha_m), num(d.depth), none, none, none, none});
  for (const auto& [x, y] : r.kappa2.points)
    t.rows.push_back({std::string("kappa2_point"), idx(static_cast<std::size_t>(r.kappa2_n_spins)),
                      idx(r.depths.back().state.index), num(x), num(y), none, none, none, none});
  auto fit_row = [&](const char* name, const ScalingFit& f) {
    t.rows.push_back({std::string(name), none, none, none, none, num(f.slope), num(f.intercept), num(f.r_squared),
                      num(f.residual_std_error)});
  };
  fit_row("kappa1", r.kappa1);
  fit_row("kappa2", r.kappa2);
  t.rows.push_back({std::string("nu_e"), none, none, none, num(r.nu_e), none, none, none, none});
  return t;
}

Table cmd_spectral(const RunConfig& c, Table t) {
  const OverlapVector ov = quench_of(c, t);
  const SpectralResult sp = spectral_function(work_distribution(ov), c.broadening);
  if (c.broadening > 0.0) {
    t.columns = {"omega", "a"};
    for (std::size_t i = 0; i < sp.curve.x.size(); ++i) t.rows.push_back({num(sp.curve.x[i]), num(sp.curve.y[i])});
    return t;
  }
  // Stick of the final state with the same sector index as the initial one.
  const double omega_ini = ov.final_energies[ov.initial_index] - ov.initial_energy;
  const DiscreteDistribution sticks = merge_coincident(sp.sticks);
  t.columns = {"omega", "mass", "is_initial"};
  for (const auto& p : sticks.points)
    t.rows.push_back({num(p.value), num(p.mass), idx(std::abs(p.value - omega_ini) <= 1e-12 ? 1 : 0)});
  return t;
}

Table cmd_dos(const RunConfig& c, Table t) {
  const Histogram h = density_of_states(c.n_spins, c.alpha, c.bin_count());
  t.columns = {"bin_lo", "bin_hi", "mass"};
  for (std::size_t b = 0; b < h.bins(); ++b)
    t.rows.push_back({num(h.bin_edges[b]), num(h.bin_edges[b + 1]), num(h.masses[b])});
  return t;
}

}  // namespace

Table run_command(const RunConfig& input, unsigned jobs) {
  RunConfig c = input;
  if (c.command == "work-scaling" && !c.grid) c.grid = kScalingGrid;
  validate(c);
  if (!c.simd.empty()) simd::set_backend(simd::parse_backend(c.simd));

  Table t;
  t.meta = to_metadata(c);
  if (c.command == "spectrum") return cmd_spectrum(c, std::move(t), jobs);
  if (c.command == "le") return cmd_le(c, std::move(t), false, jobs);
  if (c.command == "le-dist") return cmd_le(c, std::move(t), true, jobs);
  if (c.command == "avg-le" || c.command == "work" || c.command == "pr") return cmd_sweep(c, std::move(t), jobs);
  if (c.command == "work-scaling") return cmd_work_scaling(c, std::move(t), jobs);
  if (c.command == "spectral") return cmd_spectral(c, std::move(t));
  return cmd_dos(c, std::move(t));
}

}  // namespace esqpt::cli
