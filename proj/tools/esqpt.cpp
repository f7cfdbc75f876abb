// esqpt: LMG quench, work-statistics and ESQPT scaling runs written as CSV/JSON.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "esqpt/cli.hpp"

namespace {

using esqpt::cli::RunConfig;

struct Flags {
  int n_spins = 400;
  double alpha = 0.48;
  double delta_alpha = 0.01;
  std::string ini;
  std::string parity = "even";
  double t_max = 5000.0;
  std::size_t samples = 200000;
  std::optional<std::size_t> bins;
  std::optional<double> a_start, a_stop, a_step;
  std::string n_set = "200,300,400,500,600,800";
  double broadening = 0.0;
  std::string window = "scaled";
  std::optional<double> k2_lo, k2_hi;
  std::string simd;
};

void add_run_flags(CLI::App* sub, Flags& f) {
  sub->add_option("--n-spins", f.n_spins, "number of spins N (even)")->capture_default_str();
  sub->add_option("--alpha", f.alpha, "field strength alpha")->capture_default_str();
  sub->add_option("--dalpha", f.delta_alpha, "quench amplitude")->capture_default_str();
  sub->add_option("--ini", f.ini, "initial ladder level (0-based) or 'critical' (N/5-3)");
  sub->add_option("--parity", f.parity, "parity sector of the initial state")
      ->check(CLI::IsMember({"even", "odd"}))
      ->capture_default_str();
  sub->add_option("--t-max", f.t_max, "time window T")->capture_default_str();
  sub->add_option("--samples", f.samples, "time samples")->capture_default_str();
  sub->add_option("--bins", f.bins, "histogram bins (default 50, dos 51)");
  auto* s = sub->add_option("--alpha-start", f.a_start, "alpha grid start");
  auto* e = sub->add_option("--alpha-stop", f.a_stop, "alpha grid stop");
  auto* h = sub->add_option("--alpha-step", f.a_step, "alpha grid step");
  s->needs(e)->needs(h);
  e->needs(s)->needs(h);
  h->needs(s)->needs(e);
  sub->add_option("--n-set", f.n_set, "comma-separated N values for work-scaling")->capture_default_str();
  sub->add_option("--broadening", f.broadening, "Gaussian width for the spectral function (0 = sticks)")
      ->capture_default_str();
  sub->add_option("--kappa2-window", f.window, "scaled: u in [lo/N, hi/N]; absolute: u in [lo, hi], u = alpha_m - alpha")
      ->check(CLI::IsMember({"scaled", "absolute"}))
      ->capture_default_str();
  sub->add_option("--kappa2-lo", f.k2_lo, "kappa2 window lower bound (default 1 scaled, 0.01 absolute)");
  sub->add_option("--kappa2-hi", f.k2_hi, "kappa2 window upper bound (default 10 scaled, 0.1 absolute)");
  sub->add_option("--simd", f.simd, "kernel backend: scalar, avx2 or neon");
}

RunConfig to_config(const std::string& command, const Flags& f) {
  RunConfig c;
  c.command = command;
  c.n_spins = f.n_spins;
  c.alpha = f.alpha;
  c.delta_alpha = f.delta_alpha;
  c.ini_given = !f.ini.empty();
  c.ini = esqpt::cli::parse_ini(f.ini.empty() ? "critical" : f.ini);
  c.parity = esqpt::parse_parity(f.parity);
  c.t_max = f.t_max;
  c.samples = f.samples;
  c.bins = f.bins;
  if (f.a_start) c.grid = esqpt::AlphaGrid{*f.a_start, *f.a_stop, *f.a_step};
  c.n_set = esqpt::cli::parse_n_set(f.n_set);
  c.broadening = f.broadening;
  const bool scaled = f.window == "scaled";
  c.window.mode = scaled ? esqpt::Kappa2Window::Mode::scaled : esqpt::Kappa2Window::Mode::absolute;
  c.window.lo = f.k2_lo ? *f.k2_lo : (scaled ? 1.0 : 0.01);
  c.window.hi = f.k2_hi ? *f.k2_hi : (scaled ? 10.0 : 0.1);
  c.simd = f.simd;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact diagonalization of the LMG model: Loschmidt echo, work statistics and ESQPT scaling"};
  app.require_subcommand(1);

  std::string out;
  std::string format;
  unsigned jobs = 0;
  app.add_option("--jobs", jobs, "worker threads (0 = ESQPT_JOBS or all processors)");

  const std::map<std::string_view, std::string> about{
      {"spectrum", "merged-ladder energies at --alpha or over an alpha grid"},
      {"le", "Loschmidt echo time series after the quench alpha -> alpha + dalpha"},
      {"le-dist", "histogram of the echo values over [0, T]"},
      {"avg-le", "time-averaged echo over an alpha grid or all sector states"},
      {"work", "mean and spread of the work distribution"},
      {"work-scaling", "cusp depths and the kappa1, kappa2, nu_e fits"},
      {"spectral", "work distribution sticks or Gaussian-broadened spectral function"},
      {"pr", "participation ratio over an alpha grid or all sector states"},
      {"dos", "normalized density of states of the merged ladder"},
  };
  Flags flags;
  std::vector<std::pair<std::string, CLI::App*>> subs;
  for (std::string_view name : esqpt::cli::kCommands) {
    auto* sub = app.add_subcommand(std::string(name), about.at(name));
    add_run_flags(sub, flags);
    sub->add_option("--out", out, "output file")->required();
    sub->add_option("--format", format, "csv or json (default csv)")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--jobs", jobs, "worker threads");
    subs.emplace_back(std::string(name), sub);
  }
  std::string replay_from;
  auto* replay = app.add_subcommand("replay", "re-run the experiment recorded in an output file's metadata");
  replay->add_option("input", replay_from, "file written by a previous run")->required()->check(CLI::ExistingFile);
  replay->add_option("--out", out, "output file")->required();
  replay->add_option("--format", format, "csv or json (default: format of the input)")
      ->check(CLI::IsMember({"csv", "json"}));
  replay->add_option("--jobs", jobs, "worker threads");

  CLI11_PARSE(app, argc, argv);

  try {
    RunConfig config;
    std::optional<esqpt::Format> fmt;
    if (!format.empty()) fmt = esqpt::parse_format(format);
    if (replay->parsed()) {
      std::ifstream in(replay_from, std::ios::binary);
      const std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
      config = esqpt::cli::from_metadata(esqpt::parse_metadata(content));
      if (!fmt) fmt = esqpt::sniff_format(content);
    } else {
      for (const auto& [name, sub] : subs)
        if (sub->parsed()) config = to_config(name, flags);
    }
    const esqpt::Table table = esqpt::cli::run_command(config, jobs);
    for (const auto& [k, v] : table.meta)
      if (k == "aliasing" && v == "warn")
        std::cerr << "esqpt: warning: time step exceeds the alias-free step for this quench\n";
    esqpt::write_table(table, out, fmt.value_or(esqpt::Format::csv));
  } catch (const std::exception& e) {
    std::cerr << "esqpt: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
