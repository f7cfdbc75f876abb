#include <algorithm>
#include <charconv>
#include <map>
#include <stdexcept>
#include <string>

#include "esqpt/cli.hpp"
#include "esqpt/simd/kernels.hpp"

namespace esqpt::cli {

namespace {

template <class T>
T parse_number(std::string_view s, std::string_view what) {
  T v{};
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc{} || r.ptr != s.data() + s.size())
    throw std::invalid_argument(std::string(what) + ": cannot parse '" + std::string(s) + "'");
  return v;
}

bool is_known(std::string_view cmd) {
  return std::find(std::begin(kCommands), std::end(kCommands), cmd) != std::end(kCommands);
}

bool is_sweep(std::string_view cmd) { return cmd == "avg-le" || cmd == "work" || cmd == "pr"; }

std::string_view mode_of(const RunConfig& c) {
  if (c.grid) return "alpha-sweep";
  return c.ini_given ? "point" : "energy-sweep";
}

}  // namespace

std::optional<std::size_t> parse_ini(std::string_view s) {
  if (s == "critical") return std::nullopt;
  return parse_number<std::size_t>(s, "--ini");
}

std::string ini_text(const std::optional<std::size_t>& ini) { return ini ? std::to_string(*ini) : "critical"; }

std::vector<int> parse_n_set(std::string_view s) {
  std::vector<int> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    auto end = s.find(',', pos);
    if (end == std::string_view::npos) end = s.size();
    out.push_back(parse_number<int>(s.substr(pos, end - pos), "--n-set"));
    pos = end + 1;
  }
  return out;
}

std::string n_set_text(const std::vector<int>& ns) {
  std::string s;
  for (std::size_t i = 0; i < ns.size(); ++i) s += (i ? "," : "") + std::to_string(ns[i]);
  return s;
}

void validate(const RunConfig& c) {
  if (!is_known(c.command)) throw std::invalid_argument("unknown command '" + c.command + "'");
  if (c.command == "work-scaling") {
    if (c.n_set.empty()) throw std::invalid_argument("--n-set must not be empty");
    for (int n : c.n_set)
      if (n < 2 || n % 2 != 0) throw std::invalid_argument("--n-set entries must be even and >= 2");
  } else {
    ModelParams{c.n_spins, c.alpha, c.delta_alpha}.validate();
  }
  if (!(c.t_max > 0.0)) throw std::invalid_argument("--t-max must be > 0");
  if (c.samples < 2) throw std::invalid_argument("--samples must be >= 2");
  if (c.bin_count() < 2) throw std::invalid_argument("--bins must be >= 2");
  if (!(c.broadening >= 0.0)) throw std::invalid_argument("--broadening must be >= 0");
  if (c.grid) {
    const auto& g = *c.grid;
    if (!(g.step > 0.0)) throw std::invalid_argument("--alpha-step must be > 0");
    if (!(g.stop >= g.start)) throw std::invalid_argument("empty alpha grid: --alpha-stop < --alpha-start");
    if (g.start < 0.0) throw std::invalid_argument("--alpha-start must be >= 0");
    if (g.start + c.delta_alpha < 0.0) throw std::invalid_argument("alpha + dalpha must be >= 0 on the whole grid");
  }
  if (!(c.window.lo > 0.0) || !(c.window.hi > c.window.lo))
    throw std::invalid_argument("kappa2 window needs 0 < lo < hi");
  if (!c.simd.empty()) simd::parse_backend(c.simd);
}

Metadata to_metadata(const RunConfig& c) {
  Metadata m;
  m.emplace_back("command", c.command);
  if (is_sweep(c.command)) m.emplace_back("mode", std::string(mode_of(c)));
  m.emplace_back("n_spins", std::to_string(c.n_spins));
  m.emplace_back("alpha", format_exact(c.alpha));
  m.emplace_back("dalpha", format_exact(c.delta_alpha));
  m.emplace_back("ini", ini_text(c.ini));
  m.emplace_back("parity", std::string(to_string(c.parity)));
  m.emplace_back("t_max", format_exact(c.t_max));
  m.emplace_back("samples", std::to_string(c.samples));
  m.emplace_back("bins", std::to_string(c.bin_count()));
  if (c.grid) {
    m.emplace_back("alpha_start", format_exact(c.grid->start));
    m.emplace_back("alpha_stop", format_exact(c.grid->stop));
    m.emplace_back("alpha_step", format_exact(c.grid->step));
  }
  m.emplace_back("n_set", n_set_text(c.n_set));
  m.emplace_back("broadening", format_exact(c.broadening));
  m.emplace_back("kappa2_window", c.window.mode == Kappa2Window::Mode::scaled ? "scaled" : "absolute");
  m.emplace_back("kappa2_lo", format_exact(c.window.lo));
  m.emplace_back("kappa2_hi", format_exact(c.window.hi));
  m.emplace_back("simd", c.simd.empty() ? std::string(simd::backend_name(simd::active_backend())) : c.simd);
  return m;
}

RunConfig from_metadata(const Metadata& meta) {
  std::map<std::string, std::string> kv(meta.begin(), meta.end());
  auto get = [&](const std::string& k) -> const std::string& {
    const auto it = kv.find(k);
    if (it == kv.end()) throw std::invalid_argument("metadata lacks '" + k + "'");
    return it->second;
  };
  RunConfig c;
  c.command = get("command");
  const std::string mode = kv.count("mode") ? kv["mode"] : "";
  c.n_spins = parse_number<int>(get("n_spins"), "n_spins");
  c.alpha = parse_number<double>(get("alpha"), "alpha");
  c.delta_alpha = parse_number<double>(get("dalpha"), "dalpha");
  c.ini = parse_ini(get("ini"));
  c.ini_given = mode == "point";
  c.parity = parse_parity(get("parity"));
  c.t_max = parse_number<double>(get("t_max"), "t_max");
  c.samples = parse_number<std::size_t>(get("samples"), "samples");
  c.bins = parse_number<std::size_t>(get("bins"), "bins");
  if (kv.count("alpha_start"))
    c.grid = AlphaGrid{parse_number<double>(get("alpha_start"), "alpha_start"),
                       parse_number<double>(get("alpha_stop"), "alpha_stop"),
                       parse_number<double>(get("alpha_step"), "alpha_step")};
  c.n_set = parse_n_set(get("n_set"));
  c.broadening = parse_number<double>(get("broadening"), "broadening");
  const std::string& wm = get("kappa2_window");
  if (wm != "scaled" && wm != "absolute") throw std::invalid_argument("kappa2_window must be scaled or absolute");
  c.window.mode = wm == "scaled" ? Kappa2Window::Mode::scaled : Kappa2Window::Mode::absolute;
  c.window.lo = parse_number<double>(get("kappa2_lo"), "kappa2_lo");
  c.window.hi = parse_number<double>(get("kappa2_hi"), "kappa2_hi");
  c.simd = get("simd");
  return c;
}

}  // namespace esqpt::cli
