// Acceptance suite: one [PASS]/[FAIL] line per criterion, tolerances fixed
// below. Exit status is the number of failed criteria (0 = all green).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "esqpt/criticality.hpp"
#include "esqpt/eigensolve.hpp"
#include "esqpt/quench.hpp"
#include "esqpt/work.hpp"

using namespace esqpt;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double energy_per_n_max_curv_x(const std::vector<StatePoint>& pts, int n, bool use_le, double* value = nullptr) {
  Curve c;
  for (const auto& p : pts) {
    c.x.push_back(p.q.energy / n);
    c.y.push_back(use_le ? p.q.averaged_le : p.q.mean_work);
  }
  const Extremum e = locate_cusp(c);
  if (value) *value = e.value;
  return e.x;
}

// 1. Tridiagonal QL against dense Jacobi.
Outcome oracle_equivalence() {
  constexpr double kEnergyTol = 1e-10, kVectorTol = 1e-8;
  double de = 0.0, dv = 0.0;
  for (int n = 2; n <= 40; n += 2)
    for (double alpha : {0.0, 0.48, 1.0, 2.0})
      for (Parity p : {Parity::even, Parity::odd}) {
        const auto b = build_block(n, alpha, p);
        const auto ql = eigh_tridiagonal(b);
        const auto jac = dense_jacobi_oracle(densify(b), p, alpha);
        for (std::size_t k = 0; k < ql.dim(); ++k) {
          de = std::max(de, std::abs(ql.energies[k] - jac.energies[k]));
          for (std::size_t i = 0; i < ql.dim(); ++i)
            dv = std::max(dv, std::abs(std::abs(ql.vectors(i, k)) - std::abs(jac.vectors(i, k))));
        }
      }
  return {de <= kEnergyTol && dv <= kVectorTol, fmt("max |dE| = %.2e (tol %.0e), max |d|v|| = %.2e (tol %.0e)", de,
                                                    kEnergyTol, dv, kVectorTol)};
}

// 2. Scaled energies of levels 20, 80, 300 at N = 400, alpha = 0.48.
Outcome reference_energies() {
  constexpr double kTol = 5e-3;
  const int n = 400;
  const double ref[] = {-0.0468, 3.8e-4, 0.285};
  const std::size_t levels[] = {20, 80, 300};
  const auto ladder = merged_ladder(n, 0.48);
  bool ok = true;
  std::string d = "0-based merged ladder:";
  for (int i = 0; i < 3; ++i) {
    const double e = ladder[levels[i]].energy / n;
    ok &= std::abs(e - ref[i]) <= kTol;
    d += fmt(" E_%zu/N = %+.6f (ref %+.4g)", levels[i], e, ref[i]);
  }
  const auto even = sector_spectrum(n, 0.48, Parity::even).energies;
  d += fmt("; even-sector indices 20/80 read literally: %+.4f/%+.4f, 300 out of range (dim %zu)", even[20] / n,
           even[80] / n, even.size());
  return {ok, d};
}

// 3. 0 <= L <= 1, L(0) = 1, time average vs sum c^4.
Outcome echo_sum_rules() {
  constexpr double kAverageRelTol = 0.02;
  constexpr std::size_t kSamples = 100000;
  constexpr double kT = 5000.0;
  std::mt19937_64 rng(20240601);
  bool ok = true;
  double worst_rel = 0.0, lo = 1.0, hi = 0.0;
  int zero_fail = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 * std::uniform_int_distribution<int>(5, 200)(rng);
    const double alpha = std::uniform_real_distribution<double>(0.0, 1.5)(rng);
    const Parity p = std::uniform_int_distribution<int>(0, 1)(rng) ? Parity::odd : Parity::even;
    const std::size_t d = block_dimension(n, p);
    const std::size_t idx = std::uniform_int_distribution<std::size_t>(0, d - 1)(rng);
    const auto ov = sudden_quench({n, alpha, 0.01}, p, idx);
    if (loschmidt_echo_at(ov, 0.0) != 1.0) ++zero_fail;
    const auto ts = le_time_series(ov, kT, kSamples);
    if (ts.values[0] != 1.0) ++zero_fail;
    double sum = 0.0;
    for (double v : ts.values) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      sum += v;
    }
    const double rel = std::abs(sum / ts.values.size() / averaged_le(ov) - 1.0);
    worst_rel = std::max(worst_rel, rel);
  }
  ok = zero_fail == 0 && lo >= 0.0 && hi <= 1.0 && worst_rel <= kAverageRelTol;
  return {ok, fmt("20 configs x %zu samples: L(0) != 1 in %d cases, L in [%.3e, %.17g], worst |avg/sum c^4 - 1| = "
                  "%.2e (tol %.0e)",
                  kSamples, zero_fail, lo, hi, worst_rel, kAverageRelTol)};
}

// 4. argmin over alpha of the averaged echo near 0.48.
Outcome averaged_echo_argmin() {
  constexpr double kTol = 0.02;
  bool ok = true;
  std::string d;
  for (int n : {400, 800}) {
    const auto s = resolve_initial_state(n, std::nullopt, Parity::even);
    const auto pts = alpha_sweep(n, AlphaGrid{0.3, 0.7, 0.005}, 0.01, s);
    Curve c;
    for (const auto& q : pts) {
      c.x.push_back(q.alpha);
      c.y.push_back(q.averaged_le);
    }
    const auto imin = static_cast<std::size_t>(std::min_element(c.y.begin(), c.y.end()) - c.y.begin());
    ok &= std::abs(c.x[imin] - 0.48) <= kTol;
    const Extremum cusp = locate_cusp(c);
    d += fmt("N=%d: argmin at alpha=%.3f, cusp (%s) at alpha=%.3f; ", n, c.x[imin],
             cusp.value > c.y[cusp.index - 1] ? "peak" : "dip", cusp.x);
  }
  d += fmt("tol +-%.2f", kTol);
  return {ok, d};
}

// 5. Energy-resolved cusp of averaged echo and <W> at alpha = 0.4.
Outcome energy_resolved_cusp() {
  constexpr double kTol = 0.02;
  bool ok = true;
  std::string d;
  for (int n : {400, 800}) {
    const auto pts = energy_sweep(n, 0.4, 0.01, Parity::even);
    const double ele = energy_per_n_max_curv_x(pts, n, true);
    const double ew = energy_per_n_max_curv_x(pts, n, false);
    ok &= std::abs(ele) < kTol && std::abs(ew) < kTol;
    d += fmt("N=%d: averaged-echo cusp at E/N=%+.4f, <W> cusp at E/N=%+.4f; ", n, ele, ew);
  }
  d += fmt("tol |E/N| < %.2f", kTol);
  return {ok, d};
}

// 6. Moment identities and |chi|^2 = L.
Outcome work_identities() {
  constexpr double kMeanTol = 1e-10, kSecondTol = 1e-9, kChiTol = 1e-12;
  std::mt19937_64 rng(777);
  double e1 = 0.0, e2 = 0.0, ec = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 * std::uniform_int_distribution<int>(1, 250)(rng);
    const double alpha = std::uniform_real_distribution<double>(0.0, 1.5)(rng);
    const Parity p = trial % 2 ? Parity::odd : Parity::even;
    const std::size_t idx = std::uniform_int_distribution<std::size_t>(0, block_dimension(n, p) - 1)(rng);
    const ModelParams mp{n, alpha, 0.01};
    const auto init = sector_spectrum(n, alpha, p);
    const auto ov = overlap_coefficients(init, sector_spectrum(n, mp.final_alpha(), p), idx);
    const auto dist = work_distribution(ov);
    const auto hf = build_block(mp, mp.final_alpha(), p);
    const auto v = init.vector(idx);
    const auto hv = apply_block(hf, v);
    const auto hhv = apply_block(hf, hv);
    double h1 = 0.0, h2 = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      h1 += v[i] * hv[i];
      h2 += v[i] * hhv[i];
    }
    const double e0 = init.energies[idx];
    const double w1 = h1 - e0, w2 = h2 - 2.0 * e0 * h1 + e0 * e0;
    e1 = std::max(e1, std::abs(work_moment(dist, 1) - w1) / std::abs(w1));
    e2 = std::max(e2, std::abs(work_moment(dist, 2) - w2) / std::abs(w2));
    for (int k = 0; k <= 200; ++k) {
      const double t = 25.0 * k;
      ec = std::max(ec, std::abs(std::norm(characteristic_function(dist, t)) - loschmidt_echo_at(ov, t)));
    }
  }
  return {e1 <= kMeanTol && e2 <= kSecondTol && ec <= kChiTol,
          fmt("50 configs: rel err <W> = %.2e (tol %.0e), <W^2> = %.2e (tol %.0e), max ||chi|^2 - L| = %.2e (tol "
              "%.0e)",
              e1, kMeanTol, e2, kSecondTol, ec, kChiTol)};
}

// 7. kappa1, kappa2, nu_e from the default scaling pipeline.
Outcome scaling_exponents() {
  const ScalingConfig cfg;
  const ScalingResult r = run_scaling(cfg);
  const bool ok = r.kappa1.slope >= 0.59 && r.kappa1.slope <= 0.69 && r.kappa2.slope >= -0.73 &&
                  r.kappa2.slope <= -0.63 && r.nu_e >= 0.9 && r.nu_e <= 1.1;
  return {ok, fmt("kappa1 = %.4f (r2 %.4f) in [0.59, 0.69], kappa2 = %.4f (r2 %.4f) in [-0.73, -0.63], nu_e = %.4f in "
                  "[0.9, 1.1]; grid [%.2f, %.2f] step %.0e, kappa2 at N=%d, u in [%.5f, %.5f]",
                  r.kappa1.slope, r.kappa1.r_squared, r.kappa2.slope, r.kappa2.r_squared, r.nu_e, cfg.grid.start,
                  cfg.grid.stop, cfg.grid.step, r.kappa2_n_spins, r.kappa2_u_lo, r.kappa2_u_hi)};
}

// 8. DOS modal bin contains E = 0.
Outcome dos_peak() {
  const Histogram h = density_of_states(1000, 0.5, 51);
  const auto m = static_cast<std::size_t>(std::max_element(h.masses.begin(), h.masses.end()) - h.masses.begin());
  const bool ok = h.bin_edges[m] <= 0.0 && 0.0 <= h.bin_edges[m + 1];
  return {ok, fmt("modal bin %zu = [%.3f, %.3f], mass %.4f", m, h.bin_edges[m], h.bin_edges[m + 1], h.masses[m])};
}

// 9. PR minimum in alpha and in energy; PR * averaged echo = 1.
Outcome participation_dip() {
  constexpr double kAlphaTol = 0.02, kEnergyTol = 0.02, kProductTol = 4.5e-16;
  const int n = 1000;
  const auto s = resolve_initial_state(n, std::nullopt, Parity::even);
  const auto pts = alpha_sweep(n, AlphaGrid{0.3, 0.7, 0.005}, 0.01, s);
  double worst = 0.0;
  std::size_t imin = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    worst = std::max(worst, std::abs(pts[i].participation_ratio * pts[i].averaged_le - 1.0));
    if (pts[i].participation_ratio < pts[imin].participation_ratio) imin = i;
  }
  const auto es = energy_sweep(n, 0.4, 0.01, Parity::even);
  double best_pr = INFINITY, best_e = NAN;
  for (std::size_t i = 0; i < es.size(); ++i) {
    worst = std::max(worst, std::abs(es[i].q.participation_ratio * es[i].q.averaged_le - 1.0));
    if (i == 0 || i + 1 == es.size()) continue;
    const double c = es[i].q.participation_ratio;
    if (c < es[i - 1].q.participation_ratio && c < es[i + 1].q.participation_ratio && c < best_pr) {
      best_pr = c;
      best_e = es[i].q.energy / n;
    }
  }
  const bool ok = std::abs(pts[imin].alpha - 0.48) <= kAlphaTol && std::abs(best_e) < kEnergyTol && worst <= kProductTol;
  return {ok, fmt("PR(alpha) argmin at %.3f (tol +-%.2f); lowest interior PR minimum vs energy at E/N=%+.4f (tol %.2f); "
                  "max |PR*avgLE - 1| = %.1e (tol %.1e)",
                  pts[imin].alpha, kAlphaTol, best_e, kEnergyTol, worst, kProductTol)};
}

// 10. Histogram shapes at alpha = 0.1 (bimodal) and 0.48 (unimodal).
struct Modes {
  std::vector<std::size_t> peaks;  // significant local maxima
  double trough_ratio = NAN;       // trough between the two largest / smaller of the two
};

// A local maximum is a mode when it reaches kFloor of the global maximum and
// its topographic prominence (height above the deepest trough separating it
// from any higher bin) is at least kProminence of its own height. The global
// maximum always counts.
Modes modes_of(const Histogram& h) {
  constexpr double kFloor = 0.10;
  constexpr double kProminence = 0.20;
  const auto& m = h.masses;
  const double top = *std::max_element(m.begin(), m.end());
  Modes r;
  for (std::size_t i = 0; i < m.size(); ++i) {
    const double left = i > 0 ? m[i - 1] : -1.0;
    const double right = i + 1 < m.size() ? m[i + 1] : -1.0;
    if (m[i] < kFloor * top || !(m[i] > left && m[i] >= right)) continue;
    double base = -1.0;  // highest of the two side minima on the way to a higher bin
    for (int dir : {-1, 1}) {
      double low = m[i];
      bool higher = false;
      for (long j = static_cast<long>(i) + dir; j >= 0 && j < static_cast<long>(m.size()); j += dir) {
        if (m[j] > m[i]) {
          higher = true;
          break;
        }
        low = std::min(low, m[j]);
      }
      if (higher) base = std::max(base, low);
    }
    if (base < 0.0 || m[i] - base >= kProminence * m[i]) r.peaks.push_back(i);
  }
  if (r.peaks.size() >= 2) {
    auto by_mass = r.peaks;
    std::sort(by_mass.begin(), by_mass.end(), [&](auto a, auto b) { return m[a] > m[b]; });
    const auto a = std::min(by_mass[0], by_mass[1]), b = std::max(by_mass[0], by_mass[1]);
    const double trough = *std::min_element(m.begin() + a, m.begin() + b + 1);
    r.trough_ratio = trough / std::min(m[a], m[b]);
  }
  return r;
}

Outcome distribution_shapes() {
  constexpr double kTroughRatio = 0.5;
  const int n = 400;
  const SectorState s = ladder_state(n, 77, Parity::even);
  auto hist = [&](double alpha) {
    const auto ov = sudden_quench({n, alpha, 0.01}, s.parity, s.index);
    return le_distribution(le_time_series(ov, 5000.0, 200000), 50);
  };
  const Modes weak = modes_of(hist(0.1));
  const Modes crit = modes_of(hist(0.48));
  const bool bimodal = weak.peaks.size() >= 2 && weak.trough_ratio < kTroughRatio;
  const bool unimodal = crit.peaks.size() == 1;
  std::string d = fmt("alpha=0.1: %zu peaks", weak.peaks.size());
  for (auto p : weak.peaks) d += fmt(" @bin %zu", p);
  d += fmt(", trough/smaller peak = %.3f (need < %.2f) -> %s; alpha=0.48: %zu peak(s) -> %s", weak.trough_ratio,
           kTroughRatio, bimodal ? "bimodal" : "not bimodal", crit.peaks.size(), unimodal ? "unimodal" : "not unimodal");
  return {bimodal && unimodal, d};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"eigensolver oracle equivalence", oracle_equivalence},
      {"reference scaled energies at N=400, alpha=0.48", reference_energies},
      {"Loschmidt echo sum rules", echo_sum_rules},
      {"averaged echo argmin near alpha=0.48", averaged_echo_argmin},
      {"energy-resolved cusp at alpha=0.4", energy_resolved_cusp},
      {"work identities", work_identities},
      {"scaling exponents kappa1, kappa2, nu_e", scaling_exponents},
      {"DOS peak at E=0", dos_peak},
      {"participation ratio dip", participation_dip},
      {"LE distribution shapes", distribution_shapes},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failed += o.pass ? 0 : 1;
    std::printf("[%s] %2zu %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("acceptance: %zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed;
}
