#include "esqpt/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "esqpt/simd/kernels.hpp"

namespace esqpt {

std::string_view to_string(Parity p) { return p == Parity::even ? "even" : "odd"; }

Parity parse_parity(std::string_view s) {
  if (s == "even") return Parity::even;
  if (s == "odd") return Parity::odd;
  throw std::invalid_argument("parity must be 'even' or 'odd', got '" + std::string(s) + "'");
}

namespace {

void check_spins(int n_spins) {
  if (n_spins < 2 || n_spins % 2 != 0)
    throw std::invalid_argument("n_spins must be an even integer >= 2, got " +
                                std::to_string(n_spins));
}

}  // namespace

void ModelParams::validate() const {
  check_spins(n_spins);
  if (!(alpha >= 0.0)) throw std::invalid_argument("alpha must be >= 0");
  if (!(final_alpha() >= 0.0)) throw std::invalid_argument("alpha + delta_alpha must be >= 0");
}

std::size_t block_dimension(int n_spins, Parity parity) {
  check_spins(n_spins);
  const auto half = static_cast<std::size_t>(n_spins / 2);
  return parity == Parity::even ? half + 1 : half;
}

std::vector<double> boson_numbers(int n_spins, Parity parity) {
  const std::size_t d = block_dimension(n_spins, parity);
  std::vector<double> nt(d);
  for (std::size_t i = 0; i < d; ++i) nt[i] = boson_number(parity, i);
  return nt;
}

TridiagonalBlock build_block(int n_spins, double at_alpha, Parity parity) {
  check_spins(n_spins);
  if (!(at_alpha >= 0.0)) throw std::invalid_argument("at_alpha must be >= 0");

  const std::size_t d = block_dimension(n_spins, parity);
  const double n = n_spins;
  const double pref = -1.0 / (4.0 * n);

  TridiagonalBlock b;
  b.parity = parity;
  b.alpha = at_alpha;
  b.n_spins = n_spins;
  b.diag.resize(d);
  b.offdiag.resize(d > 0 ? d - 1 : 0);
  for (std::size_t i = 0; i < d; ++i) {
    const double nt = boson_number(parity, i);
    const double f = pref * ((nt + 1.0) * (n - nt) + nt * (n - nt + 1.0));
    b.diag[i] = at_alpha * nt + f;
    if (i + 1 < d) {
      b.offdiag[i] = pref * std::sqrt((nt + 1.0) * (n - nt)) * std::sqrt((nt + 2.0) * (n - nt - 1.0));
    }
  }
  return b;
}

TridiagonalBlock build_block(const ModelParams& params, double at_alpha, Parity parity) {
  params.validate();
  return build_block(params.n_spins, at_alpha, parity);
}

void apply_block(const TridiagonalBlock& block, std::span<const double> x, std::span<double> y) {
  const std::size_t d = block.dim();
  if (x.size() != d || y.size() != d)
    throw std::invalid_argument("apply_block: vector length " + std::to_string(x.size()) +
                                " does not match block dimension " + std::to_string(d));
  simd::kernels().tridiag_apply(block.diag.data(), block.offdiag.data(), x.data(), y.data(), d);
}

std::vector<double> apply_block(const TridiagonalBlock& block, std::span<const double> x) {
  std::vector<double> y(x.size());
  apply_block(block, x, y);
  return y;
}

SectorState ladder_state(int n_spins, std::size_t level, Parity parity) {
  check_spins(n_spins);
  const auto ladder = static_cast<std::size_t>(n_spins) + 1;
  if (level >= ladder)
    throw std::out_of_range("ladder level " + std::to_string(level) + " outside [0, " +
                            std::to_string(ladder - 1) + "]");
  SectorState s{parity, level / 2};
  if (s.index >= block_dimension(n_spins, parity))
    throw std::out_of_range("ladder level " + std::to_string(level) + " has no " +
                            std::string(to_string(parity)) + " member");
  return s;
}

std::size_t ladder_position(Parity parity, std::size_t sector_index) {
  return 2 * sector_index + (parity == Parity::odd ? 1 : 0);
}

}  // namespace esqpt
