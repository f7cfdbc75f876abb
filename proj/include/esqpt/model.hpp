#pragma once

// LMG Hamiltonian in the two-boson number basis |N, n_t>, split by parity.
//
//   H = alpha * n_t - Q^2 / (4N),   Q = t^dag s + s^dag t
//
// Q^2 couples n_t to n_t +- 2 only, so each parity sector of (-1)^{n_t} is a
// symmetric tridiagonal matrix. Basis states inside a sector are ordered by
// ascending n_t. Units: hbar = 1.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace esqpt {

enum class Parity { even, odd };

std::string_view to_string(Parity p);
Parity parse_parity(std::string_view s);

struct ModelParams {
  int n_spins = 0;
  double alpha = 0.0;
  double delta_alpha = 0.0;

  double final_alpha() const { return alpha + delta_alpha; }

  // Throws std::invalid_argument when N is odd or < 2, alpha < 0 or
  // alpha + delta_alpha < 0.
  void validate() const;
};

struct TridiagonalBlock {
  std::vector<double> diag;     // <N,n_t|H|N,n_t>
  std::vector<double> offdiag;  // <N,n_t|H|N,n_t+2>, length dim()-1
  Parity parity = Parity::even;
  double alpha = 0.0;
  int n_spins = 0;

  std::size_t dim() const { return diag.size(); }
};

// N/2 + 1 for the even sector, N/2 for the odd sector.
std::size_t block_dimension(int n_spins, Parity parity);

// Boson number n_t of the i-th basis state of a sector.
inline int boson_number(Parity parity, std::size_t i) {
  return 2 * static_cast<int>(i) + (parity == Parity::odd ? 1 : 0);
}

std::vector<double> boson_numbers(int n_spins, Parity parity);

TridiagonalBlock build_block(const ModelParams& params, double at_alpha, Parity parity);
TridiagonalBlock build_block(int n_spins, double at_alpha, Parity parity);

// y = H x using the stored diagonals only.
std::vector<double> apply_block(const TridiagonalBlock& block, std::span<const double> x);
void apply_block(const TridiagonalBlock& block, std::span<const double> x, std::span<double> y);

// The merged (both-parity) spectrum interleaves exactly: the j-th even level
// sits at ladder position 2j and the j-th odd level at 2j+1. A ladder level m
// therefore belongs to level pair m/2, and a sector state is selected by
// choosing the parity of that pair.
struct SectorState {
  Parity parity = Parity::even;
  std::size_t index = 0;
};

SectorState ladder_state(int n_spins, std::size_t level, Parity parity);
std::size_t ladder_position(Parity parity, std::size_t sector_index);

}  // namespace esqpt
