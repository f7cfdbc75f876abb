#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "esqpt/model.hpp"

namespace esqpt {

// Column-major dense matrix; column j is contiguous.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  static DenseMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[j * rows_ + i]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[j * rows_ + i]; }

  std::span<double> col(std::size_t j) { return {data_.data() + j * rows_, rows_}; }
  std::span<const double> col(std::size_t j) const { return {data_.data() + j * rows_, rows_}; }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

DenseMatrix densify(const TridiagonalBlock& block);

class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Eigenpairs of one parity sector. energies ascend; vectors.col(k) is the
// eigenvector of energies[k] in the n_t basis, gauge-fixed by fix_vector_gauge.
struct Spectrum {
  std::vector<double> energies;
  DenseMatrix vectors;
  Parity parity = Parity::even;
  double alpha = 0.0;

  std::size_t dim() const { return energies.size(); }
  std::span<const double> vector(std::size_t k) const { return vectors.col(k); }
};

struct EigenOptions {
  double relative_tolerance = 1e-14;  // |e_i| <= tol (|d_i| + |d_{i+1}|) deflates
  int max_sweeps_per_eigenvalue = 50;
};

// Implicit-shift QL with eigenvector accumulation. Throws ConvergenceError
// when an eigenvalue fails to deflate within the sweep budget.
Spectrum eigh_tridiagonal(const TridiagonalBlock& block, const EigenOptions& opts = {});

// Eigenvalues only, ascending; O(d^2).
std::vector<double> eigvals_tridiagonal(const TridiagonalBlock& block, const EigenOptions& opts = {});

// Cyclic Jacobi rotations on a dense symmetric matrix. Independent of the QL
// path; used as the test oracle. Throws std::invalid_argument when the input
// is not symmetric to 1e-12 and ConvergenceError after 100 sweeps.
Spectrum dense_jacobi_oracle(const DenseMatrix& matrix, Parity parity = Parity::even,
                             double alpha = 0.0);

// Flip each column so that its largest-magnitude component is positive.
Spectrum fix_vector_gauge(Spectrum spectrum);

// Sector spectrum of H(alpha).
Spectrum sector_spectrum(int n_spins, double alpha, Parity parity);

// Merged both-parity ladder at one alpha (energies ascending, see ladder_state).
struct LadderLevel {
  double energy = 0.0;
  Parity parity = Parity::even;
  std::size_t sector_index = 0;
};
std::vector<LadderLevel> merged_ladder(int n_spins, double alpha);

}  // namespace esqpt
