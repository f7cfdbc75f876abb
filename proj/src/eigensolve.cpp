#include "esqpt/eigensolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "esqpt/simd/kernels.hpp"

namespace esqpt {

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix densify(const TridiagonalBlock& block) {
  const std::size_t d = block.dim();
  DenseMatrix m(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    m(i, i) = block.diag[i];
    if (i + 1 < d) {
      m(i, i + 1) = block.offdiag[i];
      m(i + 1, i) = block.offdiag[i];
    }
  }
  return m;
}

namespace {

// Implicit QL on (d, e) where e[i] couples i and i+1 and e[n-1] = 0.
// When z is non-null its columns are rotated alongside.
void ql_implicit(std::vector<double>& d, std::vector<double>& e, DenseMatrix* z,
                 const EigenOptions& opts) {
  const std::size_t n = d.size();
  if (n <= 1) return;

  double norm = 0.0;
  for (std::size_t i = 0; i < n; ++i) norm = std::max(norm, std::abs(d[i]) + std::abs(e[i]));
  const double abs_floor = std::numeric_limits<double>::epsilon() * norm;
  const auto& K = simd::kernels();

  for (std::size_t l = 0; l < n; ++l) {
    int sweeps = 0;
    for (;;) {
      std::size_t m = l;
      for (; m + 1 < n; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= opts.relative_tolerance * dd || std::abs(e[m]) <= abs_floor) break;
      }
      if (m == l) break;
      if (++sweeps > opts.max_sweeps_per_eigenvalue)
        throw ConvergenceError("implicit QL: eigenvalue " + std::to_string(l) + " not converged after " +
                               std::to_string(opts.max_sweeps_per_eigenvalue) + " sweeps");

      double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
      double r = std::hypot(g, 1.0);
      g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
      double s = 1.0, c = 1.0, p = 0.0;
      bool underflow = false;
      for (std::size_t i = m; i-- > l;) {
        const double f = s * e[i];
        const double b = c * e[i];
        r = std::hypot(f, g);
        e[i + 1] = r;
        if (r == 0.0) {
          d[i + 1] -= p;
          e[m] = 0.0;
          underflow = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[i + 1] - p;
        r = (d[i] - g) * s + 2.0 * c * b;
        p = s * r;
        d[i + 1] = g + p;
        g = c * r - b;
        if (z != nullptr) {
          // column i+1 <- s col_i + c col_{i+1}; column i <- c col_i - s col_{i+1}
          K.rotate_pair(z->col(i).data(), z->col(i + 1).data(), z->rows(), c, s);
        }
      }
      if (underflow) continue;
      d[l] -= p;
      e[l] = g;
      e[m] = 0.0;
    }
  }
}

void load(const TridiagonalBlock& block, std::vector<double>& d, std::vector<double>& e) {
  const std::size_t n = block.dim();
  if (block.offdiag.size() + 1 != n && n != 0)
    throw std::invalid_argument("tridiagonal block: offdiag length must be dim - 1");
  d = block.diag;
  e.assign(n, 0.0);
  std::copy(block.offdiag.begin(), block.offdiag.end(), e.begin());
}

Spectrum sorted_spectrum(std::vector<double> values, const DenseMatrix& vectors, Parity parity,
                         double alpha) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  Spectrum s;
  s.parity = parity;
  s.alpha = alpha;
  s.energies.resize(n);
  s.vectors = DenseMatrix(vectors.rows(), n);
  for (std::size_t k = 0; k < n; ++k) {
    s.energies[k] = values[order[k]];
    const auto src = vectors.col(order[k]);
    std::copy(src.begin(), src.end(), s.vectors.col(k).begin());
  }
  return s;
}

}  // namespace

Spectrum eigh_tridiagonal(const TridiagonalBlock& block, const EigenOptions& opts) {
  std::vector<double> d, e;
  load(block, d, e);
  DenseMatrix z = DenseMatrix::identity(block.dim());
  ql_implicit(d, e, &z, opts);
  return fix_vector_gauge(sorted_spectrum(std::move(d), z, block.parity, block.alpha));
}

std::vector<double> eigvals_tridiagonal(const TridiagonalBlock& block, const EigenOptions& opts) {
  std::vector<double> d, e;
  load(block, d, e);
  ql_implicit(d, e, nullptr, opts);
  std::sort(d.begin(), d.end());
  return d;
}

Spectrum dense_jacobi_oracle(const DenseMatrix& matrix, Parity parity, double alpha) {
  const std::size_t n = matrix.rows();
  if (matrix.cols() != n) throw std::invalid_argument("dense_jacobi_oracle: matrix must be square");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(matrix(i, j) - matrix(j, i)) > 1e-12)
        throw std::invalid_argument("dense_jacobi_oracle: matrix is not symmetric");

  DenseMatrix a = matrix;
  DenseMatrix v = DenseMatrix::identity(n);
  double scale = 0.0;
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) scale += a(i, j) * a(i, j);
  scale = std::sqrt(scale);

  constexpr int kMaxSweeps = 100;
  bool converged = n <= 1;
  for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
    double off = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < j; ++i) off += a(i, j) * a(i, j);
    if (std::sqrt(off) <= 1e-17 * scale || off == 0.0) {
      converged = true;
      break;
    }
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        // A <- J^T A J with J the (p, q) rotation
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  if (!converged) {
    double off = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < j; ++i) off += a(i, j) * a(i, j);
    if (std::sqrt(off) > 1e-14 * scale)
      throw ConvergenceError("dense_jacobi_oracle: not converged after 100 sweeps");
  }

  std::vector<double> values(n);
  for (std::size_t i = 0; i < n; ++i) values[i] = a(i, i);
  return fix_vector_gauge(sorted_spectrum(std::move(values), v, parity, alpha));
}

Spectrum fix_vector_gauge(Spectrum spectrum) {
  for (std::size_t k = 0; k < spectrum.vectors.cols(); ++k) {
    auto col = spectrum.vectors.col(k);
    if (col.empty()) continue;
    std::size_t best = 0;
    for (std::size_t i = 1; i < col.size(); ++i)
      if (std::abs(col[i]) > std::abs(col[best])) best = i;
    if (col[best] < 0.0)
      for (double& x : col) x = -x;
  }
  return spectrum;
}

Spectrum sector_spectrum(int n_spins, double alpha, Parity parity) {
  return eigh_tridiagonal(build_block(n_spins, alpha, parity));
}

std::vector<LadderLevel> merged_ladder(int n_spins, double alpha) {
  const auto even = eigvals_tridiagonal(build_block(n_spins, alpha, Parity::even));
  const auto odd = eigvals_tridiagonal(build_block(n_spins, alpha, Parity::odd));
  std::vector<LadderLevel> ladder;
  ladder.reserve(even.size() + odd.size());
  for (std::size_t j = 0; j < even.size(); ++j) {
    ladder.push_back({even[j], Parity::even, j});
    if (j < odd.size()) ladder.push_back({odd[j], Parity::odd, j});
  }
  // Interleaved order is ascending up to the rounding of exponentially small
  // pair splittings; keep it (so labels stay put on ties) unless a genuine
  // inversion shows up.
  bool ordered = true;
  for (std::size_t m = 1; m < ladder.size() && ordered; ++m) {
    const double tol = 1e-12 * std::max(1.0, std::abs(ladder[m].energy));
    ordered = ladder[m - 1].energy <= ladder[m].energy + tol;
  }
  if (!ordered)
    std::stable_sort(ladder.begin(), ladder.end(),
                     [](const LadderLevel& a, const LadderLevel& b) { return a.energy < b.energy; });
  return ladder;
}

}  // namespace esqpt
