#pragma once

#include <cstdint>
#include <random>

#include "qext/state.hpp"

namespace qext {

using Rng = std::mt19937_64;

/// Vector of i.i.d. standard complex Gaussians.
template <typename Real = double>
CVector<Real> complex_gaussian(Eigen::Index n, Rng& rng) {
  std::normal_distribution<Real> normal(Real(0), Real(1));
  CVector<Real> v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Real re = normal(rng);
    const Real im = normal(rng);
    v[i] = std::complex<Real>(re, im);
  }
  return v;
}

/// Haar-distributed rows × cols isometry (rows ≥ cols): QR of a Gaussian matrix with the R-phase fixed.
template <typename Real = double>
CMatrix<Real> random_isometry(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  if (cols > rows) throw ArgumentError("random_isometry needs rows >= cols");
  CMatrix<Real> g(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c) g.col(c) = complex_gaussian<Real>(rows, rng);
  Eigen::HouseholderQR<CMatrix<Real>> qr(g);
  CMatrix<Real> q = qr.householderQ() * CMatrix<Real>::Identity(rows, cols);
  const CMatrix<Real> r = qr.matrixQR().topRows(cols).template triangularView<Eigen::Upper>();
  for (Eigen::Index c = 0; c < cols; ++c) {
    const Real mag = std::abs(r(c, c));
    if (mag > Real(0)) q.col(c) *= r(c, c) / mag;
  }
  return q;
}

template <typename Real = double>
PureState<Real> random_pure(int dim_a, int dim_b, Rng& rng) {
  if (dim_a < 1 || dim_b < 1) throw ArgumentError("local dimensions must be positive");
  return PureState<Real>::normalized(dim_a, dim_b, complex_gaussian<Real>(Eigen::Index(dim_a) * dim_b, rng));
}

template <typename Real = double>
PureState<Real> random_pure(int dim_a, int dim_b, std::uint64_t seed) {
  Rng rng(seed);
  return random_pure<Real>(dim_a, dim_b, rng);
}

/// Tr_ancilla of a Haar pure state on (A⊗B) ⊗ C^rank; rank ≤ dim_a·dim_b.
template <typename Real = double>
DensityMatrix<Real> random_density(int dim_a, int dim_b, int rank, Rng& rng) {
  const int n = dim_a * dim_b;
  if (dim_a < 1 || dim_b < 1) throw ArgumentError("local dimensions must be positive");
  if (rank < 1 || rank > n) throw ArgumentError("random_density: rank out of range [1, dim_a*dim_b]");
  const CVector<Real> g = complex_gaussian<Real>(Eigen::Index(n) * rank, rng);
  const CMatrix<Real> m = Eigen::Map<const CMatrix<Real>>(g.data(), n, rank);
  return DensityMatrix<Real>::normalized(dim_a, dim_b, m * m.adjoint());
}

template <typename Real = double>
DensityMatrix<Real> random_density(int dim_a, int dim_b, int rank, std::uint64_t seed) {
  Rng rng(seed);
  return random_density<Real>(dim_a, dim_b, rank, rng);
}

/// Stateless 64-bit mixer used to derive independent child seeds.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

} // namespace qext
