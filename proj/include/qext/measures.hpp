#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "qext/schmidt_vector.hpp"

namespace qext {

// Spectrum kernels. Each takes a probability vector sorted nonincreasing
// (a Schmidt vector's entries) and never validates; the SchmidtVector
// overloads below are the checked entry points.
namespace spectral {

/// Σ_{i ≥ k−1} λ_i (0-based), the vector read as zero-padded to `dim`.
template <typename Derived>
typename Derived::Scalar e_k(const Eigen::MatrixBase<Derived>& v, int k) {
  using Real = typename Derived::Scalar;
  Real s(0);
  for (Eigen::Index i = k - 1; i < v.size(); ++i) s += v[i];
  return s;
}

template <typename Derived>
typename Derived::Scalar entropy(const Eigen::MatrixBase<Derived>& v) {
  using Real = typename Derived::Scalar;
  Real s(0);
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (v[i] > Real(0)) s -= v[i] * std::log2(v[i]);
  return s < Real(0) ? Real(0) : s;
}

template <typename Derived>
typename Derived::Scalar concurrence(const Eigen::MatrixBase<Derived>& v) {
  using Real = typename Derived::Scalar;
  const Real x = Real(2) * (Real(1) - v.squaredNorm());
  return x > Real(0) ? std::sqrt(x) : Real(0);
}

template <typename Derived>
typename Derived::Scalar geometric(const Eigen::MatrixBase<Derived>& v) {
  using Real = typename Derived::Scalar;
  const Real g = Real(1) - v.maxCoeff();
  return g > Real(0) ? g : Real(0);
}

template <typename Derived>
typename Derived::Scalar robustness(const Eigen::MatrixBase<Derived>& v) {
  using Real = typename Derived::Scalar;
  Real s(0);
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (v[i] > Real(0)) s += std::sqrt(v[i]);
  const Real r = s * s - Real(1);
  return r > Real(0) ? r : Real(0);
}

template <typename Derived>
int schmidt_rank(const Eigen::MatrixBase<Derived>& v, double cutoff = tol::kSchmidtCutoff) {
  int r = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (v[i] > cutoff) ++r;
  return r;
}

} // namespace spectral

/// E_k(v) for 1 ≤ k ≤ d, where d = max(len(v), dim) is the padded system dimension.
template <typename Real>
Real e_k(const SchmidtVector<Real>& v, int k, int dim = 0) {
  const int d = std::max(v.size(), dim);
  if (k < 1 || k > d) throw ArgumentError("e_k: k must lie in [1, d]");
  return spectral::e_k(v.entries(), k);
}

template <typename Real>
Real entropy_of_entanglement(const SchmidtVector<Real>& v) { return spectral::entropy(v.entries()); }

template <typename Real>
Real concurrence_pure(const SchmidtVector<Real>& v) { return spectral::concurrence(v.entries()); }

template <typename Real>
Real geometric_pure(const SchmidtVector<Real>& v) { return spectral::geometric(v.entries()); }

template <typename Real>
Real robustness_pure(const SchmidtVector<Real>& v) { return spectral::robustness(v.entries()); }

template <typename Real>
int schmidt_rank(const SchmidtVector<Real>& v) { return spectral::schmidt_rank(v.entries()); }

/// Which theorem hypotheses a measure is registered as satisfying.
struct MeasureFlags {
  bool concave_f = false;          // f concave on reduced states
  bool convex_on_spectra = false;  // f convex on nonincreasing spectra (block-diagonal bound)
  bool subadditive = false;        // E(ψ⊗φ) ≤ E(ψ) + E(φ)
  bool vanishes_on_product = true;
};

/// A named pure-state measure E(ψ) = f(μ↓(ψ)).
class PureMeasure {
public:
  using Kernel = std::function<double(const RVectord&)>;

  PureMeasure(std::string id, Kernel kernel, MeasureFlags flags)
      : id_(std::move(id)), kernel_(std::move(kernel)), flags_(flags) {}

  const std::string& id() const noexcept { return id_; }
  const MeasureFlags& flags() const noexcept { return flags_; }

  double evaluate(const SchmidtVectord& v) const { return kernel_(v.entries()); }
  /// Unchecked fast path: `sorted` must be a nonincreasing probability vector.
  double operator()(const RVectord& sorted) const { return kernel_(sorted); }

private:
  std::string id_;
  Kernel kernel_;
  MeasureFlags flags_;
};

/// Looks up `entropy`, `concurrence`, `geometric`, `robustness`, `schmidt_rank` or `e_k:<k>`.
/// Throws ArgumentError for anything else.
PureMeasure find_measure(const std::string& id);

PureMeasure make_e_k(int k);

/// The stable ids, with E_k listed as e_k:1 … e_k:max_k.
std::vector<std::string> measure_ids(int max_k = 4);

} // namespace qext
