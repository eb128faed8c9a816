#pragma once

#include <algorithm>

#include "qext/ensemble.hpp"
#include "qext/schmidt_vector.hpp"
#include "qext/state.hpp"

namespace qext {

/// x ≺ y: every leading partial sum of x is at most that of y (plus `slack`).
/// The shorter vector is zero-padded.
template <typename Real>
bool majorizes(const SchmidtVector<Real>& x, const SchmidtVector<Real>& y, Real slack = Real(tol::kMajorization)) {
  const int n = std::max(x.size(), y.size());
  Real sx(0), sy(0);
  for (int k = 0; k < n; ++k) {
    sx += k < x.size() ? x[k] : Real(0);
    sy += k < y.size() ? y[k] : Real(0);
    if (sx > sy + slack) return false;
  }
  return true;
}

/// Deterministic LOCC ψ → φ exists iff μ↓(ψ) ≺ μ↓(φ).
template <typename Real>
bool nielsen_convertible(const PureState<Real>& psi, const PureState<Real>& phi) {
  return majorizes(schmidt_vector(psi), schmidt_vector(phi));
}

/// Σ p_i μ↓(φ_i), zero-padded to the longest member. Convex combinations of
/// nonincreasing vectors stay nonincreasing, so no re-sort is needed.
template <typename Real>
SchmidtVector<Real> average_schmidt(const Ensemble<Real>& ens) {
  std::vector<SchmidtVector<Real>> parts;
  parts.reserve(ens.size());
  int len = 0;
  for (const auto& m : ens.members()) {
    parts.push_back(schmidt_vector(m.state));
    len = std::max(len, parts.back().size());
  }
  RVector<Real> avg = RVector<Real>::Zero(len);
  Real total(0);
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const Real w = ens.members()[i].weight;
    avg.head(parts[i].size()) += w * parts[i].entries();
    total += w;
  }
  avg /= total;
  return SchmidtVector<Real>::from_unsorted(std::move(avg));
}

/// ψ →_LOCC {p_i, φ_i} iff μ↓(ψ) ≺ Σ p_i μ↓(φ_i).
template <typename Real>
bool ensemble_convertible(const PureState<Real>& psi, const Ensemble<Real>& ens) {
  return majorizes(schmidt_vector(psi), average_schmidt(ens));
}

/// Canonical embedding Σ_i √v_i |ii⟩.
template <typename Real>
PureState<Real> pure_from_schmidt(const SchmidtVector<Real>& v, int dim_a, int dim_b) {
  const int d = std::min(dim_a, dim_b);
  int len = v.size();
  while (len > d && v[len - 1] == Real(0)) --len;
  if (len > d) throw ArgumentError("pure_from_schmidt: Schmidt vector longer than min(dim_a, dim_b)");
  CVector<Real> amp = CVector<Real>::Zero(Eigen::Index(dim_a) * dim_b);
  for (int i = 0; i < len; ++i) amp[Eigen::Index(i) * dim_b + i] = std::sqrt(v[i]);
  return PureState<Real>::normalized(dim_a, dim_b, std::move(amp));
}

} // namespace qext
