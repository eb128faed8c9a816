#pragma once

#include <vector>

#include "qext/state.hpp"

namespace qext {

template <typename Real = double>
struct EnsembleMember {
  Real weight;
  PureState<Real> state;
};

/// Finite list of (weight, pure state) with positive weights summing to one.
template <typename Real = double>
class Ensemble {
public:
  using Member = EnsembleMember<Real>;

  explicit Ensemble(std::vector<Member> members) : members_(std::move(members)) {
    if (members_.empty()) throw ValidationError("ensemble is empty");
    Real total(0);
    for (const auto& m : members_) {
      if (!(m.weight > Real(0))) throw ValidationError("ensemble weight positive", static_cast<double>(m.weight));
      if (m.state.dim_a() != members_.front().state.dim_a() || m.state.dim_b() != members_.front().state.dim_b())
        throw ValidationError("ensemble members share dimensions");
      total += m.weight;
    }
    const Real gap = std::abs(total - Real(1));
    if (gap > Real(tol::kProbabilitySum)) throw ValidationError("ensemble weights sum to 1", static_cast<double>(gap));
  }

  static Ensemble single(PureState<Real> psi) { return Ensemble({Member{Real(1), std::move(psi)}}); }

  const std::vector<Member>& members() const noexcept { return members_; }
  std::size_t size() const noexcept { return members_.size(); }
  int dim_a() const { return members_.front().state.dim_a(); }
  int dim_b() const { return members_.front().state.dim_b(); }

  /// Σ p_i |ψ_i⟩⟨ψ_i|.
  DensityMatrix<Real> density() const {
    const Eigen::Index n = members_.front().state.dim();
    CMatrix<Real> rho = CMatrix<Real>::Zero(n, n);
    for (const auto& m : members_) rho += m.weight * (m.state.amplitudes() * m.state.amplitudes().adjoint());
    return DensityMatrix<Real>::normalized(dim_a(), dim_b(), std::move(rho));
  }

private:
  std::vector<Member> members_;
};

using Ensembled = Ensemble<double>;

} // namespace qext
