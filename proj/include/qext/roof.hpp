#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "qext/ensemble.hpp"
#include "qext/measures.hpp"
#include "qext/random.hpp"
#include "qext/state.hpp"

namespace qext {

/// Eigenpairs of ρ above the rank cutoff, eigenvalues nonincreasing.
struct Support {
  RVectord values;
  CMatrixd vectors;  // dim × rank
  int rank() const { return static_cast<int>(values.size()); }
};

Support support_of(const DensityMatrixd& rho, double cutoff = tol::kRankCutoff);

/// m × n matrix with orthonormal columns (m ≥ n). Row i of U selects ensemble
/// member i as Σ_j conj(U_ij) √q_j e_j over the eigenpairs (q_j, e_j) of ρ.
class DecompositionParam {
public:
  explicit DecompositionParam(CMatrixd columns);
  static DecompositionParam identity(int n);

  const CMatrixd& columns() const noexcept { return columns_; }
  int ensemble_size() const noexcept { return static_cast<int>(columns_.rows()); }
  int rank() const noexcept { return static_cast<int>(columns_.cols()); }

private:
  CMatrixd columns_;
};

Ensembled decompose(const DensityMatrixd& rho, const DecompositionParam& param);

/// Inverse of `decompose`: the isometry realizing `ens` as a decomposition of ρ.
/// Throws ValidationError when `ens` does not reconstruct ρ.
DecompositionParam param_from_ensemble(const DensityMatrixd& rho, const Ensembled& ens);

struct OptimizerConfig {
  int restarts = 8;
  int max_ensemble_size = 0;  // 0 selects rank(ρ)²
  int max_iterations = 400;   // compass sweeps per ensemble size
  double step_tolerance = 1e-8;
  std::uint64_t seed = 1;
};

struct EstimateResult {
  double value = 0.0;
  Ensembled best_ensemble;
  bool converged = false;
  long evaluations = 0;
  int best_restart = 0;
  std::uint64_t seed = 0;
};

/// m(Σ p_i μ↓(ψ_i)), the objective whose infimum over decompositions is Ē(ρ).
double extension_objective(const Ensembled& ens, const PureMeasure& m);
/// Σ p_i m(μ↓(ψ_i)), the convex-roof objective.
double roof_objective(const Ensembled& ens, const PureMeasure& m);

/// Upper bound on Ē(ρ): minimizes the extension objective over decompositions of
/// sizes rank … max_ensemble_size. Warm starts join as extra restarts.
EstimateResult extension_measure(const DensityMatrixd& rho, const PureMeasure& m, const OptimizerConfig& cfg,
                                 std::span<const Ensembled> warm_starts = {});

/// Upper bound on the convex roof E_f(ρ) over the same decomposition family.
EstimateResult convex_roof(const DensityMatrixd& rho, const PureMeasure& m, const OptimizerConfig& cfg,
                           std::span<const Ensembled> warm_starts = {});

/// Two-qubit concurrence, max(0, ν₁ − ν₂ − ν₃ − ν₄).
double wootters_concurrence(const DensityMatrixd& rho);

/// A decomposition of a two-qubit ρ in which every member has concurrence C(ρ).
Ensembled wootters_flat_ensemble(const DensityMatrixd& rho);

/// Kraus operators acting on one local factor.
class KrausChannel {
public:
  KrausChannel(std::vector<CMatrixd> operators, Side side);

  const std::vector<CMatrixd>& operators() const noexcept { return operators_; }
  Side side() const noexcept { return side_; }
  int local_dim() const { return static_cast<int>(operators_.front().cols()); }

  static KrausChannel identity(int dim, Side side);
  /// Projective measurement in the computational basis.
  static KrausChannel computational_measurement(int dim, Side side);
  /// Random `outcomes`-outcome measurement from a Haar isometry C^dim → C^dim ⊗ C^outcomes.
  static KrausChannel random_measurement(int dim, int outcomes, Side side, Rng& rng);

private:
  std::vector<CMatrixd> operators_;
  Side side_;
};

struct Branch {
  double probability;
  DensityMatrixd state;
};

/// Branches (I⊗K_j)ρ(I⊗K_j)†/q_j; branches with q_j < 1e-12 are dropped.
std::vector<Branch> apply_unilocal_channel(const DensityMatrixd& rho, const KrausChannel& ch);

using Estimator = std::function<double(const DensityMatrixd&)>;

/// Ē(ρ) − Σ q_k Ē(ρ_k) with Ē supplied by `estimate`.
double check_monotonicity_iii(const DensityMatrixd& rho, const Estimator& estimate, const KrausChannel& ch);
double check_monotonicity_iii(const DensityMatrixd& rho, const PureMeasure& m, const KrausChannel& ch,
                              const OptimizerConfig& cfg);

/// p₁Ē(σ₁) + p₂Ē(σ₂) − Ē(p₁σ₁ ⊕ p₂σ₂); σ₁ and σ₂ must have orthogonal supports.
double check_block_diagonal(const DensityMatrixd& sigma1, const DensityMatrixd& sigma2, double p1,
                            const Estimator& estimate);
double check_block_diagonal(const DensityMatrixd& sigma1, const DensityMatrixd& sigma2, double p1,
                            const PureMeasure& m, const OptimizerConfig& cfg);

/// 2·Ē(ρ) − Ē(ρ⊗ρ), restricted to rank(ρ) ≤ 2.
double check_subadditivity(const DensityMatrixd& rho, const Estimator& estimate);
double check_subadditivity(const DensityMatrixd& rho, const PureMeasure& m, const OptimizerConfig& cfg);

} // namespace qext
