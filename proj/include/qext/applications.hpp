#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qext/ensemble.hpp"
#include "qext/roof.hpp"
#include "qext/state.hpp"

namespace qext {

/// Σ p_i R(ψ_i): the convexity bound on R(ρ) from one decomposition.
double robustness_upper_mixed(const Ensembled& ens);

struct SpanPoint {
  CVectord coefficients;
  int rank;
};

struct SpanRankResult {
  int min_rank;        // least Schmidt rank found in the span
  double margin;       // least generic_rank-th singular value seen on the mesh
  int generic_rank;    // largest Schmidt rank seen on the mesh
  int mesh_min_rank;   // least rank at the mesh points alone
  std::vector<SpanPoint> low_rank_points;  // exact superpositions with rank < generic_rank
};

/// Least Schmidt rank among normalized Σ c_i ψ_i, searched on a mesh of about `grid`
/// points. For two states the rank-dropping superpositions are also located exactly
/// as roots of det(M₁ + t M₂) on a compressed pencil.
SpanRankResult min_schmidt_rank_in_span(const std::vector<PureStated>& states, int grid);

struct SchmidtNumberCertificate {
  int schmidt_number;  // certified Sch(ρ)
  int generic_rank;
  int span_min_rank;
  /// Relative distance of ρ from the cone spanned by ψψ† with ψ in range(ρ) and
  /// Schmidt rank below `schmidt_number`; positive means no decomposition avoids
  /// a rank-`schmidt_number` member.
  double margin;
};

/// Schmidt number of a state whose range is span{ψ₁, ψ₂}.
SchmidtNumberCertificate certify_schmidt_number(const DensityMatrixd& rho, const PureStated& psi1,
                                                const PureStated& psi2, int grid);

struct SeppReport {
  double r_source;        // R(Ψ_k) = k − 1
  double r_target_upper;  // Σ p_i R(ψ_i)
  double r_target_max;    // max_i R(ψ_i)
  bool sepp_feasible;     // r_target_upper ≤ r_source
  int schmidt_source;
  int schmidt_target;
  bool schmidt_target_exact;  // false when only the member-rank upper bound is known
  double schmidt_margin;
  std::string verdict;
};

SeppReport sepp_feasible(int k, const Ensembled& ens, int grid = 1000);

/// The worked example: ψ = Ψ₃ and ρ = ¼φ₁φ₁† + ¾φ₂φ₂† on 4⊗4.
PureStated example_phi1();
PureStated example_phi2();
Ensembled example_ensemble();

enum class Party { A, B, C };

/// Pure or mixed state on 2 ⊗ 2 ⊗ d, layout row-major over (a, b, c).
class TripartiteState {
public:
  TripartiteState(int dim_c, CVectord amplitudes);
  TripartiteState(int dim_c, CMatrixd density);

  int dim_c() const noexcept { return dim_c_; }
  bool is_pure() const noexcept { return amplitudes_.has_value(); }
  const CVectord& amplitudes() const;
  const CMatrixd& density() const noexcept { return density_; }

  /// Two-party marginal after tracing out `traced`, ordered as in (A, B, C).
  DensityMatrixd marginal(Party traced) const;
  /// One-party reduced operator of `kept`.
  CMatrixd reduced(Party kept) const;

private:
  int dim_c_;
  std::optional<CVectord> amplitudes_;
  CMatrixd density_;
};

/// √(2(1 − Tr ρ_X²)) for the cut X | rest of a pure tripartite state.
double concurrence_bipartition(const TripartiteState& state, Party single = Party::A);

enum class MonogamyVerdict { Pass, Fail, Vacuous };
std::string to_string(MonogamyVerdict v);

struct MonogamyReport {
  double c_a_bc;
  double c_ab;
  double c_ac;
  bool c_ac_exact;      // Wootters value when d = 2, roof estimate otherwise
  bool c_ac_converged;
  double ckw_gap;       // C²_{A|BC} − C²_AB − C²_AC
  MonogamyVerdict verdict;
};

MonogamyReport monogamy_check(const TripartiteState& state, double tol_eq, double tol_zero,
                              const OptimizerConfig& cfg = {});

} // namespace qext
