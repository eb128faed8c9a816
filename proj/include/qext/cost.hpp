#pragma once

#include <cstdint>

#include "qext/schmidt_vector.hpp"
#include "qext/state.hpp"

namespace qext {

struct CostResult {
  int r_min;
  double log_cost;  // log₂ r_min
};

/// (1/√r) Σ_{i<r} |ii⟩ in dim_a ⊗ dim_b.
PureStated max_entangled(int r, int dim_a, int dim_b);

/// Least r with uniform_r ≺ v, by trying r = 1, 2, … against `majorizes`.
int one_shot_r_min_search(const SchmidtVectord& v);

/// The same r as a closed form: max(K, max_{k<K} ⌈k / S_k⌉), S_k the leading
/// partial sums of v and K the first index with S_K = 1.
int one_shot_r_min_formula(const SchmidtVectord& v);

/// One-shot cost; throws ValidationError if the two r_min computations disagree.
CostResult one_shot_cost_pure(const PureStated& psi);
CostResult one_shot_cost(const SchmidtVectord& v);

/// ½‖ψψ† − φφ†‖₁ for the canonical states Σ√μ_i|ii⟩ and Σ√ν_i|ii⟩.
double canonical_trace_distance(const SchmidtVectord& mu, const SchmidtVectord& nu);

/// Upper bound on the smoothed one-shot cost: the least log₂ r_min over a fixed set of
/// `grid` candidate Schmidt vectors whose canonical states lie within trace distance
/// eps of ψ. The candidate set does not depend on eps.
double smoothed_cost_pure_upper(const PureStated& psi, double eps, int grid = 2000, std::uint64_t seed = 1);

/// δ log₂ d + (1 + δ) h(δ / (1 + δ)) with δ = √(ε(2 − ε)); eps in [0, 1], d ≥ 2.
double eof_continuity_bound(double eps, int d);

/// Binary entropy in bits.
double binary_entropy(double p);

} // namespace qext
