#include "qext/cost.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "qext/majorization.hpp"
#include "qext/random.hpp"

namespace qext {

PureStated max_entangled(int r, int dim_a, int dim_b) {
  if (r < 1 || r > std::min(dim_a, dim_b))
    throw ArgumentError("max_entangled: r = " + std::to_string(r) + " must lie in [1, min(dim_a, dim_b)]");
  return pure_from_schmidt(SchmidtVectord::uniform(r), dim_a, dim_b);
}

int one_shot_r_min_search(const SchmidtVectord& v) {
  // uniform_n ≺ v whenever v has n entries, so the loop ends by r = size.
  for (int r = 1;; ++r)
    if (majorizes(SchmidtVectord::uniform(r), v)) return r;
}

int one_shot_r_min_formula(const SchmidtVectord& v) {
  const double slack = tol::kMajorization;
  int full = v.size();
  for (int k = 1; k <= v.size(); ++k) {
    if (v.partial_sum(k) + slack >= 1.0) {
      full = k;
      break;
    }
  }
  int r = full;
  for (int k = 1; k < full; ++k)
    r = std::max(r, static_cast<int>(std::ceil(double(k) / (v.partial_sum(k) + slack))));
  return r;
}

CostResult one_shot_cost(const SchmidtVectord& v) {
  const int search = one_shot_r_min_search(v);
  const int formula = one_shot_r_min_formula(v);
  if (search != formula) throw ValidationError("one-shot r_min search and closed form agree", double(search - formula));
  return CostResult{search, std::log2(double(search))};
}

CostResult one_shot_cost_pure(const PureStated& psi) { return one_shot_cost(schmidt_vector(psi)); }

double canonical_trace_distance(const SchmidtVectord& mu, const SchmidtVectord& nu) {
  const int n = std::max(mu.size(), nu.size());
  const RVectord a = mu.padded(n).entries(), b = nu.padded(n).entries();
  const double overlap = (a.array() * b.array()).sqrt().sum();
  return std::sqrt(std::max(0.0, 1.0 - overlap * overlap));
}

namespace {

SchmidtVectord normalized_candidate(RVectord v) {
  v = v.cwiseMax(0.0);
  v /= v.sum();
  return SchmidtVectord::from_unsorted(std::move(v));
}

std::vector<SchmidtVectord> smoothing_candidates(const SchmidtVectord& mu, int grid, std::uint64_t seed) {
  const int d = mu.size();
  const RVectord base = mu.entries();
  std::vector<SchmidtVectord> out;
  out.reserve(std::size_t(grid) + 1);
  out.push_back(mu);
  auto push = [&](RVectord v) {
    if (int(out.size()) < grid) out.push_back(normalized_candidate(std::move(v)));
  };

  // Tail truncations and mixtures toward each truncation.
  constexpr int kSteps = 32;
  for (int k = 1; k < d; ++k) {
    RVectord trunc = base;
    trunc.tail(d - k).setZero();
    if (trunc.sum() <= 0.0) continue;
    trunc /= trunc.sum();
    for (int s = 1; s <= kSteps; ++s) {
      const double t = double(s) / kSteps;
      push((1.0 - t) * base + t * trunc);
    }
  }
  // Mixtures toward the product vector, including the product vector itself.
  RVectord e1 = RVectord::Zero(d);
  e1[0] = 1.0;
  for (int s = 1; s <= kSteps; ++s) {
    const double t = double(s) / kSteps;
    push((1.0 - t) * base + t * e1);
  }
  // Axis moves: shift mass from entry j to entry i.
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      if (i == j) continue;
      for (int s = 1; s <= 8; ++s) {
        RVectord v = base;
        const double move = base[j] * double(s) / 8.0;
        v[j] -= move;
        v[i] += move;
        push(v);
      }
    }
  // Random mixtures with flat-Dirichlet directions.
  Rng rng(seed);
  std::exponential_distribution<double> expo(1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  while (int(out.size()) < grid) {
    RVectord dir(d);
    for (int i = 0; i < d; ++i) dir[i] = expo(rng);
    dir /= dir.sum();
    const double t = std::pow(unit(rng), 2.0);
    push((1.0 - t) * base + t * dir);
  }
  return out;
}

} // namespace

double smoothed_cost_pure_upper(const PureStated& psi, double eps, int grid, std::uint64_t seed) {
  if (!(eps > 0.0 && eps < 1.0)) throw ArgumentError("smoothed cost: eps must lie in (0, 1)");
  if (grid < 1) throw ArgumentError("smoothed cost: grid must be positive");
  const SchmidtVectord mu = schmidt_vector(psi);
  int best = std::numeric_limits<int>::max();
  for (const auto& c : smoothing_candidates(mu, grid, seed)) {
    if (canonical_trace_distance(mu, c) > eps) continue;
    best = std::min(best, one_shot_r_min_search(c));
  }
  return std::log2(double(best));
}

double binary_entropy(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

double eof_continuity_bound(double eps, int d) {
  if (!(eps >= 0.0 && eps <= 1.0)) throw ArgumentError("continuity bound: eps must lie in [0, 1]");
  if (d < 2) throw ArgumentError("continuity bound: d must be >= 2");
  const double delta = std::sqrt(eps * (2.0 - eps));
  return delta * std::log2(double(d)) + (1.0 + delta) * binary_entropy(delta / (1.0 + delta));
}

} // namespace qext
