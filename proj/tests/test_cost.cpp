#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "qext/cost.hpp"
#include "qext/majorization.hpp"
#include "qext/measures.hpp"
#include "qext/random.hpp"

using namespace qext;
using namespace qext::test;

namespace {

SchmidtVectord sv(std::initializer_list<double> x) {
  return SchmidtVectord::from_unsorted(RVectord::Map(x.begin(), Eigen::Index(x.size())));
}

// Binary entropy written out directly, independent of the library.
double h2(double p) { return p <= 0 || p >= 1 ? 0.0 : -p * std::log2(p) - (1 - p) * std::log2(1 - p); }

} // namespace

TEST_CASE("maximally entangled resource states") {
  CHECK(max_entangled(2, 2, 2).amplitudes().isApprox(bell().amplitudes()));
  CHECK(max_entangled(1, 3, 3).amplitudes().isApprox(PureStated::basis(3, 3, 0, 0).amplitudes()));
  CHECK(robustness_pure(schmidt_vector(max_entangled(3, 3, 3))) == doctest::Approx(2.0));
  CHECK_THROWS_AS(max_entangled(3, 2, 4), ArgumentError);
}

TEST_CASE("one-shot cost") {
  for (int r = 2; r <= 16; ++r) {
    const auto c = one_shot_cost_pure(max_entangled(r, r, r));
    CHECK(c.r_min == r);
    CHECK(c.log_cost == std::log2(double(r)));
  }
  CHECK(one_shot_cost(sv({0.6, 0.4})).r_min == 2);
  CHECK(one_shot_cost(sv({0.6, 0.4})).log_cost == 1.0);
  // Audit trace: r = 2 fails at k = 2 (1 > 0.95); r = 3 passes all partial sums.
  const SchmidtVectord v = sv({0.9, 0.05, 0.05});
  CHECK(v.partial_sum(2) < 1.0);
  CHECK_FALSE(majorizes(SchmidtVectord::uniform(2), v));
  CHECK(majorizes(SchmidtVectord::uniform(3), v));
  CHECK(one_shot_r_min_search(v) == 3);
  CHECK(one_shot_r_min_formula(v) == 3);
}

TEST_CASE("r_min formulas agree and are minimal") {
  Rng rng(10);
  for (int t = 0; t < 1000; ++t) {
    const int d = 1 + t % 6;
    const PureStated psi = random_pure<double>(d, d + t % 2, rng);
    const SchmidtVectord v = schmidt_vector(psi);
    const int r = one_shot_r_min_search(v);
    CHECK(r == one_shot_r_min_formula(v));
    CHECK(std::log2(double(r)) >= entropy_of_entanglement(v) - 1e-12);
    CHECK(nielsen_convertible(max_entangled(r, psi.dim_a(), psi.dim_b()), psi));
    if (r > 1) CHECK_FALSE(nielsen_convertible(max_entangled(r - 1, psi.dim_a(), psi.dim_b()), psi));
  }
}

TEST_CASE("smoothed cost upper bound") {
  const PureStated psi = random_pure<double>(3, 3, 4);
  const double exact = one_shot_cost_pure(psi).log_cost;
  CHECK(smoothed_cost_pure_upper(psi, 1e-9) == exact);
  CHECK(smoothed_cost_pure_upper(bell(), 0.3) <= 1.0);
  double prev = exact;
  for (double eps : {0.05, 0.1, 0.2, 0.4, 0.8}) {
    const double c = smoothed_cost_pure_upper(psi, eps);
    CHECK(c <= prev);
    prev = c;
  }
  // (1, 0) sits at canonical distance √(1 − 0.55) from (0.55, 0.45).
  const SchmidtVectord mu = sv({0.55, 0.45});
  const double dist = canonical_trace_distance(mu, sv({1.0}));
  CHECK(dist == doctest::Approx(std::sqrt(0.45)));
  const PureStated close = pure_from_schmidt(mu, 2, 2);
  CHECK(smoothed_cost_pure_upper(close, dist + 1e-6) == 0.0);
  CHECK(smoothed_cost_pure_upper(close, dist - 1e-3) == 1.0);
  CHECK_THROWS_AS(smoothed_cost_pure_upper(psi, 0.0), ArgumentError);
  CHECK_THROWS_AS(smoothed_cost_pure_upper(psi, 1.0), ArgumentError);
}

TEST_CASE("entanglement-of-formation continuity bound") {
  CHECK(eof_continuity_bound(0.0, 3) == 0.0);
  CHECK(eof_continuity_bound(1e-12, 2) < 1e-4);
  for (int d : {2, 3, 8}) CHECK(eof_continuity_bound(1.0, d) == doctest::Approx(std::log2(double(d)) + 2.0));
  const double delta = std::sqrt(0.02 * 1.98);
  CHECK(delta == doctest::Approx(0.19899).epsilon(1e-5));
  const double expected = delta + (1 + delta) * h2(delta / (1 + delta));
  CHECK(eof_continuity_bound(0.02, 2) == doctest::Approx(expected).epsilon(1e-14));
  CHECK(eof_continuity_bound(0.02, 2) == doctest::Approx(0.976430).epsilon(1e-6));
  CHECK_THROWS_AS(eof_continuity_bound(-0.1, 2), ArgumentError);
  CHECK_THROWS_AS(eof_continuity_bound(0.1, 1), ArgumentError);
}
