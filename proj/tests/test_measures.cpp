#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "qext/majorization.hpp"
#include "qext/measures.hpp"
#include "qext/random.hpp"

using namespace qext;
using namespace qext::test;

namespace {

SchmidtVectord sv(std::initializer_list<double> x) {
  return SchmidtVectord::from_unsorted(RVectord::Map(x.begin(), Eigen::Index(x.size())));
}

const SchmidtVectord kPhi1 = SchmidtVectord::from_unsorted((RVectord(4) << 25, 9, 1, 1).finished() / 36.0);
const SchmidtVectord kPhi2 = SchmidtVectord::from_unsorted((RVectord(4) << 46, 16, 1, 1).finished() / 64.0);

} // namespace

TEST_CASE("E_k tail sums") {
  const SchmidtVectord b = sv({0.5, 0.5});
  CHECK(e_k(b, 2) == doctest::Approx(0.5));
  CHECK(e_k(kPhi1, 1) == doctest::Approx(1.0));
  CHECK(e_k(kPhi1, 3) == doctest::Approx(2.0 / 36));
  CHECK(e_k(sv({1.0}), 2, 4) == 0.0);
  CHECK_THROWS_AS(e_k(b, 0), ArgumentError);
  CHECK_THROWS_AS(e_k(b, 5, 4), ArgumentError);
}

TEST_CASE("entropy, concurrence and geometric measure") {
  CHECK(entropy_of_entanglement(sv({0.5, 0.5})) == doctest::Approx(1.0));
  CHECK(entropy_of_entanglement(sv({1.0})) == 0.0);
  // h(1/4) = 2 - (3/4) log2 3
  CHECK(entropy_of_entanglement(sv({0.75, 0.25})) == doctest::Approx(2.0 - 0.75 * std::log2(3.0)).epsilon(1e-14));
  CHECK(concurrence_pure(sv({0.5, 0.5})) == doctest::Approx(1.0));
  CHECK(concurrence_pure(sv({1.0})) == 0.0);
  CHECK(concurrence_pure(sv({0.75, 0.25})) == doctest::Approx(std::sqrt(0.75)).epsilon(1e-14));
  CHECK(geometric_pure(sv({0.5, 0.5})) == doctest::Approx(0.5));
  CHECK(geometric_pure(sv({1.0})) == 0.0);
  CHECK(geometric_pure(kPhi1) == doctest::Approx(11.0 / 36));
}

TEST_CASE("robustness of the mixed-example states") {
  CHECK(robustness_pure(SchmidtVectord::uniform(3)) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(std::abs(robustness_pure(kPhi1) - 16.0 / 9) < 1e-12);
  // (1/2 + 1/8 + 1/8 + √46/8)² · (64/64) − 1, evaluated independently
  const double r2 = std::pow(0.5 + 0.125 + 0.125 + std::sqrt(46.0) / 8, 2) - 1.0;
  CHECK(std::abs(robustness_pure(kPhi2) - r2) < 1e-12);
  CHECK(std::abs(r2 - 1.5529) < 1e-4);
}

TEST_CASE("Schmidt rank") {
  CHECK(schmidt_rank(sv({0.5, 0.5})) == 2);
  CHECK(schmidt_rank(sv({1.0})) == 1);
  CHECK(schmidt_rank(kPhi2) == 4);
}

TEST_CASE("registry ids, flags and separable values") {
  for (const auto& id : {"e_k:2", "entropy", "concurrence", "geometric", "robustness", "schmidt_rank"})
    CHECK(find_measure(id).id() == id);
  CHECK_THROWS_AS(find_measure("e_k:x"), ArgumentError);
  CHECK_THROWS_AS(find_measure("negativity"), ArgumentError);
  CHECK(find_measure("entropy").flags().subadditive);
  CHECK(find_measure("concurrence").flags().concave_f);
  CHECK_FALSE(find_measure("robustness").flags().concave_f);
  const SchmidtVectord product = sv({1.0});
  for (const auto& id : measure_ids(4)) {
    const PureMeasure m = find_measure(id);
    const double expected = m.flags().vanishes_on_product ? 0.0 : 1.0;
    CHECK_MESSAGE(m.evaluate(product) == expected, id);
  }
  CHECK_FALSE(find_measure("e_k:1").flags().vanishes_on_product);
}

TEST_CASE("Schur concavity on T-transforms") {
  Rng rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const auto& id : measure_ids(4)) {
    if (id == "schmidt_rank") continue;
    const PureMeasure m = find_measure(id);
    for (int t = 0; t < 300; ++t) {
      const SchmidtVectord y = schmidt_vector(random_pure<double>(4, 4, rng));
      // Averaging two entries (a T-transform) yields x ≺ y.
      RVectord x = y.entries();
      const int i = t % 4, j = (t + 1 + t / 4) % 4;
      const double s = u(rng), xi = x[i], xj = x[j];
      x[i] = s * xi + (1 - s) * xj;
      x[j] = (1 - s) * xi + s * xj;
      const SchmidtVectord xv = SchmidtVectord::from_unsorted(x);
      REQUIRE(majorizes(xv, y));
      CHECK_MESSAGE(m.evaluate(xv) >= m.evaluate(y) - 1e-12, id);
    }
  }
}

TEST_CASE("local-unitary invariance and uniform maximality") {
  Rng rng(4);
  const PureStated psi = random_pure<double>(3, 3, rng);
  const CMatrixd u = random_isometry<double>(3, 3, rng), v = random_isometry<double>(3, 3, rng);
  const CMatrixd c = u * psi.coefficient_matrix() * v.transpose();
  CVectord amp(9);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) amp[i * 3 + j] = c(i, j);
  const PureStated phi(3, 3, amp);
  for (const auto& id : measure_ids(3)) {
    const PureMeasure m = find_measure(id);
    CHECK(std::abs(m.evaluate(schmidt_vector(psi)) - m.evaluate(schmidt_vector(phi))) < 1e-12);
  }
  for (int t = 0; t < 100; ++t) {
    const SchmidtVectord w = schmidt_vector(random_pure<double>(4, 4, rng));
    CHECK(concurrence_pure(w) <= concurrence_pure(SchmidtVectord::uniform(4)) + 1e-12);
    CHECK(entropy_of_entanglement(w) <= 2.0 + 1e-12);
  }
}
