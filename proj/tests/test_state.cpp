#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include <unsupported/Eigen/KroneckerProduct>

#include "qext/random.hpp"

using namespace qext;
using namespace qext::test;

TEST_CASE("Schmidt decomposition of small examples") {
  const auto b = schmidt_decompose(bell());
  CHECK(b.rank == 2);
  CHECK(b.coefficients[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(b.coefficients[1] == doctest::Approx(0.5).epsilon(1e-12));

  const auto p = schmidt_decompose(PureStated::basis(2, 2, 0, 1));
  CHECK(p.rank == 1);
  CHECK(p.coefficients[0] == doctest::Approx(1.0));

  const PureStated phi1 = pure(4, 4, {{0, 0.5}, {5, 1.0 / 6}, {10, 1.0 / 6}, {15, 5.0 / 6}});
  const auto d = schmidt_decompose(phi1);
  REQUIRE(d.rank == 4);
  const double expected[] = {25.0 / 36, 9.0 / 36, 1.0 / 36, 1.0 / 36};
  for (int i = 0; i < 4; ++i) CHECK(std::abs(d.coefficients[i] - expected[i]) < 1e-12);
  CHECK((reconstruct(d) - phi1.amplitudes()).norm() < 1e-12);
}

TEST_CASE("reconstruction and reduced-spectrum symmetry on random states") {
  Rng rng(11);
  for (int t = 0; t < 100; ++t) {
    const int da = 1 + t % 4, db = 1 + (t / 4) % 4;
    const PureStated psi = random_pure<double>(da, db, rng);
    CHECK((reconstruct(schmidt_decompose(psi)) - psi.amplitudes()).norm() < 1e-9);
    const auto rho = psi.projector();
    Eigen::SelfAdjointEigenSolver<CMatrixd> a(partial_trace(rho, Side::A)), b(partial_trace(rho, Side::B));
    const RVectord ea = a.eigenvalues().reverse(), eb = b.eigenvalues().reverse();
    const Eigen::Index m = std::min(ea.size(), eb.size());
    CHECK((ea.head(m) - eb.head(m)).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("partial trace") {
  CHECK(max_abs(partial_trace(bell().projector(), Side::A) - CMatrixd::Identity(2, 2) / 2.0) < 1e-15);

  Rng rng(3);
  const auto ra = random_density<double>(2, 1, 2, rng), sb = random_density<double>(3, 1, 3, rng);
  const DensityMatrixd prod(2, 3, Eigen::kroneckerProduct(ra.matrix(), sb.matrix()));
  CHECK(max_abs(partial_trace(prod, Side::A) - ra.matrix()) < 1e-14);
  CHECK(max_abs(partial_trace(prod, Side::B) - sb.matrix()) < 1e-14);

  const PureStated phi1 = pure(4, 4, {{0, 0.5}, {5, 1.0 / 6}, {10, 1.0 / 6}, {15, 5.0 / 6}});
  RVectord diag(4);
  diag << 0.25, 1.0 / 36, 1.0 / 36, 25.0 / 36;
  CHECK(max_abs(partial_trace(phi1.projector(), Side::A) - CMatrixd(diag.cast<std::complex<double>>().asDiagonal())) <
        1e-14);
}

TEST_CASE("tensor products use the (AA'|BB') layout") {
  const SchmidtVectord v = schmidt_vector(tensor_product(bell(), bell()));
  REQUIRE(v.size() == 4);
  for (int i = 0; i < 4; ++i) CHECK(std::abs(v[i] - 0.25) < 1e-12);

  const auto p = tensor_product(PureStated::basis(2, 2, 0, 0).projector(), PureStated::basis(2, 2, 1, 0).projector());
  CHECK(p.purity() == doctest::Approx(1.0));
  CHECK(p.dim_a() == 4);
  CHECK(p.dim_b() == 4);

  const auto r = random_density<double>(2, 2, 2, 5);
  CHECK(tensor_product(r, r).rank() == 4);

  // μ(ψ⊗φ) is the sorted outer product of μ(ψ) and μ(φ).
  Rng rng(8);
  const PureStated a = random_pure<double>(2, 3, rng), b = random_pure<double>(3, 2, rng);
  const SchmidtVectord x = schmidt_vector(a), y = schmidt_vector(b), z = schmidt_vector(tensor_product(a, b));
  std::vector<double> outer;
  for (int i = 0; i < x.size(); ++i)
    for (int j = 0; j < y.size(); ++j) outer.push_back(x[i] * y[j]);
  std::sort(outer.rbegin(), outer.rend());
  for (std::size_t i = 0; i < outer.size(); ++i) CHECK(std::abs(outer[i] - z[int(i)]) < 1e-10);
}

TEST_CASE("trace distance") {
  const auto rho = random_density<double>(2, 3, 4, 9);
  CHECK(trace_distance(rho, rho) == doctest::Approx(0.0));
  CHECK(trace_distance(PureStated::basis(2, 2, 0, 0).projector(), PureStated::basis(2, 2, 1, 1).projector()) ==
        doctest::Approx(1.0));
  const auto zero = PureStated::basis(2, 1, 0, 0).projector();
  const auto half = mix(0.5, zero, PureStated::basis(2, 1, 1, 0).projector());
  CHECK(trace_distance(half, zero) == doctest::Approx(0.5));

  Rng rng(12);
  for (int t = 0; t < 50; ++t) {
    const auto a = random_density<double>(2, 2, 1 + t % 4, rng), b = random_density<double>(2, 2, 2, rng),
               c = random_density<double>(2, 2, 3, rng);
    CHECK(trace_distance(a, c) <= trace_distance(a, b) + trace_distance(b, c) + 1e-9);
  }
}

TEST_CASE("random states are normalized and reproducible") {
  const auto r1 = random_density<double>(2, 2, 1, 4);
  CHECK(std::abs(r1.purity() - 1.0) < 1e-10);
  const auto psi = random_pure<double>(2, 2, 4);
  CHECK(std::abs(psi.amplitudes().norm() - 1.0) < 1e-12);
  CHECK(random_pure<double>(3, 2, 42).amplitudes() == random_pure<double>(3, 2, 42).amplitudes());
  CHECK(random_density<double>(3, 2, 3, 42).matrix() == random_density<double>(3, 2, 3, 42).matrix());
  CHECK_THROWS_AS(random_density<double>(2, 2, 5, 1), ArgumentError);
}

TEST_CASE("validation names the invariant and its magnitude") {
  CVectord v(4);
  v << 1.0, 0.0, 0.0, 0.1;
  try {
    PureStated(2, 2, v);
    FAIL("expected a validation error");
  } catch (const ValidationError& e) {
    CHECK(e.invariant() == "state normalization");
    CHECK(e.magnitude() == doctest::Approx(std::sqrt(1.01) - 1.0));
  }
  CMatrixd m = CMatrixd::Zero(4, 4);
  m(0, 0) = 1.2;
  m(1, 1) = -0.2;
  CHECK_THROWS_WITH_AS(DensityMatrixd(2, 2, m), doctest::Contains("positive semidefiniteness"), ValidationError);
  m(1, 1) = 0.0;
  CHECK_THROWS_WITH_AS(DensityMatrixd(2, 2, m), doctest::Contains("unit trace"), ValidationError);
  CMatrixd h = CMatrixd::Identity(4, 4) / 4.0;
  h(0, 1) = 0.1;
  CHECK_THROWS_WITH_AS(DensityMatrixd(2, 2, h), doctest::Contains("Hermiticity"), ValidationError);
  CHECK_THROWS_AS(PureStated(2, 3, CVectord::Zero(4)), ValidationError);
}
