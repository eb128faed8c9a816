#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "qext/applications.hpp"
#include "qext/cost.hpp"
#include "qext/random.hpp"

using namespace qext;
using namespace qext::test;

namespace {

TripartiteState three_qubit(std::initializer_list<std::pair<int, double>> entries) {
  CVectord v = CVectord::Zero(8);
  for (const auto& [i, x] : entries) v[i] = x;
  return TripartiteState(2, CVectord(v / v.norm()));
}

int rank_of(const CVectord& amplitudes, int da, int db) {
  Eigen::JacobiSVD<CMatrixd> svd(PureStated::normalized(da, db, amplitudes).coefficient_matrix());
  return int((svd.singularValues().array() > 1e-9).count());
}

} // namespace

TEST_CASE("robustness bounds of the mixed example") {
  const Ensembled ens = example_ensemble();
  const double r1 = 16.0 / 9, r2 = std::pow(0.75 + std::sqrt(46.0) / 8, 2) - 1.0;
  CHECK(std::abs(robustness_upper_mixed(ens) - (0.25 * r1 + 0.75 * r2)) < 1e-12);
  CHECK(robustness_upper_mixed(ens) == doctest::Approx(1.609147).epsilon(1e-6));
  const PureStated psi = random_pure<double>(3, 3, 2);
  CHECK(robustness_upper_mixed(Ensembled::single(psi)) == doctest::Approx(robustness_pure(schmidt_vector(psi))));
  const Ensembled products({{0.3, PureStated::basis(3, 3, 0, 1)}, {0.7, PureStated::basis(3, 3, 2, 2)}});
  CHECK(robustness_upper_mixed(products) == 0.0);
}

TEST_CASE("SEPP feasibility report") {
  const SeppReport r = sepp_feasible(3, example_ensemble());
  CHECK(r.r_source == 2.0);
  CHECK(std::abs(r.r_target_max - 16.0 / 9) < 1e-9);
  CHECK(r.sepp_feasible);
  CHECK(r.schmidt_source == 3);
  CHECK(r.schmidt_target == 4);
  CHECK(r.schmidt_target_exact);
  CHECK(r.schmidt_margin > 1e-3);

  const SeppReport bell_case = sepp_feasible(2, Ensembled::single(bell()));
  CHECK(bell_case.sepp_feasible);
  CHECK(bell_case.r_target_upper == doctest::Approx(bell_case.r_source));
  CHECK(bell_case.schmidt_source == bell_case.schmidt_target);

  const SeppReport up = sepp_feasible(2, Ensembled::single(max_entangled(3, 3, 3)));
  CHECK_FALSE(up.sepp_feasible);
  CHECK(up.r_target_upper == doctest::Approx(2.0));
  CHECK(up.r_source == 1.0);
}

TEST_CASE("Schmidt rank in a span") {
  CHECK(min_schmidt_rank_in_span({PureStated::basis(2, 2, 0, 0), PureStated::basis(2, 2, 1, 1)}, 400).min_rank == 1);
  CHECK(min_schmidt_rank_in_span({bell(), bell()}, 400).min_rank == 2);

  // The example's range contains exact lower-rank states on the real line b/a < 0.
  const PureStated p1 = example_phi1(), p2 = example_phi2();
  CHECK(rank_of(p1.amplitudes() - 4.0 / 3 * p2.amplitudes(), 4, 4) == 2);
  CHECK(rank_of(p1.amplitudes() - p2.amplitudes(), 4, 4) == 3);
  const auto span = min_schmidt_rank_in_span({p1, p2}, 1000);
  CHECK(span.generic_rank == 4);
  CHECK(span.min_rank == 2);
  CHECK(span.mesh_min_rank == 4);
  CHECK(span.margin > 1e-3);
  bool found = false;
  for (const auto& pt : span.low_rank_points) {
    const std::complex<double> ratio = pt.coefficients[1] / pt.coefficients[0];
    if (pt.rank == 2 && std::abs(ratio - (-4.0 / 3)) < 1e-6) found = true;
  }
  CHECK(found);
  CHECK_THROWS_AS(min_schmidt_rank_in_span({p1}, 10), ArgumentError);
}

TEST_CASE("Schmidt number certificate for the example") {
  const SchmidtNumberCertificate c =
      certify_schmidt_number(example_ensemble().density(), example_phi1(), example_phi2(), 1000);
  CHECK(c.schmidt_number == 4);
  CHECK(c.span_min_rank == 2);
  CHECK(c.margin > 0.5);
  // A mixture that includes the rank-2 point of the span has Schmidt number below 4.
  const PureStated low = PureStated::normalized(4, 4, example_phi1().amplitudes() - 4.0 / 3 * example_phi2().amplitudes());
  const CVectord other = example_phi1().amplitudes() - example_phi2().amplitudes();
  const PureStated mid = PureStated::normalized(4, 4, other);
  const Ensembled ens({{0.5, low}, {0.5, mid}});
  CHECK(certify_schmidt_number(ens.density(), example_phi1(), example_phi2(), 1000).schmidt_number < 4);
}

TEST_CASE("bipartition concurrence") {
  const double s = 1 / std::sqrt(2.0);
  CHECK(concurrence_bipartition(three_qubit({{0, s}, {7, s}})) == doctest::Approx(1.0));
  CHECK(concurrence_bipartition(three_qubit({{0, s}, {3, s}})) == doctest::Approx(0.0));
  CHECK(concurrence_bipartition(three_qubit({{1, 1}, {2, 1}, {4, 1}})) == doctest::Approx(2 * std::sqrt(2.0) / 3));
  CHECK_THROWS_AS(concurrence_bipartition(TripartiteState(2, CMatrixd(CMatrixd::Identity(8, 8) / 8.0))), ArgumentError);
}

TEST_CASE("monogamy verdicts on the analytic fixtures") {
  const double s = 1 / std::sqrt(2.0);
  const auto product = monogamy_check(three_qubit({{0, s}, {6, s}}), 1e-3, 5e-2);
  CHECK(product.verdict == MonogamyVerdict::Pass);
  CHECK(product.c_ac < 1e-12);
  const auto ghz = monogamy_check(three_qubit({{0, s}, {7, s}}), 1e-3, 5e-2);
  CHECK(ghz.verdict == MonogamyVerdict::Vacuous);
  CHECK(ghz.c_ab < 1e-12);
  const auto w = monogamy_check(three_qubit({{1, 1}, {2, 1}, {4, 1}}), 1e-3, 5e-2);
  CHECK(w.verdict == MonogamyVerdict::Vacuous);
  CHECK(w.c_ab == doctest::Approx(2.0 / 3));
  CHECK(w.c_ac == doctest::Approx(2.0 / 3));
  CHECK(w.ckw_gap == doctest::Approx(8.0 / 9 - 8.0 / 9).epsilon(1e-9));
  CHECK(to_string(MonogamyVerdict::Vacuous) == "VACUOUS");
}

TEST_CASE("monogamy on 2x2xd uses the estimator for d > 2") {
  // Bell on AB with a qutrit C in |2⟩: equality holds and C_AC vanishes.
  CVectord v = CVectord::Zero(12);
  v[0 * 3 + 2] = v[3 * 3 + 2] = 1 / std::sqrt(2.0);
  const auto r = monogamy_check(TripartiteState(3, v), 1e-3, 5e-2, OptimizerConfig{4, 0, 400, 1e-8, 1});
  CHECK_FALSE(r.c_ac_exact);
  CHECK(r.verdict == MonogamyVerdict::Pass);
  CHECK(r.c_ac < 1e-9);

  Rng rng(3);
  for (int t = 0; t < 100; ++t) {
    const auto m = monogamy_check(TripartiteState(2, random_pure<double>(2, 4, rng).amplitudes()), 1e-3, 5e-2);
    CHECK(m.verdict != MonogamyVerdict::Fail);
    CHECK(m.ckw_gap >= -1e-9);
  }
  CHECK_THROWS_AS(TripartiteState(9, CVectord(CVectord::Zero(36))), ArgumentError);
}
