// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "qext/applications.hpp"
#include "qext/cost.hpp"
#include "qext/majorization.hpp"
#include "qext/measures.hpp"
#include "qext/roof.hpp"

using namespace qext;

namespace {

struct Outcome {
  bool passed;
  std::string detail;
};

struct Criterion {
  int id;
  std::string title;
  double time_limit;  // seconds, 0 for none
  std::function<Outcome()> body;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double geometric_oracle(double c) { return 0.5 * (1.0 - std::sqrt(std::max(0.0, 1.0 - c * c))); }

std::vector<DensityMatrixd> two_qubit_suite() {
  std::vector<DensityMatrixd> states;
  for (int i = 0; i < 50; ++i) states.push_back(random_density<double>(2, 2, 2 + i % 3, derive_seed(2024, i)));
  return states;
}

const OptimizerConfig kSuiteBudget{40, 16, 400, 1e-8, 1};

// Estimates shared by criteria 2-4.
struct SuiteEstimates {
  std::vector<double> wootters, ext_c, roof_c, ext_g, roof_g;
};

const SuiteEstimates& suite_estimates() {
  static const SuiteEstimates est = [] {
    SuiteEstimates e;
    const PureMeasure conc = find_measure("concurrence"), geo = find_measure("geometric");
    for (const auto& rho : two_qubit_suite()) {
      e.wootters.push_back(wootters_concurrence(rho));
      const auto xc = extension_measure(rho, conc, kSuiteBudget);
      e.ext_c.push_back(xc.value);
      e.roof_c.push_back(convex_roof(rho, conc, kSuiteBudget, std::span<const Ensembled>(&xc.best_ensemble, 1)).value);
      const auto xg = extension_measure(rho, geo, kSuiteBudget);
      e.ext_g.push_back(xg.value);
      e.roof_g.push_back(convex_roof(rho, geo, kSuiteBudget, std::span<const Ensembled>(&xg.best_ensemble, 1)).value);
    }
    return e;
  }();
  return est;
}

Outcome worked_example() {
  const SchmidtVectord psi = schmidt_vector(max_entangled(3, 4, 4));
  const double r_psi = robustness_pure(psi), r1 = robustness_pure(schmidt_vector(example_phi1())),
               r2 = robustness_pure(schmidt_vector(example_phi2()));
  const SeppReport rep = sepp_feasible(3, example_ensemble(), 1000);
  const SpanRankResult span = min_schmidt_rank_in_span({example_phi1(), example_phi2()}, 1000);
  const bool ok = std::abs(r_psi - 2.0) < 1e-12 && std::abs(r1 - 16.0 / 9) < 1e-9 && std::abs(r2 - 1.5529) < 1e-3 &&
                  rep.sepp_feasible && rep.schmidt_source == 3 && rep.schmidt_target == 4 && span.margin > 1e-3;
  return {ok, fmt("R(psi)=%.12g R(phi1)=%.12g R(phi2)=%.6g feasible=%d Sch %d->%d; mesh margin %.3g, "
                  "cone certificate margin %.3g (exact span minimum rank %d at isolated points)",
                  r_psi, r1, r2, int(rep.sepp_feasible), rep.schmidt_source, rep.schmidt_target, span.margin,
                  rep.schmidt_margin, span.min_rank)};
}

Outcome concurrence_equality() {
  const auto& e = suite_estimates();
  double lo = 1e9, hi = -1e9;
  for (std::size_t i = 0; i < e.ext_c.size(); ++i) {
    lo = std::min(lo, e.ext_c[i] - e.wootters[i]);
    hi = std::max(hi, e.ext_c[i] - e.wootters[i]);
  }
  return {lo >= -1e-6 && hi <= 2e-2, fmt("extension - Wootters in [%.3g, %.3g], required [-1e-6, 2e-2]", lo, hi)};
}

Outcome geometric_equality() {
  const auto& e = suite_estimates();
  double oracle = 0, roof_gap = 0;
  for (std::size_t i = 0; i < e.ext_g.size(); ++i) {
    oracle = std::max(oracle, std::abs(e.ext_g[i] - geometric_oracle(e.wootters[i])));
    roof_gap = std::max(roof_gap, std::abs(e.roof_g[i] - e.ext_g[i]));
  }
  return {oracle <= 2e-2 && roof_gap <= 3e-2,
          fmt("max |extension - oracle| = %.3g (<= 2e-2), max |roof - extension| = %.3g (<= 3e-2); "
              "estimates computed with criterion 2",
              oracle, roof_gap)};
}

Outcome ordering() {
  const auto& e = suite_estimates();
  double worst = 1e9;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < e.ext_c.size(); ++i) {
    worst = std::min({worst, e.ext_c[i] - e.roof_c[i], e.ext_g[i] - e.roof_g[i]});
    pairs += 2;
  }
  return {worst >= -1e-6, fmt("min extension - roof = %.3g over %zu pairs (>= -1e-6)", worst, pairs)};
}

Outcome majorization_oracle() {
  Rng rng(505);
  std::uniform_int_distribution<int> len(1, 8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto draw = [&] {
    std::vector<double> p(static_cast<std::size_t>(len(rng)));
    for (auto& x : p) x = std::pow(u(rng), 3);
    const double s = std::accumulate(p.begin(), p.end(), 0.0);
    for (auto& x : p) x = s > 0 ? x / s : 1.0 / double(p.size());
    return p;
  };
  auto brute = [](std::vector<double> x, std::vector<double> y) {
    std::sort(x.rbegin(), x.rend());
    std::sort(y.rbegin(), y.rend());
    const std::size_t n = std::max(x.size(), y.size());
    x.resize(n, 0.0);
    y.resize(n, 0.0);
    double a = 0, b = 0;
    for (std::size_t k = 0; k < n; ++k)
      if ((a += x[k]) > (b += y[k]) + 1e-9) return false;
    return true;
  };
  int disagree = 0, positives = 0;
  for (int t = 0; t < 1000; ++t) {
    auto x = draw(), y = draw();
    // Every fourth pair is built comparable: y spreads to x by averaging.
    if (t % 4 == 0) {
      x = y;
      const double m = std::accumulate(x.begin(), x.end(), 0.0) / double(x.size());
      for (auto& v : x) v = 0.5 * (v + m);
    }
    const auto sx = SchmidtVectord::from_unsorted(RVectord::Map(x.data(), Eigen::Index(x.size())));
    const auto sy = SchmidtVectord::from_unsorted(RVectord::Map(y.data(), Eigen::Index(y.size())));
    const bool b = brute(x, y);
    positives += b;
    if (majorizes(sx, sy) != b) ++disagree;
  }
  return {disagree == 0, fmt("%d disagreements over 1000 pairs (%d majorized)", disagree, positives)};
}

Outcome one_shot() {
  int bad_self = 0, bad_formula = 0;
  for (int r = 2; r <= 16; ++r) {
    const CostResult c = one_shot_cost_pure(max_entangled(r, r, r));
    if (c.r_min != r || c.log_cost != std::log2(double(r))) ++bad_self;
  }
  Rng rng(606);
  for (int t = 0; t < 1000; ++t) {
    const SchmidtVectord v = schmidt_vector(random_pure<double>(1 + t % 7, 1 + t % 7, rng));
    if (one_shot_r_min_search(v) != one_shot_r_min_formula(v)) ++bad_formula;
  }
  const SchmidtVectord lam((RVectord(3) << 0.9, 0.05, 0.05).finished());
  const int r = one_shot_r_min_search(lam), rf = one_shot_r_min_formula(lam);
  return {bad_self == 0 && bad_formula == 0 && r == 3 && rf == 3,
          fmt("self-cost mismatches %d, formula disagreements %d/1000, r_min(0.9,0.05,0.05) = %d (closed form %d)",
              bad_self, bad_formula, r, rf)};
}

Outcome subadditivity() {
  const PureMeasure ent = find_measure("entropy");
  const OptimizerConfig cfg{4, 0, 400, 1e-8, 1};
  double worst = 1e9;
  for (int i = 0; i < 10; ++i)
    worst = std::min(worst, check_subadditivity(random_density<double>(2, 2, 2, derive_seed(707, i)), ent, cfg));
  return {worst >= -5e-2, fmt("min 2E(rho) - E(rho x rho) = %.3g (>= -5e-2)", worst)};
}

Outcome monotonicity_iii() {
  const Estimator exact = [](const DensityMatrixd& r) { return wootters_concurrence(r); };
  Rng rng(808);
  double worst = 1e9;
  for (int s = 0; s < 20; ++s) {
    const DensityMatrixd rho = random_density<double>(2, 2, 1 + s % 4, rng);
    for (int c = 0; c < 20; ++c) {
      const KrausChannel ch = KrausChannel::random_measurement(2, 2 + c % 3, c % 2 ? Side::A : Side::B, rng);
      worst = std::min(worst, check_monotonicity_iii(rho, exact, ch));
    }
  }
  return {worst >= -1e-9, fmt("min C(rho) - sum q_k C(rho_k) = %.3g over 400 pairs (>= -1e-9)", worst)};
}

DensityMatrixd corner(const DensityMatrixd& r, int offset) {
  CMatrixd big = CMatrixd::Zero(16, 16);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      big((i / 2 + offset) * 4 + i % 2 + offset, (j / 2 + offset) * 4 + j % 2 + offset) = r.matrix()(i, j);
  return DensityMatrixd(4, 4, big);
}

Outcome block_diagonal() {
  const PureMeasure geo = find_measure("geometric");
  const OptimizerConfig cfg{8, 0, 400, 1e-8, 1};
  Rng rng(909);
  std::uniform_real_distribution<double> p(0.05, 0.95);
  double pure_worst = 1e9, mixed_worst = 1e9;
  for (int i = 0; i < 10; ++i) {
    const double p1 = p(rng);
    const auto a = corner(random_density<double>(2, 2, 1, rng), 0), b = corner(random_density<double>(2, 2, 1, rng), 2);
    pure_worst = std::min(pure_worst, check_block_diagonal(a, b, p1, geo, cfg));
    const auto c = corner(random_density<double>(2, 2, 2, rng), 0), d = corner(random_density<double>(2, 2, 2, rng), 2);
    mixed_worst = std::min(mixed_worst, check_block_diagonal(c, d, p1, geo, cfg));
  }
  return {pure_worst >= -1e-9 && mixed_worst >= -5e-2,
          fmt("geometric measure: pure blocks min slack %.3g (>= -1e-9), mixed blocks %.3g (>= -5e-2)", pure_worst,
              mixed_worst)};
}

Outcome monogamy() {
  Rng rng(1010);
  int violations = 0, pass = 0;
  for (int i = 0; i < 500; ++i) {
    const auto r = monogamy_check(TripartiteState(2, random_pure<double>(2, 4, rng).amplitudes()), 1e-3, 5e-2);
    violations += r.verdict == MonogamyVerdict::Fail;
    pass += r.verdict == MonogamyVerdict::Pass;
  }
  const double s = 1 / std::sqrt(2.0);
  auto three = [](std::initializer_list<std::pair<int, double>> e) {
    CVectord v = CVectord::Zero(8);
    for (const auto& [i, x] : e) v[i] = x;
    return TripartiteState(2, CVectord(v / v.norm()));
  };
  const auto product = monogamy_check(three({{0, s}, {6, s}}), 1e-3, 5e-2).verdict;
  const auto ghz = monogamy_check(three({{0, s}, {7, s}}), 1e-3, 5e-2).verdict;
  const auto w = monogamy_check(three({{1, 1}, {2, 1}, {4, 1}}), 1e-3, 5e-2).verdict;
  const bool ok = violations == 0 && product == MonogamyVerdict::Pass && ghz == MonogamyVerdict::Vacuous &&
                  w == MonogamyVerdict::Vacuous;
  return {ok, fmt("%d violations in 500 random states (%d PASS-required); product/GHZ/W = %s/%s/%s", violations, pass,
                  to_string(product).c_str(), to_string(ghz).c_str(), to_string(w).c_str())};
}

} // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "worked SEPP example", 5, worked_example},
      {2, "extension concurrence equals Wootters", 600, concurrence_equality},
      {3, "extension geometric equals the closed form", 0, geometric_equality},
      {4, "extension dominates the convex roof", 0, ordering},
      {5, "majorization against brute force", 1, majorization_oracle},
      {6, "one-shot cost", 5, one_shot},
      {7, "subadditivity of the entropy extension", 1200, subadditivity},
      {8, "condition (iii) with exact concurrence", 0, monotonicity_iii},
      {9, "block-diagonal bound", 0, block_diagonal},
      {10, "monogamy", 60, monogamy},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o{false, {}};
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::string timing = fmt("%.2fs", secs);
    if (c.time_limit > 0) {
      timing += fmt(" (limit %gs)", c.time_limit);
      if (secs > c.time_limit) {
        o.passed = false;
        o.detail += "; over time limit";
      }
    }
    failures += !o.passed;
    std::printf("%s criterion %d: %s | %s | %s\n", o.passed ? "PASS" : "FAIL", c.id, c.title.c_str(), o.detail.c_str(),
                timing.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", int(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
