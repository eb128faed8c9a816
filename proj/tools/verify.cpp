#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include "qext/applications.hpp"
#include "qext/cli.hpp"
#include "qext/cost.hpp"
#include "qext/io.hpp"
#include "qext/majorization.hpp"
#include "qext/measures.hpp"

namespace qext::verify {

namespace {

class Suite {
public:
  explicit Suite(std::vector<Check>& out) : out_(out) {}

  // measured ≥ lower
  void at_least(const std::string& module, const std::string& name, double measured, double lower, bool hard,
                std::string note = {}) {
    std::ostringstream b;
    b << ">= " << lower;
    out_.push_back({module, name, hard, false, measured >= lower, measured, b.str(), std::move(note)});
  }
  // measured ≤ upper
  void at_most(const std::string& module, const std::string& name, double measured, double upper, bool hard,
               std::string note = {}) {
    std::ostringstream b;
    b << "<= " << upper;
    out_.push_back({module, name, hard, false, measured <= upper, measured, b.str(), std::move(note)});
  }
  void report(const std::string& module, const std::string& name, double measured, std::string note) {
    out_.push_back({module, name, false, true, true, measured, "reported", std::move(note)});
  }

private:
  std::vector<Check>& out_;
};

SchmidtVectord random_schmidt(Rng& rng, int max_len = 6) {
  std::uniform_int_distribution<int> len(1, max_len);
  std::exponential_distribution<double> e(1.0);
  RVectord v(len(rng));
  for (auto& x : v) x = e(rng);
  if (v.sum() <= 0) v.setOnes();
  return SchmidtVectord::from_unsorted(v / v.sum());
}

// x = Σ_j w_j P_j y with random permutations P_j, so x ≺ y.
SchmidtVectord doubly_stochastic_image(const SchmidtVectord& y, Rng& rng) {
  const int n = y.size();
  RVectord x = RVectord::Zero(n);
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  std::exponential_distribution<double> e(1.0);
  double total = 0;
  for (int j = 0; j < 3; ++j) {
    std::shuffle(perm.begin(), perm.end(), rng);
    const double w = e(rng);
    total += w;
    for (int i = 0; i < n; ++i) x[i] += w * y[perm[std::size_t(i)]];
  }
  return SchmidtVectord::from_unsorted(x / total);
}

// Plain partial-sum comparison, written independently of `majorizes`.
bool brute_majorized(std::vector<double> x, std::vector<double> y) {
  std::sort(x.rbegin(), x.rend());
  std::sort(y.rbegin(), y.rend());
  x.resize(std::max(x.size(), y.size()), 0.0);
  y.resize(x.size(), 0.0);
  double sx = 0, sy = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sx += x[k];
    sy += y[k];
    if (sx > sy + 1e-9) return false;
  }
  return true;
}

std::vector<double> as_vector(const SchmidtVectord& v) { return {v.entries().begin(), v.entries().end()}; }

double tail_sum(const SchmidtVectord& v, int k, int len) {
  double s = 0;
  for (int i = k - 1; i < len; ++i) s += i < v.size() ? v[i] : 0.0;
  return s;
}

CMatrixd random_unitary(int n, Rng& rng) { return random_isometry<double>(n, n, rng); }

void state_core(Suite& s, const Options& o, Rng& rng) {
  const int n = o.quick ? 50 : 300;
  double recon = 0, sym = 0, tri = 1e9, tensor = 0;
  std::uniform_int_distribution<int> dim(1, 4);
  for (int t = 0; t < n; ++t) {
    const PureStated psi = random_pure<double>(dim(rng), dim(rng), rng);
    const auto d = schmidt_decompose(psi);
    recon = std::max(recon, (reconstruct(d) - psi.amplitudes()).norm());
    const DensityMatrixd p = psi.projector();
    Eigen::SelfAdjointEigenSolver<CMatrixd> ea(partial_trace(p, Side::A)), eb(partial_trace(p, Side::B));
    RVectord a = ea.eigenvalues().reverse(), b = eb.eigenvalues().reverse();
    const Eigen::Index m = std::min(a.size(), b.size());
    sym = std::max(sym, (a.head(m) - b.head(m)).cwiseAbs().maxCoeff());
    if (a.size() > m) sym = std::max(sym, a.tail(a.size() - m).cwiseAbs().maxCoeff());
    if (b.size() > m) sym = std::max(sym, b.tail(b.size() - m).cwiseAbs().maxCoeff());

    const int da = dim(rng), db = dim(rng);
    std::uniform_int_distribution<int> rk(1, da * db);
    const auto r1 = random_density<double>(da, db, rk(rng), rng);
    const auto r2 = random_density<double>(da, db, rk(rng), rng);
    const auto r3 = random_density<double>(da, db, rk(rng), rng);
    tri = std::min(tri, trace_distance(r1, r2) + trace_distance(r2, r3) - trace_distance(r1, r3));

    const PureStated phi = random_pure<double>(dim(rng), dim(rng), rng);
    const SchmidtVectord x = schmidt_vector(psi), y = schmidt_vector(phi);
    RVectord outer(x.size() * y.size());
    for (int i = 0; i < x.size(); ++i)
      for (int j = 0; j < y.size(); ++j) outer[i * y.size() + j] = x[i] * y[j];
    std::sort(outer.begin(), outer.end(), std::greater<double>());
    const SchmidtVectord z = schmidt_vector(tensor_product(psi, phi));
    for (Eigen::Index i = 0; i < outer.size(); ++i)
      tensor = std::max(tensor, std::abs(outer[i] - (i < z.size() ? z[int(i)] : 0.0)));
  }
  s.at_most("state-core", "Schmidt reconstruction error", recon, 1e-9, true);
  s.at_most("state-core", "reduced spectra symmetry", sym, 1e-9, true);
  s.at_least("state-core", "trace distance triangle slack", tri, -1e-9, true);
  s.at_most("state-core", "tensor product Schmidt vector", tensor, 1e-10, true);
}

void majorization(Suite& s, const Options& o, Rng& rng) {
  const int n = o.quick ? 200 : 1000;
  int refl = 0, trans = 0, uniform = 0, sorted = 0, agree = 0, kyfan = 0;
  for (int t = 0; t < n; ++t) {
    const SchmidtVectord x = random_schmidt(rng), y = random_schmidt(rng);
    if (!majorizes(x, x)) ++refl;
    const SchmidtVectord a = doubly_stochastic_image(x, rng), b = doubly_stochastic_image(a, rng);
    if (majorizes(b, a) && majorizes(a, x) && !majorizes(b, x)) ++trans;
    if (!majorizes(SchmidtVectord::uniform(x.size()), x)) ++uniform;

    std::vector<EnsembleMember<double>> members;
    std::uniform_real_distribution<double> w(0.1, 1.0);
    for (int i = 0; i < 3; ++i) members.push_back({w(rng), random_pure<double>(3, 3, rng)});
    double total = 0;
    for (const auto& m : members) total += m.weight;
    for (auto& m : members) m.weight /= total;
    const Ensembled ens(members);
    const SchmidtVectord avg = average_schmidt(ens);
    for (int i = 1; i < avg.size(); ++i)
      if (avg[i] > avg[i - 1]) ++sorted;
    const PureStated psi = random_pure<double>(3, 3, rng);
    std::vector<double> mix(3, 0.0);
    for (const auto& m : ens.members()) {
      const auto v = schmidt_vector(m.state);
      for (int i = 0; i < v.size(); ++i) mix[std::size_t(i)] += m.weight * v[i];
    }
    if (ensemble_convertible(psi, ens) != brute_majorized(as_vector(schmidt_vector(psi)), mix)) ++agree;
    if (majorizes(x, y) != brute_majorized(as_vector(x), as_vector(y))) ++agree;

    if (majorizes(x, y)) {
      const int len = std::max(x.size(), y.size());
      for (int k = 1; k <= len; ++k)
        if (tail_sum(x, k, len) < tail_sum(y, k, len) - 1e-9) ++kyfan;
    }
  }
  s.at_most("majorization", "reflexivity violations", refl, 0, true);
  s.at_most("majorization", "transitivity violations", trans, 0, true);
  s.at_most("majorization", "uniform vector not majorized", uniform, 0, true);
  s.at_most("majorization", "average_schmidt unsorted entries", sorted, 0, true);
  s.at_most("majorization", "disagreements with brute-force partial sums", agree, 0, true);
  s.at_most("majorization", "tail-sum (Ky Fan) bridge violations", kyfan, 0, true);
}

void pure_measures(Suite& s, const Options& o, Rng& rng) {
  const int n = o.quick ? 200 : 1000;
  for (const auto& id : measure_ids(4)) {
    const PureMeasure m = find_measure(id);
    double worst = 1e9;
    if (id != "schmidt_rank") {
      for (int t = 0; t < n; ++t) {
        const SchmidtVectord y = random_schmidt(rng);
        const SchmidtVectord x = doubly_stochastic_image(y, rng);
        worst = std::min(worst, m.evaluate(x) - m.evaluate(y));
      }
      s.at_least("pure-measures", "Schur concavity " + id, worst, -1e-12, true, "min f(x) - f(y) over x majorized by y");
    }
    const double product = m.evaluate(SchmidtVectord(RVectord::Ones(1)));
    const double expected = m.flags().vanishes_on_product ? 0.0 : 1.0;
    s.at_most("pure-measures", "separable value " + id, std::abs(product - expected), 0.0, true,
              m.flags().vanishes_on_product ? "expects 0" : "documented exception, expects 1");
  }
  double lu = 0;
  const PureMeasure ent = find_measure("entropy"), conc = find_measure("concurrence");
  for (int t = 0; t < n / 10; ++t) {
    const PureStated psi = random_pure<double>(3, 3, rng);
    const CMatrixd u = random_unitary(3, rng), v = random_unitary(3, rng);
    const CMatrixd c = u * psi.coefficient_matrix() * v.transpose();
    CVectord amp(9);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) amp[i * 3 + j] = c(i, j);
    const PureStated phi = PureStated::normalized(3, 3, amp);
    for (const auto& id : measure_ids(3))
      lu = std::max(lu, std::abs(find_measure(id).evaluate(schmidt_vector(psi)) -
                                 find_measure(id).evaluate(schmidt_vector(phi))));
  }
  s.at_most("pure-measures", "local-unitary invariance", lu, 1e-9, true);
  double gap = 1e9;
  for (int d = 2; d <= 6; ++d) {
    const SchmidtVectord u = SchmidtVectord::uniform(d);
    for (int t = 0; t < n / 5; ++t) {
      SchmidtVectord v = random_schmidt(rng, d);
      gap = std::min({gap, ent.evaluate(u) - ent.evaluate(v), conc.evaluate(u) - conc.evaluate(v)});
    }
  }
  s.at_least("pure-measures", "uniform vector maximizes entropy and concurrence", gap, -1e-12, true);
}

double geometric_oracle(double c) { return 0.5 * (1.0 - std::sqrt(std::max(0.0, 1.0 - c * c))); }

void roof_engine(Suite& s, const Options& o, Rng& rng) {
  const OptimizerConfig& cfg = o.optimizer;
  const int n = o.quick ? 4 : 12;
  const std::vector<std::string> concave = {"entropy", "concurrence", "geometric", "e_k:2", "e_k:3"};

  double order = 1e9, recon = 0, wpure = 0;
  bool deterministic = true;
  double restart_ladder = 1e9, size_ladder = 1e9;
  for (int t = 0; t < n; ++t) {
    const DensityMatrixd rho = random_density<double>(2, 2, 2 + t % 3, rng);
    for (const auto& id : concave) {
      const PureMeasure m = find_measure(id);
      const auto ext = extension_measure(rho, m, cfg);
      const auto roofv = convex_roof(rho, m, cfg, std::span<const Ensembled>(&ext.best_ensemble, 1));
      order = std::min(order, ext.value - roofv.value);
    }
    const PureMeasure c = find_measure("concurrence");
    const auto a = extension_measure(rho, c, cfg), b = extension_measure(rho, c, cfg);
    if (a.value != b.value || a.evaluations != b.evaluations || a.best_restart != b.best_restart ||
        a.best_ensemble.size() != b.best_ensemble.size())
      deterministic = false;
    OptimizerConfig more = cfg;
    more.restarts = cfg.restarts * 2;
    restart_ladder = std::min(restart_ladder, a.value - extension_measure(rho, c, more).value);
    OptimizerConfig small = cfg;
    small.max_ensemble_size = rho.rank() + 1;
    size_ladder = std::min(size_ladder, extension_measure(rho, c, small).value - a.value);

    for (int k = 0; k < 5; ++k) {
      const int r = rho.rank();
      std::uniform_int_distribution<int> extra(0, 6);
      const CMatrixd u = random_isometry<double>(r + extra(rng), r, rng);
      recon = std::max(recon, trace_distance(decompose(rho, DecompositionParam(u)).density(), rho));
    }
    const PureStated psi = random_pure<double>(2, 2, rng);
    wpure = std::max(wpure, std::abs(wootters_concurrence(psi.projector()) - concurrence_pure(schmidt_vector(psi))));
  }
  s.at_least("roof-engine", "extension >= convex roof (warm-started)", order, -1e-6, true);
  s.at_most("roof-engine", "determinism", deterministic ? 0 : 1, 0, true);
  s.at_least("roof-engine", "value nonincreasing in restarts", restart_ladder, 0.0, true);
  s.at_least("roof-engine", "value nonincreasing in max_ensemble_size", size_ladder, 0.0, true);
  s.at_most("roof-engine", "decompose reconstruction", recon, 1e-8, true);
  s.at_most("roof-engine", "Wootters on pure inputs", wpure, 1e-10, true);

  // Condition (iii) with exact two-qubit concurrence on both sides, then with estimates.
  const Estimator exact = [](const DensityMatrixd& r) { return wootters_concurrence(r); };
  const PureMeasure geo = find_measure("geometric");
  const Estimator geo_est = [&](const DensityMatrixd& r) {
    return r.dim_a() == 2 && r.dim_b() == 2 ? geometric_oracle(wootters_concurrence(r))
                                            : extension_measure(r, geo, cfg).value;
  };
  double mono_exact = 1e9, mono_est = 1e9, mono_geo = 1e9;
  const int trials = o.quick ? 5 : 20;
  for (int t = 0; t < trials; ++t) {
    const DensityMatrixd rho = random_density<double>(2, 2, 1 + t % 4, rng);
    const KrausChannel ch = KrausChannel::random_measurement(2, 2, t % 2 ? Side::A : Side::B, rng);
    mono_exact = std::min(mono_exact, check_monotonicity_iii(rho, exact, ch));
    mono_geo = std::min(mono_geo, check_monotonicity_iii(rho, geo_est, ch));
    if (t < trials / 2) mono_est = std::min(mono_est, check_monotonicity_iii(rho, find_measure("concurrence"), ch, cfg));
  }
  s.at_least("roof-engine", "condition (iii), Wootters-exact concurrence", mono_exact, -1e-9, true);
  s.at_least("roof-engine", "condition (iii), exact geometric", mono_geo, -1e-9, true);
  s.at_least("roof-engine", "condition (iii), estimated concurrence", mono_est, -5e-2, false);

  // Block-diagonal bound: pure blocks are exact, mixed blocks estimated.
  auto embed = [](const DensityMatrixd& r, int offset) {
    CMatrixd big = CMatrixd::Zero(16, 16);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        const int ai = i / 2 + offset, bi = i % 2 + offset, aj = j / 2 + offset, bj = j % 2 + offset;
        big(ai * 4 + bi, aj * 4 + bj) = r.matrix()(i, j);
      }
    return DensityMatrixd(4, 4, big);
  };
  double block_pure = 1e9, block_mixed = 1e9;
  std::uniform_real_distribution<double> unit(0.05, 0.95);
  for (int t = 0; t < (o.quick ? 3 : 10); ++t) {
    const double p = unit(rng);
    const auto s1 = embed(random_density<double>(2, 2, 1, rng), 0), s2 = embed(random_density<double>(2, 2, 1, rng), 2);
    block_pure = std::min(block_pure, check_block_diagonal(s1, s2, p, geo, cfg));
    if (t < (o.quick ? 1 : 3)) {
      const auto m1 = embed(random_density<double>(2, 2, 2, rng), 0), m2 = embed(random_density<double>(2, 2, 2, rng), 2);
      block_mixed = std::min(block_mixed, check_block_diagonal(m1, m2, p, geo, cfg));
    }
  }
  s.at_least("roof-engine", "block-diagonal bound, pure blocks", block_pure, -1e-9, true);
  s.at_least("roof-engine", "block-diagonal bound, mixed blocks", block_mixed, -5e-2, false);

  const PureMeasure ent = find_measure("entropy");
  double sub = 1e9;
  OptimizerConfig sub_cfg = cfg;
  sub_cfg.restarts = 2;
  sub_cfg.max_iterations = 200;
  for (int t = 0; t < (o.quick ? 1 : 2); ++t)
    sub = std::min(sub, check_subadditivity(random_density<double>(2, 2, 2, rng), ent, sub_cfg));
  sub = std::min(sub, check_subadditivity(random_pure<double>(2, 2, rng).projector(), ent, sub_cfg));
  s.at_least("roof-engine", "subadditivity, entropy", sub, -5e-2, false);

  // Condition (iv) (convexity over mixtures) is reported per measure, not asserted.
  for (const auto& id : concave) {
    const PureMeasure m = find_measure(id);
    double worst = 1e9;
    for (int t = 0; t < (o.quick ? 2 : 5); ++t) {
      const auto r1 = random_density<double>(2, 2, 1 + t % 3, rng), r2 = random_density<double>(2, 2, 1 + t % 2, rng);
      const double p = unit(rng);
      const DensityMatrixd mix(2, 2, p * r1.matrix() + (1 - p) * r2.matrix());
      worst = std::min(worst, p * extension_measure(r1, m, cfg).value + (1 - p) * extension_measure(r2, m, cfg).value -
                                  extension_measure(mix, m, cfg).value);
    }
    s.report("roof-engine", "condition (iv) " + id, worst, "min of p E(r1) + (1-p) E(r2) - E(mix), estimates");
  }
}

void cost(Suite& s, const Options& o, Rng& rng) {
  const int n = o.quick ? 200 : 1000;
  int formula = 0, nielsen = 0;
  double dominance = 1e9;
  for (int t = 0; t < n; ++t) {
    const SchmidtVectord v = random_schmidt(rng, 8);
    const int a = one_shot_r_min_search(v), b = one_shot_r_min_formula(v);
    if (a != b) ++formula;
    dominance = std::min(dominance, std::log2(double(a)) - entropy_of_entanglement(v));
    const int d = v.size();
    const PureStated psi = pure_from_schmidt(v, d, d);
    if (!nielsen_convertible(max_entangled(a, d, d), psi)) ++nielsen;
    if (a > 1 && nielsen_convertible(max_entangled(a - 1, d, d), psi)) ++nielsen;
  }
  s.at_most("cost", "r_min search and closed form disagree", formula, 0, true);
  s.at_least("cost", "one-shot cost minus entropy", dominance, -1e-12, true);
  s.at_most("cost", "r_min Nielsen minimality violations", nielsen, 0, true);

  double rise = 0;
  for (int t = 0; t < (o.quick ? 3 : 10); ++t) {
    const PureStated psi = random_pure<double>(3, 3, rng);
    double prev = 1e9;
    for (double eps : {0.01, 0.05, 0.1, 0.2, 0.4, 0.8}) {
      const double c = smoothed_cost_pure_upper(psi, eps, o.quick ? 300 : 1000, 1);
      rise = std::max(rise, c - prev);
      prev = c;
    }
    rise = std::max(rise, smoothed_cost_pure_upper(psi, 0.3, 500, 1) - one_shot_cost_pure(psi).log_cost);
  }
  s.at_most("cost", "smoothed cost increase along eps", rise, 0.0, true, "also compared against the unsmoothed cost");
}

void applications(Suite& s, const Options& o, Rng& rng) {
  int violations = 0;
  double ckw = -1e9;
  const int n = o.quick ? 100 : 500;
  for (int t = 0; t < n; ++t) {
    const TripartiteState st(2, random_pure<double>(2, 4, rng).amplitudes());
    const MonogamyReport m = monogamy_check(st, 1e-3, 5e-2);
    if (m.verdict == MonogamyVerdict::Fail) ++violations;
    ckw = std::max(ckw, -m.ckw_gap);
  }
  s.at_most("applications", "monogamy violations on random 2x2x2 states", violations, 0, true);
  s.at_most("applications", "CKW cross-check (not a monogamy claim)", ckw, 1e-9, true,
            "C_AB^2 + C_AC^2 - C_A|BC^2, a known inequality used as a sanity check");

  const Ensembled ens = example_ensemble();
  const SeppReport base = sepp_feasible(3, ens, 100);
  int changed = 0;
  for (int grid : {1000, 10000}) {
    const SeppReport r = sepp_feasible(3, ens, grid);
    if (r.sepp_feasible != base.sepp_feasible || r.schmidt_target != base.schmidt_target || r.verdict != base.verdict)
      ++changed;
  }
  s.at_most("applications", "SEPP verdict changes across grids 1e2..1e4", changed, 0, true);
}

int run_cli(const std::vector<std::string>& args, std::string& out) {
  std::ostringstream o, e;
  const int code = cli::run(args, o, e);
  out = o.str();
  return code;
}

void cli_checks(Suite& s, const Options& o) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / ("qext_verify_" + std::to_string(o.seed));
  fs::create_directories(dir);
  const std::string path = (dir / "rho.json").string();
  std::string text;
  int mismatches = 0;

  const std::vector<std::string> gen = {"random", "--dims", "2", "2", "--rank", "2", "--seed",
                                        std::to_string(o.seed), "--out", path, "--format", "json"};
  if (run_cli(gen, text) != 0) ++mismatches;
  const std::string first = [&] {
    std::ifstream in(path);
    return std::string(std::istreambuf_iterator<char>(in), {});
  }();
  if (run_cli(gen, text) != 0) ++mismatches;
  {
    std::ifstream in(path);
    if (std::string(std::istreambuf_iterator<char>(in), {}) != first) ++mismatches;
  }
  s.at_most("cli", "random state reproducible from the echoed seed", mismatches, 0, true);

  int roundtrip = 0;
  for (std::vector<std::string> args :
       {std::vector<std::string>{"extend", "--state", path, "--measure", "concurrence", "--restarts", "2", "--format",
                                 "json"},
        std::vector<std::string>{"roof", "--state", path, "--measure", "geometric", "--seed", "5", "--format", "json"},
        std::vector<std::string>{"measure", "--state", path, "--measure", "entropy", "--format", "json"}}) {
    if (run_cli(args, text) != 0) {
      ++roundtrip;
      continue;
    }
    const io::json first_doc = io::json::parse(text);
    const auto replay = first_doc["command_line"].get<std::vector<std::string>>();
    if (run_cli(replay, text) != 0) {
      ++roundtrip;
      continue;
    }
    if (io::json::parse(text)["result"] != first_doc["result"]) ++roundtrip;
  }
  s.at_most("cli", "json report replays to identical values", roundtrip, 0, true);
  std::error_code ec;
  fs::remove_all(dir, ec);
}

} // namespace

std::vector<Check> run_all(const Options& opt) {
  std::vector<Check> checks;
  Suite s(checks);
  Rng rng(opt.seed);
  state_core(s, opt, rng);
  majorization(s, opt, rng);
  pure_measures(s, opt, rng);
  roof_engine(s, opt, rng);
  cost(s, opt, rng);
  applications(s, opt, rng);
  cli_checks(s, opt);
  return checks;
}

} // namespace qext::verify
