#include "qext/applications.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "qext/majorization.hpp"
#include "qext/measures.hpp"

namespace qext {

double robustness_upper_mixed(const Ensembled& ens) {
  double r = 0.0;
  for (const auto& m : ens.members()) r += m.weight * robustness_pure(schmidt_vector(m.state));
  return r;
}

namespace {

struct RankProbe {
  int rank;
  RVectord singular;  // of the normalized coefficient matrix, nonincreasing
};

RankProbe probe(const std::vector<CMatrixd>& mats, const CVectord& c) {
  CMatrixd m = CMatrixd::Zero(mats.front().rows(), mats.front().cols());
  for (std::size_t i = 0; i < mats.size(); ++i) m += c[Eigen::Index(i)] * mats[i];
  const double norm = m.norm();
  if (norm < 1e-12) return {0, RVectord::Zero(std::min(m.rows(), m.cols()))};
  m /= norm;
  Eigen::JacobiSVD<CMatrixd> svd(m);
  const RVectord s = svd.singularValues();
  return {int((s.array().square() > tol::kSchmidtCutoff).count()), s};
}

// Superpositions where the 2-state pencil drops below `generic` rank.
std::vector<SpanPoint> pencil_roots(const std::vector<CMatrixd>& mats, int generic) {
  std::vector<SpanPoint> out;
  auto consider = [&](CVectord c) {
    c.normalize();
    const RankProbe p = probe(mats, c);
    if (p.rank == 0 || p.rank >= generic) return;
    for (const auto& q : out)
      if (std::abs(q.coefficients.dot(c)) > 1.0 - 1e-10) return;
    out.push_back({std::move(c), p.rank});
  };
  consider(CVectord::Unit(2, 0));
  consider(CVectord::Unit(2, 1));

  // Compress to generic × generic so that rank drops become determinant roots.
  Rng rng(0x9e3779b97f4a7c15ull);
  const CMatrixd pl = random_isometry<double>(mats[0].rows(), generic, rng).adjoint();
  const CMatrixd pr = random_isometry<double>(mats[0].cols(), generic, rng);
  const CMatrixd a = pl * mats[0] * pr, b = pl * mats[1] * pr;
  const std::complex<double> shifts[] = {{0.6180339887, 0.3141592654}, {-1.4142135624, 0.7071067812}};
  for (const auto t0 : shifts) {
    const CMatrixd shifted = a + t0 * b;
    Eigen::PartialPivLU<CMatrixd> lu(shifted);
    if (std::abs(lu.determinant()) < 1e-12 * std::pow(shifted.norm(), double(generic))) continue;
    Eigen::ComplexEigenSolver<CMatrixd> es(lu.solve(b), false);
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
      const std::complex<double> mu = es.eigenvalues()[i];
      if (std::abs(mu) < 1e-14) continue;
      CVectord c(2);
      c << 1.0, t0 - 1.0 / mu;
      consider(std::move(c));
    }
    break;
  }
  return out;
}

} // namespace

SpanRankResult min_schmidt_rank_in_span(const std::vector<PureStated>& states, int grid) {
  if (states.size() < 2 || states.size() > 3) throw ArgumentError("span search takes 2 or 3 states");
  if (grid < 1) throw ArgumentError("span search: grid must be positive");
  std::vector<CMatrixd> mats;
  for (const auto& s : states) {
    if (s.dim_a() != states[0].dim_a() || s.dim_b() != states[0].dim_b())
      throw ArgumentError("span search: states must share dimensions");
    mats.push_back(s.coefficient_matrix());
  }

  SpanRankResult res{std::numeric_limits<int>::max(), std::numeric_limits<double>::infinity(), 0,
                     std::numeric_limits<int>::max(), {}};
  std::vector<RankProbe> probes;
  auto visit = [&](const CVectord& c) {
    RankProbe p = probe(mats, c);
    if (p.rank > 0) probes.push_back(std::move(p));
  };
  const double half_pi = std::numbers::pi / 2.0;
  if (states.size() == 2) {
    const int n = std::max(2, int(std::ceil(std::sqrt(double(grid)))));
    for (int i = 0; i < n; ++i) {
      const double th = half_pi * i / (n - 1);
      for (int j = 0; j < n; ++j) {
        const double ph = 2.0 * std::numbers::pi * j / n;
        CVectord c(2);
        c << std::cos(th), std::polar(std::sin(th), ph);
        visit(c);
      }
    }
  } else {
    const int n = std::max(2, int(std::lround(std::pow(double(grid), 0.25))));
    for (int i1 = 0; i1 < n; ++i1)
      for (int i2 = 0; i2 < n; ++i2)
        for (int j1 = 0; j1 < n; ++j1)
          for (int j2 = 0; j2 < n; ++j2) {
            const double t1 = half_pi * i1 / (n - 1), t2 = half_pi * i2 / (n - 1);
            const double p1 = 2.0 * std::numbers::pi * j1 / n, p2 = 2.0 * std::numbers::pi * j2 / n;
            CVectord c(3);
            c << std::cos(t1), std::polar(std::sin(t1) * std::cos(t2), p1), std::polar(std::sin(t1) * std::sin(t2), p2);
            visit(c);
          }
  }
  if (probes.empty()) throw ArgumentError("span search: degenerate span");
  for (const auto& p : probes) {
    res.generic_rank = std::max(res.generic_rank, p.rank);
    res.mesh_min_rank = std::min(res.mesh_min_rank, p.rank);
  }
  for (const auto& p : probes) res.margin = std::min(res.margin, p.singular[res.generic_rank - 1]);
  res.min_rank = res.mesh_min_rank;
  if (states.size() == 2 && res.generic_rank > 1) {
    res.low_rank_points = pencil_roots(mats, res.generic_rank);
    for (const auto& p : res.low_rank_points) res.min_rank = std::min(res.min_rank, p.rank);
  }
  return res;
}

namespace {

// Real coordinates of a 2×2 Hermitian matrix, isometric for the Frobenius norm.
Eigen::Vector4d hermitian_coords(const CMatrixd& h) {
  const double r2 = std::numbers::sqrt2;
  return {h(0, 0).real(), h(1, 1).real(), r2 * h(0, 1).real(), r2 * h(0, 1).imag()};
}

// min ‖Σ w_i r_i − t‖ over w ≥ 0, by exhaustive active sets (at most 4 in R⁴).
double cone_residual(const std::vector<Eigen::Vector4d>& rays, const Eigen::Vector4d& t) {
  double best = t.norm();
  const std::size_t n = rays.size();
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    const int size = std::popcount(mask);
    if (size > 4) continue;
    Eigen::MatrixXd a(4, size);
    int col = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (1u << i)) a.col(col++) = rays[i];
    const Eigen::VectorXd w = a.colPivHouseholderQr().solve(t);
    if ((w.array() < -1e-14).any()) continue;
    best = std::min(best, (a * w - t).norm());
  }
  return best;
}

} // namespace

SchmidtNumberCertificate certify_schmidt_number(const DensityMatrixd& rho, const PureStated& psi1,
                                                const PureStated& psi2, int grid) {
  CMatrixd phi(rho.dim(), 2);
  phi.col(0) = psi1.amplitudes();
  phi.col(1) = psi2.amplitudes();
  const CMatrixd gram = phi.adjoint() * phi;
  if (std::abs(gram.determinant()) < 1e-12) throw ArgumentError("certificate: spanning states are dependent");
  const CMatrixd pinv = gram.inverse() * phi.adjoint();
  CMatrixd t = pinv * rho.matrix() * pinv.adjoint();
  t = 0.5 * (t + t.adjoint()).eval();
  const double leak = (phi * t * phi.adjoint() - rho.matrix()).cwiseAbs().maxCoeff();
  if (leak > 1e-8) throw ArgumentError("certificate: rho is not supported on the given span");

  const SpanRankResult span = min_schmidt_rank_in_span({psi1, psi2}, grid);
  const Eigen::Vector4d target = hermitian_coords(t);
  const double scale = target.norm();

  std::vector<int> ranks;
  for (const auto& p : span.low_rank_points) ranks.push_back(p.rank);
  std::sort(ranks.begin(), ranks.end());
  ranks.erase(std::unique(ranks.begin(), ranks.end()), ranks.end());

  auto residual_below = [&](int k) {
    std::vector<Eigen::Vector4d> rays;
    for (const auto& p : span.low_rank_points)
      if (p.rank < k) rays.push_back(hermitian_coords(p.coefficients * p.coefficients.adjoint()));
    return cone_residual(rays, target) / scale;
  };

  SchmidtNumberCertificate cert{span.generic_rank, span.generic_rank, span.min_rank, 0.0};
  for (int k : ranks) {
    if (residual_below(k + 1) <= 1e-9) {
      cert.schmidt_number = k;
      break;
    }
  }
  cert.margin = residual_below(cert.schmidt_number);
  return cert;
}

PureStated example_phi1() {
  CVectord v = CVectord::Zero(16);
  v[0] = 0.5;
  v[5] = 1.0 / 6.0;
  v[10] = 1.0 / 6.0;
  v[15] = 5.0 / 6.0;
  return PureStated::normalized(4, 4, v);
}

PureStated example_phi2() {
  CVectord v = CVectord::Zero(16);
  v[0] = 0.5;
  v[5] = 0.125;
  v[10] = 0.125;
  v[15] = std::sqrt(46.0) / 8.0;
  return PureStated::normalized(4, 4, v);
}

Ensembled example_ensemble() { return Ensembled({{0.25, example_phi1()}, {0.75, example_phi2()}}); }

SeppReport sepp_feasible(int k, const Ensembled& ens, int grid) {
  if (k < 1) throw ArgumentError("sepp_feasible: k must be positive");
  SeppReport rep{};
  rep.r_source = double(k - 1);
  rep.r_target_upper = robustness_upper_mixed(ens);
  rep.r_target_max = 0.0;
  int member_rank = 0;
  for (const auto& m : ens.members()) {
    const SchmidtVectord v = schmidt_vector(m.state);
    rep.r_target_max = std::max(rep.r_target_max, robustness_pure(v));
    member_rank = std::max(member_rank, schmidt_rank(v));
  }
  rep.sepp_feasible = rep.r_target_upper <= rep.r_source + 1e-12;
  rep.schmidt_source = k;

  const DensityMatrixd rho = ens.density();
  const int rank = rho.rank();
  rep.schmidt_target_exact = rank <= 2;
  rep.schmidt_target = member_rank;
  rep.schmidt_margin = 0.0;
  if (rank == 1) {
    rep.schmidt_target = schmidt_rank(schmidt_vector(ens.members().front().state));
  } else if (rank == 2) {
    std::vector<PureStated> basis;
    if (ens.size() == 2) {
      basis = {ens.members()[0].state, ens.members()[1].state};
    } else {
      const Support sup = support_of(rho);
      basis = {PureStated::normalized(rho.dim_a(), rho.dim_b(), sup.vectors.col(0)),
               PureStated::normalized(rho.dim_a(), rho.dim_b(), sup.vectors.col(1))};
    }
    const auto cert = certify_schmidt_number(rho, basis[0], basis[1], grid);
    rep.schmidt_target = cert.schmidt_number;
    rep.schmidt_margin = cert.margin;
  }

  std::ostringstream os;
  os << (rep.sepp_feasible ? "SEPP-reachable" : "not certified SEPP-reachable") << " from Psi_" << k << ": R(rho) <= "
     << rep.r_target_upper << (rep.sepp_feasible ? " <= " : " > ") << rep.r_source << "; Schmidt number " << k
     << " -> " << (rep.schmidt_target_exact ? "" : "<= ") << rep.schmidt_target;
  if (rep.sepp_feasible && rep.schmidt_target_exact && rep.schmidt_target > k) os << " (unreachable by LOCC)";
  rep.verdict = os.str();
  return rep;
}

TripartiteState::TripartiteState(int dim_c, CVectord amplitudes) : dim_c_(dim_c) {
  if (dim_c < 1 || dim_c > 8) throw ArgumentError("tripartite state: dim_c must lie in [1, 8]");
  if (amplitudes.size() != 4 * dim_c)
    throw ArgumentError("tripartite state: expected " + std::to_string(4 * dim_c) + " amplitudes, got " +
                        std::to_string(amplitudes.size()));
  const double err = std::abs(amplitudes.norm() - 1.0);
  if (err > tol::kNorm) throw ValidationError("state normalization", err);
  density_ = amplitudes * amplitudes.adjoint();
  amplitudes_ = std::move(amplitudes);
}

TripartiteState::TripartiteState(int dim_c, CMatrixd density) : dim_c_(dim_c) {
  if (dim_c < 1 || dim_c > 8) throw ArgumentError("tripartite state: dim_c must lie in [1, 8]");
  density_ = DensityMatrixd(2, 2 * dim_c, std::move(density)).matrix();
}

const CVectord& TripartiteState::amplitudes() const {
  if (!amplitudes_) throw ArgumentError("tripartite state is mixed");
  return *amplitudes_;
}

DensityMatrixd TripartiteState::marginal(Party traced) const {
  const int dims[3] = {2, 2, dim_c_};
  const int t = static_cast<int>(traced);
  int keep[2], n = 0;
  for (int i = 0; i < 3; ++i)
    if (i != t) keep[n++] = i;
  const int d0 = dims[keep[0]], d1 = dims[keep[1]];
  CMatrixd out = CMatrixd::Zero(d0 * d1, d0 * d1);
  auto index = [&](int x, int y, int z) {
    int idx[3];
    idx[keep[0]] = x;
    idx[keep[1]] = y;
    idx[t] = z;
    return (idx[0] * 2 + idx[1]) * dim_c_ + idx[2];
  };
  for (int x = 0; x < d0; ++x)
    for (int y = 0; y < d1; ++y)
      for (int x2 = 0; x2 < d0; ++x2)
        for (int y2 = 0; y2 < d1; ++y2) {
          std::complex<double> s(0);
          for (int z = 0; z < dims[t]; ++z) s += density_(index(x, y, z), index(x2, y2, z));
          out(x * d1 + y, x2 * d1 + y2) = s;
        }
  return DensityMatrixd::normalized(d0, d1, out);
}

CMatrixd TripartiteState::reduced(Party kept) const {
  if (kept == Party::A) return partial_trace(density_, 2, 2 * dim_c_, Side::A);
  if (kept == Party::C) return partial_trace(density_, 4, dim_c_, Side::B);
  return partial_trace(marginal(Party::C), Side::B);
}

double concurrence_bipartition(const TripartiteState& state, Party single) {
  if (!state.is_pure()) throw ArgumentError("concurrence_bipartition needs a pure state");
  const CMatrixd r = state.reduced(single);
  const double purity = (r * r).trace().real();
  return std::sqrt(std::max(0.0, 2.0 * (1.0 - purity)));
}

std::string to_string(MonogamyVerdict v) {
  switch (v) {
  case MonogamyVerdict::Pass: return "PASS";
  case MonogamyVerdict::Fail: return "FAIL";
  case MonogamyVerdict::Vacuous: return "VACUOUS";
  }
  return "?";
}

MonogamyReport monogamy_check(const TripartiteState& state, double tol_eq, double tol_zero, const OptimizerConfig& cfg) {
  if (!state.is_pure()) throw ArgumentError("monogamy_check needs a pure state");
  MonogamyReport rep{};
  rep.c_a_bc = concurrence_bipartition(state, Party::A);
  rep.c_ab = wootters_concurrence(state.marginal(Party::C));
  const DensityMatrixd rho_ac = state.marginal(Party::B);
  if (state.dim_c() == 2) {
    rep.c_ac = wootters_concurrence(rho_ac);
    rep.c_ac_exact = true;
    rep.c_ac_converged = true;
  } else {
    const auto est = convex_roof(rho_ac, find_measure("concurrence"), cfg);
    rep.c_ac = est.value;
    rep.c_ac_exact = false;
    rep.c_ac_converged = est.converged;
  }
  rep.ckw_gap = rep.c_a_bc * rep.c_a_bc - rep.c_ab * rep.c_ab - rep.c_ac * rep.c_ac;
  if (std::abs(rep.c_a_bc - rep.c_ab) <= tol_eq)
    rep.verdict = rep.c_ac <= tol_zero ? MonogamyVerdict::Pass : MonogamyVerdict::Fail;
  else
    rep.verdict = MonogamyVerdict::Vacuous;
  return rep;
}

} // namespace qext
