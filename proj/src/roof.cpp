#include "qext/roof.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <thread>

#include "qext/majorization.hpp"

namespace qext {

Support support_of(const DensityMatrixd& rho, double cutoff) {
  Eigen::SelfAdjointEigenSolver<CMatrixd> es(rho.matrix());
  const auto& vals = es.eigenvalues();
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = vals.size() - 1; i >= 0; --i)
    if (vals[i] > cutoff) keep.push_back(i);
  Support s{RVectord(Eigen::Index(keep.size())), CMatrixd(rho.dim(), Eigen::Index(keep.size()))};
  for (std::size_t k = 0; k < keep.size(); ++k) {
    s.values[Eigen::Index(k)] = vals[keep[k]];
    s.vectors.col(Eigen::Index(k)) = es.eigenvectors().col(keep[k]);
  }
  return s;
}

DecompositionParam::DecompositionParam(CMatrixd columns) : columns_(std::move(columns)) {
  if (columns_.cols() < 1 || columns_.rows() < columns_.cols())
    throw ArgumentError("decomposition parameter must be m x n with m >= n >= 1");
  const double err =
      (columns_.adjoint() * columns_ - CMatrixd::Identity(columns_.cols(), columns_.cols())).cwiseAbs().maxCoeff();
  if (err > tol::kIsometry) throw ValidationError("decomposition parameter columns orthonormal", err);
}

DecompositionParam DecompositionParam::identity(int n) { return DecompositionParam(CMatrixd::Identity(n, n)); }

namespace {

// Columns are the unnormalized members √p_i ψ_i.
CMatrixd member_matrix(const Support& sup, const CMatrixd& u) {
  return sup.vectors * sup.values.cwiseSqrt().asDiagonal() * u.adjoint();
}

Ensembled ensemble_from_members(const CMatrixd& members, int dim_a, int dim_b) {
  std::vector<EnsembleMember<double>> out;
  double total = 0.0;
  for (Eigen::Index i = 0; i < members.cols(); ++i) {
    const double w = members.col(i).squaredNorm();
    if (w < 1e-14) continue;
    out.push_back({w, PureStated::normalized(dim_a, dim_b, members.col(i))});
    total += w;
  }
  for (auto& m : out) m.weight /= total;
  return Ensembled(std::move(out));
}

} // namespace

Ensembled decompose(const DensityMatrixd& rho, const DecompositionParam& param) {
  const Support sup = support_of(rho);
  if (param.rank() != sup.rank())
    throw ArgumentError("decompose: parameter has " + std::to_string(param.rank()) + " columns but rank(rho) = " +
                        std::to_string(sup.rank()));
  return ensemble_from_members(member_matrix(sup, param.columns()), rho.dim_a(), rho.dim_b());
}

DecompositionParam param_from_ensemble(const DensityMatrixd& rho, const Ensembled& ens) {
  if (ens.dim_a() != rho.dim_a() || ens.dim_b() != rho.dim_b())
    throw ArgumentError("ensemble and state dimensions differ");
  const Support sup = support_of(rho);
  CMatrixd u(Eigen::Index(ens.size()), sup.rank());
  double leak = 0.0;
  for (std::size_t i = 0; i < ens.size(); ++i) {
    const auto& m = ens.members()[i];
    const CVectord member = std::sqrt(m.weight) * m.state.amplitudes();
    const CVectord coeff = sup.vectors.adjoint() * member;
    leak += (member - sup.vectors * coeff).squaredNorm();
    for (int j = 0; j < sup.rank(); ++j) u(Eigen::Index(i), j) = std::conj(coeff[j]) / std::sqrt(sup.values[j]);
  }
  if (leak > 1e-9) throw ValidationError("ensemble members lie in the support of rho", leak);
  return DecompositionParam(std::move(u));
}

double extension_objective(const Ensembled& ens, const PureMeasure& m) { return m.evaluate(average_schmidt(ens)); }

double roof_objective(const Ensembled& ens, const PureMeasure& m) {
  double s = 0.0;
  for (const auto& mem : ens.members()) s += mem.weight * m.evaluate(schmidt_vector(mem.state));
  return s;
}

namespace {

enum class Objective { Extension, Roof };

// Weighted Schmidt spectrum (squared singular values, nonincreasing) of an
// unnormalized member vector.
class SpectrumKernel {
public:
  SpectrumKernel(int dim_a, int dim_b)
      : da_(dim_a), db_(dim_b), d_(std::min(dim_a, dim_b)), gram_(d_, d_), solver_(d_) {}

  int length() const { return d_; }

  void operator()(const CVectord& amp, double* out) {
    if (d_ == 1) {
      out[0] = amp.squaredNorm();
      return;
    }
    if (da_ == 2 && db_ == 2) {
      const double t = amp.squaredNorm();
      const double det = std::norm(amp[0] * amp[3] - amp[1] * amp[2]);
      const double disc = std::max(0.0, t * t - 4.0 * det);
      const double hi = 0.5 * (t + std::sqrt(disc));
      out[0] = hi;
      out[1] = hi > 0.0 ? det / hi : 0.0;
      return;
    }
    fill_gram(amp);
    if (d_ == 2) {
      const double a = gram_(0, 0).real(), b = gram_(1, 1).real();
      const double c2 = std::norm(gram_(0, 1));
      const double hi = 0.5 * (a + b + std::sqrt((a - b) * (a - b) + 4.0 * c2));
      const double det = std::max(0.0, a * b - c2);
      out[0] = hi;
      out[1] = hi > 0.0 ? det / hi : 0.0;
      return;
    }
    solver_.compute(gram_, Eigen::EigenvaluesOnly);
    const auto& ev = solver_.eigenvalues();
    for (int i = 0; i < d_; ++i) out[i] = std::max(0.0, ev[d_ - 1 - i]);
  }

private:
  void fill_gram(const CVectord& amp) {
    if (da_ <= db_) {
      for (int i = 0; i < da_; ++i)
        for (int j = i; j < da_; ++j) {
          std::complex<double> s(0);
          for (int b = 0; b < db_; ++b) s += amp[i * db_ + b] * std::conj(amp[j * db_ + b]);
          gram_(i, j) = s;
          gram_(j, i) = std::conj(s);
        }
    } else {
      for (int i = 0; i < db_; ++i)
        for (int j = i; j < db_; ++j) {
          std::complex<double> s(0);
          for (int a = 0; a < da_; ++a) s += std::conj(amp[a * db_ + i]) * amp[a * db_ + j];
          gram_(i, j) = s;
          gram_(j, i) = std::conj(s);
        }
    }
  }

  int da_, db_, d_;
  CMatrixd gram_;
  Eigen::SelfAdjointEigenSolver<CMatrixd> solver_;
};

// Compass search over Givens rotations mixing pairs of ensemble members.
// Mixing members p and q by a 2×2 unitary is a left rotation of the
// decomposition isometry, so every visited point stays a decomposition of ρ.
class RotationSearch {
public:
  RotationSearch(int dim_a, int dim_b, const PureMeasure& m, Objective kind, const OptimizerConfig& cfg)
      : measure_(m), kind_(kind), cfg_(cfg), kernel_(dim_a, dim_b), d_(kernel_.length()), total_(d_),
        scratch_(d_), sp_(d_), sq_(d_) {}

  struct Outcome {
    CMatrixd members;
    double value;
    long evaluations;
    bool step_converged;
  };

  Outcome run(CMatrixd start, int cap, Rng& rng) {
    members_ = std::move(start);
    evaluations_ = 0;
    bool all_converged = true;
    all_converged &= optimize_stage();
    CMatrixd best = members_;
    double best_value = value_;
    while (members_.cols() < cap) {
      grow(rng);
      all_converged &= optimize_stage();
      if (value_ < best_value) {
        best_value = value_;
        best = members_;
      }
    }
    return Outcome{std::move(best), best_value, evaluations_, all_converged};
  }

private:
  double contribution(const RVectord& spec) {
    const double w = spec.sum();
    if (!(w > 1e-300)) return 0.0;
    scratch_ = spec / w;
    return w * measure_(scratch_);
  }

  double extension_value(const RVectord& total) {
    const double s = total.sum();
    scratch_ = total / s;
    return measure_(scratch_);
  }

  double evaluate_all() {
    const Eigen::Index m = members_.cols();
    spec_.resize(d_, m);
    contrib_.resize(m);
    total_.setZero();
    double roof = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
      col_ = members_.col(i);
      kernel_(col_, sp_.data());
      spec_.col(i) = sp_;
      total_ += sp_;
      if (kind_ == Objective::Roof) {
        contrib_[i] = contribution(sp_);
        roof += contrib_[i];
      }
    }
    ++evaluations_;
    return kind_ == Objective::Roof ? roof : extension_value(total_);
  }

  // Objective after replacing members p and q (spectra sp_, sq_).
  double trial_value(Eigen::Index p, Eigen::Index q, double& cp, double& cq) {
    ++evaluations_;
    if (kind_ == Objective::Roof) {
      cp = contribution(sp_);
      cq = contribution(sq_);
      return roof_sum_ - contrib_[p] - contrib_[q] + cp + cq;
    }
    RVectord t = total_ - spec_.col(p) - spec_.col(q) + sp_ + sq_;
    return extension_value(t);
  }

  void rotate(Eigen::Index p, Eigen::Index q, double theta, std::complex<double> phase) {
    const double c = std::cos(theta), s = std::sin(theta);
    rp_ = c * members_.col(p) + (s * phase) * members_.col(q);
    rq_ = (-s * std::conj(phase)) * members_.col(p) + c * members_.col(q);
  }

  bool optimize_stage() {
    value_ = evaluate_all();
    roof_sum_ = value_;
    double step = 0.5;
    const double kTiny = 1e-14;
    const std::complex<double> phases[2] = {{1.0, 0.0}, {0.0, 1.0}};
    const Eigen::Index m = members_.cols();
    for (int sweep = 0; sweep < cfg_.max_iterations; ++sweep) {
      bool improved = false;
      for (Eigen::Index p = 0; p < m; ++p) {
        for (Eigen::Index q = p + 1; q < m; ++q) {
          int best_k = -1;
          double best_val = value_, best_cp = 0, best_cq = 0;
          for (int k = 0; k < 4; ++k) {
            const double theta = (k % 2 == 0) ? step : -step;
            rotate(p, q, theta, phases[k / 2]);
            kernel_(rp_, sp_.data());
            kernel_(rq_, sq_.data());
            double cp = 0, cq = 0;
            const double v = trial_value(p, q, cp, cq);
            if (v < best_val - kTiny * (1.0 + std::abs(best_val))) {
              best_val = v;
              best_k = k;
              best_cp = cp;
              best_cq = cq;
            }
          }
          if (best_k >= 0) {
            rotate(p, q, (best_k % 2 == 0) ? step : -step, phases[best_k / 2]);
            members_.col(p) = rp_;
            members_.col(q) = rq_;
            kernel_(rp_, sp_.data());
            kernel_(rq_, sq_.data());
            total_ += sp_ + sq_ - spec_.col(p) - spec_.col(q);
            spec_.col(p) = sp_;
            spec_.col(q) = sq_;
            if (kind_ == Objective::Roof) {
              roof_sum_ += best_cp + best_cq - contrib_[p] - contrib_[q];
              contrib_[p] = best_cp;
              contrib_[q] = best_cq;
            }
            value_ = best_val;
            improved = true;
          }
        }
      }
      if (improved) {
        value_ = evaluate_all();
        roof_sum_ = value_;
      } else {
        step *= 0.5;
        if (step < cfg_.step_tolerance) return true;
      }
    }
    return false;
  }

  // Appends a zero member and splits a random existing member into it.
  // Splitting leaves both objectives unchanged.
  void grow(Rng& rng) {
    const Eigen::Index m = members_.cols();
    members_.conservativeResize(Eigen::NoChange, m + 1);
    members_.col(m).setZero();
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Eigen::Index donor = std::min<Eigen::Index>(m - 1, Eigen::Index(unit(rng) * double(m)));
    for (Eigen::Index tries = 0; tries < m && members_.col(donor).squaredNorm() < 1e-14; ++tries)
      donor = (donor + 1) % m;
    const double theta = 0.2 + (1.37 - 0.2) * unit(rng);
    const double phi = 2.0 * std::numbers::pi * unit(rng);
    rotate(donor, m, theta, std::polar(1.0, phi));
    members_.col(donor) = rp_;
    members_.col(m) = rq_;
  }

  const PureMeasure& measure_;
  Objective kind_;
  const OptimizerConfig& cfg_;
  SpectrumKernel kernel_;
  int d_;
  CMatrixd members_;
  Eigen::MatrixXd spec_;
  RVectord contrib_;
  RVectord total_, scratch_, sp_, sq_;
  CVectord col_, rp_, rq_;
  double value_ = 0.0;
  double roof_sum_ = 0.0;
  long evaluations_ = 0;
};

struct RestartResult {
  Ensembled ensemble;
  double value;
  long evaluations;
  bool step_converged;
};

EstimateResult estimate(const DensityMatrixd& rho, const PureMeasure& m, const OptimizerConfig& cfg,
                        std::span<const Ensembled> warm_starts, Objective kind) {
  if (cfg.restarts < 1) throw ArgumentError("optimizer: restarts must be >= 1");
  if (cfg.max_iterations < 1) throw ArgumentError("optimizer: max_iterations must be >= 1");
  const Support sup = support_of(rho);
  const int n = sup.rank();
  if (n < 1) throw ValidationError("rho has no eigenvalue above the rank cutoff");
  const int cap = cfg.max_ensemble_size > 0 ? cfg.max_ensemble_size : n * n;
  if (cap < n)
    throw ArgumentError("optimizer: max_ensemble_size " + std::to_string(cap) + " < rank(rho) = " +
                        std::to_string(n));

  std::vector<CMatrixd> starts;
  starts.reserve(std::size_t(cfg.restarts) + warm_starts.size());
  for (int r = 0; r < cfg.restarts; ++r) {
    if (r == 0) {
      starts.push_back(member_matrix(sup, CMatrixd::Identity(n, n)));
    } else {
      Rng rng(derive_seed(cfg.seed, std::uint64_t(r)));
      starts.push_back(member_matrix(sup, random_isometry<double>(n, n, rng)));
    }
  }
  for (const auto& ws : warm_starts) starts.push_back(member_matrix(sup, param_from_ensemble(rho, ws).columns()));

  const std::size_t total = starts.size();
  std::vector<std::optional<RestartResult>> results(total);
  auto work = [&](std::size_t r) {
    // Split draws come from a stream disjoint from the start draws.
    Rng rng(derive_seed(cfg.seed ^ 0x5bd1e995ull, std::uint64_t(r)));
    RotationSearch search(rho.dim_a(), rho.dim_b(), m, kind, cfg);
    auto out = search.run(std::move(starts[r]), cap, rng);
    Ensembled ens = ensemble_from_members(out.members, rho.dim_a(), rho.dim_b());
    const double v = kind == Objective::Extension ? extension_objective(ens, m) : roof_objective(ens, m);
    results[r] = RestartResult{std::move(ens), v, out.evaluations, out.step_converged};
  };

  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (hw == 1 || total == 1) {
    for (std::size_t r = 0; r < total; ++r) work(r);
  } else {
    std::vector<std::thread> pool;
    const std::size_t workers = std::min<std::size_t>(hw, total);
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (std::size_t r = w; r < total; r += workers) work(r);
      });
    for (auto& t : pool) t.join();
  }

  // Merge in restart order; first minimum wins.
  std::size_t best = 0;
  long evaluations = 0;
  double before_last = std::numeric_limits<double>::infinity();
  double running = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < total; ++r) {
    evaluations += results[r]->evaluations;
    if (r + 1 == total) before_last = running;
    if (results[r]->value < running) {
      running = results[r]->value;
      best = r;
    }
  }
  bool converged = results[best]->step_converged;
  if (total >= 2) converged = converged && (before_last - running <= cfg.step_tolerance);

  return EstimateResult{results[best]->value, std::move(results[best]->ensemble), converged, evaluations,
                        static_cast<int>(best), cfg.seed};
}

} // namespace

EstimateResult extension_measure(const DensityMatrixd& rho, const PureMeasure& m, const OptimizerConfig& cfg,
                                 std::span<const Ensembled> warm_starts) {
  return estimate(rho, m, cfg, warm_starts, Objective::Extension);
}

EstimateResult convex_roof(const DensityMatrixd& rho, const PureMeasure& m, const OptimizerConfig& cfg,
                           std::span<const Ensembled> warm_starts) {
  return estimate(rho, m, cfg, warm_starts, Objective::Roof);
}

} // namespace qext
