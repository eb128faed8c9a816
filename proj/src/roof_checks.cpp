#include <cmath>

#include <unsupported/Eigen/KroneckerProduct>

#include "qext/roof.hpp"

namespace qext {

KrausChannel::KrausChannel(std::vector<CMatrixd> operators, Side side)
    : operators_(std::move(operators)), side_(side) {
  if (operators_.empty()) throw ArgumentError("Kraus channel needs at least one operator");
  const Eigen::Index rows = operators_.front().rows(), cols = operators_.front().cols();
  CMatrixd sum = CMatrixd::Zero(cols, cols);
  for (const auto& k : operators_) {
    if (k.rows() != rows || k.cols() != cols) throw ArgumentError("Kraus operators must share one shape");
    sum += k.adjoint() * k;
  }
  const double err = (sum - CMatrixd::Identity(cols, cols)).cwiseAbs().maxCoeff();
  if (err > tol::kIsometry) throw ValidationError("Kraus completeness sum K^dag K = I", err);
}

KrausChannel KrausChannel::identity(int dim, Side side) { return KrausChannel({CMatrixd::Identity(dim, dim)}, side); }

KrausChannel KrausChannel::computational_measurement(int dim, Side side) {
  std::vector<CMatrixd> ops;
  for (int j = 0; j < dim; ++j) {
    CMatrixd p = CMatrixd::Zero(dim, dim);
    p(j, j) = 1.0;
    ops.push_back(std::move(p));
  }
  return KrausChannel(std::move(ops), side);
}

KrausChannel KrausChannel::random_measurement(int dim, int outcomes, Side side, Rng& rng) {
  if (dim < 1 || outcomes < 1) throw ArgumentError("random_measurement: dim and outcomes must be positive");
  // Row (i, j) of the isometry maps to output i of outcome j.
  const CMatrixd v = random_isometry<double>(Eigen::Index(dim) * outcomes, dim, rng);
  std::vector<CMatrixd> ops;
  for (int j = 0; j < outcomes; ++j) {
    CMatrixd k(dim, dim);
    for (int i = 0; i < dim; ++i) k.row(i) = v.row(Eigen::Index(i) * outcomes + j);
    ops.push_back(std::move(k));
  }
  return KrausChannel(std::move(ops), side);
}

std::vector<Branch> apply_unilocal_channel(const DensityMatrixd& rho, const KrausChannel& ch) {
  const int local = ch.side() == Side::A ? rho.dim_a() : rho.dim_b();
  if (ch.local_dim() != local)
    throw ArgumentError("channel acts on dimension " + std::to_string(ch.local_dim()) + " but the factor has " +
                        std::to_string(local));
  const int out_dim = static_cast<int>(ch.operators().front().rows());
  const int da = ch.side() == Side::A ? out_dim : rho.dim_a();
  const int db = ch.side() == Side::B ? out_dim : rho.dim_b();
  std::vector<Branch> out;
  double total = 0.0;
  for (const auto& k : ch.operators()) {
    const CMatrixd full = ch.side() == Side::B
                              ? CMatrixd(Eigen::kroneckerProduct(CMatrixd::Identity(rho.dim_a(), rho.dim_a()), k))
                              : CMatrixd(Eigen::kroneckerProduct(k, CMatrixd::Identity(rho.dim_b(), rho.dim_b())));
    const CMatrixd num = full * rho.matrix() * full.adjoint();
    const double q = num.trace().real();
    total += q;
    if (q < 1e-12) continue;
    out.push_back(Branch{q, DensityMatrixd::normalized(da, db, num)});
  }
  if (std::abs(total - 1.0) > tol::kProbabilitySum)
    throw ValidationError("branch probabilities sum to 1", std::abs(total - 1.0));
  return out;
}

namespace {

void require_flag(bool flag, const PureMeasure& m, const char* what) {
  if (!flag) throw ArgumentError("measure '" + m.id() + "' is not flagged " + what);
}

Estimator extension_estimator(const PureMeasure& m, const OptimizerConfig& cfg) {
  return [&m, cfg](const DensityMatrixd& r) { return extension_measure(r, m, cfg).value; };
}

} // namespace

double check_monotonicity_iii(const DensityMatrixd& rho, const Estimator& estimate, const KrausChannel& ch) {
  double after = 0.0;
  for (const auto& b : apply_unilocal_channel(rho, ch)) after += b.probability * estimate(b.state);
  return estimate(rho) - after;
}

double check_monotonicity_iii(const DensityMatrixd& rho, const PureMeasure& m, const KrausChannel& ch,
                              const OptimizerConfig& cfg) {
  require_flag(m.flags().concave_f, m, "concave_f");
  return check_monotonicity_iii(rho, extension_estimator(m, cfg), ch);
}

double check_block_diagonal(const DensityMatrixd& sigma1, const DensityMatrixd& sigma2, double p1,
                            const Estimator& estimate) {
  if (sigma1.dim_a() != sigma2.dim_a() || sigma1.dim_b() != sigma2.dim_b())
    throw ArgumentError("block states must share dimensions");
  if (!(p1 >= 0.0 && p1 <= 1.0)) throw ArgumentError("p1 must lie in [0, 1]");
  const Support s1 = support_of(sigma1), s2 = support_of(sigma2);
  const double overlap = (s1.vectors.adjoint() * s2.vectors).norm();
  if (overlap > 1e-10) throw ArgumentError("block supports overlap (magnitude " + std::to_string(overlap) + ")");
  const double p2 = 1.0 - p1;
  const DensityMatrixd mix =
      DensityMatrixd::normalized(sigma1.dim_a(), sigma1.dim_b(), p1 * sigma1.matrix() + p2 * sigma2.matrix());
  double blocks = 0.0;
  if (p1 > 0.0) blocks += p1 * estimate(sigma1);
  if (p2 > 0.0) blocks += p2 * estimate(sigma2);
  return blocks - estimate(mix);
}

double check_block_diagonal(const DensityMatrixd& sigma1, const DensityMatrixd& sigma2, double p1,
                            const PureMeasure& m, const OptimizerConfig& cfg) {
  require_flag(m.flags().convex_on_spectra, m, "convex_on_spectra");
  return check_block_diagonal(sigma1, sigma2, p1, extension_estimator(m, cfg));
}

double check_subadditivity(const DensityMatrixd& rho, const Estimator& estimate) {
  if (rho.rank() > 2)
    throw ArgumentError("subadditivity check needs rank(rho) <= 2, got " + std::to_string(rho.rank()));
  return 2.0 * estimate(rho) - estimate(tensor_product(rho, rho));
}

double check_subadditivity(const DensityMatrixd& rho, const PureMeasure& m, const OptimizerConfig& cfg) {
  require_flag(m.flags().subadditive, m, "subadditive");
  return check_subadditivity(rho, extension_estimator(m, cfg));
}

} // namespace qext
