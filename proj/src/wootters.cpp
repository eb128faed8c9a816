#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "qext/roof.hpp"

namespace qext {

namespace {

void require_two_qubits(const DensityMatrixd& rho) {
  if (rho.dim_a() != 2 || rho.dim_b() != 2)
    throw ArgumentError("Wootters concurrence needs a 2x2 system, got " + std::to_string(rho.dim_a()) + "x" +
                        std::to_string(rho.dim_b()));
}

// σ_y ⊗ σ_y in the computational basis.
CMatrixd spin_flip() {
  CMatrixd s = CMatrixd::Zero(4, 4);
  s(0, 3) = -1.0;
  s(1, 2) = 1.0;
  s(2, 1) = 1.0;
  s(3, 0) = -1.0;
  return s;
}

CMatrixd subnormalized_eigenvectors(const DensityMatrixd& rho) {
  const Support sup = support_of(rho);
  return sup.vectors * sup.values.cwiseSqrt().asDiagonal();
}

// Real orthogonal Q whose rows q satisfy qᵀKq = 0, for symmetric traceless K.
Eigen::MatrixXd zero_diagonalizer(const Eigen::MatrixXd& k) {
  const Eigen::Index m = k.rows();
  if (m == 1) return Eigen::MatrixXd::Identity(1, 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(k);
  const double lo = es.eigenvalues()[0], hi = es.eigenvalues()[m - 1];
  if (hi - lo < 1e-15) return Eigen::MatrixXd::Identity(m, m);
  const double c2 = std::clamp(-lo / (hi - lo), 0.0, 1.0);
  const Eigen::VectorXd x = std::sqrt(c2) * es.eigenvectors().col(m - 1) + std::sqrt(1.0 - c2) * es.eigenvectors().col(0);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(x);
  const Eigen::MatrixXd full = qr.householderQ() * Eigen::MatrixXd::Identity(m, m);
  const Eigen::MatrixXd rest = full.rightCols(m - 1);
  Eigen::MatrixXd sub = rest.transpose() * k * rest;
  sub = 0.5 * (sub + sub.transpose()).eval();
  const Eigen::MatrixXd inner = zero_diagonalizer(sub);
  Eigen::MatrixXd q(m, m);
  q.row(0) = x.transpose();
  q.bottomRows(m - 1) = inner * rest.transpose();
  return q;
}

// Takagi factor: unitary Q with τ conj(Q) = Q diag(σ), σ nonincreasing.
void takagi(const CMatrixd& tau, CMatrixd& q, RVectord& sigma) {
  const Eigen::Index n = tau.rows();
  Eigen::MatrixXd h(2 * n, 2 * n);
  h << tau.real(), tau.imag(), tau.imag(), -tau.real();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  const double scale = std::max(1.0, std::abs(es.eigenvalues()[2 * n - 1]));
  q.resize(n, n);
  sigma.resize(n);
  Eigen::Index pos = 0;
  for (Eigen::Index i = 2 * n - 1; i >= n && es.eigenvalues()[i] > 1e-10 * scale; --i, ++pos) {
    const Eigen::VectorXd v = es.eigenvectors().col(i);
    q.col(pos) = (v.head(n).cast<std::complex<double>>() + std::complex<double>(0, 1) * v.tail(n)).normalized();
    sigma[pos] = es.eigenvalues()[i];
  }
  if (pos < n) {
    Eigen::JacobiSVD<CMatrixd> svd(tau, Eigen::ComputeFullV);
    for (Eigen::Index j = pos; j < n; ++j) {
      q.col(j) = svd.matrixV().col(j).conjugate();
      sigma[j] = 0.0;
    }
  }
}

} // namespace

double wootters_concurrence(const DensityMatrixd& rho) {
  require_two_qubits(rho);
  // Singular values of τ = V†(σ_y⊗σ_y)V* over subnormalized eigenvectors equal the
  // square roots of the eigenvalues of ρ(σ_y⊗σ_y)ρ*(σ_y⊗σ_y), without the square root
  // amplifying rounding near zero.
  const CMatrixd v = subnormalized_eigenvectors(rho);
  const CMatrixd tau = v.adjoint() * spin_flip() * v.conjugate();
  Eigen::Vector4d nu = Eigen::Vector4d::Zero();
  nu.head(tau.rows()) = Eigen::JacobiSVD<CMatrixd>(tau).singularValues();
  return std::max(0.0, nu[0] - nu[1] - nu[2] - nu[3]);
}

Ensembled wootters_flat_ensemble(const DensityMatrixd& rho) {
  require_two_qubits(rho);
  const CMatrixd v = subnormalized_eigenvectors(rho);
  const Eigen::Index n = v.cols();
  const CMatrixd s = spin_flip();
  const CMatrixd tau = v.adjoint() * s * v.conjugate();

  CMatrixd q;
  RVectord sigma;
  takagi(0.5 * (tau + tau.transpose()), q, sigma);

  // Columns x_j with ⟨x_i|σ_y⊗σ_y|x_j*⟩ = λ_j δ_ij.
  CMatrixd x = CMatrixd::Zero(4, 4);
  x.leftCols(n) = v * q;
  Eigen::Vector4d lambda = Eigen::Vector4d::Zero();
  lambda.head(n) = sigma;
  const double c = lambda[0] - lambda[1] - lambda[2] - lambda[3];

  CMatrixd z(4, 4);
  if (c > 0.0) {
    CMatrixd y = x;
    for (int j = 1; j < 4; ++j) y.col(j) *= std::complex<double>(0, 1);
    Eigen::Matrix4d k = Eigen::Vector4d(lambda[0], -lambda[1], -lambda[2], -lambda[3]).asDiagonal();
    k -= c * (y.adjoint() * y).real();
    k = 0.5 * (k + k.transpose()).eval();
    k.diagonal().array() -= k.trace() / 4.0;
    const Eigen::MatrixXd rot = zero_diagonalizer(k);
    z = y * rot.transpose().cast<std::complex<double>>();
  } else {
    // Phases closing the polygon Σ λ_j e^{iφ_j} = 0.
    const double l1 = lambda[0], l2 = lambda[1], l3 = lambda[2], l4 = lambda[3];
    const double len = std::max(l1 - l2, l3 - l4);
    double phi[4] = {0, 0, 0, 0};
    if (l2 > 0.0)
      phi[1] = std::acos(std::clamp((len * len - l1 * l1 - l2 * l2) / (2 * l1 * l2), -1.0, 1.0));
    else
      phi[1] = std::numbers::pi;
    const std::complex<double> w = -(l1 + std::polar(l2, phi[1]));
    const double omega = std::arg(w);
    if (len < 1e-15 || l3 == 0.0) {
      phi[2] = omega;
    } else {
      phi[2] = omega + std::acos(std::clamp((len * len + l3 * l3 - l4 * l4) / (2 * len * l3), -1.0, 1.0));
    }
    const std::complex<double> rem = w - std::polar(l3, phi[2]);
    phi[3] = std::abs(rem) > 0.0 ? std::arg(rem) : phi[2] + std::numbers::pi;
    const double signs[4][4] = {{1, 1, 1, 1}, {1, 1, -1, -1}, {1, -1, 1, -1}, {1, -1, -1, 1}};
    z.setZero();
    for (int kk = 0; kk < 4; ++kk)
      for (int j = 0; j < 4; ++j) z.col(kk) += 0.5 * signs[kk][j] * std::polar(1.0, phi[j] / 2.0) * x.col(j);
  }

  std::vector<EnsembleMember<double>> members;
  double total = 0.0;
  for (int kk = 0; kk < 4; ++kk) {
    const double w = z.col(kk).squaredNorm();
    if (w < 1e-14) continue;
    members.push_back({w, PureStated::normalized(2, 2, z.col(kk))});
    total += w;
  }
  for (auto& m : members) m.weight /= total;
  return Ensembled(std::move(members));
}

} // namespace qext
