#pragma once

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qext/errors.hpp"
#include "qext/schmidt_vector.hpp"
#include "qext/types.hpp"

namespace qext {

template <typename Real>
class DensityMatrix;

/// Normalized bipartite state vector, amplitudes row-major over (i_A, i_B).
template <typename Real = double>
class PureState {
public:
  using Scalar = std::complex<Real>;
  using Vector = CVector<Real>;
  using Matrix = CMatrix<Real>;

  PureState(int dim_a, int dim_b, Vector amplitudes)
      : dim_a_(dim_a), dim_b_(dim_b), amplitudes_(std::move(amplitudes)) {
    check_dims(dim_a_, dim_b_, amplitudes_.size());
    const Real gap = std::abs(amplitudes_.norm() - Real(1));
    if (gap > Real(tol::kNorm)) throw ValidationError("state normalization", static_cast<double>(gap));
  }

  /// Rescales `v` to unit norm before validating; rejects the zero vector.
  static PureState normalized(int dim_a, int dim_b, Vector v) {
    const Real n = v.norm();
    if (!(n > Real(0))) throw ValidationError("state normalization", 1.0);
    v /= n;
    return PureState(dim_a, dim_b, std::move(v));
  }

  /// |i⟩_A ⊗ |j⟩_B.
  static PureState basis(int dim_a, int dim_b, int i, int j) {
    Vector v = Vector::Zero(Eigen::Index(dim_a) * dim_b);
    v[Eigen::Index(i) * dim_b + j] = Scalar(1);
    return PureState(dim_a, dim_b, std::move(v));
  }

  int dim_a() const noexcept { return dim_a_; }
  int dim_b() const noexcept { return dim_b_; }
  int dim() const noexcept { return dim_a_ * dim_b_; }
  const Vector& amplitudes() const noexcept { return amplitudes_; }

  /// The dim_a × dim_b coefficient matrix M with ψ = Σ M_ij |i⟩|j⟩.
  Matrix coefficient_matrix() const {
    Matrix m(dim_a_, dim_b_);
    for (int i = 0; i < dim_a_; ++i)
      for (int j = 0; j < dim_b_; ++j) m(i, j) = amplitudes_[Eigen::Index(i) * dim_b_ + j];
    return m;
  }

  DensityMatrix<Real> projector() const;

  static void check_dims(int dim_a, int dim_b, Eigen::Index length) {
    if (dim_a < 1 || dim_b < 1) throw ArgumentError("local dimensions must be positive");
    if (Eigen::Index(dim_a) * dim_b != length)
      throw ValidationError("dim_a*dim_b equals amplitude length",
                            static_cast<double>(length - Eigen::Index(dim_a) * dim_b));
  }

private:
  int dim_a_;
  int dim_b_;
  Vector amplitudes_;
};

/// Hermitian, PSD, unit-trace operator on C^{dim_a} ⊗ C^{dim_b}.
template <typename Real = double>
class DensityMatrix {
public:
  using Scalar = std::complex<Real>;
  using Matrix = CMatrix<Real>;

  DensityMatrix(int dim_a, int dim_b, Matrix matrix)
      : dim_a_(dim_a), dim_b_(dim_b), matrix_(std::move(matrix)) {
    if (dim_a_ < 1 || dim_b_ < 1) throw ArgumentError("local dimensions must be positive");
    if (matrix_.rows() != matrix_.cols() || matrix_.rows() != Eigen::Index(dim_a_) * dim_b_)
      throw ValidationError("matrix order equals dim_a*dim_b",
                            static_cast<double>(matrix_.rows() - Eigen::Index(dim_a_) * dim_b_));
    const Real herm = (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
    if (herm > Real(tol::kHermitian)) throw ValidationError("Hermiticity", static_cast<double>(herm));
    const Real tr_gap = std::abs(matrix_.trace() - Scalar(1));
    if (tr_gap > Real(tol::kTrace)) throw ValidationError("unit trace", static_cast<double>(tr_gap));
    const Real lmin = eigenvalues().minCoeff();
    if (lmin < -Real(tol::kPsd)) throw ValidationError("positive semidefiniteness", static_cast<double>(-lmin));
  }

  /// Divides by the trace first; for branch states produced by channels.
  static DensityMatrix normalized(int dim_a, int dim_b, Matrix m) {
    const Real tr = m.trace().real();
    if (!(tr > Real(0))) throw ValidationError("unit trace", 1.0);
    m /= tr;
    m = (m + m.adjoint()).eval() * Real(0.5);
    return DensityMatrix(dim_a, dim_b, std::move(m));
  }

  static DensityMatrix maximally_mixed(int dim_a, int dim_b) {
    const Eigen::Index n = Eigen::Index(dim_a) * dim_b;
    return DensityMatrix(dim_a, dim_b, Matrix::Identity(n, n) / Real(n));
  }

  int dim_a() const noexcept { return dim_a_; }
  int dim_b() const noexcept { return dim_b_; }
  int dim() const noexcept { return dim_a_ * dim_b_; }
  const Matrix& matrix() const noexcept { return matrix_; }

  /// Ascending eigenvalues.
  RVector<Real> eigenvalues() const {
    Eigen::SelfAdjointEigenSolver<Matrix> es(matrix_, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
  }

  int rank(Real cutoff = Real(tol::kRankCutoff)) const {
    return static_cast<int>((eigenvalues().array() > cutoff).count());
  }

  Real purity() const { return (matrix_ * matrix_).trace().real(); }

private:
  int dim_a_;
  int dim_b_;
  Matrix matrix_;
};

template <typename Real>
DensityMatrix<Real> PureState<Real>::projector() const {
  return DensityMatrix<Real>(dim_a_, dim_b_, amplitudes_ * amplitudes_.adjoint());
}

template <typename Real = double>
struct SchmidtDecomposition {
  SchmidtVector<Real> coefficients;
  CMatrix<Real> left_basis;   // dim_a × r
  CMatrix<Real> right_basis;  // dim_b × r
  int rank;
};

/// ψ = Σ_k √λ_k u_k ⊗ v_k with λ sorted nonincreasing and λ_k > rank_cutoff.
template <typename Real>
SchmidtDecomposition<Real> schmidt_decompose(const PureState<Real>& psi,
                                             Real rank_cutoff = Real(tol::kSchmidtCutoff)) {
  const CMatrix<Real> m = psi.coefficient_matrix();
  Eigen::JacobiSVD<CMatrix<Real>> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RVector<Real> s = svd.singularValues();  // already nonincreasing
  int r = 0;
  while (r < s.size() && s[r] * s[r] > rank_cutoff) ++r;
  RVector<Real> lambda = s.head(r).cwiseAbs2();
  return SchmidtDecomposition<Real>{SchmidtVector<Real>(std::move(lambda)), svd.matrixU().leftCols(r),
                                    svd.matrixV().leftCols(r).conjugate(), r};
}

template <typename Real>
CVector<Real> reconstruct(const SchmidtDecomposition<Real>& d) {
  const Eigen::Index da = d.left_basis.rows(), db = d.right_basis.rows();
  CVector<Real> v = CVector<Real>::Zero(da * db);
  for (int k = 0; k < d.rank; ++k) {
    const Real w = std::sqrt(d.coefficients[k]);
    for (Eigen::Index i = 0; i < da; ++i)
      for (Eigen::Index j = 0; j < db; ++j) v[i * db + j] += w * d.left_basis(i, k) * d.right_basis(j, k);
  }
  return v;
}

/// μ↓(ψ) padded to min(dim_a, dim_b); entries at or below the cutoff read as zero.
template <typename Real>
SchmidtVector<Real> schmidt_vector(const PureState<Real>& psi, Real rank_cutoff = Real(tol::kSchmidtCutoff)) {
  Eigen::JacobiSVD<CMatrix<Real>> svd(psi.coefficient_matrix());
  RVector<Real> lambda = svd.singularValues().cwiseAbs2();
  for (Eigen::Index i = 0; i < lambda.size(); ++i)
    if (lambda[i] <= rank_cutoff) lambda[i] = Real(0);
  lambda /= lambda.sum();
  return SchmidtVector<Real>::from_unsorted(std::move(lambda));
}

/// Reduced operator on the kept side of a bipartite operator of order dim_a·dim_b.
template <typename Derived>
CMatrix<typename Derived::RealScalar> partial_trace(const Eigen::MatrixBase<Derived>& rho, int dim_a, int dim_b,
                                                    Side keep) {
  using Real = typename Derived::RealScalar;
  if (rho.rows() != Eigen::Index(dim_a) * dim_b || rho.cols() != rho.rows())
    throw ArgumentError("matrix order inconsistent with dimension metadata");
  if (keep == Side::A) {
    CMatrix<Real> out = CMatrix<Real>::Zero(dim_a, dim_a);
    for (int i = 0; i < dim_a; ++i)
      for (int j = 0; j < dim_a; ++j)
        for (int b = 0; b < dim_b; ++b) out(i, j) += rho(i * dim_b + b, j * dim_b + b);
    return out;
  }
  CMatrix<Real> out = CMatrix<Real>::Zero(dim_b, dim_b);
  for (int i = 0; i < dim_b; ++i)
    for (int j = 0; j < dim_b; ++j)
      for (int a = 0; a < dim_a; ++a) out(i, j) += rho(a * dim_b + i, a * dim_b + j);
  return out;
}

template <typename Real>
CMatrix<Real> partial_trace(const DensityMatrix<Real>& rho, Side keep) {
  return partial_trace(rho.matrix(), rho.dim_a(), rho.dim_b(), keep);
}

namespace detail {
// Maps ((iA,iB),(iA',iB')) of the plain Kronecker product onto ((iA,iA'),(iB,iB')).
inline std::vector<Eigen::Index> tensor_permutation(int da, int db, int da2, int db2) {
  std::vector<Eigen::Index> perm(std::size_t(da) * db * da2 * db2);
  for (int a = 0; a < da; ++a)
    for (int b = 0; b < db; ++b)
      for (int a2 = 0; a2 < da2; ++a2)
        for (int b2 = 0; b2 < db2; ++b2) {
          const Eigen::Index kron = ((Eigen::Index(a) * db + b) * da2 + a2) * db2 + b2;
          const Eigen::Index grouped = (Eigen::Index(a) * da2 + a2) * (Eigen::Index(db) * db2) + Eigen::Index(b) * db2 + b2;
          perm[std::size_t(kron)] = grouped;
        }
  return perm;
}
} // namespace detail

/// ψ ⊗ φ on the bipartition (AA'|BB').
template <typename Real>
PureState<Real> tensor_product(const PureState<Real>& x, const PureState<Real>& y) {
  const auto perm = detail::tensor_permutation(x.dim_a(), x.dim_b(), y.dim_a(), y.dim_b());
  CVector<Real> out(x.dim() * y.dim());
  for (Eigen::Index i = 0; i < x.dim(); ++i)
    for (Eigen::Index j = 0; j < y.dim(); ++j)
      out[perm[std::size_t(i * y.dim() + j)]] = x.amplitudes()[i] * y.amplitudes()[j];
  return PureState<Real>::normalized(x.dim_a() * y.dim_a(), x.dim_b() * y.dim_b(), std::move(out));
}

/// ρ ⊗ σ on the bipartition (AA'|BB').
template <typename Real>
DensityMatrix<Real> tensor_product(const DensityMatrix<Real>& x, const DensityMatrix<Real>& y) {
  const auto perm = detail::tensor_permutation(x.dim_a(), x.dim_b(), y.dim_a(), y.dim_b());
  const Eigen::Index n = Eigen::Index(x.dim()) * y.dim();
  CMatrix<Real> out(n, n);
  for (Eigen::Index i = 0; i < x.dim(); ++i)
    for (Eigen::Index j = 0; j < y.dim(); ++j)
      for (Eigen::Index k = 0; k < x.dim(); ++k)
        for (Eigen::Index l = 0; l < y.dim(); ++l)
          out(perm[std::size_t(i * y.dim() + j)], perm[std::size_t(k * y.dim() + l)]) =
              x.matrix()(i, k) * y.matrix()(j, l);
  return DensityMatrix<Real>::normalized(x.dim_a() * y.dim_a(), x.dim_b() * y.dim_b(), std::move(out));
}

/// ½‖ρ − σ‖₁.
template <typename Real>
Real trace_distance(const DensityMatrix<Real>& rho, const DensityMatrix<Real>& sigma) {
  if (rho.dim_a() != sigma.dim_a() || rho.dim_b() != sigma.dim_b())
    throw ArgumentError("trace_distance: dimension mismatch");
  const CMatrix<Real> diff = rho.matrix() - sigma.matrix();
  Eigen::SelfAdjointEigenSolver<CMatrix<Real>> es(diff, Eigen::EigenvaluesOnly);
  return std::min(Real(1), Real(0.5) * es.eigenvalues().cwiseAbs().sum());
}

using PureStated = PureState<double>;
using DensityMatrixd = DensityMatrix<double>;
using SchmidtDecompositiond = SchmidtDecomposition<double>;

} // namespace qext
