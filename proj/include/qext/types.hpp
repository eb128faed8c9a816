#pragma once

#include <complex>

#include <Eigen/Dense>

namespace qext {

template <typename Real>
using CMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using CVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;
template <typename Real>
using RVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

using CMatrixd = CMatrix<double>;
using CVectord = CVector<double>;
using RVectord = RVector<double>;

enum class Side { A, B };

namespace tol {
inline constexpr double kNorm = 1e-10;       // |‖ψ‖ − 1|
inline constexpr double kHermitian = 1e-10;  // max |ρ − ρ†| entrywise
inline constexpr double kPsd = 1e-10;        // smallest eigenvalue ≥ −kPsd
inline constexpr double kTrace = 1e-10;      // |Tr ρ − 1|
inline constexpr double kSchmidtCutoff = 1e-12;
inline constexpr double kProbabilitySum = 1e-9;
inline constexpr double kMajorization = 1e-9;
inline constexpr double kRankCutoff = 1e-10;  // eigenvalues of ρ
inline constexpr double kIsometry = 1e-9;
} // namespace tol

} // namespace qext
