#pragma once

#include <cmath>
#include <initializer_list>
#include <utility>

#include "qext/state.hpp"

namespace qext::test {

// Real amplitudes on a dA×dB grid given as {(index, value)} pairs; normalized.
inline PureStated pure(int da, int db, std::initializer_list<std::pair<int, double>> entries) {
  CVectord v = CVectord::Zero(Eigen::Index(da) * db);
  for (const auto& [i, x] : entries) v[i] = x;
  return PureStated::normalized(da, db, v);
}

inline PureStated bell() { return pure(2, 2, {{0, 1.0}, {3, 1.0}}); }

inline DensityMatrixd mix(double p, const DensityMatrixd& a, const DensityMatrixd& b) {
  return DensityMatrixd(a.dim_a(), a.dim_b(), p * a.matrix() + (1 - p) * b.matrix());
}

inline double max_abs(const CMatrixd& m) { return m.cwiseAbs().maxCoeff(); }

} // namespace qext::test
