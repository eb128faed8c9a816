#pragma once

#include <algorithm>
#include <functional>
#include <string>

#include "qext/errors.hpp"
#include "qext/types.hpp"

namespace qext {

/// Nonincreasing probability vector of squared Schmidt coefficients.
///
/// Every pure-state measure in the library is a function of this vector, and
/// LOCC convertibility of pure states is decided on it by majorization.
template <typename Real = double>
class SchmidtVector {
public:
  using Vector = RVector<Real>;

  /// Takes entries that are already sorted; rejects anything else.
  explicit SchmidtVector(Vector entries) : entries_(std::move(entries)) { validate(); }

  /// Sorts nonincreasing and clamps round-off negatives (≥ −1e-12) to zero.
  static SchmidtVector from_unsorted(Vector probabilities) {
    for (Eigen::Index i = 0; i < probabilities.size(); ++i) {
      if (probabilities[i] < Real(0) && probabilities[i] > Real(-1e-12)) probabilities[i] = Real(0);
    }
    std::sort(probabilities.begin(), probabilities.end(), std::greater<Real>());
    return SchmidtVector(std::move(probabilities));
  }

  /// (1/r, …, 1/r, 0, …, 0) of total length `length` (defaults to r).
  static SchmidtVector uniform(int r, int length = 0) {
    if (r < 1) throw ArgumentError("uniform Schmidt vector needs r >= 1");
    if (length < r) length = r;
    Vector v = Vector::Zero(length);
    v.head(r).setConstant(Real(1) / Real(r));
    return SchmidtVector(std::move(v));
  }

  const Vector& entries() const noexcept { return entries_; }
  int size() const noexcept { return static_cast<int>(entries_.size()); }
  Real operator[](int i) const { return entries_[i]; }
  Real largest() const { return entries_[0]; }

  /// Zero-pads to `length`; never truncates.
  SchmidtVector padded(int length) const {
    if (length <= size()) return *this;
    Vector v = Vector::Zero(length);
    v.head(size()) = entries_;
    return SchmidtVector(std::move(v));
  }

  /// Σ_{i<k} entries, with entries past the end counted as zero.
  Real partial_sum(int k) const {
    k = std::min(k, size());
    return k <= 0 ? Real(0) : entries_.head(k).sum();
  }

  /// Number of entries above `cutoff`.
  int rank(Real cutoff = Real(tol::kSchmidtCutoff)) const {
    return static_cast<int>((entries_.array() > cutoff).count());
  }

  friend bool operator==(const SchmidtVector& a, const SchmidtVector& b) {
    return a.entries_.size() == b.entries_.size() && a.entries_ == b.entries_;
  }

private:
  void validate() const {
    if (entries_.size() == 0) throw ValidationError("Schmidt vector is empty");
    for (Eigen::Index i = 0; i < entries_.size(); ++i) {
      const Real e = entries_[i];
      if (!(e >= Real(0)) || e > Real(1) + Real(tol::kProbabilitySum))
        throw ValidationError("Schmidt vector entry outside [0,1]", static_cast<double>(e));
      if (i > 0 && e > entries_[i - 1])
        throw ValidationError("Schmidt vector not sorted nonincreasing",
                              static_cast<double>(e - entries_[i - 1]));
    }
    const Real gap = std::abs(entries_.sum() - Real(1));
    if (gap > Real(tol::kProbabilitySum))
      throw ValidationError("Schmidt vector sum equals 1", static_cast<double>(gap));
  }

  Vector entries_;
};

using SchmidtVectord = SchmidtVector<double>;

} // namespace qext
