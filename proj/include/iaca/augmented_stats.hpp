#pragma once

#include <cmath>
#include <complex>

#include <Eigen/Core>

#include "iaca/errors.hpp"

namespace iaca {

/// Second-order moments of a univariate complex stream.
template <typename Real>
struct BasicAugmentedStats {
  using Scalar = std::complex<Real>;

  Scalar covariance;        // E[z z*]
  Scalar pseudocovariance;  // E[z z]
  Scalar circularity_quotient;

  /// [[C, P], [P*, C*]], the augmented covariance of the scalar stream.
  Eigen::Matrix<Scalar, 2, 2> augmented_covariance() const {
    Eigen::Matrix<Scalar, 2, 2> out;
    out << covariance, pseudocovariance, std::conj(pseudocovariance), std::conj(covariance);
    return out;
  }
};

using AugmentedStats = BasicAugmentedStats<double>;

/// Raw (non mean-removed unless asked) sample covariance and pseudocovariance.
template <typename Derived>
auto sample_augmented_stats(const Eigen::MatrixBase<Derived>& samples, bool remove_mean = false) {
  using Scalar = typename Derived::Scalar;
  using Real = typename Scalar::value_type;

  if (samples.size() < 2) {
    throw InvalidInput("augmented statistics need at least two samples");
  }
  if (!samples.allFinite()) {
    throw InvalidInput("augmented statistics got a non-finite sample");
  }

  const auto count = static_cast<Real>(samples.size());
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> z = samples.reshaped();
  if (remove_mean) {
    z.array() -= z.mean();
  }

  BasicAugmentedStats<Real> stats;
  stats.covariance = Scalar(z.squaredNorm() / count, Real(0));
  stats.pseudocovariance = (z.array() * z.array()).sum() / count;
  stats.circularity_quotient = stats.covariance.real() > Real(0)
                                   ? stats.pseudocovariance / stats.covariance.real()
                                   : Scalar(0);
  return stats;
}

}  // namespace iaca
