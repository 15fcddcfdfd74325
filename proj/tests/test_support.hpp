#pragma once

#include <complex>
#include <cstdint>
#include <random>

#include <Eigen/Core>

#include "iaca/weights.hpp"

namespace iaca::test {

inline Eigen::VectorXcd random_complex(Eigen::Index n, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  Eigen::VectorXcd out(n);
  for (auto& v : out) v = {normal(rng), normal(rng)};
  return out;
}

/// Random weights with feedback blocks small enough to keep the filter stable.
inline WeightVector random_weights(Eigen::Index m, Eigen::Index n, std::mt19937_64& rng,
                                   double feedback_scale = 0.1, double feedforward_scale = 0.5) {
  return WeightVector::from_blocks(random_complex(m, rng, feedback_scale),
                                   random_complex(m, rng, feedback_scale),
                                   random_complex(n + 1, rng, feedforward_scale),
                                   random_complex(n + 1, rng, feedforward_scale));
}

inline double relative_error(const Eigen::VectorXcd& got, const Eigen::VectorXcd& want) {
  const double scale = std::max(want.norm(), 1e-300);
  return (got - want).norm() / scale;
}

}  // namespace iaca::test
