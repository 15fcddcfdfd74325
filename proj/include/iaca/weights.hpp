#pragma once

#include <complex>

#include <Eigen/Core>

#include "iaca/errors.hpp"

namespace iaca {

template <typename Real>
using ComplexVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;

/// Stacked widely linear IIR coefficients [a_1..a_M, g_1..g_M, b_0..b_N, h_0..h_N].
///
/// a multiplies y(n-m), g multiplies y*(n-m), b multiplies x(n-m) and h
/// multiplies x*(n-m). The coefficients are stored flat in that order, so
/// flatten() is the storage itself and the block accessors are Eigen segments
/// into it.
template <typename Real>
class BasicWeightVector {
 public:
  using Scalar = std::complex<Real>;
  using Vector = ComplexVector<Real>;

  BasicWeightVector() : BasicWeightVector(1, 0) {}

  /// Zero weights for feedback order `m` (>= 1) and feedforward order `n` (>= 0).
  BasicWeightVector(Eigen::Index m, Eigen::Index n) : m_(m), n_(n) {
    if (m < 1 || n < 0) {
      throw InvalidInput("weight vector needs M >= 1 and N >= 0");
    }
    coeffs_ = Vector::Zero(flat_size(m, n));
  }

  static constexpr Eigen::Index flat_size(Eigen::Index m, Eigen::Index n) {
    return 2 * m + 2 * (n + 1);
  }

  template <typename A, typename G, typename B, typename H>
  static BasicWeightVector from_blocks(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<G>& g,
                                       const Eigen::MatrixBase<B>& b,
                                       const Eigen::MatrixBase<H>& h) {
    if (a.size() != g.size() || b.size() != h.size()) {
      throw InvalidInput("a/g and b/h blocks must have matching lengths");
    }
    BasicWeightVector w(a.size(), b.size() - 1);
    w.a() = a;
    w.g() = g;
    w.b() = b;
    w.h() = h;
    return w;
  }

  template <typename Derived>
  static BasicWeightVector unflatten(Eigen::Index m, Eigen::Index n,
                                     const Eigen::MatrixBase<Derived>& flat) {
    BasicWeightVector w(m, n);
    if (flat.size() != w.size()) {
      throw InvalidInput("flat weight vector length does not match (M, N)");
    }
    w.coeffs_ = flat;
    return w;
  }

  Eigen::Index feedback_order() const noexcept { return m_; }
  Eigen::Index feedforward_order() const noexcept { return n_; }
  Eigen::Index size() const noexcept { return coeffs_.size(); }

  auto a() { return coeffs_.segment(0, m_); }
  auto g() { return coeffs_.segment(m_, m_); }
  auto b() { return coeffs_.segment(2 * m_, n_ + 1); }
  auto h() { return coeffs_.segment(2 * m_ + n_ + 1, n_ + 1); }
  auto a() const { return coeffs_.segment(0, m_); }
  auto g() const { return coeffs_.segment(m_, m_); }
  auto b() const { return coeffs_.segment(2 * m_, n_ + 1); }
  auto h() const { return coeffs_.segment(2 * m_ + n_ + 1, n_ + 1); }

  const Vector& flatten() const noexcept { return coeffs_; }
  Vector& coefficients() noexcept { return coeffs_; }

  bool same_shape(const BasicWeightVector& other) const noexcept {
    return m_ == other.m_ && n_ == other.n_;
  }

  friend bool operator==(const BasicWeightVector& lhs, const BasicWeightVector& rhs) {
    return lhs.same_shape(rhs) && lhs.coeffs_ == rhs.coeffs_;
  }

 private:
  Eigen::Index m_;
  Eigen::Index n_;
  Vector coeffs_;
};

using WeightVector = BasicWeightVector<double>;

}  // namespace iaca
