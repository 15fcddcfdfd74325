#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <type_traits>

#include <Eigen/Core>

#include "iaca/errors.hpp"
#include "iaca/weights.hpp"

namespace iaca {

/// How the Phi/Psi sensitivities are stored and propagated.
///
/// Exact keeps one coupled recursion per coefficient (4(M+N+1) of them).
/// Reduced propagates only the four family heads (a_1, g_1, b_0, h_0) and
/// reads coefficient m as a time-delayed copy of its head. Both use the
/// incoming weights in every recursion coefficient; they agree exactly
/// when the weights are held fixed.
enum class SensitivityMode { Exact, Reduced };

struct FilterConfig {
  Eigen::Index feedback_order = 4;     // M
  Eigen::Index feedforward_order = 4;  // N
  SensitivityMode mode = SensitivityMode::Reduced;
  double divergence_threshold = 1e6;

  void validate() const {
    if (feedback_order < 1) throw InvalidInput("filter feedback order M must be >= 1");
    if (feedforward_order < 0) throw InvalidInput("filter feedforward order N must be >= 0");
    if (!(divergence_threshold > 0.0) || !std::isfinite(divergence_threshold)) {
      throw InvalidInput("divergence threshold must be positive and finite");
    }
  }

  Eigen::Index parameter_count() const {
    return 2 * feedback_order + 2 * (feedforward_order + 1);
  }

  friend bool operator==(const FilterConfig&, const FilterConfig&) = default;
};

/// Per-node memory of a widely linear IIR filter: signal delay lines plus
/// the sensitivity delay lines Phi = dy*/dw* and Psi = dy/dw*.
///
/// Single owner; copying is cheap and gives an independent filter.
template <typename Real>
class FilterState {
 public:
  using Scalar = std::complex<Real>;
  using Vector = ComplexVector<Real>;
  using Weights = BasicWeightVector<Real>;
  using Lines = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  explicit FilterState(const FilterConfig& config) : config_(config) {
    config_.validate();
    const auto m = config_.feedback_order;
    const auto n = config_.feedforward_order;
    x_hist_ = Vector::Zero(n + 1);
    y_hist_ = Vector::Zero(m);
    // Exact: one row per coefficient, columns are lags 0..M-1 after an update.
    // Reduced: one row per family, long enough for the lag-M recursion reads
    // and the delayed copies b_N / a_M.
    const Eigen::Index rows = exact() ? config_.parameter_count() : 4;
    const Eigen::Index depth = exact() ? m : m + std::max(m, n + 1);
    phi_ = Lines::Zero(rows, depth);
    psi_ = Lines::Zero(rows, depth);
  }

  const FilterConfig& config() const noexcept { return config_; }
  bool exact() const noexcept { return config_.mode == SensitivityMode::Exact; }
  Eigen::Index feedback_order() const noexcept { return config_.feedback_order; }
  Eigen::Index feedforward_order() const noexcept { return config_.feedforward_order; }

  /// x(n), x(n-1), ..., x(n-N)
  const Vector& input_history() const noexcept { return x_hist_; }
  /// y(n-1), ..., y(n-M)
  const Vector& output_history() const noexcept { return y_hist_; }
  const Lines& phi_lines() const noexcept { return phi_; }
  const Lines& psi_lines() const noexcept { return psi_; }
  std::size_t divergence_events() const noexcept { return divergence_events_; }

  bool accepts(const Weights& w) const noexcept {
    return w.feedback_order() == feedback_order() && w.feedforward_order() == feedforward_order();
  }

  void push_input(Scalar x) { shift_in(x_hist_, x); }
  void push_output(Scalar y) { shift_in(y_hist_, y); }

  /// Load signal histories directly, with all sensitivities zero. Used to
  /// start a filter mid-stream.
  template <typename X, typename Y>
  void prime(const Eigen::MatrixBase<X>& inputs, const Eigen::MatrixBase<Y>& outputs) {
    if (inputs.size() != x_hist_.size() || outputs.size() != y_hist_.size()) {
      throw InvalidInput("history lengths do not match (M, N)");
    }
    x_hist_ = inputs;
    y_hist_ = outputs;
    phi_.setZero();
    psi_.setZero();
  }

  /// Zero every delay line and count the event. Weights live outside the
  /// state and are untouched.
  void reset_after_divergence() {
    x_hist_.setZero();
    y_hist_.setZero();
    phi_.setZero();
    psi_.setZero();
    ++divergence_events_;
  }

  /// Run one step of the coupled Phi/Psi recursions with weights `w`.
  /// Returns false (after resetting) if any new sensitivity is non-finite or
  /// exceeds the divergence threshold.
  bool update_sensitivities(const Weights& w) {
    check_shape(w);
    const auto m = feedback_order();
    const auto a = w.a();
    const auto g = w.g();

    Vector drive;
    if (exact()) {
      drive.resize(phi_.rows());
      drive << y_hist_.conjugate(), y_hist_, x_hist_.conjugate(), x_hist_;
    } else {
      drive.resize(4);
      drive << std::conj(y_hist_(0)), y_hist_(0), std::conj(x_hist_(0)), x_hist_(0);
    }

    // Before the shift, column l-1 holds the value at lag l.
    const Vector phi_head =
        drive + phi_.leftCols(m) * a.conjugate() + psi_.leftCols(m) * g.conjugate();
    const Vector psi_head = psi_.leftCols(m) * a + phi_.leftCols(m) * g;

    if (!within_bounds(phi_head) || !within_bounds(psi_head)) {
      reset_after_divergence();
      return false;
    }
    shift_columns(phi_, phi_head);
    shift_columns(psi_, psi_head);
    return true;
  }

  /// S(n) = dy*(n)/dw* in flattened weight order.
  Vector conj_output_sensitivity() const { return materialize(phi_); }
  /// P(n) = dy(n)/dw* in flattened weight order.
  Vector output_sensitivity() const { return materialize(psi_); }

  bool within_bounds(const Vector& v) const {
    return v.allFinite() &&
           (v.size() == 0 || v.cwiseAbs().maxCoeff() <= Real(config_.divergence_threshold));
  }
  bool within_bounds(Scalar v) const {
    return std::isfinite(v.real()) && std::isfinite(v.imag()) &&
           std::abs(v) <= Real(config_.divergence_threshold);
  }

  void check_shape(const Weights& w) const {
    if (!accepts(w)) throw InvalidInput("weight vector (M, N) does not match filter state");
  }

 private:
  static void shift_in(Vector& line, Scalar value) {
    const auto len = line.size();
    if (len > 1) line.tail(len - 1) = line.head(len - 1).eval();
    line(0) = value;
  }

  static void shift_columns(Lines& lines, const Vector& head) {
    const auto depth = lines.cols();
    if (depth > 1) lines.rightCols(depth - 1) = lines.leftCols(depth - 1).eval();
    lines.col(0) = head;
  }

  Vector materialize(const Lines& lines) const {
    if (exact()) return lines.col(0);
    const auto m = feedback_order();
    const auto n1 = feedforward_order() + 1;
    Vector out(config_.parameter_count());
    // a_m(n) = a_1(n-m+1), b_m(n) = b_0(n-m)
    out.segment(0, m) = lines.row(0).head(m).transpose();
    out.segment(m, m) = lines.row(1).head(m).transpose();
    out.segment(2 * m, n1) = lines.row(2).head(n1).transpose();
    out.segment(2 * m + n1, n1) = lines.row(3).head(n1).transpose();
    return out;
  }

  FilterConfig config_;
  Vector x_hist_;
  Vector y_hist_;
  Lines phi_;
  Lines psi_;
  std::size_t divergence_events_ = 0;
};

template <typename Real>
struct StepResult {
  BasicWeightVector<Real> weights;
  std::complex<Real> error;
  std::complex<Real> output;
  bool diverged = false;
};

namespace detail {
template <typename Real>
bool finite(std::complex<Real> v) {
  return std::isfinite(v.real()) && std::isfinite(v.imag());
}
}  // namespace detail

/// Push x(n) and return y(n) = a.y + g.y* + b.x + h.x* over the delay lines.
/// y(n) is not pushed; call push_output / advance afterwards.
template <typename Real>
std::complex<Real> filter_output(FilterState<Real>& state, const BasicWeightVector<Real>& w,
                                 std::complex<Real> x) {
  if (!detail::finite(x)) throw InvalidInput("filter input sample is not finite");
  state.check_shape(w);
  state.push_input(x);
  const auto& ys = state.output_history();
  const auto& xs = state.input_history();
  return (w.a().array() * ys.array()).sum() + (w.g().array() * ys.array().conjugate()).sum() +
         (w.b().array() * xs.array()).sum() + (w.h().array() * xs.array().conjugate()).sum();
}

template <typename Real>
bool update_sensitivities(FilterState<Real>& state, const BasicWeightVector<Real>& w) {
  return state.update_sensitivities(w);
}

/// [grad_w J]* = -(e S + P e*), in flattened weight order.
template <typename Real>
ComplexVector<Real> conjugate_gradient(const FilterState<Real>& state, std::complex<Real> e) {
  return -(e * state.conj_output_sensitivity() + state.output_sensitivity() * std::conj(e));
}

template <typename Real>
void advance(FilterState<Real>& state, std::complex<Real> y) {
  state.push_output(y);
}

/// One ACAIIR learning step at a node.
///
/// Order: push input, output with w_in, error, sensitivities with w_in,
/// w_out = w_in + mu (e S + P e*), push output. On divergence the delay
/// lines are zeroed, w_in is returned unchanged and, if the output itself
/// blew up, the step reports y = 0 and e = d.
template <typename Real>
StepResult<Real> adapt_step(FilterState<Real>& state, const BasicWeightVector<Real>& w_in,
                            std::type_identity_t<std::complex<Real>> x,
                            std::type_identity_t<std::complex<Real>> d,
                            std::type_identity_t<Real> mu) {
  if (!(mu >= Real(0)) || !std::isfinite(mu)) {
    throw InvalidInput("step size mu must be finite and >= 0");
  }
  if (!detail::finite(d)) throw InvalidInput("desired sample is not finite");

  const auto y = filter_output(state, w_in, x);
  if (!state.within_bounds(y)) {
    state.reset_after_divergence();
    return {w_in, d, std::complex<Real>(0), true};
  }
  const auto e = d - y;
  if (!state.update_sensitivities(w_in)) {
    return {w_in, e, y, true};
  }

  BasicWeightVector<Real> w_out = w_in;
  w_out.coefficients() -= mu * conjugate_gradient(state, e);
  if (!state.within_bounds(w_out.flatten())) {
    state.reset_after_divergence();
    return {w_in, e, y, true};
  }
  advance(state, y);
  return {std::move(w_out), e, y, false};
}

}  // namespace iaca
