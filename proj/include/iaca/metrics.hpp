#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "iaca/errors.hpp"
#include "iaca/filter.hpp"
#include "iaca/network.hpp"
#include "iaca/signals.hpp"

namespace iaca {

/// R_p = 10 log10(sigma_x^2 / sigma_e^2) over a trailing steady-state window.
struct GainReport {
  double sigma_x2 = 0.0;
  double sigma_e2 = 0.0;
  double gain_db = 0.0;
  /// sigma_e2 was exactly zero; gain_db is +infinity.
  bool unbounded = false;
};

namespace detail {
template <typename Derived>
double trailing_power(const Eigen::MatrixBase<Derived>& m, double fraction) {
  const auto rows = m.rows();
  auto window = static_cast<Eigen::Index>(std::ceil(fraction * static_cast<double>(rows)));
  window = std::clamp<Eigen::Index>(window, 1, rows);
  return m.bottomRows(window).cwiseAbs2().mean();
}
}  // namespace detail

/// Works on vectors (one node) and on iterations x nodes matrices (pooled over nodes).
template <typename DerivedX, typename DerivedE>
GainReport prediction_gain(const Eigen::MatrixBase<DerivedX>& input,
                           const Eigen::MatrixBase<DerivedE>& errors,
                           double steady_fraction = 0.5) {
  if (input.size() == 0 || errors.size() == 0) {
    throw InvalidInput("prediction gain needs non-empty input and error sequences");
  }
  if (!(steady_fraction > 0.0 && steady_fraction <= 1.0)) {
    throw InvalidInput("steady_fraction must lie in (0, 1]");
  }
  GainReport report;
  report.sigma_x2 = detail::trailing_power(input, steady_fraction);
  report.sigma_e2 = detail::trailing_power(errors, steady_fraction);
  if (report.sigma_e2 == 0.0) {
    report.unbounded = true;
    report.gain_db = std::numeric_limits<double>::infinity();
  } else {
    report.gain_db = 10.0 * std::log10(report.sigma_x2 / report.sigma_e2);
  }
  return report;
}

/// Gain of a finished run against the inputs the network saw.
GainReport run_gain(const RingNetwork& net, const RunRecord& record, double steady_fraction = 0.5);

/// Per-iteration mean of |e|^2 over records and nodes, trailing moving
/// average of `smoothing_window` samples (shorter at the start), in dB.
Eigen::VectorXd ensemble_mse(std::span<const RunRecord> records, Eigen::Index smoothing_window = 200);

enum class Algorithm { IacaIir, NonCooperative };

/// "IACA-IIR" or "ACAIIR".
std::string_view to_string(Algorithm algo);
std::optional<Algorithm> parse_algorithm(std::string_view text);

/// One Monte Carlo configuration point.
struct BatchConfig {
  SignalSpec signal;
  FilterConfig filter;
  std::size_t nodes = 10;
  double mu = 1e-3;
  std::size_t seeds = 20;
  std::uint64_t master_seed = 1;
  /// Cap on time steps; unset runs every available sample.
  std::optional<Eigen::Index> iterations;
  /// All nodes observe one realization instead of independent ones.
  bool shared_signal = false;
  /// Measurement noise variance added to the desired stream.
  double noise_sigma2 = 0.0;
  WindLoadOptions wind;
  double steady_fraction = 0.5;
  /// Worker threads for repetitions; 0 picks the hardware concurrency.
  unsigned threads = 0;
};

/// Node streams for repetition `rep`. Data depend only on (master seed, rep, node).
std::vector<NodeStream> build_node_streams(const BatchConfig& config, std::size_t rep);

struct BatchResult {
  Algorithm algo = Algorithm::IacaIir;
  std::vector<double> gains_db;  // one per repetition, in repetition order
  std::size_t divergence_events = 0;
  std::vector<RunRecord> records;  // filled when asked
  double mean_gain_db = 0.0;
  double std_gain_db = 0.0;
};

BatchResult run_batch(const BatchConfig& config, Algorithm algo, bool keep_records = false);

enum class SweepAxis { StepSize, NetworkSize };

struct SweepRow {
  double value = 0.0;
  Algorithm algo = Algorithm::IacaIir;
  double mean_gain_db = 0.0;
  double std_gain_db = 0.0;
  std::size_t n_seeds = 0;
  std::size_t divergence_events = 0;
  /// Non-empty when the point failed; the sweep carries on.
  std::string failure;
};

/// For each value and algorithm, a seeded batch with the axis overridden.
std::vector<SweepRow> sweep(SweepAxis axis, std::span<const double> values,
                            const BatchConfig& base, std::span<const Algorithm> algos);

/// Mean and sample standard deviation (0 for a single value).
std::pair<double, double> mean_and_std(std::span<const double> values);

/// Run `count` independent tasks on up to `threads` workers; task i writes only its own slot.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& task);

}  // namespace iaca
