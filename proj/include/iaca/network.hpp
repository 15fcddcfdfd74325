#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "iaca/filter.hpp"
#include "iaca/weights.hpp"

namespace iaca {

/// Input/desired sample pairs observed by one node.
struct NodeStream {
  Eigen::VectorXcd input;
  Eigen::VectorXcd desired;
};

/// One-step-ahead prediction: x(n) = s(n-1), d(n) = s(n).
NodeStream make_prediction_task(const Eigen::VectorXcd& signal);

/// Per-run log. Columns are node indices, rows are time steps.
struct RunRecord {
  Eigen::MatrixXcd errors;
  Eigen::MatrixXcd outputs;  // empty unless RunOptions::keep_outputs
  /// The circulating estimate for incremental runs; one vector per node otherwise.
  std::vector<WeightVector> final_weights;
  std::size_t divergence_events = 0;
  std::size_t weight_updates = 0;

  Eigen::Index iterations() const noexcept { return errors.rows(); }
  Eigen::Index nodes() const noexcept { return errors.cols(); }
  Eigen::MatrixXd squared_errors() const { return errors.cwiseAbs2(); }

  friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

/// L nodes on a Hamiltonian cycle, each with private data and filter memory.
class RingNetwork {
 public:
  RingNetwork(const FilterConfig& config, std::vector<NodeStream> streams, double mu);

  std::size_t size() const noexcept { return streams_.size(); }
  const FilterConfig& config() const noexcept { return config_; }

  const std::vector<NodeStream>& streams() const noexcept { return streams_; }
  const std::vector<FilterState<double>>& states() const noexcept { return states_; }
  std::vector<FilterState<double>>& states() noexcept { return states_; }

  const Eigen::VectorXd& step_sizes() const noexcept { return mu_; }
  void set_step_sizes(Eigen::VectorXd mu);

  /// Visiting order around the ring; node indices, a permutation of 0..L-1.
  const std::vector<std::size_t>& order() const noexcept { return order_; }
  void set_order(std::vector<std::size_t> order);

  const WeightVector& global_estimate() const noexcept { return phi_; }
  void set_global_estimate(WeightVector phi);

  Eigen::Index min_stream_length() const;

  /// Inputs of all nodes, iterations x L, for gain computations.
  Eigen::MatrixXcd inputs(Eigen::Index iterations) const;

 private:
  FilterConfig config_;
  std::vector<NodeStream> streams_;
  std::vector<FilterState<double>> states_;
  Eigen::VectorXd mu_;
  std::vector<std::size_t> order_;
  WeightVector phi_;
};

/// Called after every weight mutation with (time step, node index, new weights).
using WeightObserver = std::function<void(Eigen::Index, std::size_t, const WeightVector&)>;

struct RunOptions {
  bool keep_outputs = false;
  WeightObserver on_update;
};

/// Incremental cooperation: at each n the estimate enters the first node of the
/// ring as phi(n-1), every node applies one adapt_step with its own data and
/// memory, and the last node's result becomes phi(n). Mutates the network.
RunRecord iaca_iir_run(RingNetwork& net, Eigen::Index iterations, const RunOptions& options = {});

/// Non-cooperative baseline: every node adapts its own copy of the initial
/// global estimate and nothing is exchanged.
RunRecord noncoop_run(RingNetwork& net, Eigen::Index iterations, const RunOptions& options = {});

}  // namespace iaca
