#include "iaca/network.hpp"

#include <algorithm>
#include <numeric>

namespace iaca {

NodeStream make_prediction_task(const Eigen::VectorXcd& signal) {
  if (signal.size() < 2) throw InvalidInput("prediction task needs at least 2 samples");
  const auto n = signal.size() - 1;
  return {signal.head(n), signal.tail(n)};
}

RingNetwork::RingNetwork(const FilterConfig& config, std::vector<NodeStream> streams, double mu)
    : config_(config),
      streams_(std::move(streams)),
      phi_(config.feedback_order, config.feedforward_order) {
  config_.validate();
  if (streams_.empty()) throw InvalidInput("ring network needs at least one node");
  for (const auto& s : streams_) {
    if (s.input.size() != s.desired.size()) {
      throw InvalidInput("node stream input and desired lengths differ");
    }
  }
  const auto len = streams_.front().input.size();
  for (const auto& s : streams_) {
    if (s.input.size() != len) throw InvalidInput("node streams must have equal lengths");
  }
  states_.assign(streams_.size(), FilterState<double>(config_));
  set_step_sizes(Eigen::VectorXd::Constant(static_cast<Eigen::Index>(streams_.size()), mu));
  order_.resize(streams_.size());
  std::iota(order_.begin(), order_.end(), std::size_t{0});
}

void RingNetwork::set_step_sizes(Eigen::VectorXd mu) {
  if (mu.size() != static_cast<Eigen::Index>(size())) {
    throw InvalidInput("one step size per node is required");
  }
  if (!mu.allFinite() || (mu.array() < 0.0).any()) {
    throw InvalidInput("step sizes mu must be finite and >= 0");
  }
  mu_ = std::move(mu);
}

void RingNetwork::set_order(std::vector<std::size_t> order) {
  std::vector<std::size_t> sorted = order;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i] != i) throw InvalidInput("ring order must be a permutation of node indices");
  }
  if (sorted.size() != size()) throw InvalidInput("ring order must visit every node once");
  order_ = std::move(order);
}

void RingNetwork::set_global_estimate(WeightVector phi) {
  if (phi.feedback_order() != config_.feedback_order ||
      phi.feedforward_order() != config_.feedforward_order) {
    throw InvalidInput("global estimate (M, N) does not match the filter configuration");
  }
  phi_ = std::move(phi);
}

Eigen::Index RingNetwork::min_stream_length() const { return streams_.front().input.size(); }

Eigen::MatrixXcd RingNetwork::inputs(Eigen::Index iterations) const {
  Eigen::MatrixXcd out(iterations, static_cast<Eigen::Index>(size()));
  for (std::size_t k = 0; k < size(); ++k) {
    out.col(static_cast<Eigen::Index>(k)) = streams_[k].input.head(iterations);
  }
  return out;
}

namespace {

RunRecord start_record(const RingNetwork& net, Eigen::Index iterations,
                       const RunOptions& options) {
  if (iterations < 0) throw InvalidInput("iteration count must be >= 0");
  if (iterations > net.min_stream_length()) {
    throw InvalidInput("node streams are shorter than the requested iteration count");
  }
  const auto nodes = static_cast<Eigen::Index>(net.size());
  RunRecord record;
  record.errors = Eigen::MatrixXcd::Zero(iterations, nodes);
  if (options.keep_outputs) record.outputs = Eigen::MatrixXcd::Zero(iterations, nodes);
  return record;
}

void log_step(RunRecord& record, Eigen::Index n, std::size_t k, const StepResult<double>& step,
              const RunOptions& options) {
  const auto col = static_cast<Eigen::Index>(k);
  record.errors(n, col) = step.error;
  if (options.keep_outputs) record.outputs(n, col) = step.output;
  ++record.weight_updates;
  if (options.on_update) options.on_update(n, k, step.weights);
}

std::size_t total_divergences(const RingNetwork& net) {
  std::size_t total = 0;
  for (const auto& s : net.states()) total += s.divergence_events();
  return total;
}

}  // namespace

RunRecord iaca_iir_run(RingNetwork& net, Eigen::Index iterations, const RunOptions& options) {
  RunRecord record = start_record(net, iterations, options);
  const std::size_t before = total_divergences(net);

  WeightVector estimate = net.global_estimate();
  for (Eigen::Index n = 0; n < iterations; ++n) {
    for (const std::size_t k : net.order()) {
      const auto& stream = net.streams()[k];
      auto step = adapt_step(net.states()[k], estimate, stream.input(n), stream.desired(n),
                             net.step_sizes()(static_cast<Eigen::Index>(k)));
      log_step(record, n, k, step, options);
      estimate = std::move(step.weights);
    }
  }
  net.set_global_estimate(estimate);
  record.final_weights = {std::move(estimate)};
  record.divergence_events = total_divergences(net) - before;
  return record;
}

RunRecord noncoop_run(RingNetwork& net, Eigen::Index iterations, const RunOptions& options) {
  RunRecord record = start_record(net, iterations, options);
  const std::size_t before = total_divergences(net);

  std::vector<WeightVector> local(net.size(), net.global_estimate());
  for (Eigen::Index n = 0; n < iterations; ++n) {
    for (const std::size_t k : net.order()) {
      const auto& stream = net.streams()[k];
      auto step = adapt_step(net.states()[k], local[k], stream.input(n), stream.desired(n),
                             net.step_sizes()(static_cast<Eigen::Index>(k)));
      log_step(record, n, k, step, options);
      local[k] = std::move(step.weights);
    }
  }
  record.final_weights = std::move(local);
  record.divergence_events = total_divergences(net) - before;
  return record;
}

}  // namespace iaca
