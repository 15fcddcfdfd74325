#include "iaca/metrics.hpp"

#include <atomic>
#include <exception>
#include <thread>

#include "iaca/seeding.hpp"

namespace iaca {

GainReport run_gain(const RingNetwork& net, const RunRecord& record, double steady_fraction) {
  return prediction_gain(net.inputs(record.iterations()), record.errors, steady_fraction);
}

Eigen::VectorXd ensemble_mse(std::span<const RunRecord> records, Eigen::Index smoothing_window) {
  if (records.empty()) throw InvalidInput("ensemble_mse needs at least one record");
  if (smoothing_window < 1) throw InvalidInput("smoothing window must be >= 1");
  const auto iterations = records.front().iterations();
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(iterations);
  for (const auto& r : records) {
    if (r.iterations() != iterations) {
      throw InvalidInput("ensemble_mse records have mismatched iteration counts");
    }
    mean += r.squared_errors().rowwise().mean();
  }
  mean /= static_cast<double>(records.size());

  Eigen::VectorXd out(iterations);
  for (Eigen::Index n = 0; n < iterations; ++n) {
    const auto count = std::min<Eigen::Index>(n + 1, smoothing_window);
    out(n) = 10.0 * std::log10(mean.segment(n + 1 - count, count).mean());
  }
  return out;
}

std::string_view to_string(Algorithm algo) {
  return algo == Algorithm::IacaIir ? "IACA-IIR" : "ACAIIR";
}

std::optional<Algorithm> parse_algorithm(std::string_view text) {
  if (text == "IACA-IIR") return Algorithm::IacaIir;
  if (text == "ACAIIR") return Algorithm::NonCooperative;
  return std::nullopt;
}

std::vector<NodeStream> build_node_streams(const BatchConfig& config, std::size_t rep) {
  if (config.nodes < 1) throw InvalidInput("a network needs at least one node");
  const auto& base = config.signal;
  base.validate();

  std::vector<NodeStream> streams;
  streams.reserve(config.nodes);
  std::optional<NodeStream> shared;
  for (std::size_t k = 0; k < config.nodes; ++k) {
    const std::size_t source_node = config.shared_signal ? 0 : k;
    NodeStream stream;
    switch (base.kind) {
      case SignalKind::WindFile:
        // One recorded series; every node observes it.
        if (!shared) shared = make_prediction_task(generate(base, config.wind));
        stream = *shared;
        break;
      case SignalKind::WLArmaTruth: {
        NoiseSource source(base.resolved_lambda(),
                           derive_seed(config.master_seed, rep, source_node, StreamTag::Input));
        stream.input = source.draw(base.length);
        stream.desired = gen_wl_truth(base, stream.input);
        break;
      }
      default: {
        SignalSpec spec = base;
        spec.seed = derive_seed(config.master_seed, rep, source_node, StreamTag::Signal);
        stream = make_prediction_task(generate(spec));
        break;
      }
    }
    if (config.noise_sigma2 > 0.0) {
      stream.desired = add_measurement_noise(
          stream.desired, config.noise_sigma2, 0.0,
          derive_seed(config.master_seed, rep, k, StreamTag::MeasurementNoise));
    }
    streams.push_back(std::move(stream));
  }
  return streams;
}

std::pair<double, double> mean_and_std(std::span<const double> values) {
  if (values.empty()) return {0.0, 0.0};
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  if (values.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / static_cast<double>(values.size() - 1))};
}

void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& task) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> failures(count);
  {
    std::vector<std::jthread> workers;
    workers.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
      workers.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            task(i);
          } catch (...) {
            failures[i] = std::current_exception();
          }
        }
      });
    }
  }
  for (auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
}

BatchResult run_batch(const BatchConfig& config, Algorithm algo, bool keep_records) {
  if (config.seeds < 1) throw InvalidInput("a batch needs at least one seed");
  config.filter.validate();

  struct Slot {
    double gain = 0.0;
    std::size_t divergences = 0;
    RunRecord record;
  };
  std::vector<Slot> slots(config.seeds);

  parallel_for(config.seeds, config.threads, [&](std::size_t rep) {
    RingNetwork net(config.filter, build_node_streams(config, rep), config.mu);
    auto iterations = net.min_stream_length();
    if (config.iterations) iterations = std::min(iterations, *config.iterations);
    RunRecord record = algo == Algorithm::IacaIir ? iaca_iir_run(net, iterations)
                                                  : noncoop_run(net, iterations);
    slots[rep].gain = run_gain(net, record, config.steady_fraction).gain_db;
    slots[rep].divergences = record.divergence_events;
    if (keep_records) slots[rep].record = std::move(record);
  });

  BatchResult result;
  result.algo = algo;
  for (auto& slot : slots) {
    result.gains_db.push_back(slot.gain);
    result.divergence_events += slot.divergences;
    if (keep_records) result.records.push_back(std::move(slot.record));
  }
  std::tie(result.mean_gain_db, result.std_gain_db) = mean_and_std(result.gains_db);
  return result;
}

std::vector<SweepRow> sweep(SweepAxis axis, std::span<const double> values,
                            const BatchConfig& base, std::span<const Algorithm> algos) {
  if (values.empty()) throw InvalidInput("sweep needs at least one value");
  for (double v : values) {
    const bool ok = axis == SweepAxis::StepSize
                        ? (std::isfinite(v) && v >= 0.0)
                        : (v >= 1.0 && v == std::floor(v) && std::isfinite(v));
    if (!ok) {
      throw InvalidInput(axis == SweepAxis::StepSize ? "sweep step sizes must be >= 0"
                                                     : "sweep network sizes must be integers >= 1");
    }
  }

  std::vector<SweepRow> rows;
  for (double v : values) {
    BatchConfig point = base;
    if (axis == SweepAxis::StepSize) {
      point.mu = v;
    } else {
      point.nodes = static_cast<std::size_t>(v);
    }
    for (Algorithm algo : algos) {
      SweepRow row;
      row.value = v;
      row.algo = algo;
      try {
        const auto batch = run_batch(point, algo);
        row.mean_gain_db = batch.mean_gain_db;
        row.std_gain_db = batch.std_gain_db;
        row.n_seeds = batch.gains_db.size();
        row.divergence_events = batch.divergence_events;
      } catch (const std::exception& e) {
        row.failure = e.what();
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace iaca
