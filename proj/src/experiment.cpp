#include <array>
#include <fstream>
#include <sstream>

#include "iaca/experiment.hpp"
#include "iaca/seeding.hpp"

#ifndef IACA_VERSION
#define IACA_VERSION "unknown"
#endif
#ifndef IACA_BUILD_TYPE
#define IACA_BUILD_TYPE "unknown"
#endif

namespace iaca {

namespace {

constexpr std::array kBoth{Algorithm::IacaIir, Algorithm::NonCooperative};

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

std::string scatter_csv(const Eigen::VectorXcd& samples) {
  std::ostringstream out;
  out << "re,im\n";
  for (Eigen::Index n = 0; n < samples.size(); ++n) {
    out << format_double(samples(n).real()) << ',' << format_double(samples(n).imag()) << '\n';
  }
  return out.str();
}

Eigen::VectorXcd scatter_samples(const ExperimentConfig& config, std::size_t panel) {
  const auto batch = config.batch(panel);
  if (batch.signal.kind == SignalKind::WLArmaTruth) {
    auto single = batch;
    single.nodes = 1;
    return build_node_streams(single, 0).front().desired;
  }
  SignalSpec spec = batch.signal;
  spec.seed = derive_seed(config.master_seed, 0, 0, StreamTag::Signal);
  return generate(spec, batch.wind);
}

std::string gain_row(const std::string& axis_value, const SweepRow& row, bool full) {
  // Failed points stay in the table with nan statistics.
  const bool failed = !row.failure.empty();
  std::string line = axis_value + ',' + std::string(to_string(row.algo)) + ',' +
                     (failed ? "nan" : format_double(row.mean_gain_db)) + ',' +
                     (failed ? "nan" : format_double(row.std_gain_db));
  if (full) {
    line += ',' + std::to_string(row.n_seeds) + ',' + std::to_string(row.divergence_events);
  }
  return line + '\n';
}

constexpr std::string_view kGainVsMuHeader = "mu,algo,mean_gain_db,std_db,n_seeds,divergence_events\n";

SweepRow row_from(const BatchResult& batch, double mu) {
  SweepRow row;
  row.value = mu;
  row.algo = batch.algo;
  row.mean_gain_db = batch.mean_gain_db;
  row.std_gain_db = batch.std_gain_db;
  row.n_seeds = batch.gains_db.size();
  row.divergence_events = batch.divergence_events;
  return row;
}

std::string mse_csv(const std::vector<std::pair<Algorithm, Eigen::VectorXd>>& curves) {
  std::ostringstream out;
  out << "iter,algo,mse_db\n";
  for (const auto& [algo, curve] : curves) {
    for (Eigen::Index n = 0; n < curve.size(); ++n) {
      out << n << ',' << to_string(algo) << ',' << format_double(curve(n)) << '\n';
    }
  }
  return out.str();
}

void note_failures(const std::vector<SweepRow>& rows, std::string_view label,
                   std::vector<std::string>& failures) {
  for (const auto& row : rows) {
    if (row.failure.empty()) continue;
    failures.push_back(std::string(label) + " at " + format_double(row.value) + " (" +
                       std::string(to_string(row.algo)) + "): " + row.failure);
  }
}

}  // namespace

nlohmann::json build_stamp() {
  return {{"name", "iaca"}, {"version", IACA_VERSION}, {"build_type", IACA_BUILD_TYPE},
          {"compiler", __VERSION__}};
}

RunSummary run_experiment(const ExperimentConfig& config) {
  if (config.signals.size() != config.mu.size()) {
    throw InvalidInput("config needs one step size per signal kind");
  }
  std::filesystem::create_directories(config.output);
  RunSummary summary;
  std::vector<std::pair<std::string, std::string>> artifacts;

  for (std::size_t panel = 0; panel < config.signals.size(); ++panel) {
    const std::string kind(to_string(config.signals[panel]));
    const auto batch = config.batch(panel);
    try {
      switch (config.experiment) {
        case ExperimentKind::Scatter:
          artifacts.emplace_back("scatter_" + kind + ".csv",
                                 scatter_csv(scatter_samples(config, panel)));
          break;

        case ExperimentKind::GainVsStepsize: {
          const auto rows = sweep(SweepAxis::StepSize, config.mu_list, batch, kBoth);
          note_failures(rows, kind + " mu", summary.failures);
          std::string csv(kGainVsMuHeader);
          for (const auto& row : rows) csv += gain_row(format_double(row.value), row, true);
          artifacts.emplace_back("gain_vs_mu_" + kind + ".csv", csv);
          break;
        }

        case ExperimentKind::GainVsNetworkSize: {
          const std::vector<double> sizes(config.network_sizes.begin(), config.network_sizes.end());
          const auto rows = sweep(SweepAxis::NetworkSize, sizes, batch, kBoth);
          note_failures(rows, kind + " L", summary.failures);
          std::string csv = "L,algo,mean_gain_db,std_db\n";
          for (const auto& row : rows) {
            csv += gain_row(std::to_string(static_cast<std::size_t>(row.value)), row, false);
          }
          artifacts.emplace_back("gain_vs_L_" + kind + ".csv", csv);
          break;
        }

        case ExperimentKind::MseCurves:
        case ExperimentKind::Custom: {
          std::vector<std::pair<Algorithm, Eigen::VectorXd>> curves;
          std::string gains(kGainVsMuHeader);
          for (auto algo : kBoth) {
            const auto result = run_batch(batch, algo, true);
            curves.emplace_back(algo, ensemble_mse(result.records, config.smoothing_window));
            gains += gain_row(format_double(batch.mu), row_from(result, batch.mu), true);
          }
          artifacts.emplace_back("mse_" + kind + ".csv", mse_csv(curves));
          if (config.experiment == ExperimentKind::Custom) {
            artifacts.emplace_back("gain_" + kind + ".csv", gains);
          }
          break;
        }
      }
    } catch (const std::exception& e) {
      summary.failures.push_back(kind + ": " + e.what());
    }
  }

  // Single writer, after every result is in.
  for (const auto& [name, content] : artifacts) {
    const auto path = config.output / name;
    write_file(path, content);
    summary.files.push_back(path);
  }
  nlohmann::json meta;
  meta["stamp"] = build_stamp();
  meta["config"] = to_json(config);
  auto files = nlohmann::json::array();
  for (const auto& [name, content] : artifacts) files.push_back(name);
  meta["files"] = files;
  meta["failures"] = summary.failures;
  const auto meta_path = config.output / "meta.json";
  write_file(meta_path, meta.dump(2) + "\n");
  summary.files.push_back(meta_path);
  return summary;
}

}  // namespace iaca
