#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "iaca/metrics.hpp"

namespace iaca {

enum class ExperimentKind { Scatter, GainVsStepsize, MseCurves, GainVsNetworkSize, Custom };

std::string_view to_string(ExperimentKind kind);
std::optional<ExperimentKind> parse_experiment_kind(std::string_view text);

/// The four named experiments (Custom is not a preset).
std::vector<ExperimentKind> preset_kinds();
std::string_view describe(ExperimentKind kind);

/// Step size used for a signal when the config gives none.
double default_step_size(SignalKind kind);
/// Network sizes swept by GainVsNetworkSize unless overridden.
std::vector<std::size_t> default_network_sizes();
/// Step sizes swept by GainVsStepsize unless overridden: 1e-7 .. 1e-1.
std::vector<double> default_step_size_list();

/// A fully resolved run description. Every field has a concrete value.
struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::Custom;
  /// One panel per entry, written to its own CSV.
  std::vector<SignalKind> signals{SignalKind::AR4};
  /// Shared settings for every panel; `kind` and `seed` are overwritten per panel.
  SignalSpec signal;
  WindLoadOptions wind;
  double noise_sigma2 = 0.0;
  bool shared_signal = false;
  FilterConfig filter;
  std::size_t nodes = 10;
  /// Step size per panel, parallel to `signals`.
  std::vector<double> mu;
  std::vector<double> mu_list;              // GainVsStepsize
  std::vector<std::size_t> network_sizes;   // GainVsNetworkSize
  std::optional<Eigen::Index> iterations;
  std::size_t seeds = 20;
  std::uint64_t master_seed = 1;
  Eigen::Index smoothing_window = 200;
  double steady_fraction = 0.5;
  std::filesystem::path output = "results";
  unsigned threads = 0;

  /// Monte Carlo settings for panel `panel`.
  BatchConfig batch(std::size_t panel) const;
};

/// Flat view of a config file: "section.key" -> raw text, top-level keys bare.
using ConfigMap = std::map<std::string, std::string>;

/// INI text: `key = value` lines under `[section]` headers, `#` or `;` comments.
ConfigMap parse_ini(const std::string& text);
/// JSON object with the same sections as nested objects. A meta.json file is
/// accepted as is: its "config" member is read.
ConfigMap parse_json_config(const std::string& text);
/// Reads either format, chosen by the first non-blank character.
ConfigMap read_config_file(const std::filesystem::path& path);

struct ResolvedConfig {
  ExperimentConfig config;
  std::vector<std::string> warnings;
};

/// Fill defaults and check every field. All problems are collected and thrown
/// together as one ConfigError. Unknown keys are errors unless `lax`, in which
/// case they become warnings.
ResolvedConfig resolve_config(const ConfigMap& entries, bool lax = false);
ResolvedConfig validate_config(const std::filesystem::path& path, bool lax = false);

/// The resolved config in the nested layout parse_json_config reads back.
nlohmann::json to_json(const ExperimentConfig& config);

/// Closest known key for an unknown one, if any is near enough.
std::optional<std::string> suggest_key(std::string_view key);

/// Parses "1.5", "-0.2i", "0.5+0.2i", "1-2j".
std::optional<std::complex<double>> parse_complex(std::string_view text);

/// Shortest decimal text that reads back to the same double.
std::string format_double(double value);

struct RunSummary {
  std::vector<std::filesystem::path> files;
  /// One line per sweep point or panel that could not be computed.
  std::vector<std::string> failures;
};

/// Runs the experiment and writes its CSVs plus meta.json into config.output.
RunSummary run_experiment(const ExperimentConfig& config);

/// Name, version and build description recorded in meta.json.
nlohmann::json build_stamp();

}  // namespace iaca
