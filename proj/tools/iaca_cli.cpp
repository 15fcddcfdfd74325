// Command-line front end: run, validate, presets, version.
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "iaca/experiment.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kRuntimeError = 2;

struct Options {
  std::string config_path;
  std::string preset;
  std::vector<std::string> overrides;
  std::string output;
  bool lax = false;
};

iaca::ConfigMap gather(const Options& opts) {
  iaca::ConfigMap entries;
  if (!opts.config_path.empty()) entries = iaca::read_config_file(opts.config_path);
  if (!opts.preset.empty()) {
    if (entries.count("experiment")) {
      throw iaca::ConfigError({"experiment: given both by --preset and in the config file"});
    }
    entries["experiment"] = opts.preset;
  }
  std::vector<std::string> issues;
  for (const auto& item : opts.overrides) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) {
      issues.push_back("--set " + item + ": expected key=value");
      continue;
    }
    entries[item.substr(0, eq)] = item.substr(eq + 1);
  }
  if (!opts.output.empty()) entries["output"] = opts.output;
  if (!issues.empty()) throw iaca::ConfigError(issues);
  return entries;
}

iaca::ResolvedConfig resolve(const Options& opts) {
  auto resolved = iaca::resolve_config(gather(opts), opts.lax);
  for (const auto& w : resolved.warnings) std::cerr << "warning: " << w << '\n';
  return resolved;
}

void report(const iaca::ConfigError& e) {
  std::cerr << "config error:\n";
  for (const auto& issue : e.issues()) std::cerr << "  " << issue << '\n';
}

void add_config_options(CLI::App* cmd, Options& opts) {
  cmd->add_option("config", opts.config_path, "INI or JSON config file (meta.json works too)");
  cmd->add_option("--preset", opts.preset, "run a named experiment with its defaults");
  cmd->add_option("--set", opts.overrides, "override a key, e.g. --set network.mu=1e-4");
  cmd->add_option("-o,--output", opts.output, "output directory");
  cmd->add_flag("--lax", opts.lax, "warn about unknown keys instead of failing");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Incremental widely linear IIR adaptive filtering experiments"};
  app.require_subcommand(1);

  Options run_opts;
  auto* run = app.add_subcommand("run", "run an experiment and write CSVs plus meta.json");
  add_config_options(run, run_opts);

  Options check_opts;
  auto* validate = app.add_subcommand("validate", "check a config and print it fully resolved");
  add_config_options(validate, check_opts);

  auto* presets = app.add_subcommand("presets", "list the named experiments");
  auto* version = app.add_subcommand("version", "print the version stamp");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  if (*presets) {
    for (auto kind : iaca::preset_kinds()) {
      std::cout << iaca::to_string(kind) << "\t" << iaca::describe(kind) << '\n';
    }
    return kOk;
  }
  if (*version) {
    const auto stamp = iaca::build_stamp();
    std::cout << stamp["name"].get<std::string>() << ' ' << stamp["version"].get<std::string>()
              << " (" << stamp["build_type"].get<std::string>() << ", "
              << stamp["compiler"].get<std::string>() << ")\n";
    return kOk;
  }

  const Options& opts = *validate ? check_opts : run_opts;
  if (opts.config_path.empty() && opts.preset.empty()) {
    std::cerr << "config error:\n  give a config file or --preset NAME\n";
    return kConfigError;
  }

  iaca::ExperimentConfig config;
  try {
    config = resolve(opts).config;
  } catch (const iaca::ConfigError& e) {
    report(e);
    return kConfigError;
  }

  if (*validate) {
    std::cout << iaca::to_json(config).dump(2) << '\n';
    return kOk;
  }

  try {
    const auto summary = iaca::run_experiment(config);
    for (const auto& file : summary.files) std::cout << file.string() << '\n';
    if (!summary.failures.empty()) {
      std::cerr << "some points failed; partial results written:\n";
      for (const auto& f : summary.failures) std::cerr << "  " << f << '\n';
      return kRuntimeError;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return kOk;
}
