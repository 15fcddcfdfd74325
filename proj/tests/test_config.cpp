#include <doctest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "iaca/experiment.hpp"

using namespace iaca;
using cd = std::complex<double>;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("iaca_test_config_" + name);
  fs::remove_all(dir);
  return dir;
}

std::vector<std::string> issues_of(const ConfigMap& entries) {
  try {
    resolve_config(entries);
  } catch (const ConfigError& e) {
    return e.issues();
  }
  return {};
}

bool mentions(const std::vector<std::string>& issues, std::string_view text) {
  for (const auto& i : issues) {
    if (i.find(text) != std::string::npos) return true;
  }
  return false;
}

ConfigMap small_run(const fs::path& out) {
  return {{"experiment", "Custom"},    {"output", out.string()},   {"signal.kind", "AR4"},
          {"signal.length", "400"},     {"network.L", "3"},         {"seeds.count", "2"},
          {"filter.M", "2"},            {"filter.N", "2"}};
}

}  // namespace

TEST_CASE("minimal config gets the standard defaults") {
  const auto cfg = resolve_config(parse_ini("experiment = MseCurves\nsignal = AR4\n")).config;
  CHECK(cfg.experiment == ExperimentKind::MseCurves);
  CHECK(cfg.signals == std::vector<SignalKind>{SignalKind::AR4});
  CHECK(cfg.nodes == 10);
  CHECK(cfg.filter.feedback_order == 4);
  CHECK(cfg.filter.feedforward_order == 4);
  CHECK(cfg.mu == std::vector<double>{1e-3});
  CHECK(cfg.seeds == 20);
  CHECK(cfg.smoothing_window == 200);
}

TEST_CASE("experiment defaults pick signals and sweep values") {
  const auto mse = resolve_config({{"experiment", "MseCurves"}}).config;
  CHECK(mse.signals == std::vector<SignalKind>{SignalKind::AR4, SignalKind::ImproperARMA});
  CHECK(mse.mu == std::vector<double>{1e-3, 1e-7});

  const auto gvm = resolve_config({{"experiment", "GainVsStepsize"}}).config;
  CHECK(gvm.mu_list.size() == 7);
  CHECK(gvm.mu_list.front() == 1e-7);
  CHECK(gvm.mu_list.back() == 1e-1);

  const auto gvl = resolve_config({{"experiment", "GainVsNetworkSize"}}).config;
  CHECK(gvl.network_sizes == std::vector<std::size_t>{2, 4, 6, 8, 10, 15, 20});
  CHECK(gvl.signals == std::vector<SignalKind>{SignalKind::ImproperARMA});

  const auto scatter = resolve_config({{"experiment", "scatter"}}).config;
  CHECK(scatter.signals.size() == 3);
}

TEST_CASE("every problem is reported at once") {
  const auto issues = issues_of({{"experiment", "Custom"},
                                 {"network.mu", "-1"},
                                 {"filter.M", "0"},
                                 {"signal.lambda", "2"},
                                 {"seeds.count", "many"}});
  CHECK(issues.size() == 4);
  CHECK(mentions(issues, "mu"));
  CHECK(mentions(issues, "filter.M"));
  CHECK(mentions(issues, "signal.lambda"));
  CHECK(mentions(issues, "seeds.count"));
}

TEST_CASE("unknown keys") {
  SUBCASE("alias suggestion") {
    const auto issues = issues_of({{"network.stepsize", "1e-3"}});
    REQUIRE(issues.size() == 1);
    CHECK(mentions(issues, "did you mean \"network.mu\""));
  }
  SUBCASE("typo suggestion") {
    CHECK(suggest_key("seeds.cuont") == "seeds.count");
    CHECK(suggest_key("filter.mdoe") == "filter.mode");
    CHECK(suggest_key("mu") == "network.mu");
    CHECK_FALSE(suggest_key("completely_unrelated").has_value());
  }
  SUBCASE("lax mode warns instead") {
    const auto resolved = resolve_config({{"stepsize", "1e-3"}}, true);
    REQUIRE(resolved.warnings.size() == 1);
    CHECK(mentions(resolved.warnings, "network.mu"));
  }
}

TEST_CASE("signal and list checks") {
  CHECK(mentions(issues_of({{"signal", "WindFile"}}), "signal.path"));
  CHECK(mentions(issues_of({{"signal.path", "/nonexistent/wind.csv"}}), "file not found"));
  CHECK(mentions(issues_of({{"signal.kind", "AR4, Bogus"}}), "Bogus"));
  CHECK(mentions(issues_of({{"signal.kind", "AR4, ProperMA"}, {"network.mu", "1, 2, 3"}}),
                 "network.mu"));
  CHECK(mentions(issues_of({{"signal", "AR4"}, {"signal.kind", "AR4"}}), "not both"));
  CHECK(mentions(issues_of({{"signal", "WLArmaTruth"}}), "truth_a"));
  CHECK(mentions(issues_of({{"signal.truth_a", "0.5"}, {"signal.truth_b", "1"},
                            {"signal.truth_g", "0.1, 0.2"}}),
                 "truth_g"));

  const auto per_kind =
      resolve_config({{"signal.kind", "AR4, ProperMA"}, {"network.mu", "1e-3, 2e-4"}}).config;
  CHECK(per_kind.mu == std::vector<double>{1e-3, 2e-4});
}

TEST_CASE("INI grammar") {
  const auto entries = parse_ini(
      "# comment\n"
      "experiment = Custom\n"
      "; another comment\n"
      "[network]\n"
      "  mu =  1e-4 \n"
      "[seeds]\n"
      "count=5\n");
  CHECK(entries.at("network.mu") == "1e-4");
  CHECK(entries.at("seeds.count") == "5");
  const auto cfg = resolve_config(entries).config;
  CHECK(cfg.mu.front() == 1e-4);
  CHECK(cfg.seeds == 5);
  CHECK_THROWS_AS(parse_ini("[network]\nmu = 1\nmu = 2\n"), ConfigError);
}

TEST_CASE("complex tokens") {
  CHECK(parse_complex("0.5+0.2i") == cd(0.5, 0.2));
  CHECK(parse_complex("1-2j") == cd(1.0, -2.0));
  CHECK(parse_complex("-0.3i") == cd(0.0, -0.3));
  CHECK(parse_complex("i") == cd(0.0, 1.0));
  CHECK(parse_complex("2.5") == cd(2.5, 0.0));
  CHECK(parse_complex("1e-3-4e+2i") == cd(1e-3, -4e2));
  CHECK_FALSE(parse_complex("abc").has_value());
  CHECK_FALSE(parse_complex("").has_value());
}

TEST_CASE("number formatting round-trips") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> exponent(-300.0, 300.0);
  for (int i = 0; i < 1000; ++i) {
    const double v = std::pow(10.0, exponent(rng)) * (i % 2 ? -1.0 : 1.0);
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(format_double(0.001) == "0.001");
  CHECK(format_double(1e-7) == "1e-07");
}

TEST_CASE("resolved config round-trips through JSON") {
  ConfigMap entries{{"experiment", "GainVsStepsize"},
                    {"signal.kind", "WLArmaTruth, AR4"},
                    {"signal.truth_a", "0.3-0.1i"},
                    {"signal.truth_b", "1, 0.2+0.4i"},
                    {"signal.lambda", "0.25"},
                    {"network.mu", "0.1, 3.3e-5"},
                    {"network.mu_list", "1e-5, 0.0001"},
                    {"network.iterations", "123"},
                    {"seeds.master", "18446744073709551615"},
                    {"filter.mode", "exact"}};
  const auto first = resolve_config(entries).config;
  const auto json = to_json(first);
  const auto second = resolve_config(parse_json_config(json.dump())).config;
  CHECK(to_json(second) == json);
  CHECK(second.mu == first.mu);
  CHECK(second.master_seed == 18446744073709551615ull);
  REQUIRE(second.signal.truth_weights.has_value());
  CHECK(*second.signal.truth_weights == *first.signal.truth_weights);
  CHECK(second.filter == first.filter);
}

TEST_CASE("runs are byte-identical and meta.json reproduces them") {
  const auto a = scratch("a");
  const auto b = scratch("b");
  const auto cfg = resolve_config(small_run(a)).config;
  const auto first = run_experiment(cfg);
  CHECK(first.failures.empty());
  REQUIRE(first.files.size() == 3);

  auto again = cfg;
  again.output = b;
  again.threads = 1;
  run_experiment(again);
  for (const auto& f : first.files) {
    if (f.extension() == ".csv") CHECK(slurp(f) == slurp(b / f.filename()));
  }

  const auto c = scratch("c");
  auto replay = validate_config(a / "meta.json").config;
  replay.output = c;
  run_experiment(replay);
  for (const auto& f : first.files) {
    if (f.extension() == ".csv") CHECK(slurp(f) == slurp(c / f.filename()));
  }
}

TEST_CASE("CSV headers follow the schemas") {
  const auto dir = scratch("schemas");
  auto entries = small_run(dir);
  const auto custom = run_experiment(resolve_config(entries).config);
  CHECK(slurp(dir / "mse_AR4.csv").rfind("iter,algo,mse_db\n", 0) == 0);
  CHECK(slurp(dir / "gain_AR4.csv").rfind("mu,algo,mean_gain_db,std_db,n_seeds,divergence_events\n",
                                          0) == 0);

  entries["experiment"] = "GainVsNetworkSize";
  entries["network.L_list"] = "1, 2";
  run_experiment(resolve_config(entries).config);
  const auto l_csv = slurp(dir / "gain_vs_L_AR4.csv");
  CHECK(l_csv.rfind("L,algo,mean_gain_db,std_db\n1,IACA-IIR,", 0) == 0);

  entries["experiment"] = "GainVsStepsize";
  entries.erase("network.L_list");
  entries["network.mu_list"] = "0.001";
  run_experiment(resolve_config(entries).config);
  CHECK(slurp(dir / "gain_vs_mu_AR4.csv").find("\n0.001,ACAIIR,") != std::string::npos);
}

TEST_CASE("scatter with a wind file writes four panels") {
  const auto dir = scratch("scatter");
  const auto cfg = resolve_config({{"experiment", "Scatter"},
                                   {"output", dir.string()},
                                   {"signal.length", "2"},
                                   {"signal.path", std::string(IACA_TEST_DATA) + "/wind_spacing.csv"}})
                       .config;
  CHECK(cfg.signals.size() == 4);
  const auto summary = run_experiment(cfg);
  CHECK(summary.failures.empty());
  CHECK(summary.files.size() == 5);
  const auto wind = slurp(dir / "scatter_WindFile.csv");
  CHECK(wind.rfind("re,im\n", 0) == 0);
  CHECK(std::count(wind.begin(), wind.end(), '\n') == 3);
}

TEST_CASE("a failing panel is recorded and the others are still written") {
  const auto dir = scratch("failing");
  auto cfg = resolve_config(small_run(dir)).config;
  cfg.signals = {SignalKind::AR4, SignalKind::WindFile};
  cfg.mu = {1e-3, 1e-3};
  cfg.signal.path = "/nonexistent/wind.csv";
  const auto summary = run_experiment(cfg);
  CHECK(summary.failures.size() == 1);
  CHECK(fs::exists(dir / "mse_AR4.csv"));
  CHECK(fs::exists(dir / "meta.json"));
}
