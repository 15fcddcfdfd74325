#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "iaca/experiment.hpp"

namespace iaca {

namespace {

using cd = std::complex<double>;

constexpr std::array kSections{"signal", "filter", "network", "seeds", "metrics"};

constexpr std::array kKnownKeys{
    "experiment",           "output",           "threads",
    "signal",               "signal.kind",      "signal.lambda",
    "signal.length",        "signal.burn_in",   "signal.path",
    "signal.header",        "signal.remove_mean", "signal.noise_sigma2",
    "signal.shared",        "signal.truth_a",   "signal.truth_g",
    "signal.truth_b",       "signal.truth_h",   "filter.M",
    "filter.N",             "filter.mode",      "filter.divergence_threshold",
    "network.L",            "network.mu",       "network.mu_list",
    "network.L_list",       "network.iterations", "seeds.count",
    "seeds.master",         "metrics.smoothing_window", "metrics.steady_fraction",
};

struct Alias {
  std::string_view name;
  std::string_view key;
};

constexpr std::array kAliases{
    Alias{"stepsize", "network.mu"},         Alias{"step_size", "network.mu"},
    Alias{"step", "network.mu"},             Alias{"learning_rate", "network.mu"},
    Alias{"nodes", "network.L"},             Alias{"network_size", "network.L"},
    Alias{"seed", "seeds.master"},           Alias{"master_seed", "seeds.master"},
    Alias{"repetitions", "seeds.count"},     Alias{"runs", "seeds.count"},
    Alias{"feedback_order", "filter.M"},     Alias{"feedforward_order", "filter.N"},
    Alias{"window", "metrics.smoothing_window"},
};

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::string_view leaf(std::string_view key) {
  const auto dot = key.rfind('.');
  return dot == std::string_view::npos ? key : key.substr(dot + 1);
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

std::vector<std::string> split_list(std::string_view text) {
  std::vector<std::string> out;
  text = trim(text);
  if (text.empty()) return out;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    out.emplace_back(trim(text.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

template <typename T>
std::optional<T> parse_number(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  T value{};
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size() || text.empty()) return std::nullopt;
  return value;
}

std::optional<bool> parse_bool(std::string_view text) {
  const auto t = lower(trim(text));
  if (t == "true" || t == "yes" || t == "on" || t == "1") return true;
  if (t == "false" || t == "no" || t == "off" || t == "0") return false;
  return std::nullopt;
}

std::optional<SignalKind> parse_kind_loose(std::string_view text) {
  for (auto kind : {SignalKind::AR4, SignalKind::ProperMA, SignalKind::ImproperARMA,
                    SignalKind::WLArmaTruth, SignalKind::WindFile}) {
    if (lower(to_string(kind)) == lower(text)) return kind;
  }
  return std::nullopt;
}

/// Reads typed values out of a ConfigMap, collecting every problem.
class Reader {
 public:
  Reader(const ConfigMap& entries, std::vector<std::string>& issues)
      : entries_(entries), issues_(issues) {}

  bool has(const std::string& key) const {
    const auto it = entries_.find(key);
    return it != entries_.end() && !trim(it->second).empty();
  }

  std::optional<std::string> text(const std::string& key) const {
    if (!has(key)) return std::nullopt;
    return std::string(trim(entries_.at(key)));
  }

  template <typename T>
  std::optional<T> number(const std::string& key) {
    const auto raw = text(key);
    if (!raw) return std::nullopt;
    const auto v = parse_number<T>(*raw);
    if (!v) fail(key, "expected a number, got \"" + *raw + "\"");
    return v;
  }

  template <typename T>
  std::optional<std::vector<T>> numbers(const std::string& key) {
    const auto raw = text(key);
    if (!raw) return std::nullopt;
    std::vector<T> out;
    for (const auto& item : split_list(*raw)) {
      const auto v = parse_number<T>(item);
      if (!v) {
        fail(key, "expected a comma-separated list of numbers, got \"" + item + "\"");
        return std::nullopt;
      }
      out.push_back(*v);
    }
    return out;
  }

  std::optional<bool> flag(const std::string& key) {
    const auto raw = text(key);
    if (!raw) return std::nullopt;
    const auto v = parse_bool(*raw);
    if (!v) fail(key, "expected true or false, got \"" + *raw + "\"");
    return v;
  }

  std::optional<ComplexVector<double>> complexes(const std::string& key) {
    const auto raw = text(key);
    if (!raw) return std::nullopt;
    const auto items = split_list(*raw);
    ComplexVector<double> out(static_cast<Eigen::Index>(items.size()));
    for (std::size_t i = 0; i < items.size(); ++i) {
      const auto v = parse_complex(items[i]);
      if (!v) {
        fail(key, "expected complex numbers such as 0.5+0.2i, got \"" + items[i] + "\"");
        return std::nullopt;
      }
      out(static_cast<Eigen::Index>(i)) = *v;
    }
    return out;
  }

  void fail(const std::string& key, const std::string& message) {
    issues_.push_back(key + ": " + message);
  }

 private:
  const ConfigMap& entries_;
  std::vector<std::string>& issues_;
};

void flatten_json(const nlohmann::json& value, const std::string& key, ConfigMap& out) {
  if (value.is_null()) return;
  if (value.is_string()) {
    out[key] = value.get<std::string>();
  } else if (value.is_boolean()) {
    out[key] = value.get<bool>() ? "true" : "false";
  } else if (value.is_number()) {
    out[key] = value.dump();
  } else if (value.is_array()) {
    std::string joined;
    for (const auto& item : value) {
      if (!joined.empty()) joined += ", ";
      joined += item.is_string() ? item.get<std::string>() : item.dump();
    }
    out[key] = joined;
  } else {
    throw ConfigError({key + ": nested objects are not allowed here"});
  }
}

std::vector<SignalKind> default_signals(ExperimentKind experiment, bool have_path) {
  switch (experiment) {
    case ExperimentKind::Scatter: {
      std::vector<SignalKind> out{SignalKind::AR4, SignalKind::ProperMA, SignalKind::ImproperARMA};
      if (have_path) out.push_back(SignalKind::WindFile);
      return out;
    }
    case ExperimentKind::MseCurves:
      return {SignalKind::AR4, SignalKind::ImproperARMA};
    case ExperimentKind::GainVsNetworkSize:
      if (have_path) return {SignalKind::ImproperARMA, SignalKind::WindFile};
      return {SignalKind::ImproperARMA};
    default:
      return {SignalKind::AR4};
  }
}

std::string complex_text(cd v) {
  std::string out = format_double(v.real());
  if (v.imag() != 0.0 || std::signbit(v.imag())) {
    const auto im = format_double(v.imag());
    out += (im.front() == '-' ? "" : "+") + im + "i";
  }
  return out;
}

template <typename Derived>
nlohmann::json complex_list(const Eigen::MatrixBase<Derived>& v) {
  auto out = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_text(v(i)));
  return out;
}

}  // namespace

std::string_view to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::Scatter: return "Scatter";
    case ExperimentKind::GainVsStepsize: return "GainVsStepsize";
    case ExperimentKind::MseCurves: return "MseCurves";
    case ExperimentKind::GainVsNetworkSize: return "GainVsNetworkSize";
    case ExperimentKind::Custom: return "Custom";
  }
  return "?";
}

std::optional<ExperimentKind> parse_experiment_kind(std::string_view text) {
  for (auto kind : {ExperimentKind::Scatter, ExperimentKind::GainVsStepsize,
                    ExperimentKind::MseCurves, ExperimentKind::GainVsNetworkSize,
                    ExperimentKind::Custom}) {
    if (lower(to_string(kind)) == lower(trim(text))) return kind;
  }
  return std::nullopt;
}

std::vector<ExperimentKind> preset_kinds() {
  return {ExperimentKind::Scatter, ExperimentKind::GainVsStepsize, ExperimentKind::MseCurves,
          ExperimentKind::GainVsNetworkSize};
}

std::string_view describe(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::Scatter:
      return "one realization of each benchmark signal as (re, im) pairs";
    case ExperimentKind::GainVsStepsize:
      return "prediction gain of both algorithms over step sizes 1e-7 .. 1e-1 on AR(4)";
    case ExperimentKind::MseCurves:
      return "ensemble MSE curves, AR(4) at mu = 1e-3 and improper ARMA at mu = 1e-7";
    case ExperimentKind::GainVsNetworkSize:
      return "prediction gain over network sizes 2 .. 20 on improper ARMA at mu = 1e-7";
    case ExperimentKind::Custom:
      return "one batch per signal at the configured step size";
  }
  return "";
}

double default_step_size(SignalKind kind) {
  switch (kind) {
    case SignalKind::ImproperARMA: return 1e-7;
    case SignalKind::WindFile: return 1e-6;
    default: return 1e-3;
  }
}

std::vector<std::size_t> default_network_sizes() { return {2, 4, 6, 8, 10, 15, 20}; }

std::vector<double> default_step_size_list() {
  return {1e-7, 1e-6, 1e-5, 1e-4, 1e-3, 1e-2, 1e-1};
}

BatchConfig ExperimentConfig::batch(std::size_t panel) const {
  BatchConfig b;
  b.signal = signal;
  b.signal.kind = signals.at(panel);
  b.filter = filter;
  b.nodes = nodes;
  b.mu = mu.at(panel);
  b.seeds = seeds;
  b.master_seed = master_seed;
  b.iterations = iterations;
  b.shared_signal = shared_signal;
  b.noise_sigma2 = noise_sigma2;
  b.wind = wind;
  b.steady_fraction = steady_fraction;
  b.threads = threads;
  return b;
}

ConfigMap parse_ini(const std::string& text) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    std::string message = "line " + std::to_string(e.line()) + ": " + e.message();
    if (e.message() == "duplicate section name") {
      message += " (a top-level key cannot share a name with a section; use kind = under [signal])";
    }
    throw ConfigError({message});
  }
  ConfigMap out;
  for (const auto& [name, node] : tree) {
    if (node.empty()) {
      const bool empty_section =
          node.data().empty() && std::find(kSections.begin(), kSections.end(), name) != kSections.end();
      if (!empty_section) out[name] = node.data();
      continue;
    }
    for (const auto& [key, value] : node) out[name + "." + key] = value.data();
  }
  return out;
}

ConfigMap parse_json_config(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError({std::string("invalid JSON: ") + e.what()});
  }
  if (!doc.is_object()) throw ConfigError({"JSON config must be an object"});
  if (doc.contains("config") && doc["config"].is_object()) doc = doc["config"];

  ConfigMap out;
  for (const auto& [name, value] : doc.items()) {
    if (value.is_object()) {
      for (const auto& [key, inner] : value.items()) flatten_json(inner, name + "." + key, out);
    } else {
      flatten_json(value, name, out);
    }
  }
  return out;
}

ConfigMap read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError({"cannot read config file " + path.string()});
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') return parse_json_config(text);
  return parse_ini(text);
}

std::optional<std::string> suggest_key(std::string_view key) {
  const auto name = lower(leaf(key));
  for (const auto& alias : kAliases) {
    if (alias.name == name) return std::string(alias.key);
  }
  std::optional<std::string> best;
  std::size_t best_distance = name.size() <= 3 ? 1 : 2;
  for (std::string_view known : kKnownKeys) {
    const auto d = std::min(edit_distance(name, lower(leaf(known))),
                            edit_distance(lower(key), lower(known)));
    if (d <= best_distance && (!best || d < best_distance)) {
      best = std::string(known);
      best_distance = d;
    }
  }
  return best;
}

std::optional<std::complex<double>> parse_complex(std::string_view text) {
  text = trim(text);
  if (text.empty()) return std::nullopt;
  const char last = text.back();
  if (last != 'i' && last != 'j') {
    const auto re = parse_number<double>(text);
    if (!re) return std::nullopt;
    return cd(*re, 0.0);
  }
  text.remove_suffix(1);
  // Split at the last sign that is not a leading sign or an exponent sign.
  std::size_t split = std::string_view::npos;
  for (std::size_t i = text.size(); i-- > 1;) {
    if ((text[i] == '+' || text[i] == '-') && text[i - 1] != 'e' && text[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  const auto imag_part = split == std::string_view::npos ? text : text.substr(split);
  double im = 0.0;
  if (imag_part.empty() || imag_part == "+") {
    im = 1.0;
  } else if (imag_part == "-") {
    im = -1.0;
  } else {
    const auto v = parse_number<double>(imag_part);
    if (!v) return std::nullopt;
    im = *v;
  }
  if (split == std::string_view::npos) return cd(0.0, im);
  const auto re = parse_number<double>(text.substr(0, split));
  if (!re) return std::nullopt;
  return cd(*re, im);
}

std::string format_double(double value) {
  std::array<char, 32> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc()) throw std::runtime_error("cannot format number");
  return std::string(buf.data(), end);
}

ResolvedConfig resolve_config(const ConfigMap& entries, bool lax) {
  std::vector<std::string> issues;
  ResolvedConfig result;
  auto& cfg = result.config;
  Reader r(entries, issues);

  for (const auto& [key, value] : entries) {
    if (std::find(kKnownKeys.begin(), kKnownKeys.end(), key) != kKnownKeys.end()) continue;
    std::string message = "unknown key \"" + key + "\"";
    if (const auto hint = suggest_key(key)) message += "; did you mean \"" + *hint + "\"?";
    (lax ? result.warnings : issues).push_back(message);
  }

  if (const auto t = r.text("experiment")) {
    if (const auto kind = parse_experiment_kind(*t)) {
      cfg.experiment = *kind;
    } else {
      r.fail("experiment", "unknown experiment \"" + *t +
                               "\" (Scatter, GainVsStepsize, MseCurves, GainVsNetworkSize, Custom)");
    }
  }
  if (const auto t = r.text("output")) cfg.output = *t;
  if (const auto v = r.number<unsigned>("threads")) cfg.threads = *v;

  // Signal.
  if (const auto t = r.text("signal.path")) {
    cfg.signal.path = *t;
    if (!std::filesystem::is_regular_file(*t)) r.fail("signal.path", "file not found: " + *t);
  }
  std::optional<std::string> kinds_text;
  if (r.has("signal") && r.has("signal.kind")) {
    r.fail("signal", "give the signal kind either as signal = ... or under [signal], not both");
  }
  if (r.has("signal.kind")) kinds_text = r.text("signal.kind");
  else if (r.has("signal")) kinds_text = r.text("signal");
  const std::string kind_key = r.has("signal.kind") ? "signal.kind" : "signal";
  if (kinds_text) {
    cfg.signals.clear();
    for (const auto& item : split_list(*kinds_text)) {
      if (const auto kind = parse_kind_loose(item)) {
        cfg.signals.push_back(*kind);
      } else {
        r.fail(kind_key, "unknown signal kind \"" + item +
                             "\" (AR4, ProperMA, ImproperARMA, WLArmaTruth, WindFile)");
      }
    }
  } else {
    cfg.signals = default_signals(cfg.experiment, cfg.signal.path.has_value());
  }
  const auto uses = [&](SignalKind k) {
    return std::find(cfg.signals.begin(), cfg.signals.end(), k) != cfg.signals.end();
  };

  if (const auto v = r.number<double>("signal.lambda")) {
    if (!(*v >= 0.0 && *v <= 1.0)) r.fail("signal.lambda", "must lie in [0, 1]");
    cfg.signal.lambda = *v;
  }
  if (const auto v = r.number<Eigen::Index>("signal.length")) {
    if (*v < 2) r.fail("signal.length", "must be >= 2");
    cfg.signal.length = *v;
  }
  if (const auto v = r.number<Eigen::Index>("signal.burn_in")) {
    if (*v < 0) r.fail("signal.burn_in", "must be >= 0");
    cfg.signal.burn_in = *v;
  }
  if (const auto v = r.flag("signal.header")) cfg.wind.detect_header = *v;
  if (const auto v = r.flag("signal.remove_mean")) cfg.wind.remove_mean = *v;
  if (const auto v = r.number<double>("signal.noise_sigma2")) {
    if (!(*v >= 0.0) || !std::isfinite(*v)) r.fail("signal.noise_sigma2", "must be finite and >= 0");
    cfg.noise_sigma2 = *v;
  }
  if (const auto v = r.flag("signal.shared")) cfg.shared_signal = *v;
  if (uses(SignalKind::WindFile) && !cfg.signal.path) {
    r.fail("signal.path", "required for the WindFile signal");
  }

  const auto ta = r.complexes("signal.truth_a");
  const auto tg = r.complexes("signal.truth_g");
  const auto tb = r.complexes("signal.truth_b");
  const auto th = r.complexes("signal.truth_h");
  if (ta || tb || tg || th) {
    if (!ta || ta->size() < 1) r.fail("signal.truth_a", "needs at least one coefficient");
    if (!tb || tb->size() < 1) r.fail("signal.truth_b", "needs at least one coefficient");
    if (ta && tb && ta->size() >= 1 && tb->size() >= 1) {
      const auto m = ta->size();
      const auto n = tb->size() - 1;
      const ComplexVector<double> g = tg ? *tg : ComplexVector<double>::Zero(m);
      const ComplexVector<double> h = th ? *th : ComplexVector<double>::Zero(n + 1);
      if (g.size() != m) r.fail("signal.truth_g", "must have as many entries as truth_a");
      if (h.size() != n + 1) r.fail("signal.truth_h", "must have as many entries as truth_b");
      if (g.size() == m && h.size() == n + 1) {
        cfg.signal.truth_weights = WeightVector::from_blocks(*ta, g, *tb, h);
      }
    }
  } else if (uses(SignalKind::WLArmaTruth)) {
    r.fail("signal.truth_a", "WLArmaTruth needs truth_a and truth_b");
  }

  // Filter.
  if (const auto v = r.number<Eigen::Index>("filter.M")) {
    if (*v < 1) r.fail("filter.M", "must be >= 1");
    cfg.filter.feedback_order = *v;
  }
  if (const auto v = r.number<Eigen::Index>("filter.N")) {
    if (*v < 0) r.fail("filter.N", "must be >= 0");
    cfg.filter.feedforward_order = *v;
  }
  if (const auto t = r.text("filter.mode")) {
    const auto m = lower(*t);
    if (m == "exact") cfg.filter.mode = SensitivityMode::Exact;
    else if (m == "reduced") cfg.filter.mode = SensitivityMode::Reduced;
    else r.fail("filter.mode", "must be exact or reduced, got \"" + *t + "\"");
  }
  if (const auto v = r.number<double>("filter.divergence_threshold")) {
    if (!(*v > 0.0) || !std::isfinite(*v)) r.fail("filter.divergence_threshold", "must be positive");
    cfg.filter.divergence_threshold = *v;
  }

  // Network.
  if (const auto v = r.number<std::size_t>("network.L")) {
    if (*v < 1) r.fail("network.L", "must be >= 1");
    cfg.nodes = *v;
  }
  const auto valid_mu = [](double v) { return std::isfinite(v) && v >= 0.0; };
  if (const auto v = r.numbers<double>("network.mu")) {
    if (!std::all_of(v->begin(), v->end(), valid_mu)) {
      r.fail("network.mu", "step size mu must be finite and >= 0");
    }
    if (v->size() == 1) {
      cfg.mu.assign(cfg.signals.size(), v->front());
    } else if (v->size() == cfg.signals.size()) {
      cfg.mu = *v;
    } else {
      r.fail("network.mu", "give one step size, or one per signal kind (" +
                               std::to_string(cfg.signals.size()) + ")");
    }
  } else {
    for (auto kind : cfg.signals) cfg.mu.push_back(default_step_size(kind));
  }
  if (const auto v = r.numbers<double>("network.mu_list")) {
    if (v->empty() || !std::all_of(v->begin(), v->end(), valid_mu)) {
      r.fail("network.mu_list", "step sizes mu must be finite and >= 0");
    }
    cfg.mu_list = *v;
  } else if (cfg.experiment == ExperimentKind::GainVsStepsize) {
    cfg.mu_list = default_step_size_list();
  }
  if (const auto v = r.numbers<std::size_t>("network.L_list")) {
    if (std::any_of(v->begin(), v->end(), [](std::size_t l) { return l < 1; })) {
      r.fail("network.L_list", "network sizes must be >= 1");
    }
    cfg.network_sizes = *v;
  } else if (cfg.experiment == ExperimentKind::GainVsNetworkSize) {
    cfg.network_sizes = default_network_sizes();
  }
  if (!cfg.mu_list.empty() && cfg.experiment != ExperimentKind::GainVsStepsize) {
    result.warnings.push_back("network.mu_list is only used by GainVsStepsize");
  }
  if (!cfg.network_sizes.empty() && cfg.experiment != ExperimentKind::GainVsNetworkSize) {
    result.warnings.push_back("network.L_list is only used by GainVsNetworkSize");
  }
  if (const auto v = r.number<Eigen::Index>("network.iterations")) {
    if (*v < 1) r.fail("network.iterations", "must be >= 1");
    cfg.iterations = *v;
  }

  // Seeds and metrics.
  if (const auto v = r.number<std::size_t>("seeds.count")) {
    if (*v < 1) r.fail("seeds.count", "must be >= 1");
    cfg.seeds = *v;
  }
  if (const auto v = r.number<std::uint64_t>("seeds.master")) cfg.master_seed = *v;
  if (const auto v = r.number<Eigen::Index>("metrics.smoothing_window")) {
    if (*v < 1) r.fail("metrics.smoothing_window", "must be >= 1");
    cfg.smoothing_window = *v;
  }
  if (const auto v = r.number<double>("metrics.steady_fraction")) {
    if (!(*v > 0.0 && *v <= 1.0)) r.fail("metrics.steady_fraction", "must lie in (0, 1]");
    cfg.steady_fraction = *v;
  }

  if (!issues.empty()) throw ConfigError(std::move(issues));
  return result;
}

ResolvedConfig validate_config(const std::filesystem::path& path, bool lax) {
  return resolve_config(read_config_file(path), lax);
}

nlohmann::json to_json(const ExperimentConfig& c) {
  using nlohmann::json;
  json signal;
  auto kinds = json::array();
  for (auto k : c.signals) kinds.push_back(std::string(to_string(k)));
  signal["kind"] = kinds;
  signal["lambda"] = c.signal.lambda ? json(*c.signal.lambda) : json();
  signal["length"] = c.signal.length;
  signal["burn_in"] = c.signal.burn_in;
  signal["path"] = c.signal.path ? json(c.signal.path->string()) : json();
  signal["header"] = c.wind.detect_header;
  signal["remove_mean"] = c.wind.remove_mean;
  signal["noise_sigma2"] = c.noise_sigma2;
  signal["shared"] = c.shared_signal;
  if (c.signal.truth_weights) {
    const auto& w = *c.signal.truth_weights;
    signal["truth_a"] = complex_list(w.a());
    signal["truth_g"] = complex_list(w.g());
    signal["truth_b"] = complex_list(w.b());
    signal["truth_h"] = complex_list(w.h());
  }

  json filter;
  filter["M"] = c.filter.feedback_order;
  filter["N"] = c.filter.feedforward_order;
  filter["mode"] = c.filter.mode == SensitivityMode::Exact ? "exact" : "reduced";
  filter["divergence_threshold"] = c.filter.divergence_threshold;

  json network;
  network["L"] = c.nodes;
  network["mu"] = c.mu;
  network["mu_list"] = c.mu_list;
  network["L_list"] = c.network_sizes;
  network["iterations"] = c.iterations ? json(*c.iterations) : json();

  json out;
  out["experiment"] = std::string(to_string(c.experiment));
  out["output"] = c.output.string();
  out["threads"] = c.threads;
  out["signal"] = signal;
  out["filter"] = filter;
  out["network"] = network;
  out["seeds"] = {{"count", c.seeds}, {"master", c.master_seed}};
  out["metrics"] = {{"smoothing_window", c.smoothing_window},
                    {"steady_fraction", c.steady_fraction}};
  return out;
}

}  // namespace iaca
