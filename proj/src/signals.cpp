#include "iaca/signals.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <span>
#include <sstream>

#include "iaca/errors.hpp"
#include "iaca/filter.hpp"

namespace iaca {

namespace {

constexpr double kGeneratorBound = 1e9;

constexpr std::array<double, 4> kAr4Coeffs{1.79, -1.85, 1.27, -0.41};
constexpr std::array<double, 5> kArmaArCoeffs{1.8, -1.85, 1.3, -0.5, 0.22};

using cd = std::complex<double>;

cd ma_part(const Eigen::VectorXcd& z, Eigen::Index n) {
  return 2.0 * z(n) + 0.5 * std::conj(z(n)) + z(n - 1) + 0.9 * std::conj(z(n - 1));
}

template <std::size_t P>
cd ar_part(const Eigen::VectorXcd& r, Eigen::Index n, const std::array<double, P>& coeffs) {
  cd acc = 0.0;
  for (std::size_t l = 1; l <= P; ++l) {
    const auto idx = n - static_cast<Eigen::Index>(l);
    if (idx < 0) break;
    acc += coeffs[l - 1] * r(idx);
  }
  return acc;
}

void guard(cd value, Eigen::Index n, std::string_view process) {
  if (!std::isfinite(value.real()) || !std::isfinite(value.imag()) ||
      std::abs(value) > kGeneratorBound) {
    throw GenerationError(std::string(process) + " recursion diverged at sample " +
                          std::to_string(n) + " (|r| = " + std::to_string(std::abs(value)) +
                          ")");
  }
}

Eigen::VectorXcd drop_burn_in(const Eigen::VectorXcd& full, Eigen::Index burn_in) {
  return full.tail(full.size() - burn_in);
}

Eigen::VectorXcd driving_noise(const SignalSpec& spec) {
  NoiseSource source(spec.resolved_lambda(), spec.seed);
  return source.draw(spec.length + spec.burn_in);
}

std::string_view trim(std::string_view s) {
  constexpr std::string_view ws = " \t\r\n";
  const auto first = s.find_first_not_of(ws);
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(ws);
  return s.substr(first, last - first + 1);
}

std::optional<double> parse_double(std::string_view field) {
  field = trim(field);
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  double value = 0.0;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (field.empty() || ec != std::errc() || ptr != end || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

}  // namespace

std::string_view to_string(SignalKind kind) {
  switch (kind) {
    case SignalKind::AR4: return "AR4";
    case SignalKind::ProperMA: return "ProperMA";
    case SignalKind::ImproperARMA: return "ImproperARMA";
    case SignalKind::WLArmaTruth: return "WLArmaTruth";
    case SignalKind::WindFile: return "WindFile";
  }
  return "?";
}

std::optional<SignalKind> parse_signal_kind(std::string_view text) {
  for (auto kind : {SignalKind::AR4, SignalKind::ProperMA, SignalKind::ImproperARMA,
                    SignalKind::WLArmaTruth, SignalKind::WindFile}) {
    if (text == to_string(kind)) return kind;
  }
  return std::nullopt;
}

double default_lambda(SignalKind kind) {
  return kind == SignalKind::ImproperARMA ? 0.95 : 0.0;
}

double SignalSpec::resolved_lambda() const { return lambda.value_or(default_lambda(kind)); }

void SignalSpec::validate() const {
  const double lam = resolved_lambda();
  if (!(lam >= 0.0 && lam <= 1.0)) throw InvalidInput("signal lambda must lie in [0, 1]");
  if (length < 1) throw InvalidInput("signal length must be >= 1");
  if (burn_in < 0) throw InvalidInput("signal burn_in must be >= 0");
  if (kind == SignalKind::WLArmaTruth && !truth_weights) {
    throw InvalidInput("WLArmaTruth signal needs truth weights");
  }
  if (kind == SignalKind::WindFile && !path) throw InvalidInput("WindFile signal needs a path");
}

NoiseSource::NoiseSource(double lambda, std::uint64_t seed)
    : lambda_(lambda),
      re_scale_(std::sqrt((1.0 + lambda) / 2.0)),
      im_scale_(std::sqrt((1.0 - lambda) / 2.0)),
      engine_(seed) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw InvalidInput("noise lambda must lie in [0, 1]");
}

Eigen::VectorXcd NoiseSource::draw(Eigen::Index count) {
  if (count < 0) throw InvalidInput("noise count must be non-negative");
  Eigen::VectorXcd out(count);
  for (Eigen::Index n = 0; n < count; ++n) {
    const double u = normal_(engine_);
    const double v = normal_(engine_);
    out(n) = cd(re_scale_ * u, im_scale_ * v);
  }
  return out;
}

Eigen::VectorXcd draw_noise(NoiseSource& source, Eigen::Index count) {
  if (count < 1) throw InvalidInput("draw_noise needs count >= 1");
  return source.draw(count);
}

Eigen::VectorXcd ar4_response(const Eigen::VectorXcd& z) {
  Eigen::VectorXcd r = Eigen::VectorXcd::Zero(z.size());
  for (Eigen::Index n = 0; n < z.size(); ++n) {
    r(n) = ar_part(r, n, kAr4Coeffs) + z(n);
    guard(r(n), n, "AR(4)");
  }
  return r;
}

Eigen::VectorXcd ma_response(const Eigen::VectorXcd& z) {
  Eigen::VectorXcd y = Eigen::VectorXcd::Zero(z.size());
  for (Eigen::Index n = 1; n < z.size(); ++n) y(n) = ma_part(z, n);
  return y;
}

Eigen::VectorXcd arma_response(const Eigen::VectorXcd& z) {
  Eigen::VectorXcd r = Eigen::VectorXcd::Zero(z.size());
  for (Eigen::Index n = 1; n < z.size(); ++n) {
    r(n) = ar_part(r, n, kArmaArCoeffs) + ma_part(z, n);
    guard(r(n), n, "ARMA");
  }
  return r;
}

Eigen::VectorXcd gen_ar4(const SignalSpec& spec) {
  spec.validate();
  if (spec.kind != SignalKind::AR4) throw InvalidInput("gen_ar4 called with a non-AR4 spec");
  return drop_burn_in(ar4_response(driving_noise(spec)), spec.burn_in);
}

Eigen::VectorXcd gen_ma(const SignalSpec& spec) {
  spec.validate();
  if (spec.kind != SignalKind::ProperMA) throw InvalidInput("gen_ma called with a non-MA spec");
  return drop_burn_in(ma_response(driving_noise(spec)), spec.burn_in);
}

Eigen::VectorXcd gen_arma(const SignalSpec& spec) {
  spec.validate();
  if (spec.kind != SignalKind::ImproperARMA) {
    throw InvalidInput("gen_arma called with a non-ARMA spec");
  }
  return drop_burn_in(arma_response(driving_noise(spec)), spec.burn_in);
}

Eigen::VectorXcd gen_wl_truth(const SignalSpec& spec, const Eigen::VectorXcd& input) {
  if (!spec.truth_weights) throw InvalidInput("gen_wl_truth needs truth weights");
  const WeightVector& truth = *spec.truth_weights;
  FilterConfig config;
  config.feedback_order = truth.feedback_order();
  config.feedforward_order = truth.feedforward_order();
  config.mode = SensitivityMode::Reduced;
  config.divergence_threshold = kGeneratorBound;

  // The model is the filter recursion itself, with the truth weights held fixed.
  FilterState<double> model(config);
  Eigen::VectorXcd d(input.size());
  for (Eigen::Index n = 0; n < input.size(); ++n) {
    d(n) = filter_output(model, truth, input(n));
    guard(d(n), n, "widely linear ARMA");
    advance(model, d(n));
  }
  return d;
}

Eigen::VectorXcd add_measurement_noise(const Eigen::VectorXcd& d, double sigma2, double lambda,
                                       std::uint64_t seed) {
  if (!(sigma2 >= 0.0) || !std::isfinite(sigma2)) {
    throw InvalidInput("measurement noise variance must be finite and >= 0");
  }
  if (sigma2 == 0.0 || d.size() == 0) return d;
  NoiseSource source(lambda, seed);
  return d + std::sqrt(sigma2) * source.draw(d.size());
}

Eigen::VectorXcd load_wind(const std::filesystem::path& path, WindLoadOptions options) {
  std::ifstream in(path);
  if (!in) throw LoaderError("cannot open wind file '" + path.string() + "'");

  std::vector<cd> samples;
  std::string line;
  std::size_t line_no = 0;
  bool seen_row = false;
  while (std::getline(in, line)) {
    ++line_no;
    const auto row = trim(line);
    if (row.empty()) continue;
    const bool first_row = !seen_row;
    seen_row = true;

    const auto comma = row.find(',');
    std::optional<double> east;
    std::optional<double> north;
    if (comma != std::string_view::npos && row.find(',', comma + 1) == std::string_view::npos) {
      east = parse_double(row.substr(0, comma));
      north = parse_double(row.substr(comma + 1));
    }
    if (east && north) {
      samples.emplace_back(*east, *north);
      continue;
    }
    if (first_row && options.detect_header) continue;
    if (comma == std::string_view::npos || row.find(',', comma + 1) != std::string_view::npos) {
      throw LoaderError(path.string() + ":" + std::to_string(line_no) +
                            ": expected exactly 2 comma-separated fields",
                        line_no);
    }
    throw LoaderError(path.string() + ":" + std::to_string(line_no) + ": non-numeric field",
                      line_no);
  }
  if (samples.empty()) throw LoaderError("wind file '" + path.string() + "' has no data rows");

  Eigen::VectorXcd out = Eigen::Map<const Eigen::VectorXcd>(
      samples.data(), static_cast<Eigen::Index>(samples.size()));
  if (options.remove_mean) out.array() -= out.mean();
  return out;
}

Eigen::VectorXcd generate(const SignalSpec& spec, WindLoadOptions wind) {
  switch (spec.kind) {
    case SignalKind::AR4: return gen_ar4(spec);
    case SignalKind::ProperMA: return gen_ma(spec);
    case SignalKind::ImproperARMA: return gen_arma(spec);
    case SignalKind::WindFile: {
      spec.validate();
      Eigen::VectorXcd series = load_wind(*spec.path, wind);
      if (series.size() > spec.length) series.conservativeResize(spec.length);
      return series;
    }
    case SignalKind::WLArmaTruth:
      throw InvalidInput("WLArmaTruth needs an input stream; use gen_wl_truth");
  }
  throw InvalidInput("unknown signal kind");
}

}  // namespace iaca
