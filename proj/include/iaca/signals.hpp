#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <string_view>

#include <Eigen/Core>

#include "iaca/weights.hpp"

namespace iaca {

enum class SignalKind { AR4, ProperMA, ImproperARMA, WLArmaTruth, WindFile };

std::string_view to_string(SignalKind kind);
std::optional<SignalKind> parse_signal_kind(std::string_view text);

/// Declarative description of a signal source.
struct SignalSpec {
  SignalKind kind = SignalKind::AR4;
  /// Noncircularity degree of the driving noise; unset means the kind's default
  /// (0 for AR4 and ProperMA, 0.95 for ImproperARMA, 0 for WLArmaTruth inputs).
  std::optional<double> lambda;
  Eigen::Index length = 5000;
  std::uint64_t seed = 0;
  Eigen::Index burn_in = 500;
  std::optional<WeightVector> truth_weights;  // WLArmaTruth only
  std::optional<std::filesystem::path> path;  // WindFile only

  double resolved_lambda() const;
  void validate() const;
};

double default_lambda(SignalKind kind);

/// Doubly white Gaussian noise with E[zz*] = 1 and E[zz] = lambda:
/// z = sqrt((1+lambda)/2) u + i sqrt((1-lambda)/2) v with u, v iid N(0, 1).
class NoiseSource {
 public:
  NoiseSource(double lambda, std::uint64_t seed);

  double lambda() const noexcept { return lambda_; }
  Eigen::VectorXcd draw(Eigen::Index count);

 private:
  double lambda_;
  double re_scale_;
  double im_scale_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
};

Eigen::VectorXcd draw_noise(NoiseSource& source, Eigen::Index count);

// Deterministic responses of the benchmark processes to a given driving
// sequence z, from zero initial state and with no burn-in. The generators
// below draw z and call these.

/// r(n) = 1.79 r(n-1) - 1.85 r(n-2) + 1.27 r(n-3) - 0.41 r(n-4) + z(n)
Eigen::VectorXcd ar4_response(const Eigen::VectorXcd& z);
/// y(0) = 0, y(n) = 2 z(n) + 0.5 z*(n) + z(n-1) + 0.9 z*(n-1)
Eigen::VectorXcd ma_response(const Eigen::VectorXcd& z);
/// r(0) = 0, AR(5) part 1.8, -1.85, 1.3, -0.5, 0.22 driven by the MA part above.
Eigen::VectorXcd arma_response(const Eigen::VectorXcd& z);

Eigen::VectorXcd gen_ar4(const SignalSpec& spec);
Eigen::VectorXcd gen_ma(const SignalSpec& spec);
Eigen::VectorXcd gen_arma(const SignalSpec& spec);

/// Desired response of the widely linear ARMA model with spec.truth_weights
/// driven by `input`: d(n) = sum a d(n-l) + sum b x(n-l) + sum g d*(n-l) + sum h x*(n-l).
Eigen::VectorXcd gen_wl_truth(const SignalSpec& spec, const Eigen::VectorXcd& input);

/// u = d + sqrt(sigma2) z, z from a NoiseSource(lambda, seed).
Eigen::VectorXcd add_measurement_noise(const Eigen::VectorXcd& d, double sigma2, double lambda,
                                       std::uint64_t seed);

struct WindLoadOptions {
  bool detect_header = true;
  bool remove_mean = false;
};

/// Two comma-separated real columns per row (east, north) -> east + i north.
/// Blank lines are ignored. With detect_header, a first non-blank row that does
/// not parse as numbers is skipped.
Eigen::VectorXcd load_wind(const std::filesystem::path& path, WindLoadOptions options = {});

/// Generate a synthetic or file-backed signal of `spec.length` samples.
/// WLArmaTruth needs an input stream and goes through gen_wl_truth instead.
Eigen::VectorXcd generate(const SignalSpec& spec, WindLoadOptions wind = {});

}  // namespace iaca
