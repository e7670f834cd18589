#include "qpcd/dephasing.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "qpcd/errors.hpp"

namespace qpcd {

namespace {

// (dT_d / sigma)^2 / 8 with sigma^2 = T_d (1 - T_d) / N; shared by both
// second-order forms so they agree to the last bit.
double second_order_term(double t_d, double dt_d, double n) {
  return n * dt_d * dt_d / (8.0 * (t_d * (1.0 - t_d)));
}

constexpr double regime_factor = 10.0;

double wrap_phase(double phi) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double w = std::remainder(phi, two_pi);  // [-pi, pi]
  if (w <= -std::numbers::pi) w += two_pi;
  return w;
}

}  // namespace

void DephasingInput::validate() const {
  if (!(t_d >= 0.0 && t_d <= 1.0)) throw DomainError("T_d must lie in [0, 1]");
  if (!(dt_d >= 0.0)) throw DomainError("dT_d must be >= 0");
  if (t_d + dt_d > 1.0) {
    std::ostringstream msg;
    msg << "T_d + dT_d = " << t_d + dt_d << " exceeds 1";
    throw DomainError(msg.str());
  }
  if (!(n >= 0.0) || !std::isfinite(n)) throw DomainError("probe count N must be finite and >= 0");
  if (!std::isfinite(eta_shift)) throw DomainError("eta_shift must be finite");
}

std::string_view to_string(Regime regime) {
  switch (regime) {
    case Regime::noisy: return "noisy";
    case Regime::intermediate: return "intermediate";
    case Regime::quiet: return "quiet";
  }
  return "unknown";
}

double detector_angle_shift(double t_d, double dt_d) {
  return std::acos(std::sqrt(t_d)) - std::acos(std::sqrt(t_d + dt_d));
}

Complex single_probe_overlap(const DephasingInput& input) {
  input.validate();
  return std::polar(std::cos(detector_angle_shift(input.t_d, input.dt_d)), input.eta_shift);
}

Regime classify_regime(double t_d, double dt_d, double n) {
  if (dt_d == 0.0 || n == 0.0) return Regime::noisy;
  const double sigma = std::sqrt(t_d * (1.0 - t_d) / n);
  if (sigma >= regime_factor * dt_d) return Regime::noisy;
  if (sigma * regime_factor <= dt_d) return Regime::quiet;
  return Regime::intermediate;
}

DephasingResult n_probe_visibility(const DephasingInput& input) {
  const double single = std::abs(single_probe_overlap(input));
  DephasingResult out;
  out.nu_d_exact = std::pow(single, input.n);
  if (input.dt_d == 0.0) {
    out.nu_d_linear = 1.0;
  } else if (input.t_d > 0.0 && input.t_d < 1.0) {
    out.nu_d_linear =
        std::max(0.0, 1.0 - second_order_term(input.t_d, input.dt_d, input.n));
  }
  out.phase_shift = wrap_phase(input.n * input.eta_shift);
  out.regime = classify_regime(input.t_d, input.dt_d, input.n);
  return out;
}

double shot_noise_form(double t_d, double dt_d, double n) {
  if (!(t_d > 0.0 && t_d < 1.0)) throw DomainError("shot-noise form needs 0 < T_d < 1");
  if (!(n > 0.0)) throw DomainError("shot-noise form needs N > 0");
  if (!(dt_d >= 0.0)) throw DomainError("dT_d must be >= 0");
  return 1.0 - second_order_term(t_d, dt_d, n);
}

}  // namespace qpcd
