#pragma once

#include <optional>
#include <string_view>

#include "qpcd/amplitudes.hpp"

namespace qpcd {

/// Detector operating point while the interfering electron dwells in the dot.
/// The left/right detector states differ by the change dT_d caused by the
/// extra dot charge: T_l = T_d, T_r = T_d + dT_d.
struct DephasingInput {
  double t_d = 0.5;
  double dt_d = 0.0;
  double n = 0.0;          // probe count, real-valued
  double eta_shift = 0.0;  // eta_l - eta_r per probe

  void validate() const;
};

enum class Regime { noisy, intermediate, quiet };

std::string_view to_string(Regime regime);

struct DephasingResult {
  double nu_d_exact = 1.0;
  // Linearized zero-temperature form; empty when T_d is on a plateau while
  // dT_d > 0 (the expansion is undefined there).
  std::optional<double> nu_d_linear;
  double phase_shift = 0.0;  // N * eta_shift wrapped to (-pi, pi]
  Regime regime = Regime::noisy;
};

// e^{i eta_shift} cos(theta_r - theta_l) with theta = arccos(sqrt(T)).
Complex single_probe_overlap(const DephasingInput& input);

/// nu_d = |nu_d^(0)|^N (exact product over independent probes) together with
///   nu_d_linear = max(0, 1 - N dT_d^2 / (8 T_d (1 - T_d))).
/// Regime: noisy if sigma(T_d) >= 10 dT_d, quiet if sigma(T_d) <= dT_d / 10.
DephasingResult n_probe_visibility(const DephasingInput& input);

// 1 - (dT_d / sigma)^2 / 8 with sigma = sqrt(T_d (1 - T_d) / N).
double shot_noise_form(double t_d, double dt_d, double n);

Regime classify_regime(double t_d, double dt_d, double n);

// theta_l - theta_r, the exact angle change (positive for dT_d > 0).
double detector_angle_shift(double t_d, double dt_d);

}  // namespace qpcd
