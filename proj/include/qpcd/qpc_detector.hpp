#pragma once

#include <optional>

#include "qpcd/calibration_table.hpp"

namespace qpcd {

enum class TransmissionModel { logistic, table };

/// Gate-voltage dependence of the detector transmission T_d(V_g).
/// The logistic form 1 / (1 + exp(-(V_g - v_half)/width)) is a smooth
/// saddle-point-like step between the two plateaus; `table` interpolates a
/// measured (V_g, T_d) curve.
struct QpcTransmissionCurve {
  TransmissionModel model = TransmissionModel::logistic;
  double v_half = 0.188;   // V
  double width = 0.0008;   // V
  std::optional<InterpolationTable> table;

  void validate() const;
};

double transmission(const QpcTransmissionCurve& curve, double v_g);

// dT_d/dV_g; analytic for logistic, piecewise slope for tables.
double transmission_slope(const QpcTransmissionCurve& curve, double v_g);

// Gate voltage at which the curve reaches T_d (0 < T_d < 1).
double gate_for_transmission(const QpcTransmissionCurve& curve, double t_d);

// Landauer conductance in units of 2e^2/h (numerically T_d).
double landauer_conductance(double t_d);
// Same, in siemens.
double landauer_conductance_si(double t_d);

enum class CouplingKind { gate_shift, saturating, table };

/// Change of detector transmission caused by one extra electron on the dot.
///   gate_shift: |T_d(V_g - delta_v) - T_d(V_g)|
///   saturating: c x / (x + s), x = T_d (1 - T_d)
///   table:      interpolated (T_d, dT_d) calibration data
/// Every kind returns exactly zero on the plateaus, i.e. when T_d or
/// 1 - T_d is below `plateau_tolerance`.
struct CouplingModel {
  CouplingKind kind = CouplingKind::saturating;
  double delta_v = 0.0004;  // V
  double c = 0.05;
  double s = 0.05;
  double eta_shift = 0.0;  // phase eta_l - eta_r acquired per probe
  std::optional<InterpolationTable> table;

  static constexpr double plateau_tolerance = 1e-6;

  void validate() const;
};

double delta_transmission(const CouplingModel& coupling, const QpcTransmissionCurve& curve,
                          double v_g);

// Coupling evaluated at a known T_d. Not available for gate_shift, which
// needs the curve (throws DomainError).
double delta_transmission_at(const CouplingModel& coupling, double t_d);

struct DetectorBias {
  double v_d_uv = 0.0;  // drain-source bias, micro-volts
};

/// Mean number of electrons that probe the detector while the interfering
/// electron dwells in the dot: N = (2 e V_d / h) * h / (2 pi Gamma)
///                                = e V_d / (pi Gamma).
/// Bias in micro-volts, gamma in micro-electronvolts. Not rounded.
double probe_count(DetectorBias bias, double gamma_uev);

// Rate 2 e V_d / h of electrons impinging on the detector, in 1/s.
double probe_rate(DetectorBias bias);

/// sigma(T_d) = sqrt(T_d (1 - T_d) / N), the binomial uncertainty of a
/// transmission estimate from N probes.
double shot_noise_sigma(double t_d, double n);

// sigma(N_t) = sqrt(N T_d (1 - T_d)).
double transmitted_count_sigma(double t_d, double n);

}  // namespace qpcd
