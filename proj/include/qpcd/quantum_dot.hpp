#pragma once

namespace qpcd {

/// Quantum dot deep in Coulomb blockade, acting as one slit of the
/// interferometer.
struct DotModel {
  double gamma_uev = 0.5;          // resonance width Gamma
  double peak_spacing_v = 0.04;    // plunger period of CB peaks
  double peak_offset_v = 0.0;      // plunger voltage of peak 0
  double lever_arm = 0.05;         // plunger-to-dot energy conversion
  double theta_mk = 80.0;          // electron temperature
  double peak_conductance = 0.5;   // CB peak height, units of 2e^2/h

  void validate() const;

  // Thermal half-scale of a CB peak on the plunger axis:
  // 2.5 k_B Theta / (e * lever_arm), in volts.
  double thermal_width_v() const;
};

// tau_d = h / (2 pi Gamma), seconds. Uses the on-resonance value.
double dwell_time(const DotModel& dot);

/// Sum of thermally broadened peaks
///   g_peak cosh^-2(lever_arm e (V_p - V_n) / (2.5 k_B Theta))
/// centred at V_n = peak_offset + n * peak_spacing, in units of 2e^2/h.
/// Sums the 7 neighbours on each side of the nearest peak.
/// Throws DomainError for theta_mk = 0.
double cb_conductance(const DotModel& dot, double v_p);

struct SawtoothState {
  double phase_in_period = 0.0;  // in [0, 1)
  long charge_step_index = 0;
};

SawtoothState sawtooth_fraction(const DotModel& dot, double v_p);

// Charge step index with each step smoothed by the integral of the CB
// lineshape, (1 + tanh((V_p - V_n)/w)) / 2. Equals charge_step_index away
// from the peaks. For theta_mk = 0 the unsmoothed index is returned.
double smoothed_charge_index(const DotModel& dot, double v_p);

/// Effective gate shift felt by the detector: rises linearly by delta_v over
/// one CB period and drops by delta_v (one electron added) at every peak.
double induced_gate_shift(const DotModel& dot, double v_p, double delta_v);

}  // namespace qpcd
