#include "qpcd/quantum_dot.hpp"

#include <cmath>
#include <numbers>

#include "qpcd/constants.hpp"
#include "qpcd/errors.hpp"

namespace qpcd {

namespace {

constexpr int neighbour_peaks = 7;
constexpr int smoothing_window = 8;

double thermal_energy_uev(const DotModel& dot) {
  return 2.5 * constants::boltzmann_uev_per_k * dot.theta_mk * constants::milli;
}

// cosh^-2(x) without overflow for large |x|.
double sech2(double x) {
  const double e = std::exp(-2.0 * std::abs(x));
  const double d = 1.0 + e;
  return 4.0 * e / (d * d);
}

}  // namespace

void DotModel::validate() const {
  if (!(gamma_uev > 0.0) || !std::isfinite(gamma_uev)) throw DomainError("dot gamma must be > 0");
  if (!(peak_spacing_v > 0.0) || !std::isfinite(peak_spacing_v)) {
    throw DomainError("dot peak spacing must be > 0");
  }
  if (!std::isfinite(peak_offset_v)) throw DomainError("dot peak offset must be finite");
  if (!(lever_arm > 0.0) || !std::isfinite(lever_arm)) throw DomainError("lever arm must be > 0");
  if (!(theta_mk >= 0.0) || !std::isfinite(theta_mk)) {
    throw DomainError("electron temperature must be >= 0");
  }
  if (!(peak_conductance > 0.0)) throw DomainError("peak conductance must be > 0");
}

double DotModel::thermal_width_v() const {
  // energy in micro-eV divided by lever arm gives micro-volts on the plunger
  return thermal_energy_uev(*this) / lever_arm * constants::micro;
}

double dwell_time(const DotModel& dot) {
  if (!(dot.gamma_uev > 0.0)) throw DomainError("dot gamma must be > 0");
  const double gamma_j = dot.gamma_uev * constants::micro * constants::elementary_charge;
  return constants::planck / (2.0 * std::numbers::pi * gamma_j);
}

double cb_conductance(const DotModel& dot, double v_p) {
  if (!(dot.theta_mk > 0.0)) {
    throw DomainError("CB lineshape needs a nonzero electron temperature");
  }
  const double w = dot.thermal_width_v();
  const double u = (v_p - dot.peak_offset_v) / dot.peak_spacing_v;
  const double nearest = std::round(u);
  double g = 0.0;
  for (int k = -neighbour_peaks; k <= neighbour_peaks; ++k) {
    const double center = dot.peak_offset_v + (nearest + k) * dot.peak_spacing_v;
    g += sech2((v_p - center) / w);
  }
  return dot.peak_conductance * g;
}

SawtoothState sawtooth_fraction(const DotModel& dot, double v_p) {
  const double u = (v_p - dot.peak_offset_v) / dot.peak_spacing_v;
  const double index = std::floor(u);
  double phase = u - index;
  if (phase >= 1.0) phase = 0.0;
  return {phase, static_cast<long>(index)};
}

double smoothed_charge_index(const DotModel& dot, double v_p) {
  const double u = (v_p - dot.peak_offset_v) / dot.peak_spacing_v;
  if (!(dot.theta_mk > 0.0)) return std::floor(u);
  const double w = dot.thermal_width_v();
  const double nearest = std::round(u);
  double index = nearest - smoothing_window - 1;
  for (int k = -smoothing_window; k <= smoothing_window; ++k) {
    const double center = dot.peak_offset_v + (nearest + k) * dot.peak_spacing_v;
    index += 0.5 * (1.0 + std::tanh((v_p - center) / w));
  }
  return index;
}

double induced_gate_shift(const DotModel& dot, double v_p, double delta_v) {
  const double u = (v_p - dot.peak_offset_v) / dot.peak_spacing_v;
  return delta_v * (u - smoothed_charge_index(dot, v_p));
}

}  // namespace qpcd
