#pragma once

#include <cstddef>
#include <ostream>
#include <vector>

#include "qpcd/amplitudes.hpp"

namespace qpcd {

inline constexpr double default_bare_visibility = 0.054;

// |a_right| / |a_left| giving bare visibility nu0 with |a_right| <= |a_left|.
double amplitude_ratio_for_visibility(double nu0);

/// Two-path Aharonov-Bohm interferometer. a_left / a_right are the
/// emitter-to-collector amplitudes through the left slit and through the
/// dot. Multiply reflected paths are neglected; an optional incoherent
/// background adds to the collector transmission.
struct InterferometerModel {
  Complex a_left{0.26, 0.0};
  Complex a_right{amplitude_ratio_for_visibility(default_bare_visibility) * 0.26, 0.0};
  double delta_b_mt = 2.6;  // AB period
  double v_e_uv = 10.0;     // emitter excitation, micro-volts
  double background = 0.0;  // incoherent addition to T_EC

  void validate() const;

  double path_weight() const { return std::norm(a_left) + std::norm(a_right); }
  // Ratio by which the background dilutes fringe contrast, S / (S + c_bg).
  double background_factor() const;
};

// Amplitudes (a_left real, a_right real) with |a_left| fixed and |a_right|
// chosen so that the bare visibility equals nu0 (|a_right| <= |a_left|).
InterferometerModel with_bare_visibility(InterferometerModel model, double nu0);

// Delta alpha = 2 pi B / Delta B.
double ab_phase(const InterferometerModel& model, double b_mt);

/// T_EC = |a_L|^2 + |a_R|^2 + 2 Re[e^{i dalpha} conj(a_L) a_R nu_d] (+ background).
/// Throws DomainError if |nu_d| > 1, ModelError if T_EC leaves [0, 1].
double collector_transmission(const InterferometerModel& model, double delta_alpha,
                              Complex nu_d);

// nu0 = 2 |a_L| |a_R| / (|a_L|^2 + |a_R|^2)
double bare_visibility(const InterferometerModel& model);

struct CollectorCurrent {
  double amperes = 0.0;
  double natural = 0.0;  // units of (2e^2/h) V_E, i.e. T_EC
};

CollectorCurrent collector_current(const InterferometerModel& model, double t_ec);

struct AbTrace {
  std::vector<double> b_mt;
  std::vector<double> i_c_natural;
  std::vector<double> i_c_amperes;

  void validate() const;
};

// Uniform grid over [b_lo, b_hi]; per-point results go to fixed slots so the
// output does not depend on `threads`.
AbTrace simulate_trace(const InterferometerModel& model, Complex nu_d, double b_lo, double b_hi,
                       std::size_t n_points, int threads = 1);

struct FringeFit {
  double visibility = 0.0;
  double phase = 0.0;  // radians, atan2(-c2, c1)
  double mean = 0.0;
  double amplitude = 0.0;
  double rss = 0.0;
};

/// Least-squares fit of c0 + c1 cos(2 pi B / dB) + c2 sin(2 pi B / dB) to the
/// natural-unit current. For a sinusoid, sqrt(c1^2 + c2^2) / c0 equals the
/// peak-to-peak amplitude over twice the mean.
FringeFit extract_visibility(const AbTrace& trace, double delta_b_mt);

// Period in [period_lo, period_hi] minimising the harmonic-fit residual.
double fit_period(const AbTrace& trace, double period_lo, double period_hi);

// Columns B_mT,I_C_A,I_C_natural.
void write_trace_csv(const AbTrace& trace, std::ostream& out);

}  // namespace qpcd
