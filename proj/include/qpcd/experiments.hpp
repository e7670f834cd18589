#pragma once

#include <span>

#include "qpcd/config.hpp"
#include "qpcd/dephasing.hpp"
#include "qpcd/sweep_result.hpp"

namespace qpcd {

struct RunOptions {
  int threads = 1;
};

/// Detector seen by the interfering electron at one (V_g, V_d) point:
/// dot -> detector coupling -> probe count -> dephasing factor.
struct DetectorState {
  double v_g = 0.0;
  double t_d = 0.0;
  double dt_d = 0.0;
  double n = 0.0;
  DephasingResult dephasing;
  double nu_d = 1.0;      // magnitude used by the pipeline (linear or exact form)
  Complex nu_d_complex;   // nu_d e^{i phase_shift}
};

DetectorState detector_state(const ExperimentConfig& cfg, double v_g, double v_d_uv);

// nu = nu0 * background_factor * nu_d
double pipeline_visibility(const ExperimentConfig& cfg, const DetectorState& state);

/// I_C(B) trace over the AB field. meta.results carries the detector state,
/// the injected visibility and, for spans of at least three periods, the
/// harmonic fit and fitted period.
SweepResult run_field_sweep(const ExperimentConfig& cfg, RunOptions options = {});

/// g_QD(V_p) and the sawtooth T_d(V_p) with gate_shift coupling; meta carries
/// the per-peak (T_d, dT_d) calibration rows and the detected reset count.
/// Throws InsufficientDataError for fewer than two CB peaks in range.
SweepResult run_plunger_sweep(const ExperimentConfig& cfg, RunOptions options = {});

/// T_d, dT_d and nu_d / nu versus QPC gate for every configured bias value.
SweepResult run_gate_sweep(const ExperimentConfig& cfg, RunOptions options = {});

/// nu versus detector bias at the fixed operating point, with a linear fit.
SweepResult run_bias_sweep(const ExperimentConfig& cfg, RunOptions options = {});

// Dispatches on cfg.sweep.axis.
SweepResult run_sweep(const ExperimentConfig& cfg, RunOptions options = {});

struct ExtremaCount {
  int maxima = 0;
  int minima = 0;
};

// Runs of equal values are merged; endpoints count when they exceed (or fall
// below) their single neighbour.
ExtremaCount count_local_extrema(std::span<const double> values);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

LinearFit fit_line(std::span<const double> x, std::span<const double> y);

// Column-name suffix for a bias value, e.g. "100uV".
std::string bias_label(double v_d_uv);

}  // namespace qpcd
