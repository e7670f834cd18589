#include "qpcd/experiments.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "qpcd/errors.hpp"
#include "qpcd/interferometer.hpp"
#include "qpcd/output.hpp"
#include "qpcd/parallel.hpp"
#include "qpcd/quantum_dot.hpp"

namespace qpcd {

namespace {

constexpr const char* library_name = "qpcdephase";

std::vector<double> uniform_axis(const SweepSpec& sweep) {
  std::vector<double> axis(sweep.n_points);
  const double step = (sweep.hi - sweep.lo) / static_cast<double>(sweep.n_points - 1);
  for (std::size_t i = 0; i < sweep.n_points; ++i) {
    axis[i] = i + 1 == sweep.n_points ? sweep.hi : sweep.lo + step * static_cast<double>(i);
  }
  return axis;
}

void require_axis(const ExperimentConfig& cfg, SweepAxis axis) {
  if (cfg.sweep.axis != axis) {
    throw ConfigError(ConfigError::Kind::invalid_value, "sweep.axis", 0,
                      "sweep.axis is '" + std::string(to_string(cfg.sweep.axis)) +
                          "', expected '" + std::string(to_string(axis)) + "'");
  }
}

Json base_meta(const ExperimentConfig& cfg) {
  Json meta;
  meta["library"] = library_name;
  meta["version"] = QPCD_VERSION;
  meta["seed"] = cfg.seed;
  meta["config"] = config_to_json(cfg);
  meta["assumed_defaults"] = {
      "interferometer amplitudes: bare visibility 0.054 with zero background",
      "dot.peak_spacing_V", "qpc logistic transmission form", "coupling functional form"};
  return meta;
}

// Seeded Gaussian noise, drawn sequentially after the parallel physics pass.
void add_noise(const ExperimentConfig& cfg, std::span<std::vector<double>*> columns) {
  if (cfg.noise_amplitude == 0.0) return;
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> noise(0.0, cfg.noise_amplitude);
  for (auto* column : columns) {
    for (double& v : *column) v += noise(rng);
  }
}

Json detector_json(const DetectorState& s) {
  Json j;
  j["V_g_V"] = s.v_g;
  j["T_d"] = s.t_d;
  j["dT_d"] = s.dt_d;
  j["N"] = s.n;
  j["nu_d"] = s.nu_d;
  j["nu_d_exact"] = s.dephasing.nu_d_exact;
  if (s.dephasing.nu_d_linear) j["nu_d_linear"] = *s.dephasing.nu_d_linear;
  j["phase_shift"] = s.dephasing.phase_shift;
  j["regime"] = std::string(to_string(s.dephasing.regime));
  return j;
}

}  // namespace

std::string bias_label(double v_d_uv) { return format_double(v_d_uv) + "uV"; }

DetectorState detector_state(const ExperimentConfig& cfg, double v_g, double v_d_uv) {
  DetectorState s;
  s.v_g = v_g;
  s.t_d = transmission(cfg.qpc, v_g);
  s.dt_d = delta_transmission(cfg.coupling, cfg.qpc, v_g);
  s.n = probe_count(DetectorBias{v_d_uv}, cfg.dot.gamma_uev);
  try {
    s.dephasing = n_probe_visibility({s.t_d, s.dt_d, s.n, cfg.coupling.eta_shift});
  } catch (const DomainError& e) {
    throw ModelError(std::string("detector operating point: ") + e.what());
  }
  const bool linear = cfg.dephasing_form == DephasingForm::linear && s.dephasing.nu_d_linear;
  s.nu_d = linear ? *s.dephasing.nu_d_linear : s.dephasing.nu_d_exact;
  s.nu_d_complex = std::polar(s.nu_d, s.dephasing.phase_shift);
  return s;
}

double pipeline_visibility(const ExperimentConfig& cfg, const DetectorState& state) {
  const auto& ifm = cfg.interferometer;
  return bare_visibility(ifm) * ifm.background_factor() * state.nu_d;
}

SweepResult run_field_sweep(const ExperimentConfig& cfg, RunOptions options) {
  require_axis(cfg, SweepAxis::field);
  cfg.validate();
  const auto state = detector_state(cfg, cfg.operating_gate_v(), cfg.bias.v_d_uv);
  const auto& ifm = cfg.interferometer;
  auto trace = simulate_trace(ifm, state.nu_d_complex, cfg.sweep.lo, cfg.sweep.hi,
                              cfg.sweep.n_points, options.threads);

  std::vector<double>* noisy[] = {&trace.i_c_natural};
  add_noise(cfg, noisy);
  for (std::size_t i = 0; i < trace.b_mt.size(); ++i) {
    trace.i_c_amperes[i] = collector_current(ifm, trace.i_c_natural[i]).amperes;
  }

  SweepResult out;
  out.axis_name = "B_mT";
  out.axis_units = "mT";
  out.axis_values = trace.b_mt;
  out.columns.push_back({"I_C_A", trace.i_c_amperes});
  out.columns.push_back({"I_C_natural", trace.i_c_natural});

  out.meta = base_meta(cfg);
  Json results;
  results["detector"] = detector_json(state);
  results["bare_visibility"] = bare_visibility(ifm);
  results["background_factor"] = ifm.background_factor();
  results["expected_visibility"] = pipeline_visibility(cfg, state);
  if (cfg.sweep.hi - cfg.sweep.lo >= 3.0 * ifm.delta_b_mt) {
    const auto fit = extract_visibility(trace, ifm.delta_b_mt);
    results["fit"] = {{"visibility", fit.visibility},
                      {"phase", fit.phase},
                      {"mean", fit.mean},
                      {"amplitude", fit.amplitude}};
    results["fitted_period_mT"] = fit_period(trace, 0.5 * ifm.delta_b_mt, 1.5 * ifm.delta_b_mt);
  }
  out.meta["results"] = std::move(results);
  return out;
}

SweepResult run_plunger_sweep(const ExperimentConfig& cfg, RunOptions options) {
  require_axis(cfg, SweepAxis::plunger);
  cfg.validate();
  const auto& dot = cfg.dot;
  const double v_g0 = cfg.operating_gate_v();
  const double delta_v = cfg.coupling.delta_v;
  CouplingModel step_coupling = cfg.coupling;
  step_coupling.kind = CouplingKind::gate_shift;

  const long first_peak =
      static_cast<long>(std::ceil((cfg.sweep.lo - dot.peak_offset_v) / dot.peak_spacing_v));
  const long last_peak =
      static_cast<long>(std::floor((cfg.sweep.hi - dot.peak_offset_v) / dot.peak_spacing_v));
  const long peaks = last_peak - first_peak + 1;
  if (peaks < 2) {
    throw InsufficientDataError("plunger sweep must contain at least two CB peaks");
  }

  SweepResult out;
  out.axis_name = "V_p_V";
  out.axis_units = "V";
  out.axis_values = uniform_axis(cfg.sweep);
  auto& g_qd = out.add_column("g_QD");
  auto& t_d = out.add_column("T_d");
  auto& dt_d = out.add_column("dT_d");
  auto& shift = out.add_column("gate_shift_V");
  auto& phase = out.add_column("phase_in_period");
  auto& charge = out.add_column("charge_step_index");

  parallel_for(out.axis_values.size(), options.threads, [&](std::size_t i) {
    const double v_p = out.axis_values[i];
    const double v_eff = v_g0 + induced_gate_shift(dot, v_p, delta_v);
    const auto saw = sawtooth_fraction(dot, v_p);
    g_qd[i] = cb_conductance(dot, v_p);
    t_d[i] = transmission(cfg.qpc, v_eff);
    dt_d[i] = delta_transmission(step_coupling, cfg.qpc, v_eff);
    shift[i] = v_eff - v_g0;
    phase[i] = saw.phase_in_period;
    charge[i] = static_cast<double>(saw.charge_step_index);
  });

  // Per-peak limits of the unsmoothed sawtooth: phase -> 1 before the reset,
  // phase 0 after it.
  Json rows_v, rows_t, rows_dt, rows_expected;
  double mean_t = 0.0, mean_dt = 0.0, mean_expected = 0.0;
  for (long k = first_peak; k <= last_peak; ++k) {
    const double v_before = v_g0 + delta_v;
    const double before = transmission(cfg.qpc, v_before);
    const double after = transmission(cfg.qpc, v_g0);
    const double expected = delta_transmission(step_coupling, cfg.qpc, v_before);
    rows_v.push_back(dot.peak_offset_v + static_cast<double>(k) * dot.peak_spacing_v);
    rows_t.push_back(before);
    rows_dt.push_back(std::abs(before - after));
    rows_expected.push_back(expected);
    mean_t += before;
    mean_dt += std::abs(before - after);
    mean_expected += expected;
  }
  mean_t /= static_cast<double>(peaks);
  mean_dt /= static_cast<double>(peaks);
  mean_expected /= static_cast<double>(peaks);

  // Resets in the sampled trace: maximal runs of decreasing T_d whose total
  // drop exceeds half the coupling amplitude.
  const double threshold = std::max(0.5 * mean_expected, 1e-12);
  Json drops = Json::array();
  std::size_t i = 1;
  while (i < t_d.size()) {
    if (t_d[i] < t_d[i - 1]) {
      const std::size_t start = i - 1;
      while (i < t_d.size() && t_d[i] < t_d[i - 1]) ++i;
      const double drop = t_d[start] - t_d[i - 1];
      if (drop > threshold) drops.push_back(drop);
    } else {
      ++i;
    }
  }

  std::vector<double>* noisy[] = {&g_qd, &t_d};
  add_noise(cfg, noisy);

  out.meta = base_meta(cfg);
  Json results;
  results["operating_V_g_V"] = v_g0;
  results["peaks_in_range"] = peaks;
  results["resets_detected"] = drops.size();
  results["trace_drops"] = std::move(drops);
  results["calibration"] = {{"V_p_V", rows_v},
                            {"T_d", rows_t},
                            {"dT_d", rows_dt},
                            {"expected_dT_d", rows_expected}};
  results["calibration_mean"] = {{"T_d", mean_t}, {"dT_d", mean_dt}};
  out.meta["results"] = std::move(results);
  return out;
}

SweepResult run_gate_sweep(const ExperimentConfig& cfg, RunOptions options) {
  require_axis(cfg, SweepAxis::qpc_gate);
  cfg.validate();
  SweepResult out;
  out.axis_name = "V_g_V";
  out.axis_units = "V";
  out.axis_values = uniform_axis(cfg.sweep);
  const std::size_t n = out.axis_values.size();
  const auto& biases = cfg.bias_values_uv;

  auto& t_d = out.add_column("T_d");
  auto& dt_d = out.add_column("dT_d");
  // Four columns per bias: N, nu_d, nu_d_exact, nu.
  for (double b : biases) {
    const auto label = bias_label(b);
    out.add_column("N_" + label);
    out.add_column("nu_d_" + label);
    out.add_column("nu_d_exact_" + label);
    out.add_column("nu_" + label);
  }

  parallel_for(n, options.threads, [&](std::size_t i) {
    for (std::size_t b = 0; b < biases.size(); ++b) {
      const auto state = detector_state(cfg, out.axis_values[i], biases[b]);
      if (b == 0) {
        t_d[i] = state.t_d;
        dt_d[i] = state.dt_d;
      }
      out.columns[2 + 4 * b].values[i] = state.n;
      out.columns[3 + 4 * b].values[i] = state.nu_d;
      out.columns[4 + 4 * b].values[i] = state.dephasing.nu_d_exact;
      out.columns[5 + 4 * b].values[i] = pipeline_visibility(cfg, state);
    }
  });

  std::vector<std::vector<double>*> noisy;
  for (std::size_t b = 0; b < biases.size(); ++b) noisy.push_back(&out.columns[5 + 4 * b].values);
  add_noise(cfg, noisy);

  out.meta = base_meta(cfg);
  const double reference =
      bare_visibility(cfg.interferometer) * cfg.interferometer.background_factor();
  Json curves = Json::object();
  for (std::size_t b = 0; b < biases.size(); ++b) {
    const auto& nu = out.columns[5 + 4 * b].values;
    const auto extrema = count_local_extrema(nu);
    Json dips = Json::array();
    for (std::size_t i = 1; i + 1 < nu.size(); ++i) {
      if (nu[i] < nu[i - 1] && nu[i] <= nu[i + 1]) dips.push_back(reference - nu[i]);
    }
    curves[bias_label(biases[b])] = {{"V_d_uV", biases[b]},
                                     {"local_maxima", extrema.maxima},
                                     {"local_minima", extrema.minima},
                                     {"dip_depths", dips}};
  }
  out.meta["results"] = {{"reference_visibility", reference}, {"curves", curves}};
  return out;
}

SweepResult run_bias_sweep(const ExperimentConfig& cfg, RunOptions options) {
  require_axis(cfg, SweepAxis::bias);
  cfg.validate();
  const double v_g = cfg.operating_gate_v();
  SweepResult out;
  out.axis_name = "V_d_uV";
  out.axis_units = "uV";
  out.axis_values = uniform_axis(cfg.sweep);
  auto& n_col = out.add_column("N");
  auto& nu_d = out.add_column("nu_d");
  auto& nu_d_exact = out.add_column("nu_d_exact");
  auto& nu = out.add_column("nu");
  auto& ratio = out.add_column("nu_ratio");

  const double reference =
      bare_visibility(cfg.interferometer) * cfg.interferometer.background_factor();
  parallel_for(out.axis_values.size(), options.threads, [&](std::size_t i) {
    const auto state = detector_state(cfg, v_g, out.axis_values[i]);
    n_col[i] = state.n;
    nu_d[i] = state.nu_d;
    nu_d_exact[i] = state.dephasing.nu_d_exact;
    nu[i] = pipeline_visibility(cfg, state);
  });
  std::vector<double>* noisy[] = {&nu};
  add_noise(cfg, noisy);
  for (std::size_t i = 0; i < nu.size(); ++i) ratio[i] = nu[i] / reference;

  const auto state = detector_state(cfg, v_g, 0.0);
  const double x = state.t_d * (1.0 - state.t_d);
  const double analytic_ratio_slope =
      x > 0.0 ? -state.dt_d * state.dt_d / (8.0 * std::numbers::pi * cfg.dot.gamma_uev * x) : 0.0;
  const auto fit = fit_line(out.axis_values, nu);
  const auto ratio_fit = fit_line(out.axis_values, ratio);

  out.meta = base_meta(cfg);
  out.meta["results"] = {
      {"operating_V_g_V", v_g},
      {"T_d", state.t_d},
      {"dT_d", state.dt_d},
      {"reference_visibility", reference},
      {"fit", {{"slope_per_uV", fit.slope}, {"intercept", fit.intercept}, {"r_squared", fit.r_squared}}},
      {"ratio_fit",
       {{"slope_per_uV", ratio_fit.slope},
        {"intercept", ratio_fit.intercept},
        {"r_squared", ratio_fit.r_squared}}},
      {"analytic_slope_per_uV", reference * analytic_ratio_slope},
      {"analytic_ratio_slope_per_uV", analytic_ratio_slope}};
  return out;
}

SweepResult run_sweep(const ExperimentConfig& cfg, RunOptions options) {
  switch (cfg.sweep.axis) {
    case SweepAxis::field: return run_field_sweep(cfg, options);
    case SweepAxis::plunger: return run_plunger_sweep(cfg, options);
    case SweepAxis::qpc_gate: return run_gate_sweep(cfg, options);
    case SweepAxis::bias: return run_bias_sweep(cfg, options);
  }
  throw ModelError("unknown sweep axis");
}

ExtremaCount count_local_extrema(std::span<const double> values) {
  std::vector<double> runs;
  for (double v : values) {
    if (runs.empty() || v != runs.back()) runs.push_back(v);
  }
  ExtremaCount out;
  if (runs.size() < 2) return out;
  const std::size_t last = runs.size() - 1;
  for (std::size_t i = 0; i <= last; ++i) {
    const bool above_left = i == 0 || runs[i] > runs[i - 1];
    const bool above_right = i == last || runs[i] > runs[i + 1];
    const bool below_left = i == 0 || runs[i] < runs[i - 1];
    const bool below_right = i == last || runs[i] < runs[i + 1];
    if (above_left && above_right) ++out.maxima;
    if (below_left && below_right) ++out.minima;
  }
  return out;
}

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw InsufficientDataError("line fit needs two or more paired samples");
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw InsufficientDataError("line fit needs distinct abscissae");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    ss_res += r * r;
  }
  fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : (ss_res == 0.0 ? 1.0 : 0.0);
  return fit;
}

}  // namespace qpcd
