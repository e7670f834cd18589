#include "qpcd/interferometer.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "qpcd/constants.hpp"
#include "qpcd/errors.hpp"
#include "qpcd/parallel.hpp"
#include "qpcd/output.hpp"

namespace qpcd {

namespace {

constexpr double overlap_slack = 1e-12;
constexpr double probability_slack = 1e-12;

struct HarmonicCoefficients {
  double c0, c1, c2, rss;
};

HarmonicCoefficients harmonic_fit(const AbTrace& trace, double period) {
  const auto n = static_cast<Eigen::Index>(trace.b_mt.size());
  Eigen::MatrixXd design(n, 3);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double arg = 2.0 * std::numbers::pi * trace.b_mt[i] / period;
    design(i, 0) = 1.0;
    design(i, 1) = std::cos(arg);
    design(i, 2) = std::sin(arg);
    y(i) = trace.i_c_natural[i];
  }
  const Eigen::Vector3d c = design.colPivHouseholderQr().solve(y);
  const double rss = (design * c - y).squaredNorm();
  return {c(0), c(1), c(2), rss};
}

}  // namespace

void InterferometerModel::validate() const {
  if (!std::isfinite(a_left.real()) || !std::isfinite(a_left.imag()) ||
      !std::isfinite(a_right.real()) || !std::isfinite(a_right.imag())) {
    throw DomainError("path amplitudes must be finite");
  }
  if (path_weight() > 1.0 + probability_slack) {
    throw DomainError("|a_left|^2 + |a_right|^2 must not exceed 1");
  }
  if (!(delta_b_mt > 0.0)) throw DomainError("AB period delta_b must be > 0");
  if (!(v_e_uv > 0.0)) throw DomainError("excitation voltage v_e must be > 0");
  if (!(background >= 0.0 && background <= 1.0)) {
    throw DomainError("incoherent background must lie in [0, 1]");
  }
}

double InterferometerModel::background_factor() const {
  const double s = path_weight();
  return s / (s + background);
}

double amplitude_ratio_for_visibility(double nu0) {
  if (!(nu0 >= 0.0 && nu0 <= 1.0)) throw DomainError("bare visibility must lie in [0, 1]");
  return nu0 == 0.0 ? 0.0 : (1.0 - std::sqrt(1.0 - nu0 * nu0)) / nu0;
}

InterferometerModel with_bare_visibility(InterferometerModel model, double nu0) {
  const double left = std::abs(model.a_left);
  const double ratio = amplitude_ratio_for_visibility(nu0);
  model.a_left = Complex(left, 0.0);
  model.a_right = Complex(ratio * left, 0.0);
  return model;
}

double ab_phase(const InterferometerModel& model, double b_mt) {
  return 2.0 * std::numbers::pi * b_mt / model.delta_b_mt;
}

double collector_transmission(const InterferometerModel& model, double delta_alpha,
                              Complex nu_d) {
  if (std::abs(nu_d) > 1.0 + overlap_slack) {
    std::ostringstream msg;
    msg << "detector overlap |nu_d|=" << std::abs(nu_d) << " exceeds 1";
    throw DomainError(msg.str());
  }
  const Complex cross = std::polar(1.0, delta_alpha) * std::conj(model.a_left) *
                        model.a_right * nu_d;
  const double t_ec = model.path_weight() + model.background + 2.0 * cross.real();
  if (t_ec < -probability_slack || t_ec > 1.0 + probability_slack) {
    std::ostringstream msg;
    msg << "collector transmission " << t_ec << " outside [0, 1]; inconsistent model";
    throw ModelError(msg.str());
  }
  return std::clamp(t_ec, 0.0, 1.0);
}

double bare_visibility(const InterferometerModel& model) {
  const double weight = model.path_weight();
  if (!(weight > 0.0)) throw DomainError("bare visibility undefined with both amplitudes zero");
  return 2.0 * std::abs(model.a_left) * std::abs(model.a_right) / weight;
}

CollectorCurrent collector_current(const InterferometerModel& model, double t_ec) {
  return {constants::conductance_quantum * t_ec * model.v_e_uv * constants::micro, t_ec};
}

void AbTrace::validate() const {
  if (b_mt.size() < 2) throw InsufficientDataError("AB trace needs at least two points");
  if (i_c_natural.size() != b_mt.size()) throw ModelError("AB trace columns differ in length");
  for (std::size_t i = 1; i < b_mt.size(); ++i) {
    if (!(b_mt[i] > b_mt[i - 1])) throw ModelError("AB trace fields must be strictly increasing");
  }
}

AbTrace simulate_trace(const InterferometerModel& model, Complex nu_d, double b_lo, double b_hi,
                       std::size_t n_points, int threads) {
  if (n_points < 2) throw DomainError("trace needs at least two points");
  if (!(b_hi > b_lo)) throw DomainError("field range must satisfy lo < hi");
  AbTrace trace;
  trace.b_mt.resize(n_points);
  trace.i_c_natural.resize(n_points);
  trace.i_c_amperes.resize(n_points);
  const double step = (b_hi - b_lo) / static_cast<double>(n_points - 1);
  parallel_for(n_points, threads, [&](std::size_t i) {
    const double b = i + 1 == n_points ? b_hi : b_lo + step * static_cast<double>(i);
    const auto current =
        collector_current(model, collector_transmission(model, ab_phase(model, b), nu_d));
    trace.b_mt[i] = b;
    trace.i_c_natural[i] = current.natural;
    trace.i_c_amperes[i] = current.amperes;
  });
  return trace;
}

FringeFit extract_visibility(const AbTrace& trace, double delta_b_mt) {
  trace.validate();
  if (!(delta_b_mt > 0.0)) throw DomainError("AB period must be > 0");
  const double span = trace.b_mt.back() - trace.b_mt.front();
  if (span < 3.0 * delta_b_mt * (1.0 - 1e-9)) {
    throw InsufficientDataError("visibility extraction needs at least three AB periods");
  }
  const auto fit = harmonic_fit(trace, delta_b_mt);
  if (!(fit.c0 > 0.0)) throw ModelError("degenerate trace: mean collector current <= 0");
  FringeFit out;
  out.mean = fit.c0;
  out.amplitude = std::hypot(fit.c1, fit.c2);
  out.visibility = out.amplitude / fit.c0;
  out.phase = std::atan2(-fit.c2, fit.c1);
  out.rss = fit.rss;
  return out;
}

double fit_period(const AbTrace& trace, double period_lo, double period_hi) {
  trace.validate();
  if (!(period_hi > period_lo && period_lo > 0.0)) {
    throw DomainError("period search range must satisfy 0 < lo < hi");
  }
  constexpr int scan_points = 400;
  const double step = (period_hi - period_lo) / scan_points;
  int best = 0;
  double best_rss = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= scan_points; ++i) {
    const double rss = harmonic_fit(trace, period_lo + step * i).rss;
    if (rss < best_rss) {
      best_rss = rss;
      best = i;
    }
  }
  // golden-section refinement inside the bracketing scan cells
  double a = period_lo + step * std::max(best - 1, 0);
  double b = period_lo + step * std::min(best + 1, scan_points);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = harmonic_fit(trace, x1).rss;
  double f2 = harmonic_fit(trace, x2).rss;
  for (int iter = 0; iter < 200 && (b - a) > 1e-13 * b; ++iter) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = harmonic_fit(trace, x1).rss;
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = harmonic_fit(trace, x2).rss;
    }
  }
  return 0.5 * (a + b);
}

void write_trace_csv(const AbTrace& trace, std::ostream& out) {
  out << "B_mT,I_C_A,I_C_natural\n";
  for (std::size_t i = 0; i < trace.b_mt.size(); ++i) {
    out << format_double(trace.b_mt[i]) << ',' << format_double(trace.i_c_amperes[i]) << ','
        << format_double(trace.i_c_natural[i]) << '\n';
  }
}

}  // namespace qpcd
