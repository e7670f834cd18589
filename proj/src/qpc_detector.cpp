#include "qpcd/qpc_detector.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "qpcd/constants.hpp"
#include "qpcd/errors.hpp"

namespace qpcd {

namespace {

bool on_plateau(double t_d) {
  return t_d <= CouplingModel::plateau_tolerance || 1.0 - t_d <= CouplingModel::plateau_tolerance;
}

void require_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    std::ostringstream msg;
    msg << what << "=" << p << " outside [0, 1]";
    throw DomainError(msg.str());
  }
}

}  // namespace

void QpcTransmissionCurve::validate() const {
  if (model == TransmissionModel::logistic) {
    if (!(width > 0.0) || !std::isfinite(width)) throw DomainError("QPC curve width must be > 0");
    if (!std::isfinite(v_half)) throw DomainError("QPC curve v_half must be finite");
    return;
  }
  if (!table || table->empty()) throw DomainError("QPC table model requires a table");
  for (const auto& p : table->points()) require_probability(p.y, "tabulated T_d");
}

double transmission(const QpcTransmissionCurve& curve, double v_g) {
  if (curve.model == TransmissionModel::table) {
    return std::clamp((*curve.table)(v_g), 0.0, 1.0);
  }
  const double z = (v_g - curve.v_half) / curve.width;
  // Split branches keep the tails accurate instead of rounding to 0/1 early.
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double transmission_slope(const QpcTransmissionCurve& curve, double v_g) {
  if (curve.model == TransmissionModel::logistic) {
    const double t = transmission(curve, v_g);
    return t * (1.0 - t) / curve.width;
  }
  const auto pts = curve.table->points();
  if (!(v_g >= curve.table->x_min() && v_g <= curve.table->x_max())) {
    throw RangeError("table slope lookup outside range");
  }
  auto hi = std::upper_bound(pts.begin(), pts.end(), v_g,
                             [](double v, const TablePoint& p) { return v < p.x; });
  if (hi == pts.end()) --hi;
  if (hi == pts.begin()) ++hi;
  auto lo = std::prev(hi);
  return (hi->y - lo->y) / (hi->x - lo->x);
}

double gate_for_transmission(const QpcTransmissionCurve& curve, double t_d) {
  if (!(t_d > 0.0 && t_d < 1.0)) {
    throw DomainError("operating transmission must lie strictly inside (0, 1)");
  }
  if (curve.model == TransmissionModel::logistic) {
    return curve.v_half + curve.width * std::log(t_d / (1.0 - t_d));
  }
  // Tables are monotone by calibration; search the bracketing segment.
  const auto pts = curve.table->points();
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const double y0 = pts[i - 1].y;
    const double y1 = pts[i].y;
    if ((t_d - y0) * (t_d - y1) <= 0.0 && y0 != y1) {
      return pts[i - 1].x + (t_d - y0) / (y1 - y0) * (pts[i].x - pts[i - 1].x);
    }
  }
  throw RangeError("transmission not reached by the tabulated QPC curve");
}

double landauer_conductance(double t_d) { return t_d; }

double landauer_conductance_si(double t_d) {
  return constants::conductance_quantum * t_d;
}

void CouplingModel::validate() const {
  switch (kind) {
    case CouplingKind::gate_shift:
      if (!std::isfinite(delta_v)) throw DomainError("coupling delta_v must be finite");
      break;
    case CouplingKind::saturating:
      if (!(c >= 0.0) || !std::isfinite(c)) throw DomainError("coupling c must be >= 0");
      if (!(s > 0.0) || !std::isfinite(s)) throw DomainError("coupling s must be > 0");
      break;
    case CouplingKind::table:
      if (!table || table->empty()) throw DomainError("table coupling requires a table");
      for (const auto& p : table->points()) {
        require_probability(p.x, "tabulated T_d");
        if (!(p.y >= 0.0)) throw DomainError("tabulated dT_d must be >= 0");
      }
      break;
  }
}

double delta_transmission_at(const CouplingModel& coupling, double t_d) {
  require_probability(t_d, "T_d");
  if (on_plateau(t_d)) return 0.0;
  switch (coupling.kind) {
    case CouplingKind::saturating: {
      const double x = t_d * (1.0 - t_d);
      return coupling.c * x / (x + coupling.s);
    }
    case CouplingKind::table:
      return std::max(0.0, (*coupling.table)(t_d));
    case CouplingKind::gate_shift:
      break;
  }
  throw DomainError("gate_shift coupling needs the transmission curve");
}

double delta_transmission(const CouplingModel& coupling, const QpcTransmissionCurve& curve,
                          double v_g) {
  const double t_d = transmission(curve, v_g);
  if (coupling.kind != CouplingKind::gate_shift) return delta_transmission_at(coupling, t_d);
  if (on_plateau(t_d)) return 0.0;
  return std::abs(transmission(curve, v_g - coupling.delta_v) - t_d);
}

double probe_rate(DetectorBias bias) {
  return 2.0 * constants::elementary_charge * bias.v_d_uv * constants::micro / constants::planck;
}

double probe_count(DetectorBias bias, double gamma_uev) {
  if (!(gamma_uev > 0.0)) throw DomainError("resonance width gamma must be > 0");
  if (!(bias.v_d_uv >= 0.0)) throw DomainError("detector bias must be >= 0");
  // e V_d / (pi Gamma): micro-volts over micro-electronvolts is dimensionless.
  return bias.v_d_uv / (std::numbers::pi * gamma_uev);
}

double shot_noise_sigma(double t_d, double n) {
  require_probability(t_d, "T_d");
  if (!(n > 0.0)) throw DomainError("probe count N must be > 0");
  return std::sqrt(t_d * (1.0 - t_d) / n);
}

double transmitted_count_sigma(double t_d, double n) {
  require_probability(t_d, "T_d");
  if (!(n >= 0.0)) throw DomainError("probe count N must be >= 0");
  return std::sqrt(n * t_d * (1.0 - t_d));
}

}  // namespace qpcd
