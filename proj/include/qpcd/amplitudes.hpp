#pragma once

#include <complex>

namespace qpcd {

using Complex = std::complex<double>;

/// Transmission/reflection amplitudes of a single-channel, left-right
/// symmetric barrier:
///   t = cos(theta) e^{i eta},  r = i sin(theta) e^{i eta}.
/// Current conservation (|t|^2 + |r|^2 = 1) and the symmetry constraint
/// Re(t conj(r)) = 0 hold by construction.
class ScatteringPair {
 public:
  ScatteringPair() = default;

  double theta() const noexcept { return theta_; }
  double eta() const noexcept { return eta_; }

  Complex t() const noexcept;
  Complex r() const noexcept;

  // |t|^2 = cos^2(theta)
  double transmission() const noexcept;

 private:
  friend ScatteringPair make_pair(double theta, double eta);
  ScatteringPair(double theta, double eta) : theta_(theta), eta_(eta) {}

  double theta_ = 0.0;
  double eta_ = 0.0;
};

/// theta must lie in [0, pi/2]; eta must be finite. Throws DomainError.
ScatteringPair make_pair(double theta, double eta);

/// Principal branch theta = arccos(sqrt(T)); T in [0, 1].
ScatteringPair pair_from_transmission(double transmission, double eta);

/// Outgoing single-particle state of one probe electron, made of the
/// transmitted and reflected partial waves. The amplitudes are taken as
/// energy independent, so the state carries no energy grid.
struct SpOutgoingState {
  ScatteringPair pair;

  double norm() const noexcept { return std::norm(pair.t()) + std::norm(pair.r()); }
};

/// <O(t_r, r_r) | O(t_l, r_l)> = conj(t_r) t_l + conj(r_r) r_l.
/// Modulus is cos(theta_r - theta_l), argument is eta_l - eta_r.
Complex sp_overlap(const ScatteringPair& right, const ScatteringPair& left) noexcept;

inline Complex sp_overlap(const SpOutgoingState& right, const SpOutgoingState& left) noexcept {
  return sp_overlap(right.pair, left.pair);
}

}  // namespace qpcd
