#include "qpcd/amplitudes.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "qpcd/errors.hpp"

namespace qpcd {

Complex ScatteringPair::t() const noexcept {
  return std::polar(std::cos(theta_), eta_);
}

Complex ScatteringPair::r() const noexcept {
  return Complex(0.0, 1.0) * std::polar(std::sin(theta_), eta_);
}

double ScatteringPair::transmission() const noexcept {
  const double c = std::cos(theta_);
  return c * c;
}

ScatteringPair make_pair(double theta, double eta) {
  if (!(theta >= 0.0 && theta <= std::numbers::pi / 2)) {
    std::ostringstream msg;
    msg << "scattering angle theta=" << theta << " outside [0, pi/2]";
    throw DomainError(msg.str());
  }
  if (!std::isfinite(eta)) {
    throw DomainError("scattering phase eta must be finite");
  }
  return ScatteringPair(theta, eta);
}

ScatteringPair pair_from_transmission(double transmission, double eta) {
  if (!(transmission >= 0.0 && transmission <= 1.0)) {
    std::ostringstream msg;
    msg << "transmission probability " << transmission << " outside [0, 1]";
    throw DomainError(msg.str());
  }
  return make_pair(std::acos(std::sqrt(transmission)), eta);
}

Complex sp_overlap(const ScatteringPair& right, const ScatteringPair& left) noexcept {
  return std::conj(right.t()) * left.t() + std::conj(right.r()) * left.r();
}

}  // namespace qpcd
