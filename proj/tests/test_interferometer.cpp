#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "qpcd/errors.hpp"
#include "qpcd/interferometer.hpp"

using namespace qpcd;
using std::numbers::pi;

namespace {

InterferometerModel symmetric() {
  InterferometerModel m;
  m.a_left = {0.5, 0.0};
  m.a_right = {0.5, 0.0};
  return m;
}

}  // namespace

TEST_CASE("AB phase") {
  InterferometerModel m;
  CHECK(ab_phase(m, 0.0) == 0.0);
  CHECK(ab_phase(m, m.delta_b_mt) == doctest::Approx(2 * pi));
  m.delta_b_mt = 2.6;
  CHECK(ab_phase(m, 1.3) == doctest::Approx(pi).epsilon(1e-15));
}

TEST_CASE("collector transmission") {
  const auto m = symmetric();
  CHECK(collector_transmission(m, 0.0, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(collector_transmission(m, pi, 1.0) == doctest::Approx(0.0).epsilon(1e-15));
  for (double a : {0.0, 0.7, 2.0, 5.1}) {
    CHECK(collector_transmission(m, a, 0.0) == doctest::Approx(0.5).epsilon(1e-15));
  }
  CHECK_THROWS_AS(collector_transmission(m, 0.0, Complex(1.01, 0.0)), DomainError);
  auto heavy = m;
  heavy.background = 0.5;
  CHECK_THROWS_AS(collector_transmission(heavy, 0.0, 1.0), ModelError);
}

TEST_CASE("bare visibility") {
  CHECK(bare_visibility(symmetric()) == doctest::Approx(1.0));
  InterferometerModel m;
  m.a_left = {0.3, 0.0};
  m.a_right = {0.0, 0.0};
  CHECK(bare_visibility(m) == 0.0);
  m.a_right = {0.0, 0.1};
  // 2 * 0.3 * 0.1 / 0.1
  CHECK(bare_visibility(m) == doctest::Approx(0.6).epsilon(1e-14));
  m.a_left = m.a_right = {0.0, 0.0};
  CHECK_THROWS_AS(bare_visibility(m), DomainError);
  CHECK(bare_visibility(with_bare_visibility(InterferometerModel{}, 0.054)) ==
        doctest::Approx(0.054).epsilon(1e-13));
}

TEST_CASE("collector current") {
  InterferometerModel m;
  m.v_e_uv = 10.0;
  CHECK(collector_current(m, 0.0).amperes == 0.0);
  // (2e^2/h) * 10 uV = 7.74809172986365e-10 A (mpmath)
  CHECK(collector_current(m, 1.0).amperes ==
        doctest::Approx(7.74809172986365064668e-10).epsilon(1e-13));
  CHECK(collector_current(m, 0.6).amperes == doctest::Approx(2.0 * collector_current(m, 0.3).amperes));
  CHECK(collector_current(m, 0.37).natural == 0.37);
}

TEST_CASE("simulated traces and visibility extraction") {
  auto m = symmetric();
  m.a_left = {0.45, 0.0};
  m.a_right = {0.45, 0.0};
  const auto coherent = simulate_trace(m, 1.0, 0.0, 20 * m.delta_b_mt, 641);
  auto fit = extract_visibility(coherent, m.delta_b_mt);
  CHECK(fit.visibility == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(fit_period(coherent, 1.3, 5.2) == doctest::Approx(m.delta_b_mt).epsilon(1e-6));

  const auto flat = simulate_trace(m, 0.0, 0.0, 20 * m.delta_b_mt, 641);
  CHECK(extract_visibility(flat, m.delta_b_mt).visibility < 1e-9);
  for (double v : flat.i_c_natural) CHECK(v == doctest::Approx(flat.i_c_natural[0]));

  const auto damped = simulate_trace(m, 0.9, 0.0, 20 * m.delta_b_mt, 641);
  const auto shifted = simulate_trace(m, std::polar(0.9, 0.2), 0.0, 20 * m.delta_b_mt, 641);
  const auto fd = extract_visibility(damped, m.delta_b_mt);
  const auto fs = extract_visibility(shifted, m.delta_b_mt);
  CHECK(fd.visibility == doctest::Approx(0.9).epsilon(1e-9));
  CHECK(fs.visibility == doctest::Approx(0.9).epsilon(1e-9));
  CHECK(fs.phase - fd.phase == doctest::Approx(0.2).epsilon(1e-9));
}

TEST_CASE("synthetic trace with realistic magnitudes") {
  AbTrace trace;
  const double period = 2.6;
  for (int i = 0; i < 800; ++i) {
    const double b = 0.013 * i;
    trace.b_mt.push_back(b);
    trace.i_c_natural.push_back(0.070 + 0.006 * std::cos(2 * pi * b / period + 0.4));
    trace.i_c_amperes.push_back(0.0);
  }
  const auto fit = extract_visibility(trace, period);
  CHECK(fit.visibility == doctest::Approx(0.006 / 0.070).epsilon(1e-10));
  CHECK(fit.phase == doctest::Approx(0.4).epsilon(1e-10));
}

TEST_CASE("visibility extraction errors") {
  const auto m = symmetric();
  const auto short_trace = simulate_trace(m, 1.0, 0.0, 2.5 * m.delta_b_mt, 100);
  CHECK_THROWS_AS(extract_visibility(short_trace, m.delta_b_mt), InsufficientDataError);
  AbTrace zero;
  zero.b_mt = {0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0};
  zero.i_c_natural.assign(9, 0.0);
  CHECK_THROWS_AS(extract_visibility(zero, 2.6), ModelError);
  CHECK_THROWS_AS(simulate_trace(m, 1.0, 1.0, 1.0, 10), DomainError);
  CHECK_THROWS_AS(simulate_trace(m, 1.0, 0.0, 1.0, 1), DomainError);
}

TEST_CASE("property: fringe contrast equals nu0 |nu_d| independent of grid density") {
  std::mt19937_64 rng(2718);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    InterferometerModel m;
    const double weight = 0.5 * unit(rng);  // keeps T_EC <= 1 for any phases
    const double share = unit(rng);
    m.a_left = std::polar(std::sqrt(weight * share), 2 * pi * unit(rng));
    m.a_right = std::polar(std::sqrt(weight * (1 - share)), 2 * pi * unit(rng));
    const Complex nu_d = std::polar(unit(rng), 2 * pi * unit(rng));
    const double injected = bare_visibility(m) * std::abs(nu_d);

    // one-period amplitude over mean straight from the two-path formula
    double lo = 2.0, hi = -1.0, sum = 0.0;
    const int samples = 4096;
    for (int i = 0; i < samples; ++i) {
      const double t = collector_transmission(m, 2 * pi * i / samples, nu_d);
      lo = std::min(lo, t);
      hi = std::max(hi, t);
      sum += t;
      CHECK(t >= 0.0);
      CHECK(t <= 1.0);
    }
    CHECK(0.5 * (hi - lo) / (sum / samples) == doctest::Approx(injected).epsilon(1e-6));

    for (int per_period : {32, 57, 200}) {
      const int periods = 3 + trial % 5;
      const auto trace = simulate_trace(m, nu_d, 0.3, 0.3 + periods * m.delta_b_mt,
                                        static_cast<std::size_t>(per_period * periods + 1));
      CHECK(std::abs(extract_visibility(trace, m.delta_b_mt).visibility - injected) <= 1e-9);
    }
  }
}

TEST_CASE("trace is bitwise independent of thread count") {
  InterferometerModel m = with_bare_visibility(InterferometerModel{}, 0.3);
  const auto one = simulate_trace(m, std::polar(0.8, 0.1), -3.0, 40.0, 3001, 1);
  const auto many = simulate_trace(m, std::polar(0.8, 0.1), -3.0, 40.0, 3001, 8);
  CHECK(one.i_c_natural == many.i_c_natural);
  CHECK(one.b_mt == many.b_mt);
  std::ostringstream csv;
  write_trace_csv(one, csv);
  CHECK(csv.str().rfind("B_mT,I_C_A,I_C_natural\n", 0) == 0);
}
