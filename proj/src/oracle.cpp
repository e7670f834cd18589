#include "qpcd/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "qpcd/errors.hpp"
#include "qpcd/parallel.hpp"

namespace qpcd {

namespace {

constexpr int chunk_bits_max = 6;

}  // namespace

Complex enumerate_coherence(const BranchEnumeration& e, int threads) {
  if (e.n < 0) throw DomainError("probe count must be >= 0");
  if (e.n > max_branch_probes) {
    throw ResourceError("branch enumeration capped at n = 20 probes");
  }
  // Per-probe factors conj(a_r(outcome)) a_l(outcome).
  const Complex transmit = std::conj(e.right_pair.t()) * e.left_pair.t();
  const Complex reflect = std::conj(e.right_pair.r()) * e.left_pair.r();

  const int chunk_bits = std::min(e.n, chunk_bits_max);
  const int inner_bits = e.n - chunk_bits;
  const std::size_t chunks = std::size_t{1} << chunk_bits;
  const std::uint64_t inner_count = std::uint64_t{1} << inner_bits;

  std::vector<Complex> partial(chunks);
  parallel_for(chunks, threads, [&](std::size_t chunk) {
    Complex prefix(1.0, 0.0);
    for (int bit = 0; bit < chunk_bits; ++bit) {
      prefix *= ((chunk >> bit) & 1U) ? reflect : transmit;
    }
    Complex sum(0.0, 0.0);
    for (std::uint64_t s = 0; s < inner_count; ++s) {
      Complex branch = prefix;
      for (int bit = 0; bit < inner_bits; ++bit) {
        branch *= ((s >> bit) & 1U) ? reflect : transmit;
      }
      sum += branch;
    }
    partial[chunk] = sum;
  });

  for (std::size_t width = chunks; width > 1; width /= 2) {
    for (std::size_t i = 0; i < width / 2; ++i) partial[i] = partial[2 * i] + partial[2 * i + 1];
  }
  return partial.front();
}

BinomialMoments binomial_check(double t_d, int n) {
  if (n < 0 || n > max_branch_probes) throw ResourceError("binomial check needs 0 <= n <= 20");
  const double p = std::norm(pair_from_transmission(t_d, 0.0).t());
  const double q = 1.0 - p;
  std::vector<double> weights(static_cast<std::size_t>(n) + 1);
  double binom = 1.0;  // C(n, k)
  for (int k = 0; k <= n; ++k) {
    weights[k] = binom * std::pow(p, k) * std::pow(q, n - k);
    binom = binom * (n - k) / (k + 1);
  }
  double mean = 0.0;
  for (int k = 0; k <= n; ++k) mean += k * weights[k];
  double variance = 0.0;
  for (int k = 0; k <= n; ++k) variance += (k - mean) * (k - mean) * weights[k];
  BinomialMoments out;
  out.mean = mean;
  out.sigma = std::sqrt(variance);
  out.closed_mean = n * t_d;
  out.closed_sigma = std::sqrt(n * t_d * (1.0 - t_d));
  return out;
}

OracleReport run_oracle_check(std::uint64_t seed, int draws, int max_n, double tolerance,
                              int threads) {
  if (max_n < 1 || max_n > max_branch_probes) {
    throw ResourceError("oracle check needs 1 <= max_n <= 20");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> theta_dist(0.0, std::numbers::pi / 2);
  std::uniform_real_distribution<double> eta_dist(-std::numbers::pi, std::numbers::pi);

  OracleReport report;
  report.seed = seed;
  report.draws = draws;
  report.max_n = max_n;
  report.tolerance = tolerance;
  for (int d = 0; d < draws; ++d) {
    const auto left = make_pair(theta_dist(rng), eta_dist(rng));
    const auto right = make_pair(theta_dist(rng), eta_dist(rng));
    const Complex single = sp_overlap(right, left);
    Complex closed(1.0, 0.0);
    for (int n = 1; n <= max_n; ++n) {
      closed *= single;
      const Complex brute = enumerate_coherence({n, left, right}, threads);
      report.max_abs_deviation = std::max(report.max_abs_deviation, std::abs(brute - closed));
    }
  }
  report.passed = report.max_abs_deviation <= tolerance;
  return report;
}

}  // namespace qpcd
