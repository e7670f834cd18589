#pragma once

#include <cstdint>

#include "qpcd/amplitudes.hpp"

namespace qpcd {

inline constexpr int max_branch_probes = 20;

/// All 2^n outcome strings of n independent probe electrons, each either
/// transmitted or reflected, for the detector conditioned on the left and on
/// the right path.
struct BranchEnumeration {
  int n = 0;
  ScatteringPair left_pair;
  ScatteringPair right_pair;
};

/// Brute-force <chi_r | chi_l> = sum_s prod_i conj(a_r(s_i)) a_l(s_i).
/// Branches are summed in fixed chunks reduced along a binary tree over the
/// chunk index, so the result is bitwise independent of `threads`.
/// Throws ResourceError for n > 20.
Complex enumerate_coherence(const BranchEnumeration& e, int threads = 1);

struct BinomialMoments {
  double mean = 0.0;
  double sigma = 0.0;
  double closed_mean = 0.0;   // n T_d
  double closed_sigma = 0.0;  // sqrt(n T_d (1 - T_d))
};

// Exact moments of the transmitted count N_t by summing the binomial
// distribution built from |t|^2.
BinomialMoments binomial_check(double t_d, int n);

struct OracleReport {
  std::uint64_t seed = 0;
  int draws = 0;
  int max_n = 0;
  double max_abs_deviation = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

/// Compares enumerate_coherence with sp_overlap^n over `draws` random pair
/// pairs (fixed seed) and every n in [1, max_n].
OracleReport run_oracle_check(std::uint64_t seed, int draws, int max_n, double tolerance,
                              int threads = 1);

}  // namespace qpcd
