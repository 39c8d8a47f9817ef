#pragma once

#include <cstdint>
#include <vector>

#include "graphctl/numbers.hpp"

namespace graphctl {

struct ContinuedFraction {
  std::int64_t a0 = 0;
  std::vector<std::int64_t> partial_quotients;  // a_1, a_2, ...
  bool rational = false;             // expansion terminated exactly
  bool precision_exhausted = false;  // input precision cannot fix further quotients

  int depth() const { return 1 + static_cast<int>(partial_quotients.size()); }
  /// All quotients including a0.
  std::vector<std::int64_t> quotients() const;
};

struct Convergent {
  std::int64_t p = 0;
  std::int64_t q = 1;
  double error = 0.0;    // |alpha - p/q|
  double quality = 0.0;  // q^2 |alpha - p/q|
  bool above = false;    // p/q > alpha
};

/// First `depth` quotients [a0; a1, ..., a_{depth-1}] by the Gauss map.
ContinuedFraction continued_fraction(const Number& alpha, int depth);

/// Rebuilds convergents from quotients with p_k = a_k p_{k-1} + p_{k-2}.
std::vector<Convergent> convergents(const Number& alpha, const ContinuedFraction& cf);
std::vector<Convergent> convergents(const Number& alpha, int depth);

struct ApproximabilityStatistic {
  double min_quality = 0.0;       // min over the window of q^2 |alpha - p/q|
  std::int64_t max_quotient = 0;  // max a_k, k >= 1
  bool rational = false;
  bool precision_exhausted = false;
  int depth_used = 0;
  /// Finite data can refute bounded quotients but never prove them.
  static constexpr const char* kCaveat =
      "finite-depth statistic: can refute badly-approximability at this depth, cannot prove it";
};

ApproximabilityStatistic badly_approximable_statistic(const Number& alpha, int depth);

/// max over convergents with q >= min_q of -log|alpha - p/q| / log q. Diagnostic only.
double irrationality_exponent_estimate(const Number& alpha, int depth, double min_q = 1000.0);

struct SimultaneousApproximation {
  std::int64_t q = 1;
  std::vector<std::int64_t> p;
  std::int64_t N = 1;
  std::vector<double> errors;  // alpha_j - p_j / q
  bool rescaled = false;       // q was multiplied up to reach floor(sqrt(N))

  double max_abs_error() const;
};

/// Integers p_j, q with floor(sqrt N) <= q <= N^d and |alpha_j - p_j/q| <= 1/(q sqrt N).
/// Throws std::invalid_argument when N^d does not fit in 63 bits.
SimultaneousApproximation dirichlet_simultaneous(const std::vector<double>& alphas, std::int64_t N);

}  // namespace graphctl
