#include "graphctl/diophantine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace graphctl {

namespace {

constexpr std::int64_t kMaxInt = std::numeric_limits<std::int64_t>::max() / 4;

// a * x + y, or nullopt-like flag on overflow.
bool checked_step(std::int64_t a, std::int64_t x, std::int64_t y, std::int64_t& out) {
  const __int128 v = static_cast<__int128>(a) * x + y;
  if (v > kMaxInt || v < -kMaxInt) return false;
  out = static_cast<std::int64_t>(v);
  return true;
}

}  // namespace

std::vector<std::int64_t> ContinuedFraction::quotients() const {
  std::vector<std::int64_t> out{a0};
  out.insert(out.end(), partial_quotients.begin(), partial_quotients.end());
  return out;
}

ContinuedFraction continued_fraction(const Number& alpha, int depth) {
  if (depth < 1) throw std::invalid_argument("continued_fraction: depth must be >= 1");
  ContinuedFraction cf;
  const Real rational_tol = 100 * alpha.uncertainty;

  Real x = alpha.value;
  Real a = boost::multiprecision::floor(x);
  cf.a0 = a.convert_to<std::int64_t>();
  Real frac = x - a;

  std::int64_t p_prev = 1, q_prev = 0;
  std::int64_t p = cf.a0, q = 1;

  while (cf.depth() < depth) {
    if (boost::multiprecision::abs(alpha.value - Real(p) / Real(q)) <= rational_tol || frac == 0) {
      cf.rational = true;
      break;
    }
    // The next quotient is only meaningful while the input uncertainty is well
    // below the current approximation error ~ 1/q^2.
    if (alpha.uncertainty * Real(q) * Real(q) > Real("1e-2")) {
      cf.precision_exhausted = true;
      break;
    }
    x = 1 / frac;
    a = boost::multiprecision::floor(x);
    // 1/(1/7) can land just below 7; snap so rationals end on their true last quotient.
    if (a + 1 - x < Real("1e-30") * x) a += 1;
    frac = x - a;
    if (frac < 0) frac = 0;
    if (a > Real(kMaxInt)) {
      cf.precision_exhausted = true;
      break;
    }
    const std::int64_t ak = a.convert_to<std::int64_t>();
    std::int64_t p_next = 0, q_next = 0;
    if (!checked_step(ak, p, p_prev, p_next) || !checked_step(ak, q, q_prev, q_next)) {
      cf.precision_exhausted = true;
      break;
    }
    cf.partial_quotients.push_back(ak);
    p_prev = p;
    q_prev = q;
    p = p_next;
    q = q_next;
  }
  if (!cf.rational && !cf.precision_exhausted &&
      boost::multiprecision::abs(alpha.value - Real(p) / Real(q)) <= rational_tol) {
    cf.rational = true;
  }
  return cf;
}

std::vector<Convergent> convergents(const Number& alpha, const ContinuedFraction& cf) {
  std::vector<Convergent> out;
  std::int64_t p_prev = 1, q_prev = 0;
  std::int64_t p_prev2 = 0, q_prev2 = 1;
  for (std::int64_t a : cf.quotients()) {
    std::int64_t p = 0, q = 0;
    if (!checked_step(a, p_prev, p_prev2, p) || !checked_step(a, q_prev, q_prev2, q)) break;
    Convergent c;
    c.p = p;
    c.q = q;
    const Real diff = Real(p) / Real(q) - alpha.value;
    c.error = boost::multiprecision::abs(diff).convert_to<double>();
    c.quality = (Real(q) * Real(q) * boost::multiprecision::abs(diff)).convert_to<double>();
    c.above = diff > 0;
    out.push_back(c);
    p_prev2 = p_prev;
    q_prev2 = q_prev;
    p_prev = p;
    q_prev = q;
  }
  return out;
}

std::vector<Convergent> convergents(const Number& alpha, int depth) {
  return convergents(alpha, continued_fraction(alpha, depth));
}

ApproximabilityStatistic badly_approximable_statistic(const Number& alpha, int depth) {
  const ContinuedFraction cf = continued_fraction(alpha, depth);
  ApproximabilityStatistic s;
  s.rational = cf.rational;
  s.precision_exhausted = cf.precision_exhausted;
  s.depth_used = cf.depth();
  for (std::int64_t a : cf.partial_quotients) s.max_quotient = std::max(s.max_quotient, a);
  s.min_quality = std::numeric_limits<double>::infinity();
  for (const auto& c : convergents(alpha, cf)) {
    if (c.error > 0.0) s.min_quality = std::min(s.min_quality, c.quality);
  }
  if (cf.rational) s.min_quality = 0.0;
  return s;
}

double irrationality_exponent_estimate(const Number& alpha, int depth, double min_q) {
  const auto cs = convergents(alpha, depth);
  auto estimate = [&cs](double threshold) {
    double best = std::numeric_limits<double>::quiet_NaN();
    for (const auto& c : cs) {
      if (c.q < 2 || static_cast<double>(c.q) < threshold || !(c.error > 0.0)) continue;
      const double s = -std::log(c.error) / std::log(static_cast<double>(c.q));
      if (std::isnan(best) || s > best) best = s;
    }
    return best;
  };
  const double tail = estimate(min_q);
  return std::isnan(tail) ? estimate(2.0) : tail;
}

double SimultaneousApproximation::max_abs_error() const {
  double m = 0.0;
  for (double e : errors) m = std::max(m, std::abs(e));
  return m;
}

SimultaneousApproximation dirichlet_simultaneous(const std::vector<double>& alphas, std::int64_t N) {
  if (N < 1) throw std::invalid_argument("dirichlet_simultaneous: N must be >= 1");
  if (alphas.empty()) throw std::invalid_argument("dirichlet_simultaneous: need at least one alpha");
  std::int64_t bound = 1;
  for (std::size_t j = 0; j < alphas.size(); ++j) {
    if (!checked_step(bound, N, 0, bound)) {
      throw std::invalid_argument("dirichlet_simultaneous: N^d overflows 63 bits");
    }
  }

  SimultaneousApproximation out;
  out.N = N;
  const long double tol_scale = 1.0L / static_cast<long double>(N);
  bool found = false;
  for (std::int64_t q = 1; q <= bound && !found; ++q) {
    const long double lq = static_cast<long double>(q);
    const long double tol = tol_scale / lq;
    bool ok = true;
    for (double a : alphas) {
      const long double pj = std::round(lq * a);
      if (std::abs(static_cast<long double>(a) - pj / lq) > tol) {
        ok = false;
        break;
      }
    }
    if (ok) {
      out.q = q;
      found = true;
    }
  }
  if (!found) throw std::logic_error("dirichlet_simultaneous: no q found below N^d");

  std::int64_t floor_sqrt = static_cast<std::int64_t>(std::sqrt(static_cast<double>(N)));
  while (floor_sqrt * floor_sqrt > N) --floor_sqrt;
  while ((floor_sqrt + 1) * (floor_sqrt + 1) <= N) ++floor_sqrt;
  std::int64_t k = 1;
  if (out.q < floor_sqrt) {
    k = floor_sqrt;
    out.rescaled = true;
  }
  const std::int64_t base_q = out.q;
  out.q = base_q * k;
  for (double a : alphas) {
    const std::int64_t pj = static_cast<std::int64_t>(std::llround(static_cast<long double>(base_q) * a));
    out.p.push_back(pj * k);
    out.errors.push_back(static_cast<double>(static_cast<long double>(a) -
                                             static_cast<long double>(pj) / static_cast<long double>(base_q)));
  }
  return out;
}

}  // namespace graphctl
