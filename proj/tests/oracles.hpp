#pragma once

// Test-only reference computations. None of these call into the code paths
// they are used to check.

#include <cmath>
#include <functional>
#include <vector>

#include "cmcheck/precision.hpp"

namespace cmcheck::testing {

/// n-th central difference quotient of f at t with step h, O(h^2) accurate.
/// Runs at the caller's (elevated) default precision.
inline Real central_difference(const std::function<Real(const Real&)>& f, int n, const Real& t, const Real& h) {
  Real sum = 0;
  Real binom = 1;
  for (int j = 0; j <= n; ++j) {
    const Real x = t + (Real(n) / 2 - j) * h;
    const Real term = binom * f(x);
    sum += (j % 2 == 0) ? term : Real(-term);
    binom = binom * (n - j) / (j + 1);
  }
  return sum / boost::multiprecision::pow(h, n);
}

/// Coefficients of P_i(s), s = 1/t, with (e^{1/t})^{(i)} = e^{1/t} P_i(s),
/// built by P_{i+1}(s) = -s^2 (P_i(s) + P_i'(s)). result[p] multiplies s^p.
inline std::vector<Integer> exp_recip_symbolic(int i) {
  std::vector<Integer> p{1};
  for (int step = 0; step < i; ++step) {
    std::vector<Integer> q(p.size() + 2, 0);
    for (std::size_t d = 0; d < p.size(); ++d) {
      q[d + 2] -= p[d];                                        // -s^2 * P
      if (d > 0) q[d + 1] -= Integer(static_cast<long>(d)) * p[d];  // -s^2 * P'
    }
    p = std::move(q);
  }
  return p;
}

/// Bracket [lo, hi] for sum_{j>=0} (t+j)^{-s}: partial sum to N plus the
/// integral bounds of the remainder sum_{j>=N} f(t+j), f decreasing:
///   int_{t+N}^inf f <= remainder <= f(t+N) + int_{t+N}^inf f.
struct Bracket {
  long double lo, hi;
};

inline Bracket hurwitz_bracket(int s, long double t, long N) {
  long double partial = 0;
  for (long j = N - 1; j >= 0; --j) partial += std::pow(t + j, -static_cast<long double>(s));
  const long double x = t + N;
  const long double integral = std::pow(x, static_cast<long double>(1 - s)) / (s - 1);
  return {partial + integral, partial + integral + std::pow(x, -static_cast<long double>(s))};
}

/// e^{1/z} - sum_{m<=k} z^{-m}/m!, the subtractive definition.
inline Real remainder_subtractive(int k, const Real& z) {
  Real sum = boost::multiprecision::exp(1 / z);
  Real term = 1;
  for (int m = 0; m <= k; ++m) {
    if (m > 0) term /= z * m;
    sum -= term;
  }
  return sum;
}

}  // namespace cmcheck::testing
