#pragma once

// Series engines for the special functions used throughout the library:
// shifted factorials, the closed-form derivatives of exp(1/t), polygamma of
// positive order, modified Bessel I_nu of integer order and the
// hypergeometric 1F2(1; b1, b2; t).

#include <cmath>
#include <mutex>
#include <string>
#include <vector>

#include "cmcheck/precision.hpp"

namespace cmcheck::specfun {

/// (a)_n = a (a+1) ... (a+n-1), (a)_0 = 1. Works for Real, Rational and
/// Integer alike.
template <class T>
T shifted_factorial(const T& a, unsigned n) {
  T result = 1;
  for (unsigned j = 0; j < n; ++j) result *= a + T(j);
  return result;
}

inline Real shifted_factorial(const Real& a_in, unsigned n, const WorkingPrecision& prec) {
  const Real a = promote(a_in, prec);
  PrecisionScope scope(prec);
  return shifted_factorial<Real>(a, n);
}

inline Integer factorial(unsigned n) {
  Integer f = 1;
  for (unsigned j = 2; j <= n; ++j) f *= j;
  return f;
}

inline Integer binomial(long n, long k) {
  if (k < 0 || n < 0 || k > n) return 0;
  Integer r;
  mpz_bin_uiui(r.backend().data(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return r;
}

// ---------------------------------------------------------------------------
// Coefficients of the derivatives of exp(1/t)
// ---------------------------------------------------------------------------

/// a_{i,k} = C(i,k) C(i-1,k) k!, for i >= 1 and 0 <= k <= i-1.
inline Integer a_coeff(int i, int k) {
  if (i < 1) throw ArgumentError("a_coeff: order i must be >= 1, got " + std::to_string(i));
  if (k < 0 || k > i - 1) {
    throw ArgumentError("a_coeff: k must be in [0, " + std::to_string(i - 1) + "], got " +
                        std::to_string(k));
  }
  return binomial(i, k) * binomial(i - 1, k) * factorial(static_cast<unsigned>(k));
}

/// All a_{i,k} for one order i.
struct CoeffTable {
  int i = 0;
  std::vector<Integer> entries;  // entries[k] = a_{i,k}
};

inline CoeffTable coeff_table(int i) {
  if (i < 0) throw ArgumentError("coeff_table: order must be >= 0");
  CoeffTable table{i, {}};
  for (int k = 0; k < i; ++k) table.entries.push_back(a_coeff(i, k));
  return table;
}

/// i-th derivative of exp(1/t):
///   (-1)^i e^{1/t} t^{-2i} sum_{k<i} a_{i,k} t^k   for i >= 1,  e^{1/t} for i = 0.
inline Real exp_recip_derivative(int i, const Real& t_in, const WorkingPrecision& prec = {}) {
  const Real t = promote(t_in, prec);
  if (i < 0) throw ArgumentError("exp_recip_derivative: order must be >= 0");
  if (t == 0) throw DomainError("exp_recip_derivative: t must be nonzero");
  PrecisionScope scope(prec);
  const Real x = t;
  const Real e = boost::multiprecision::exp(1 / x);
  if (i == 0) return e;
  // Horner in t over the a_{i,k}.
  Real poly = 0;
  for (int k = i - 1; k >= 0; --k) poly = poly * x + to_real(a_coeff(i, k));
  Real value = e * poly / boost::multiprecision::pow(x, 2 * i);
  return (i % 2 == 0) ? value : Real(-value);
}

// ---------------------------------------------------------------------------
// Bernoulli numbers
// ---------------------------------------------------------------------------

namespace detail {

/// Exact B_0 .. B_{2*count}, even indices only: result[j] = B_{2j}.
inline const std::vector<Rational>& even_bernoulli_table() {
  static constexpr int kCount = 160;
  static const std::vector<Rational> table = [] {
    const int top = 2 * kCount;
    std::vector<Rational> b(top + 1);
    b[0] = 1;
    // sum_{j=0}^{m} C(m+1, j) B_j = 0
    for (int m = 1; m <= top; ++m) {
      if (m > 1 && m % 2 == 1) {
        b[m] = 0;
        continue;
      }
      Rational acc = 0;
      for (int j = 0; j < m; ++j) {
        if (b[j] != 0) acc += Rational(binomial(m + 1, j)) * b[j];
      }
      b[m] = -acc / Rational(m + 1);
    }
    std::vector<Rational> even;
    for (int m = 0; m <= top; m += 2) even.push_back(b[m]);
    return even;
  }();
  return table;
}

}  // namespace detail

/// B_{2j} as an exact rational; j < 161.
inline const Rational& bernoulli_even(int j) {
  const auto& table = detail::even_bernoulli_table();
  if (j < 0 || j >= static_cast<int>(table.size())) {
    throw ArgumentError("bernoulli_even: index out of table range");
  }
  return table[static_cast<std::size_t>(j)];
}

/// x / (1 - e^{-x}) for x >= 0. Below x = 1/4 the generating series
/// 1 + x/2 + sum_k B_{2k} x^{2k} / (2k)! replaces the subtractive form.
inline Real x_over_one_minus_exp(const Real& x_in, const WorkingPrecision& prec = {}) {
  const Real x = promote(x_in, prec);
  if (x < 0) throw DomainError("x_over_one_minus_exp: x must be >= 0");
  PrecisionScope scope(prec);
  if (x == 0) return Real(1);
  if (x >= Real(0.25)) return x / (1 - boost::multiprecision::exp(-x));
  const Real eps = prec.series_epsilon();
  const Real x2 = x * x;
  Real sum = 1 + x / 2;
  Real power = 1;       // x^{2k}
  Real inv_fact = 1;    // 1/(2k)!
  for (int k = 1; k < 160; ++k) {
    power *= x2;
    inv_fact /= Real((2 * k - 1) * (2 * k));
    const Real term = to_real(bernoulli_even(k)) * power * inv_fact;
    sum += term;
    if (boost::multiprecision::abs(term) < eps * sum) return sum;
  }
  throw NumericFailure("x_over_one_minus_exp: series did not converge");
}

// ---------------------------------------------------------------------------
// Polygamma
// ---------------------------------------------------------------------------

/// psi^{(n)}(t) for n >= 1, t > 0.
///
/// psi^{(n)}(t) = (-1)^{n+1} n! zeta(n+1, t). The Hurwitz sum is taken
/// directly up to a shift point x >= max(10 (n+1), internal digits), and the
/// remainder sum_{j>=0} (x+j)^{-s} is closed with Euler-Maclaurin:
///   x^{1-s}/(s-1) + x^{-s}/2 + sum_k B_{2k}/(2k)! (s)_{2k-1} x^{-s-2k+1}.
inline Real polygamma(int n, const Real& t_in, const WorkingPrecision& prec = {}) {
  const Real t = promote(t_in, prec);
  if (n == 0) throw ArgumentError("polygamma: n = 0 (digamma) is not supported");
  if (n < 0) throw ArgumentError("polygamma: order must be positive");
  if (t <= 0) throw DomainError("polygamma: t must be > 0");
  PrecisionScope scope(prec);

  const int s = n + 1;
  const Real eps = WorkingPrecision::pow10(-prec.internal_digits());
  const double shift_point = std::max(10.0 * (n + 1), static_cast<double>(prec.internal_digits()));

  Real x = t;
  Real head = 0;
  while (x < shift_point) {
    head += 1 / boost::multiprecision::pow(x, s);
    x += 1;
  }

  const Real x_pow_s = boost::multiprecision::pow(x, s);
  Real tail = x / (x_pow_s * (s - 1)) + 1 / (2 * x_pow_s);
  const Real inv_x2 = 1 / (x * x);
  // (s)_{2k-1} / (2k)! * x^{-s-2k+1}, updated incrementally.
  Real factor = Real(s) / (2 * x_pow_s * x);  // k = 1: (s)_1 / 2! * x^{-s-1}
  Real previous = 0;
  bool converged = false;
  for (int k = 1; k < 160; ++k) {
    if (k > 1) {
      // (s)_{2k-1} = (s)_{2k-3} (s+2k-3)(s+2k-2);  (2k)! = (2k-2)! (2k-1)(2k)
      factor *= Real(s + 2 * k - 3) * Real(s + 2 * k - 2);
      factor /= Real(2 * k - 1) * Real(2 * k);
      factor *= inv_x2;
    }
    const Real term = to_real(bernoulli_even(k)) * factor;
    if (k > 2 && boost::multiprecision::abs(term) > boost::multiprecision::abs(previous)) break;
    tail += term;
    previous = term;
    if (boost::multiprecision::abs(term) < eps * tail) {
      converged = true;
      break;
    }
  }
  if (!converged) throw NumericFailure("polygamma: Euler-Maclaurin tail did not converge");

  Real zeta = head + tail;
  Real value = to_real(factorial(static_cast<unsigned>(n))) * zeta;
  return (n % 2 == 1) ? value : Real(-value);
}

// ---------------------------------------------------------------------------
// Positive-term series: I_nu and 1F2
// ---------------------------------------------------------------------------

namespace detail {

/// Sums first_term * prod ratio(j) until the next term is below eps times the
/// partial sum and the ratio has dropped to 1/2 or less.
template <class Ratio>
Real positive_series(Real term, Ratio&& ratio, const WorkingPrecision& prec, const char* who) {
  const Real eps = prec.series_epsilon();
  Real sum = term;
  if (term == 0) return sum;
  for (unsigned j = 0; j < 100000; ++j) {
    const Real q = ratio(j);
    term *= q;
    sum += term;
    if (q <= 0.5 && term < eps * sum) return sum;
  }
  throw NumericFailure(std::string(who) + ": series did not converge");
}

}  // namespace detail

/// Modified Bessel function of the first kind, integer order nu >= 0, z >= 0:
///   sum_k (z/2)^{2k+nu} / (k! (nu+k)!).
inline Real bessel_i(int nu, const Real& z_in, const WorkingPrecision& prec = {}) {
  const Real z = promote(z_in, prec);
  if (nu < 0) throw ArgumentError("bessel_i: order must be a non-negative integer");
  if (z < 0) throw DomainError("bessel_i: z must be >= 0");
  PrecisionScope scope(prec);
  const Real half = z / 2;
  if (z == 0) return Real(nu == 0 ? 1 : 0);
  const Real first = boost::multiprecision::pow(half, nu) / to_real(factorial(static_cast<unsigned>(nu)));
  const Real q2 = half * half;
  return detail::positive_series(
      first, [&](unsigned k) { return Real(q2 / (Real(k + 1) * Real(nu + static_cast<int>(k) + 1))); },
      prec, "bessel_i");
}

/// 1F2(1; b1, b2; t) = sum_n t^n / ((b1)_n (b2)_n), integer b1, b2 >= 1, t >= 0.
inline Real hyp1f2(int b1, int b2, const Real& t_in, const WorkingPrecision& prec = {}) {
  const Real t = promote(t_in, prec);
  if (b1 < 1 || b2 < 1) throw ArgumentError("hyp1f2: b1 and b2 must be positive integers");
  if (t < 0) throw DomainError("hyp1f2: only t >= 0 is supported");
  PrecisionScope scope(prec);
  const Real x = t;
  return detail::positive_series(
      Real(1),
      [&](unsigned n) {
        return Real(x / (Real(b1 + static_cast<int>(n)) * Real(b2 + static_cast<int>(n))));
      },
      prec, "hyp1f2");
}

}  // namespace cmcheck::specfun
