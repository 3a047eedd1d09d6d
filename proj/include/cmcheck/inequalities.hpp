#pragma once

// Inequality scans and the algebra behind the difference bound
//   (-1)^i [h(t+1) - h(t)]^{(i)} < i! f_i(t) / (12 t^{i+3} (t+1)^{i+3}).

#include <string>
#include <type_traits>

#include "cmcheck/cmdeg.hpp"
#include "cmcheck/laurent.hpp"
#include "cmcheck/precision.hpp"
#include "cmcheck/specfun.hpp"

namespace cmcheck::inequalities {

/// The four algebraic forms of f_i(t):
///   A  powers of (t+1) and t
///   B  A with every (t+1)^n binomially expanded
///   C  collected powers of t with the bracketed sum over l = 4..i
///   D  C with the bracket folded into a single binomial coefficient
enum class FPolyForm { A, B, C, D };

inline std::string to_string(FPolyForm form) {
  switch (form) {
    case FPolyForm::A: return "A";
    case FPolyForm::B: return "B";
    case FPolyForm::C: return "C";
    case FPolyForm::D: return "D";
  }
  return "?";
}

template <class T>
struct FPolyValue {
  T value;
  bool validated = true;  // false for forms C and D at i = 0
};

namespace detail {

template <class T>
T from_integer(const Integer& z) {
  if constexpr (std::is_same_v<T, Real>) {
    return to_real(z);
  } else {
    return T(z);
  }
}

template <class T>
T ipow(const T& base, int e) {
  T r = 1;
  for (int j = 0; j < e; ++j) r *= base;
  return r;
}

template <class T>
T binom(long n, long k) {
  return from_integer<T>(specfun::binomial(n, k));
}

/// Terms shared by forms C and D:
///   (i-1)(i+4)(i+5)/2 [ (2-i)(i+3)/3 t - i ] t^2 - i(i+1)(i+5) t - (i+1)(i+2)
template <class T>
T collected_head(long i, const T& t) {
  const T cubic = T((i - 1) * (i + 4) * (i + 5)) / T(2);
  const T slope = T((2 - i) * (i + 3)) / T(3);
  return cubic * (slope * t - T(i)) * t * t - T(i * (i + 1) * (i + 5)) * t - T((i + 1) * (i + 2));
}

}  // namespace detail

/// f_i(t) in the requested form. With T = Rational the evaluation is exact.
template <class T>
FPolyValue<T> f_poly(int i_in, const T& t, FPolyForm form) {
  using detail::binom;
  using detail::ipow;
  if (i_in < 0) throw ArgumentError("f_poly: i must be >= 0");
  if (!(t > 0)) throw DomainError("f_poly: t must be > 0");
  const long i = i_in;
  const T one = 1;
  const T tp1 = t + one;

  switch (form) {
    case FPolyForm::A: {
      T v = T(6 * (i + 1)) * t * tp1 * (ipow(tp1, i + 2) + ipow(t, i + 2));
      v -= T(12) * t * t * tp1 * tp1 * (ipow(tp1, i + 1) - ipow(t, i + 1));
      v -= T((i + 1) * (i + 2)) * (ipow(tp1, i + 3) - ipow(t, i + 3));
      return {v, true};
    }
    case FPolyForm::B: {
      T s1 = 0, s2 = 0, s3 = 0;
      for (long l = 0; l <= i + 2; ++l) s1 += binom<T>(i + 2, l) * ipow(t, l);
      for (long l = 0; l <= i; ++l) s2 += binom<T>(i + 1, l) * ipow(t, l);
      for (long l = 0; l <= i + 2; ++l) s3 += binom<T>(i + 3, l) * ipow(t, l);
      T v = T(6 * (i + 1)) * t * tp1 * (s1 + ipow(t, i + 2));
      v -= T(12) * t * t * tp1 * tp1 * s2;
      v -= T((i + 1) * (i + 2)) * s3;
      return {v, true};
    }
    case FPolyForm::C: {
      // The constant -(i+1)(i+2) belongs to this form as well as to D.
      T v = detail::collected_head(i, t);
      for (long l = 4; l <= i; ++l) {
        const T bracket = T((i + 1) * (i + 2)) * binom<T>(i + 3, l) -
                          T(6 * (i + 1)) * binom<T>(i + 3, l - 1) + T(12) * binom<T>(i + 3, l - 2);
        v -= bracket * ipow(t, l);
      }
      return {v, i >= 1};
    }
    case FPolyForm::D: {
      T v = detail::collected_head(i, t);
      T sum = 0;
      for (long l = 4; l <= i; ++l) {
        const T ratio = T((i - l + 1) * (i - l + 2)) / T(l * (i - l + 5));
        sum += ratio * binom<T>(i + 3, l - 1) * ipow(t, l);
      }
      v -= T((i + 4) * (i + 5)) * sum;
      return {v, i >= 1};
    }
  }
  throw ArgumentError("f_poly: unknown form");
}

/// Real-valued f_i(t) at working precision.
inline FPolyValue<Real> f_poly(int i, const Real& t_in, FPolyForm form, const WorkingPrecision& prec) {
  const Real t = promote(t_in, prec);
  PrecisionScope scope(prec);
  return f_poly<Real>(i, t, form);
}

// ---------------------------------------------------------------------------
// Scans
// ---------------------------------------------------------------------------

struct InequalityScanReport {
  std::string id;
  cmdeg::LogGrid grid;
  Real min_margin;
  Real argmin_t;
  bool pass = false;
};

namespace detail {

/// Minimum of margin(t) over the grid; the smallest t wins ties.
template <class Margin>
InequalityScanReport scan(std::string id, const cmdeg::LogGrid& grid, Margin&& margin,
                          const WorkingPrecision& prec) {
  const auto ts = grid.values(prec);
  PrecisionScope scope(prec);
  InequalityScanReport report{std::move(id), grid, Real(0), Real(0), false};
  bool first = true;
  for (const Real& t : ts) {
    Real m = margin(t);
    if (first || m < report.min_margin) {
      report.min_margin = std::move(m);
      report.argmin_t = t;
      first = false;
    }
  }
  report.pass = report.min_margin > prec.noise_floor();
  return report;
}

}  // namespace detail

inline cmdeg::LogGrid default_trigamma_grid() { return {0.01, 100.0, 500}; }
inline cmdeg::LogGrid default_bessel_grid() { return {0.01, 50.0, 500}; }

/// e^{1/t} - 1 - psi'(t) > 0.
inline Real trigamma_margin(const Real& t_in, const WorkingPrecision& prec = {}) {
  const Real t = promote(t_in, prec);
  if (t <= 0) throw DomainError("trigamma_margin: t must be > 0");
  PrecisionScope scope(prec);
  return specfun::exp_recip_derivative(0, t, prec) - 1 - specfun::polygamma(1, t, prec);
}

/// I_1(t) - (t/2)^3 / (1 - e^{-(t/2)^2}) > 0, written as
/// I_1(t) - (t/2) x/(1 - e^{-x}) with x = (t/2)^2.
inline Real bessel_margin(const Real& t_in, const WorkingPrecision& prec = {}) {
  const Real t = promote(t_in, prec);
  if (t <= 0) throw DomainError("bessel_margin: t must be > 0");
  PrecisionScope scope(prec);
  const Real half = t / 2;
  return specfun::bessel_i(1, t, prec) - half * specfun::x_over_one_minus_exp(half * half, prec);
}

inline InequalityScanReport check_ineq_trigamma(const cmdeg::LogGrid& grid = default_trigamma_grid(),
                                                const WorkingPrecision& prec = {}) {
  return detail::scan("trigamma", grid, [&](const Real& t) { return trigamma_margin(t, prec); }, prec);
}

inline InequalityScanReport check_ineq_bessel(const cmdeg::LogGrid& grid = default_bessel_grid(),
                                              const WorkingPrecision& prec = {}) {
  return detail::scan("bessel", grid, [&](const Real& t) { return bessel_margin(t, prec); }, prec);
}

// ---------------------------------------------------------------------------
// Difference bound
// ---------------------------------------------------------------------------

struct DifferenceBoundRecord {
  int i = 0;
  Real t;
  Real lhs;  // (-1)^i [h^{(i)}(t+1) - h^{(i)}(t)]
  Real rhs;  // i! f_i(t) / (12 t^{i+3} (t+1)^{i+3})
  bool pass = false;
};

inline DifferenceBoundRecord check_difference_bound(int i, const Real& t_in, const WorkingPrecision& prec = {}) {
  const Real t = promote(t_in, prec);
  if (i < 0) throw ArgumentError("check_difference_bound: i must be >= 0");
  if (t <= 0) throw DomainError("check_difference_bound: t must be > 0");
  PrecisionScope scope(prec);
  DifferenceBoundRecord rec;
  rec.i = i;
  rec.t = t;
  const Real x = t;
  const Real diff = laurent::h_derivative_any(i, x + 1, prec) - laurent::h_derivative_any(i, x, prec);
  rec.lhs = (i % 2 == 0) ? diff : Real(-diff);
  const Real f = f_poly<Real>(i, x, FPolyForm::A).value;
  rec.rhs = to_real(specfun::factorial(static_cast<unsigned>(i))) * f /
            (12 * boost::multiprecision::pow(x, i + 3) * boost::multiprecision::pow(x + 1, i + 3));
  const Real floor = prec.noise_floor();
  rec.pass = rec.lhs < 0 && rec.rhs < 0 && rec.rhs - rec.lhs > floor;
  return rec;
}

}  // namespace cmcheck::inequalities
