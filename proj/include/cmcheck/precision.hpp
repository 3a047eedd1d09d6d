#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

namespace cmcheck {

/// Extended-precision real. Precision is carried per value; new temporaries
/// take the thread-local default installed by PrecisionScope.
using Real = boost::multiprecision::mpfr_float;
using Integer = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of the function (t <= 0, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Structurally invalid argument (index out of range, unsupported order).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// A computation could not reach its tolerance within its budget.
class NumericFailure : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Working precision
// ---------------------------------------------------------------------------

/// Significant decimal digits requested by the caller. Internally every
/// operation runs with kGuardDigits extra digits so that the delivered
/// result meets the `digits` contract after moderate cancellation.
class WorkingPrecision {
 public:
  static constexpr int kDefaultDigits = 50;
  static constexpr int kMinDigits = 30;
  static constexpr int kMaxDigits = 2000;
  static constexpr int kGuardDigits = 20;

  constexpr WorkingPrecision() = default;
  explicit WorkingPrecision(int digits) : digits_(digits) {
    if (digits < kMinDigits || digits > kMaxDigits) {
      throw ArgumentError("digits must be in [" + std::to_string(kMinDigits) + ", " +
                          std::to_string(kMaxDigits) + "], got " + std::to_string(digits));
    }
  }

  constexpr int digits() const { return digits_; }
  constexpr int internal_digits() const { return digits_ + kGuardDigits; }

  /// Relative truncation threshold for positive-term series: 10^-(digits+5).
  Real series_epsilon() const { return pow10(-(digits_ + 5)); }

  /// Absolute floor separating genuine sign violations from rounding.
  Real noise_floor() const { return pow10(-(digits_ - 15)); }

  static Real pow10(int e) {
    Real ten = 10;
    return boost::multiprecision::pow(ten, e);
  }

  friend constexpr bool operator==(WorkingPrecision, WorkingPrecision) = default;

 private:
  int digits_ = kDefaultDigits;
};

/// Installs the internal precision of `prec` as the thread-local default for
/// the lifetime of the scope and restores the previous default afterwards.
class PrecisionScope {
 public:
  explicit PrecisionScope(const WorkingPrecision& prec)
      : saved_(Real::default_precision()) {
    Real::default_precision(static_cast<unsigned>(prec.internal_digits()));
  }
  ~PrecisionScope() { Real::default_precision(saved_); }

  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  unsigned saved_;
};

/// Copy of x carried at the internal precision of `prec`. Copies keep the
/// precision of their source, so inputs built at a lower default precision
/// would otherwise drag intermediate results down with them.
inline Real promote(const Real& x, const WorkingPrecision& prec) {
  Real r(x);
  r.precision(static_cast<unsigned>(prec.internal_digits()));
  return r;
}

/// Parses a decimal literal at the internal precision of `prec`.
inline Real parse_real(const std::string& text, const WorkingPrecision& prec) {
  PrecisionScope scope(prec);
  try {
    return Real(text);
  } catch (const std::exception&) {
    throw ArgumentError("not a number: '" + text + "'");
  }
}

/// Decimal string with `digits` significant digits in scientific notation.
inline std::string to_decimal(const Real& x, int digits) {
  return x.str(digits, std::ios_base::scientific);
}

inline Real to_real(const Integer& z) {
  Real r;
  mpfr_set_z(r.backend().data(), z.backend().data(), MPFR_RNDN);
  return r;
}

inline Real to_real(const Rational& q) {
  Real r;
  mpfr_set_q(r.backend().data(), q.backend().data(), MPFR_RNDN);
  return r;
}

inline Real pi_constant() {
  Real r;
  mpfr_const_pi(r.backend().data(), MPFR_RNDN);
  return r;
}

inline Real euler_e() { return boost::multiprecision::exp(Real(1)); }

}  // namespace cmcheck
