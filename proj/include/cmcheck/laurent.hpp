#pragma once

// Calculus on the Laurent remainder H_k(t) = e^{1/t} - sum_{m<=k} t^{-m}/m!
// and on h(t) = e^{1/t} - psi'(t).
//
// H_k is only ever evaluated through its tail sum_{m>k} t^{-m}/m!; the
// subtractive definition cancels catastrophically for large t.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "cmcheck/precision.hpp"
#include "cmcheck/specfun.hpp"

namespace cmcheck::laurent {

/// Hard cap on the number of tail terms summed at one point.
inline constexpr int kMaxTailTerms = 20000;

/// The tail sum_{m >= k+1} t^{-m} / m! held as data: an offset plus the
/// coefficient rule m -> 1/m!.
class TailSeries {
 public:
  explicit TailSeries(int offset) : offset_(offset) {
    if (offset < 0) throw ArgumentError("TailSeries: offset must be >= 0");
  }

  int offset() const { return offset_; }
  int first_index() const { return offset_ + 1; }

  static Rational coefficient_exact(int m) { return Rational(Integer(1), specfun::factorial(static_cast<unsigned>(m))); }

  /// Smallest truncation index M >= k+1 whose certified remainder bound
  /// falls below eps times the leading term t^{-(k+1)}/(k+1)!.
  ///
  /// For t >= 1:  sum_{m>M} t^{-m}/m! <= e t^{-(M+1)} / (M+1)!.
  /// For t < 1 the term ratio 1/((m+1) t) is at most 1/2 once (M+2) t >= 2,
  /// so the remainder is at most twice the first omitted term.
  int truncation_order(const Real& t_in, const WorkingPrecision& prec) const {
    const Real t = promote(t_in, prec);
    if (t <= 0) throw DomainError("TailSeries: t must be > 0");
    PrecisionScope scope(prec);
    const double tl = static_cast<double>(t);
    const double log_eps = -(prec.digits() + 5) * std::log(10.0);
    const double log_t = std::log(tl);
    const double log_lead = -(offset_ + 1) * log_t - std::lgamma(offset_ + 2.0);
    const double log_factor = tl >= 1.0 ? 1.0 : std::log(2.0);
    for (int M = first_index(); M <= kMaxTailTerms; ++M) {
      if (tl < 1.0 && (M + 2) * tl < 2.0) continue;
      const double log_bound = log_factor - (M + 1) * log_t - std::lgamma(M + 2.0);
      if (log_bound < log_eps + log_lead) return M;
    }
    throw NumericFailure("TailSeries: truncation order exceeds cap at t = " + t.str(10));
  }

  /// H_k(t) by direct summation of the tail up to truncation_order(t).
  Real evaluate(const Real& t_in, const WorkingPrecision& prec) const {
    const Real t = promote(t_in, prec);
    const int M = truncation_order(t, prec);
    PrecisionScope scope(prec);
    const Real x = t;
    Real term = boost::multiprecision::pow(x, -first_index()) /
                to_real(specfun::factorial(static_cast<unsigned>(first_index())));
    Real sum = term;
    for (int m = first_index(); m < M; ++m) {
      term /= x * (m + 1);
      sum += term;
    }
    return sum;
  }

  /// d^n/dt^n [t^r H_k(t)] for n = 0..max_order, summed termwise:
  ///   sum_{m>k} (1/m!) prod_{j<n} (r-m-j) t^{r-m-n}.
  ///
  /// Summation stops past m > r+1, where the ratio of consecutive terms
  ///   (m+n-r) / ((m+1)(m-r) t)
  /// decreases in m; once it is <= 1/2 the omitted tail is bounded by the
  /// last included term, which must be below eps times the accumulated
  /// absolute sum for every order.
  std::vector<Real> scaled_derivatives(const Real& r_in, int max_order, const Real& t_in,
                                       const WorkingPrecision& prec) const {
    const Real r = promote(r_in, prec);
    const Real t = promote(t_in, prec);
    if (t <= 0) throw DomainError("scaled_remainder_derivative: t must be > 0");
    if (max_order < 0) throw ArgumentError("scaled_remainder_derivative: order must be >= 0");
    PrecisionScope scope(prec);
    const Real x = t;
    const Real exponent = r;
    const Real eps = prec.series_epsilon();
    const double rd = static_cast<double>(exponent);
    const double td = static_cast<double>(x);
    const auto orders = static_cast<std::size_t>(max_order) + 1;

    std::vector<Real> sum(orders, Real(0));
    std::vector<Real> magnitude(orders, Real(0));
    std::vector<Real> last(orders, Real(0));

    const Real inv_x = 1 / x;
    int m = first_index();
    // t^{r-m} / m!
    Real base = boost::multiprecision::pow(x, exponent - m) / to_real(specfun::factorial(static_cast<unsigned>(m)));
    for (; m <= kMaxTailTerms; ++m) {
      Real v = base;
      for (std::size_t n = 0; n < orders; ++n) {
        sum[n] += v;
        magnitude[n] += boost::multiprecision::abs(v);
        last[n] = v;
        if (n + 1 < orders) v *= (exponent - m - static_cast<int>(n)) * inv_x;
      }
      if (m > rd + 1.0) {
        const double ratio = (m + max_order - rd) / ((m + 1.0) * (m - rd) * td);
        if (ratio <= 0.5) {
          bool done = true;
          for (std::size_t n = 0; n < orders && done; ++n) {
            done = boost::multiprecision::abs(last[n]) <= eps * magnitude[n];
          }
          if (done) return sum;
        }
      }
      base *= inv_x / (m + 1);
    }
    throw NumericFailure("scaled_remainder_derivative: tail did not converge at t = " + x.str(10));
  }

 private:
  int offset_;
};

/// H_k(z) = sum_{m>k} z^{-m}/m!, z > 0.
inline Real remainder_hk(int k, const Real& z, const WorkingPrecision& prec = {}) {
  if (z <= 0) throw DomainError("remainder_hk: z must be > 0");
  return TailSeries(k).evaluate(z, prec);
}

/// d^n/dt^n [t^r H_k(t)].
inline Real scaled_remainder_derivative(int k, const Real& r, int n, const Real& t,
                                        const WorkingPrecision& prec = {}) {
  if (n < 0) throw ArgumentError("scaled_remainder_derivative: order must be >= 0");
  auto jet = TailSeries(k).scaled_derivatives(r, n, t, prec);
  return jet.back();
}

/// H_k^{(n)}(t) = sum_{m>k} (-1)^n (m)_n t^{-m-n} / m!.
inline Real remainder_hk_derivative(int k, int n, const Real& t, const WorkingPrecision& prec = {}) {
  if (t <= 0) throw DomainError("remainder_hk_derivative: t must be > 0");
  PrecisionScope scope(prec);
  return scaled_remainder_derivative(k, Real(0), n, t, prec);
}

/// h(t) = e^{1/t} - psi'(t).
inline Real h_function(const Real& t_in, const WorkingPrecision& prec = {}) {
  const Real t = promote(t_in, prec);
  if (t <= 0) throw DomainError("h_function: t must be > 0");
  PrecisionScope scope(prec);
  return specfun::exp_recip_derivative(0, t, prec) - specfun::polygamma(1, t, prec);
}

/// h^{(i)}(t) = (e^{1/t})^{(i)} - psi^{(i+1)}(t), i >= 1.
inline Real h_derivative(int i, const Real& t_in, const WorkingPrecision& prec = {}) {
  const Real t = promote(t_in, prec);
  if (i < 1) throw ArgumentError("h_derivative: order must be >= 1 (use h_function for order 0)");
  if (t <= 0) throw DomainError("h_derivative: t must be > 0");
  PrecisionScope scope(prec);
  return specfun::exp_recip_derivative(i, t, prec) - specfun::polygamma(i + 1, t, prec);
}

/// h^{(i)}(t) for any i >= 0; order 0 is h itself.
inline Real h_derivative_any(int i, const Real& t, const WorkingPrecision& prec = {}) {
  return i == 0 ? h_function(t, prec) : h_derivative(i, t, prec);
}

}  // namespace cmcheck::laurent
