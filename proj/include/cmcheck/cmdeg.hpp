#pragma once

// Numerical complete-monotonicity checks.
//
// A scan evaluates (-1)^n f^{(n)}(t) for n = 0..max_order over a logarithmic
// grid. It can certify that a sign pattern fails; a clean scan is evidence
// only, reported as "no violation found". The degree estimator brackets the
// largest exponent r for which t^r f(t) still passes the scan.

#include <cmath>
#include <concepts>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cmcheck/laurent.hpp"
#include "cmcheck/precision.hpp"

namespace cmcheck::cmdeg {

struct LogGrid {
  double t_min = 1e-2;
  double t_max = 1e6;
  int points = 200;

  LogGrid() = default;
  LogGrid(double lo, double hi, int n) : t_min(lo), t_max(hi), points(n) { validate(); }

  void validate() const {
    if (!(t_min > 0)) throw ArgumentError("LogGrid: t_min must be > 0");
    if (!(t_max > t_min)) throw ArgumentError("LogGrid: t_max must exceed t_min");
    if (points < 2) throw ArgumentError("LogGrid: at least two points are required");
  }

  /// Strictly increasing log-spaced points; both endpoints are exact.
  std::vector<Real> values(const WorkingPrecision& prec) const {
    validate();
    PrecisionScope scope(prec);
    const Real lo = t_min;
    const Real hi = t_max;
    const Real log_ratio = boost::multiprecision::log(hi / lo);
    std::vector<Real> out;
    out.reserve(static_cast<std::size_t>(points));
    out.push_back(lo);
    for (int j = 1; j + 1 < points; ++j) {
      out.push_back(lo * boost::multiprecision::exp(log_ratio * j / (points - 1)));
    }
    out.push_back(hi);
    return out;
  }

  /// Geometric midpoint of the grid.
  double median() const { return std::sqrt(t_min * t_max); }

  friend bool operator==(const LogGrid&, const LogGrid&) = default;
};

struct Violation {
  int order = 0;
  Real t;
  Real value;  // (-1)^order f^{(order)}(t), below minus the noise floor
};

struct SignPatternReport {
  int max_order = 0;
  LogGrid grid;
  bool pass = true;
  std::optional<Violation> first_violation;

  std::string verdict() const { return pass ? "no violation found" : "violation"; }
};

/// f^{(n)}(t) for one order at a time.
template <class F>
concept ScalarDerivativeOracle = std::invocable<F, int, const Real&> &&
    std::convertible_to<std::invoke_result_t<F, int, const Real&>, Real>;

/// All derivatives f^{(0..max_order)}(t) at once.
template <class F>
concept JetDerivativeOracle = std::invocable<F, const Real&, int> &&
    std::convertible_to<std::invoke_result_t<F, const Real&, int>, std::vector<Real>>;

using JetOracle = std::function<std::vector<Real>(const Real&, int)>;

namespace detail {

inline bool violates(int order, const Real& derivative, const Real& floor, Real& signed_value) {
  signed_value = (order % 2 == 0) ? derivative : Real(-derivative);
  return signed_value < -floor;
}

}  // namespace detail

/// Scans ascending order first, then ascending t, and reports the first
/// point where (-1)^n f^{(n)}(t) < -10^{-(digits-15)}.
template <class Oracle>
  requires ScalarDerivativeOracle<Oracle> || JetDerivativeOracle<Oracle>
SignPatternReport check_sign_pattern(Oracle&& oracle, const LogGrid& grid, int max_order,
                                     const WorkingPrecision& prec = {}) {
  if (max_order < 0) throw ArgumentError("check_sign_pattern: max_order must be >= 0");
  const auto ts = grid.values(prec);
  PrecisionScope scope(prec);
  const Real floor = prec.noise_floor();
  SignPatternReport report{max_order, grid, true, std::nullopt};
  Real signed_value;

  if constexpr (ScalarDerivativeOracle<Oracle>) {
    for (int n = 0; n <= max_order; ++n) {
      for (const Real& t : ts) {
        Real d;
        try {
          d = oracle(n, t);
        } catch (const std::exception& e) {
          throw NumericFailure("oracle failed at order " + std::to_string(n) + ", t = " + t.str(12) +
                               ": " + e.what());
        }
        if (detail::violates(n, d, floor, signed_value)) {
          report.pass = false;
          report.first_violation = Violation{n, t, signed_value};
          return report;
        }
      }
    }
  } else {
    std::vector<std::vector<Real>> jets;
    jets.reserve(ts.size());
    for (const Real& t : ts) {
      try {
        jets.push_back(oracle(t, max_order));
      } catch (const std::exception& e) {
        throw NumericFailure("oracle failed at orders 0.." + std::to_string(max_order) +
                             ", t = " + t.str(12) + ": " + e.what());
      }
      if (jets.back().size() < static_cast<std::size_t>(max_order) + 1) {
        throw NumericFailure("oracle returned too few orders at t = " + t.str(12));
      }
    }
    for (int n = 0; n <= max_order; ++n) {
      for (std::size_t j = 0; j < ts.size(); ++j) {
        if (detail::violates(n, jets[j][static_cast<std::size_t>(n)], floor, signed_value)) {
          report.pass = false;
          report.first_violation = Violation{n, ts[j], signed_value};
          return report;
        }
      }
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Degree estimation
// ---------------------------------------------------------------------------

struct SearchRange {
  double r_min = 0.0;
  double r_max = 3.0;
};

struct DegreeEstimate {
  std::optional<int> k;
  double r_lo = 0;
  double r_hi = 0;
  double tol = 0;            // r_hi - r_lo
  double requested_tol = 0;
  SearchRange search;
  int max_order = 0;
  LogGrid grid;
  int scans = 0;
  /// Exponents below r_lo that were re-scanned and passed.
  std::vector<double> closure_samples;
  bool downward_closed = true;
  SignPatternReport witness;  // the failing scan at r_hi

  bool contains(double r) const { return r_lo <= r && r <= r_hi; }
};

/// Raised when the search range does not bracket a pass/fail transition.
class BracketError : public Error {
 public:
  using Error::Error;
};

/// Maps an exponent r to the derivative jet of t^r f(t).
using ScaledFamily = std::function<JetOracle(double r)>;

/// Bisection on r; `family(r)` supplies the derivative oracle of t^r f(t).
inline DegreeEstimate estimate_cm_degree(const ScaledFamily& family, SearchRange search, double tol,
                                         const LogGrid& grid, int max_order,
                                         const WorkingPrecision& prec = {}) {
  if (!(tol > 0)) throw ArgumentError("estimate_cm_degree: tol must be > 0");
  if (!(search.r_max > search.r_min)) throw ArgumentError("estimate_cm_degree: r_max must exceed r_min");
  grid.validate();

  DegreeEstimate est;
  est.requested_tol = tol;
  est.search = search;
  est.max_order = max_order;
  est.grid = grid;

  auto scan = [&](double r) {
    ++est.scans;
    return check_sign_pattern(family(r), grid, max_order, prec);
  };

  if (!scan(search.r_min).pass) {
    throw BracketError("sign pattern fails at r_min = " + std::to_string(search.r_min) +
                       "; widen the search range or check grid/orders");
  }
  auto upper = scan(search.r_max);
  if (upper.pass) {
    throw BracketError("sign pattern passes at r_max = " + std::to_string(search.r_max) +
                       "; grid or order range is insufficient to detect failure");
  }

  double lo = search.r_min;
  double hi = search.r_max;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    auto report = scan(mid);
    if (report.pass) {
      lo = mid;
    } else {
      hi = mid;
      upper = std::move(report);
    }
  }
  est.r_lo = lo;
  est.r_hi = hi;
  est.tol = hi - lo;
  est.witness = std::move(upper);

  // Multiplying by t^{r'-r} (completely monotonic for r' < r) preserves the
  // pattern, so exponents below r_lo must pass as well.
  for (double f : {0.0, 0.5, 0.875}) {
    const double r = search.r_min + f * (lo - search.r_min);
    est.closure_samples.push_back(r);
    if (!scan(r).pass) est.downward_closed = false;
  }
  return est;
}

/// Derivative jet of t^r H_k(t).
inline JetOracle scaled_remainder_oracle(int k, double r, const WorkingPrecision& prec) {
  return [series = laurent::TailSeries(k), r, prec](const Real& t, int max_order) {
    PrecisionScope scope(prec);
    return series.scaled_derivatives(Real(r), max_order, t, prec);
  };
}

/// Degree bracket for H_k.
inline DegreeEstimate estimate_cm_degree(int k, SearchRange search, double tol, const LogGrid& grid,
                                         int max_order, const WorkingPrecision& prec = {}) {
  if (k < 0) throw ArgumentError("estimate_cm_degree: k must be >= 0");
  auto est = estimate_cm_degree([k, prec](double r) { return scaled_remainder_oracle(k, r, prec); },
                                search, tol, grid, max_order, prec);
  est.k = k;
  return est;
}

}  // namespace cmcheck::cmdeg
