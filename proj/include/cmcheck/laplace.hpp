#pragma once

// Laplace-transform representations and their numerical verification.
//
// Kernels (all entire in t, finite on [0, inf)):
//   F12:    t^k 1F2(1; k+1, k+2; t) / (k! (k+1)!) = sum_{m>k} t^{m-1} / (m! (m-1)!)
//   BESSEL: I_{k+2}(2 sqrt t) / t^{(k+2)/2}      = sum_{j>=0} t^j / (j! (j+k+2)!)
//   H:      I_1(2 sqrt u) / sqrt u - u / (1 - e^{-u})
//
// Every kernel is bounded termwise by I_0(2 sqrt t) <= e^{2 sqrt t}, which gives
// a closed-form bound on the integral beyond the truncation point.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "cmcheck/laurent.hpp"
#include "cmcheck/precision.hpp"
#include "cmcheck/specfun.hpp"

namespace cmcheck::laplace {

enum class KernelKind { Unit, F12, Bessel, H };

inline std::string to_string(KernelKind kind) {
  switch (kind) {
    case KernelKind::Unit: return "UNIT";
    case KernelKind::F12: return "F12";
    case KernelKind::Bessel: return "BESSEL";
    case KernelKind::H: return "H";
  }
  return "?";
}

/// Integrand t^moment * kernel(t); `k` is ignored for Unit and H.
struct KernelSpec {
  KernelKind kind = KernelKind::Unit;
  int k = 0;
  int moment = 0;
};

struct QuadratureResult {
  Real value;
  Real error_estimate;  // panel errors + tail bound
  Real tail_bound;
  double truncation_T = 0;
  long nodes_used = 0;
  int panels = 0;
};

inline constexpr long kNodeBudget = 100000;
inline constexpr double kMinZ = 0.1;

// ---------------------------------------------------------------------------
// Kernels
// ---------------------------------------------------------------------------

inline Real kernel_1f2(int k, const Real& t_in, const WorkingPrecision& prec = {}) {
  const Real t = promote(t_in, prec);
  if (k < 0) throw ArgumentError("kernel_1f2: k must be >= 0");
  if (t < 0) throw DomainError("kernel_1f2: t must be >= 0");
  PrecisionScope scope(prec);
  const Real norm = to_real(specfun::factorial(static_cast<unsigned>(k)) *
                            specfun::factorial(static_cast<unsigned>(k + 1)));
  const Real power = k == 0 ? Real(1) : Real(boost::multiprecision::pow(t, k));
  return power * specfun::hyp1f2(k + 1, k + 2, t, prec) / norm;
}

inline Real kernel_bessel(int k, const Real& t_in, const WorkingPrecision& prec = {}) {
  const Real t = promote(t_in, prec);
  if (k < 0) throw ArgumentError("kernel_bessel: k must be >= 0");
  if (t < 0) throw DomainError("kernel_bessel: t must be >= 0");
  PrecisionScope scope(prec);
  const unsigned shift = static_cast<unsigned>(k + 2);
  const Real first = 1 / to_real(specfun::factorial(shift));
  if (t == 0) return first;
  if (t < 1) {
    return specfun::detail::positive_series(
        first, [&](unsigned j) { return Real(t / (Real(j + 1) * Real(j + 1 + shift))); }, prec,
        "kernel_bessel");
  }
  const Real root = boost::multiprecision::sqrt(t);
  return specfun::bessel_i(k + 2, 2 * root, prec) / boost::multiprecision::pow(root, k + 2);
}

/// I_1(2 sqrt u)/sqrt u - u/(1 - e^{-u}). Below u = 1/4 the two power series
/// are subtracted coefficientwise; their constant, linear and quadratic
/// coefficients agree, so the sum starts at u^3.
inline Real h_kernel(const Real& u_in, const WorkingPrecision& prec = {}) {
  const Real u = promote(u_in, prec);
  if (u < 0) throw DomainError("h_kernel: u must be >= 0");
  PrecisionScope scope(prec);
  if (u == 0) return Real(0);
  if (u >= Real(0.25)) {
    return kernel_1f2(0, u, prec) - specfun::x_over_one_minus_exp(u, prec);
  }
  const Real eps = prec.series_epsilon();
  // sum_j [1/(j!(j+1)!) - c_j] u^j with c_{2m} = B_{2m}/(2m)!, c_odd = 0 (j >= 3).
  Real inv_ff = Real(1) / 12;     // 1/(j!(j+1)!) at j = 2
  Real inv_fact = Real(1) / 2;    // 1/j! at j = 2
  Real power = u * u;             // u^j at j = 2
  Real sum = 0;
  Real scale = 0;
  Real previous = 0;
  for (int j = 3; j < 320; ++j) {
    inv_ff /= Real(j) * Real(j + 1);
    inv_fact /= j;
    power *= u;
    Real coeff = inv_ff;
    if (j % 2 == 0) coeff -= to_real(specfun::bernoulli_even(j / 2)) * inv_fact;
    const Real term = boost::multiprecision::abs(coeff * power);
    sum += coeff * power;
    scale += term;
    // Odd coefficients lack the Bernoulli part and are far smaller than their
    // even neighbours, so one small term alone does not end the sum.
    if (j > 6 && term < eps * scale && previous < eps * scale) return sum;
    previous = term;
  }
  throw NumericFailure("h_kernel: series did not converge");
}

/// kernel(t) without the moment weight.
inline Real evaluate_kernel(const KernelSpec& spec, const Real& t_in, const WorkingPrecision& prec) {
  const Real t = promote(t_in, prec);
  switch (spec.kind) {
    case KernelKind::Unit: return Real(1);
    case KernelKind::F12: return kernel_1f2(spec.k, t, prec);
    case KernelKind::Bessel: return kernel_bessel(spec.k, t, prec);
    case KernelKind::H: return h_kernel(t, prec);
  }
  throw ArgumentError("unknown kernel");
}

// ---------------------------------------------------------------------------
// Quadrature
// ---------------------------------------------------------------------------

namespace detail {

struct GaussRule {
  std::vector<Real> nodes;    // on [-1, 1]
  std::vector<Real> weights;
};

/// n-point Gauss-Legendre rule at the current default precision.
inline GaussRule gauss_legendre(int n) {
  GaussRule rule;
  const Real eps = WorkingPrecision::pow10(-static_cast<int>(Real::default_precision()) + 2);
  const Real pi = pi_constant();
  for (int i = 1; i <= n; ++i) {
    Real x = boost::multiprecision::cos(pi * (Real(i) - Real(0.25)) / (Real(n) + Real(0.5)));
    Real dp;
    for (int iter = 0; iter < 100; ++iter) {
      Real p0 = 1, p1 = x;
      for (int j = 2; j <= n; ++j) {
        Real p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
        p0 = std::move(p1);
        p1 = std::move(p2);
      }
      dp = n * (x * p1 - p0) / (x * x - 1);
      const Real dx = p1 / dp;
      x -= dx;
      if (boost::multiprecision::abs(dx) < eps) break;
    }
    // Refresh the derivative at the converged node.
    Real p0 = 1, p1 = x;
    for (int j = 2; j <= n; ++j) {
      Real p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
      p0 = std::move(p1);
      p1 = std::move(p2);
    }
    dp = n * (x * p1 - p0) / (x * x - 1);
    rule.nodes.push_back(x);
    rule.weights.push_back(2 / ((1 - x * x) * dp * dp));
  }
  return rule;
}

/// Upper bound of int_T^inf C t^p e^{beta sqrt t - z t} dt with C = 1.
/// t^p is absorbed via t^p <= (2p/(z e))^p e^{z t / 2}; the remaining
/// integral is closed-form after s = sqrt t.
inline double envelope_tail(double T, double z, int p, double beta) {
  double log_c = 0.0;
  double zz = z;
  if (p > 0) {
    log_c = p * std::log(2.0 * p / (z * std::exp(1.0)));
    zz = z / 2;
  }
  const double a = beta / (2 * zz);
  const double u0 = std::sqrt(T) - a;
  const double log_pref = log_c + beta * beta / (4 * zz);
  const double first = std::exp(log_pref - zz * u0 * u0) / zz;
  const double second = a > 0 ? std::exp(log_pref) * a * std::sqrt(M_PI / zz) * std::erfc(std::sqrt(zz) * u0) : 0.0;
  return first + second;
}

struct Panel {
  Real a, b, value, error;
};

}  // namespace detail

/// Certified bound on the integral of the given kernel beyond T.
inline double tail_bound(const KernelSpec& spec, double z, double T) {
  const double beta = spec.kind == KernelKind::Unit ? 0.0 : 2.0;
  return detail::envelope_tail(T, z, spec.moment, beta);
}

/// int_0^inf t^moment kernel(t) e^{-z t} dt.
///
/// [0, T] is integrated by adaptive bisection with 20-point Gauss-Legendre
/// panels, each checked against the 10-point rule; T is doubled until the
/// closed-form tail bound drops below a tenth of the requested tolerance.
inline QuadratureResult laplace_transform(const KernelSpec& spec, const Real& z_in, double rel_tol,
                                          const WorkingPrecision& prec = {}) {
  const Real z = promote(z_in, prec);
  if (z <= 0) throw DomainError("laplace_transform: z must be > 0");
  if (z < kMinZ) throw DomainError("laplace_transform: z must be >= 0.1");
  if (!(rel_tol > 0)) throw ArgumentError("laplace_transform: rel_tol must be > 0");
  if (spec.moment < 0) throw ArgumentError("laplace_transform: moment must be >= 0");
  if (spec.k < 0) throw ArgumentError("laplace_transform: k must be >= 0");
  PrecisionScope scope(prec);

  const Real zr = z;
  const double zd = static_cast<double>(zr);
  const auto g20 = detail::gauss_legendre(20);
  const auto g10 = detail::gauss_legendre(10);
  long nodes = 0;

  auto integrand = [&](const Real& t) {
    Real v = evaluate_kernel(spec, t, prec) * boost::multiprecision::exp(-zr * t);
    if (spec.moment > 0) v *= boost::multiprecision::pow(t, spec.moment);
    return v;
  };
  auto integrate_panel = [&](Real a, Real b) {
    const Real half = (b - a) / 2;
    const Real mid = (a + b) / 2;
    Real fine = 0, coarse = 0;
    for (std::size_t j = 0; j < g20.nodes.size(); ++j) fine += g20.weights[j] * integrand(mid + half * g20.nodes[j]);
    for (std::size_t j = 0; j < g10.nodes.size(); ++j) coarse += g10.weights[j] * integrand(mid + half * g10.nodes[j]);
    nodes += 30;
    fine *= half;
    coarse *= half;
    Real err = boost::multiprecision::abs(fine - coarse);
    return detail::Panel{std::move(a), std::move(b), std::move(fine), std::move(err)};
  };

  double T = std::max({1.0, 8.0 / zd, 4.0 / (zd * zd), 2.0 * spec.moment / zd});
  std::vector<detail::Panel> panels;
  constexpr int kInitialPanels = 4;
  for (int j = 0; j < kInitialPanels; ++j) {
    panels.push_back(integrate_panel(Real(T) * j / kInitialPanels, Real(T) * (j + 1) / kInitialPanels));
  }

  while (true) {
    Real total = 0, err = 0;
    for (const auto& p : panels) {
      total += p.value;
      err += p.error;
    }
    const double tail = tail_bound(spec, zd, T);
    const Real target = rel_tol * boost::multiprecision::abs(total);
    if (target > 0 && err + tail <= target) {
      // Deterministic left-to-right summation.
      std::sort(panels.begin(), panels.end(), [](const auto& x, const auto& y) { return x.a < y.a; });
      QuadratureResult result;
      result.value = 0;
      for (const auto& p : panels) result.value += p.value;
      result.tail_bound = tail;
      result.error_estimate = err + tail;
      result.truncation_T = T;
      result.nodes_used = nodes;
      result.panels = static_cast<int>(panels.size());
      return result;
    }
    if (nodes > kNodeBudget) {
      throw NumericFailure("laplace_transform: tolerance " + std::to_string(rel_tol) +
                           " not reached within node budget (error " + err.str(6) + ", tail " +
                           std::to_string(tail) + ")");
    }
    if (!(Real(tail) <= target / 10)) {
      panels.push_back(integrate_panel(Real(T), Real(2 * T)));
      T *= 2;
      continue;
    }
    auto worst = std::max_element(panels.begin(), panels.end(),
                                  [](const auto& x, const auto& y) { return x.error < y.error; });
    const Real a = worst->a, b = worst->b, mid = (a + b) / 2;
    *worst = integrate_panel(a, mid);
    panels.push_back(integrate_panel(mid, b));
  }
}

// ---------------------------------------------------------------------------
// Representation checks
// ---------------------------------------------------------------------------

enum class Representation { F12, Bessel, H, HDeriv };

inline std::string to_string(Representation rep) {
  switch (rep) {
    case Representation::F12: return "F12";
    case Representation::Bessel: return "BESSEL";
    case Representation::H: return "H";
    case Representation::HDeriv: return "H_DERIV";
  }
  return "?";
}

struct VerificationRecord {
  Representation rep = Representation::F12;
  int index = 0;  // k for F12/BESSEL, n for H_DERIV
  Real z;
  Real lhs;       // closed form
  Real rhs;       // quadrature expression with prefactors
  Real atom;      // point mass at the origin included in rhs (BESSEL only)
  Real rel_err;
  bool pass = false;
  QuadratureResult quadrature;
};

/// Compares a closed form against its Laplace representation:
///   F12:       H_k(z)           = int F12_k(t) e^{-zt} dt
///   BESSEL:    H_k(z)           = z^{-(k+1)} [1/(k+1)! + int BESSEL_k(t) e^{-zt} dt]
///   H:         h(z)             = 1 + int H(u) e^{-zu} du
///   H_DERIV n: (-1)^n h^{(n)}(z) = int u^n H(u) e^{-zu} du
///
/// The BESSEL form carries a point mass 1/(k+1)! at t = 0: it is the m = 0
/// term of sum_m t^{m-1}/((k+1+m)! Gamma(m)), whose distributional limit is a
/// Dirac mass rather than zero. Without it the integral alone reproduces
/// H_{k+1}(z) instead of H_k(z).
inline VerificationRecord verify_representation(Representation rep, int index, const Real& z_in,
                                                double rel_tol, const WorkingPrecision& prec = {}) {
  const Real z = promote(z_in, prec);
  if (index < 0) throw ArgumentError("verify_representation: index must be >= 0");
  if (rep == Representation::HDeriv && index < 1) {
    throw ArgumentError("verify_representation: H_DERIV needs n >= 1");
  }
  PrecisionScope scope(prec);
  VerificationRecord rec;
  rec.rep = rep;
  rec.index = index;
  rec.z = z;
  rec.atom = 0;
  const double quad_tol = rel_tol / 100;

  switch (rep) {
    case Representation::F12: {
      rec.lhs = laurent::remainder_hk(index, z, prec);
      rec.quadrature = laplace_transform({KernelKind::F12, index, 0}, z, quad_tol, prec);
      rec.rhs = rec.quadrature.value;
      break;
    }
    case Representation::Bessel: {
      rec.lhs = laurent::remainder_hk(index, z, prec);
      rec.quadrature = laplace_transform({KernelKind::Bessel, index, 0}, z, quad_tol, prec);
      rec.atom = 1 / to_real(specfun::factorial(static_cast<unsigned>(index + 1)));
      rec.rhs = (rec.atom + rec.quadrature.value) / boost::multiprecision::pow(Real(z), index + 1);
      break;
    }
    case Representation::H: {
      rec.lhs = laurent::h_function(z, prec);
      rec.quadrature = laplace_transform({KernelKind::H, 0, 0}, z, quad_tol, prec);
      rec.rhs = 1 + rec.quadrature.value;
      break;
    }
    case Representation::HDeriv: {
      const Real d = laurent::h_derivative(index, z, prec);
      rec.lhs = (index % 2 == 0) ? d : Real(-d);
      rec.quadrature = laplace_transform({KernelKind::H, 0, index}, z, quad_tol, prec);
      rec.rhs = rec.quadrature.value;
      break;
    }
  }
  rec.rel_err = boost::multiprecision::abs(rec.lhs - rec.rhs) / boost::multiprecision::abs(rec.lhs);
  rec.pass = rec.rel_err <= rel_tol;
  return rec;
}

}  // namespace cmcheck::laplace
