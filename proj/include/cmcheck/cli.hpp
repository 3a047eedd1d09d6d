#pragma once

// Command-line front end: parse -> CommandRequest, execute -> Report.
//
// Exit codes: 0 every record passes, 1 a mathematical violation was found,
// 2 usage error, 3 numeric failure (tolerance or budget not met).

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cmcheck/cmdeg.hpp"
#include "cmcheck/inequalities.hpp"
#include "cmcheck/laplace.hpp"
#include "cmcheck/laurent.hpp"
#include "cmcheck/precision.hpp"
#include "cmcheck/report.hpp"
#include "cmcheck/specfun.hpp"
#include "cmcheck/suite.hpp"

namespace cmcheck::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumeric = 3;

class UsageError : public Error {
 public:
  using Error::Error;
};

/// --help was requested; carries the rendered help text.
class HelpRequested : public Error {
 public:
  using Error::Error;
};

enum class Subcommand { Eval, Degree, VerifyCm, VerifyIntegral, Inequality, Fpoly, Suite };
enum class Format { Json, Csv };

inline std::string to_string(Subcommand s) {
  switch (s) {
    case Subcommand::Eval: return "eval";
    case Subcommand::Degree: return "degree";
    case Subcommand::VerifyCm: return "verify-cm";
    case Subcommand::VerifyIntegral: return "verify-integral";
    case Subcommand::Inequality: return "inequality";
    case Subcommand::Fpoly: return "fpoly";
    case Subcommand::Suite: return "suite";
  }
  return "?";
}

struct CommandRequest {
  Subcommand subcommand = Subcommand::Eval;
  std::string command_line;

  std::string fn;     // eval: function name; verify-cm: h | scaled-remainder
  std::string point;  // real argument t / z / u as given
  std::string a;      // shifted_factorial base
  std::string r;      // scaling exponent
  int k = 0, i = 0, n = 0, nu = 0, b1 = 1, b2 = 1;

  cmdeg::LogGrid grid;
  int max_order = 6;
  double tol = 1.0 / 32;
  double r_min = 0, r_max = 3;
  double rel_tol = 1e-10;

  std::string rep;    // verify-integral
  std::string which;  // inequality
  std::string form;   // fpoly

  WorkingPrecision prec;
  Format format = Format::Json;
  std::optional<std::string> out;
};

namespace detail {

inline const std::vector<std::string>& eval_functions() {
  static const std::vector<std::string> names{
      "shifted_factorial", "a_coeff",     "exp_recip_derivative",      "polygamma",
      "trigamma",          "bessel_i",    "hyp1f2",                    "remainder_hk",
      "remainder_hk_derivative",          "scaled_remainder_derivative", "h",
      "h_derivative",      "kernel_1f2",  "kernel_bessel",             "h_kernel"};
  return names;
}

/// Rational literal such as "3/2", "7" or "0.25".
inline Rational parse_rational(const std::string& text) {
  try {
    const auto dot = text.find('.');
    if (dot == std::string::npos) return Rational(text);
    // Decimal literal: digits after the point become a power-of-ten denominator.
    std::string digits = text;
    digits.erase(dot, 1);
    const auto frac = text.size() - dot - 1;
    Integer den = 1;
    for (std::size_t j = 0; j < frac; ++j) den *= 10;
    return Rational(Integer(digits), den);
  } catch (const std::exception&) {
    throw UsageError("--t: not a rational number: '" + text + "'");
  }
}

}  // namespace detail

/// Builds a request from argv (argv[0] is the program name).
inline CommandRequest parse(const std::vector<std::string>& args) {
  CommandRequest req;
  for (std::size_t j = 1; j < args.size(); ++j) {
    if (j > 1) req.command_line += ' ';
    req.command_line += args[j];
  }

  CLI::App app{"Verified numerics for completely monotonic functions and Laurent remainders of exp(1/z)",
               "cmcheck"};
  app.require_subcommand(1);

  int digits = WorkingPrecision::kDefaultDigits;
  std::string format = "json";
  std::string out;
  std::optional<double> grid_min, grid_max;
  std::optional<int> grid_points;
  std::optional<double> r_min, r_max;
  std::optional<int> max_order;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--digits", digits, "Significant decimal digits (>= 30)");
    sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--out", out, "Write the report to this file instead of stdout");
  };
  auto grid_flags = [&](CLI::App* sub) {
    sub->add_option("--grid-min", grid_min, "Smallest grid point");
    sub->add_option("--grid-max", grid_max, "Largest grid point");
    sub->add_option("--grid-points", grid_points, "Number of log-spaced points");
  };

  auto* eval = app.add_subcommand("eval", "Evaluate one function");
  eval->add_option("--fn", req.fn, "Function name")->required()->check(CLI::IsMember(detail::eval_functions()));
  eval->add_option("--t,--z,--u", req.point, "Real argument");
  eval->add_option("--a", req.a, "Base of the shifted factorial");
  eval->add_option("--r", req.r, "Scaling exponent");
  eval->add_option("--k", req.k, "Remainder / kernel index");
  eval->add_option("--i", req.i, "Derivative order / coefficient row");
  eval->add_option("--n", req.n, "Order");
  eval->add_option("--nu", req.nu, "Bessel order");
  eval->add_option("--b1", req.b1, "First lower parameter of 1F2");
  eval->add_option("--b2", req.b2, "Second lower parameter of 1F2");
  common(eval);

  auto* degree = app.add_subcommand("degree", "Bracket the completely monotonic degree of H_k");
  degree->add_option("--k", req.k, "Remainder index")->required();
  degree->add_option("--tol", req.tol, "Bracket width");
  degree->add_option("--max-order", max_order, "Highest derivative order scanned");
  degree->add_option("--r-min", r_min, "Lower end of the exponent search (default 0)");
  degree->add_option("--r-max", r_max, "Upper end of the exponent search (default k+3)");
  grid_flags(degree);
  common(degree);

  auto* verify_cm = app.add_subcommand("verify-cm", "Scan the alternating derivative sign pattern");
  verify_cm->add_option("--fn", req.fn, "h or scaled-remainder")->check(CLI::IsMember({"h", "scaled-remainder"}));
  verify_cm->add_option("--k", req.k, "Remainder index (scaled-remainder)");
  verify_cm->add_option("--r", req.r, "Scaling exponent (scaled-remainder)");
  verify_cm->add_option("--max-order", max_order, "Highest derivative order scanned");
  grid_flags(verify_cm);
  common(verify_cm);

  auto* verify_integral = app.add_subcommand("verify-integral", "Check a Laplace representation by quadrature");
  verify_integral->add_option("--rep", req.rep, "Representation")
      ->required()
      ->check(CLI::IsMember({"F12", "BESSEL", "H", "H_DERIV"}));
  verify_integral->add_option("--k", req.k, "Remainder index (F12, BESSEL)");
  verify_integral->add_option("--n", req.n, "Derivative order (H_DERIV)");
  verify_integral->add_option("--z,--t", req.point, "Transform variable")->required();
  verify_integral->add_option("--rel-tol", req.rel_tol, "Relative tolerance");
  common(verify_integral);

  auto* inequality = app.add_subcommand("inequality", "Scan an inequality or check the difference bound");
  inequality->add_option("--which", req.which, "trigamma, bessel or difference")
      ->required()
      ->check(CLI::IsMember({"trigamma", "bessel", "difference"}));
  inequality->add_option("--i", req.i, "Derivative order (difference)");
  inequality->add_option("--t", req.point, "Point (difference)");
  grid_flags(inequality);
  common(inequality);

  auto* fpoly = app.add_subcommand("fpoly", "Evaluate f_i(t) exactly in one or all forms");
  fpoly->add_option("--i", req.i, "Index i")->required();
  fpoly->add_option("--t", req.point, "Rational point, e.g. 3/2")->required();
  fpoly->add_option("--form", req.form, "A, B, C, D or all")->check(CLI::IsMember({"A", "B", "C", "D", "all"}));
  common(fpoly);

  auto* suite = app.add_subcommand("suite", "Run the full verification battery");
  common(suite);

  std::vector<std::string> reversed(args.begin() + (args.empty() ? 0 : 1), args.end());
  std::reverse(reversed.begin(), reversed.end());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested(app.help());
  } catch (const CLI::CallForAllHelp&) {
    throw HelpRequested(app.help("", CLI::AppFormatMode::All));
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }
  for (auto* sub : app.get_subcommands()) {
    if (sub->get_name() == "eval") req.subcommand = Subcommand::Eval;
    if (sub->get_name() == "degree") req.subcommand = Subcommand::Degree;
    if (sub->get_name() == "verify-cm") req.subcommand = Subcommand::VerifyCm;
    if (sub->get_name() == "verify-integral") req.subcommand = Subcommand::VerifyIntegral;
    if (sub->get_name() == "inequality") req.subcommand = Subcommand::Inequality;
    if (sub->get_name() == "fpoly") req.subcommand = Subcommand::Fpoly;
    if (sub->get_name() == "suite") req.subcommand = Subcommand::Suite;
  }

  // ---- validation -------------------------------------------------------
  try {
    req.prec = WorkingPrecision(digits);
  } catch (const ArgumentError& e) {
    throw UsageError(std::string("--digits: ") + e.what());
  }
  req.format = format == "csv" ? Format::Csv : Format::Json;
  if (!out.empty()) req.out = out;

  auto need_point = [&](const char* flag) {
    if (req.point.empty()) throw UsageError(std::string(flag) + " is required");
    try {
      return parse_real(req.point, req.prec);
    } catch (const ArgumentError&) {
      throw UsageError(std::string(flag) + ": not a number: '" + req.point + "'");
    }
  };
  auto positive_point = [&](const char* name) {
    if (!(need_point("--t") > 0)) throw UsageError(std::string(name) + " must be > 0");
  };
  auto nonnegative_point = [&](const char* name) {
    if (need_point("--t") < 0) throw UsageError(std::string(name) + " must be >= 0");
  };
  auto require = [](bool ok, const std::string& message) {
    if (!ok) throw UsageError(message);
  };

  auto default_grid = [&](double lo, double hi, int pts) {
    req.grid.t_min = grid_min.value_or(lo);
    req.grid.t_max = grid_max.value_or(hi);
    req.grid.points = grid_points.value_or(pts);
    require(req.grid.t_min > 0, "--grid-min must be > 0");
    require(req.grid.t_max > req.grid.t_min, "--grid-max must exceed --grid-min");
    require(req.grid.points >= 2, "--grid-points must be >= 2");
  };

  switch (req.subcommand) {
    case Subcommand::Eval: {
      const std::string& f = req.fn;
      if (f == "shifted_factorial") {
        require(!req.a.empty(), "--a is required");
        try {
          (void)parse_real(req.a, req.prec);
        } catch (const ArgumentError&) {
          throw UsageError("--a: not a number: '" + req.a + "'");
        }
        require(req.n >= 0, "n must be >= 0");
      } else if (f == "a_coeff") {
        require(req.i >= 1, "i must be >= 1");
        require(req.k >= 0 && req.k <= req.i - 1, "k must be in [0, i-1]");
      } else if (f == "exp_recip_derivative") {
        require(req.i >= 0, "i must be >= 0");
        require(need_point("--t") != 0, "t must be nonzero");
      } else if (f == "polygamma" || f == "trigamma") {
        if (f == "trigamma") req.n = 1;
        require(req.n >= 1, "n must be >= 1");
        positive_point("t");
      } else if (f == "bessel_i") {
        require(req.nu >= 0, "nu must be >= 0");
        nonnegative_point("z");
      } else if (f == "hyp1f2") {
        require(req.b1 >= 1 && req.b2 >= 1, "b1 and b2 must be >= 1");
        nonnegative_point("t");
      } else if (f == "remainder_hk" || f == "remainder_hk_derivative" || f == "scaled_remainder_derivative") {
        require(req.k >= 0, "k must be >= 0");
        require(req.n >= 0, "n must be >= 0");
        positive_point("t");
        if (f == "scaled_remainder_derivative") {
          require(!req.r.empty(), "--r is required");
          try {
            (void)parse_real(req.r, req.prec);
          } catch (const ArgumentError&) {
            throw UsageError("--r: not a number: '" + req.r + "'");
          }
        }
      } else if (f == "h") {
        positive_point("t");
      } else if (f == "h_derivative") {
        require(req.i >= 1, "i must be >= 1");
        positive_point("t");
      } else if (f == "kernel_1f2" || f == "kernel_bessel") {
        require(req.k >= 0, "k must be >= 0");
        nonnegative_point("t");
      } else if (f == "h_kernel") {
        nonnegative_point("u");
      }
      break;
    }
    case Subcommand::Degree: {
      require(req.k >= 0, "k must be >= 0");
      require(req.tol > 0, "tol must be > 0");
      req.max_order = max_order.value_or(6);
      require(req.max_order >= 1, "max-order must be >= 1");
      req.r_min = r_min.value_or(0.0);
      req.r_max = r_max.value_or(req.k + 3.0);
      require(req.r_max > req.r_min, "r-max must exceed r-min");
      default_grid(1e-2, 1e6, 200);
      break;
    }
    case Subcommand::VerifyCm: {
      if (req.fn.empty()) req.fn = "h";
      req.max_order = max_order.value_or(8);
      require(req.max_order >= 0, "max-order must be >= 0");
      if (req.fn == "h") {
        default_grid(0.05, 1e3, 200);
      } else {
        require(req.k >= 0, "k must be >= 0");
        if (req.r.empty()) req.r = std::to_string(req.k + 1);
        try {
          (void)parse_real(req.r, req.prec);
        } catch (const ArgumentError&) {
          throw UsageError("--r: not a number: '" + req.r + "'");
        }
        default_grid(1e-2, 1e6, 200);
      }
      break;
    }
    case Subcommand::VerifyIntegral: {
      const Real z = need_point("--z");
      require(z > 0, "z must be > 0");
      require(z >= laplace::kMinZ, "z must be >= 0.1");
      require(req.rel_tol > 0, "rel-tol must be > 0");
      if (req.rep == "H_DERIV") require(req.n >= 1, "n must be >= 1");
      if (req.rep == "F12" || req.rep == "BESSEL") require(req.k >= 0, "k must be >= 0");
      break;
    }
    case Subcommand::Inequality: {
      if (req.which == "difference") {
        require(req.i >= 0, "i must be >= 0");
        positive_point("t");
      } else if (req.which == "bessel") {
        default_grid(0.01, 50, 500);
      } else {
        default_grid(0.01, 100, 500);
      }
      break;
    }
    case Subcommand::Fpoly: {
      require(req.i >= 0, "i must be >= 0");
      if (req.form.empty()) req.form = "all";
      const Rational t = detail::parse_rational(req.point);
      require(t > 0, "t must be > 0");
      break;
    }
    case Subcommand::Suite: break;
  }
  return req;
}

// ---------------------------------------------------------------------------
// Execution
// ---------------------------------------------------------------------------

namespace detail {

inline std::string dec(const Real& x, const WorkingPrecision& prec) { return to_decimal(x, prec.digits()); }

inline Record value_record(std::string name, std::string provenance, const Real& v, const WorkingPrecision& prec) {
  return Record{std::move(name), std::move(provenance), true, dec(v, prec), {}};
}

inline void run_eval(const CommandRequest& req, Report& report) {
  const auto& prec = req.prec;
  PrecisionScope scope(prec);
  const std::string& f = req.fn;
  report.inputs.emplace_back("fn", f);
  auto t = [&] { return parse_real(req.point, prec); };
  if (!req.point.empty()) report.inputs.emplace_back("t", req.point);

  if (f == "shifted_factorial") {
    report.inputs.emplace_back("a", req.a);
    report.inputs.emplace_back("n", std::to_string(req.n));
    report.add(value_record(f, "closed-form",
                            specfun::shifted_factorial(parse_real(req.a, prec), static_cast<unsigned>(req.n), prec), prec));
  } else if (f == "a_coeff") {
    report.inputs.emplace_back("i", std::to_string(req.i));
    report.inputs.emplace_back("k", std::to_string(req.k));
    report.add(Record{f, "exact", true, specfun::a_coeff(req.i, req.k).str(), {}});
  } else if (f == "exp_recip_derivative") {
    report.inputs.emplace_back("i", std::to_string(req.i));
    report.add(value_record(f, "closed-form", specfun::exp_recip_derivative(req.i, t(), prec), prec));
  } else if (f == "polygamma" || f == "trigamma") {
    report.inputs.emplace_back("n", std::to_string(req.n));
    report.add(value_record(f, "series", specfun::polygamma(req.n, t(), prec), prec));
  } else if (f == "bessel_i") {
    report.inputs.emplace_back("nu", std::to_string(req.nu));
    report.add(value_record(f, "series", specfun::bessel_i(req.nu, t(), prec), prec));
  } else if (f == "hyp1f2") {
    report.inputs.emplace_back("b1", std::to_string(req.b1));
    report.inputs.emplace_back("b2", std::to_string(req.b2));
    report.add(value_record(f, "series", specfun::hyp1f2(req.b1, req.b2, t(), prec), prec));
  } else if (f == "remainder_hk") {
    report.inputs.emplace_back("k", std::to_string(req.k));
    report.add(value_record(f, "series", laurent::remainder_hk(req.k, t(), prec), prec));
  } else if (f == "remainder_hk_derivative") {
    report.inputs.emplace_back("k", std::to_string(req.k));
    report.inputs.emplace_back("n", std::to_string(req.n));
    report.add(value_record(f, "series", laurent::remainder_hk_derivative(req.k, req.n, t(), prec), prec));
  } else if (f == "scaled_remainder_derivative") {
    report.inputs.emplace_back("k", std::to_string(req.k));
    report.inputs.emplace_back("r", req.r);
    report.inputs.emplace_back("n", std::to_string(req.n));
    report.add(value_record(
        f, "series", laurent::scaled_remainder_derivative(req.k, parse_real(req.r, prec), req.n, t(), prec), prec));
  } else if (f == "h") {
    report.add(value_record(f, "closed-form", laurent::h_function(t(), prec), prec));
  } else if (f == "h_derivative") {
    report.inputs.emplace_back("i", std::to_string(req.i));
    report.add(value_record(f, "closed-form", laurent::h_derivative(req.i, t(), prec), prec));
  } else if (f == "kernel_1f2") {
    report.inputs.emplace_back("k", std::to_string(req.k));
    report.add(value_record(f, "series", laplace::kernel_1f2(req.k, t(), prec), prec));
  } else if (f == "kernel_bessel") {
    report.inputs.emplace_back("k", std::to_string(req.k));
    report.add(value_record(f, "series", laplace::kernel_bessel(req.k, t(), prec), prec));
  } else if (f == "h_kernel") {
    report.add(value_record(f, "series", laplace::h_kernel(t(), prec), prec));
  }
}

inline void add_grid_inputs(const cmdeg::LogGrid& g, Report& report) {
  std::ostringstream lo, hi;
  lo << g.t_min;
  hi << g.t_max;
  report.inputs.emplace_back("grid_min", lo.str());
  report.inputs.emplace_back("grid_max", hi.str());
  report.inputs.emplace_back("grid_points", std::to_string(g.points));
}

inline std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

inline Record sign_record(std::string name, const cmdeg::SignPatternReport& rep, const WorkingPrecision& prec) {
  Record rec{std::move(name), "scan", rep.pass, rep.verdict(), {}};
  rec.fields.emplace_back("max_order", std::to_string(rep.max_order));
  if (rep.first_violation) {
    rec.fields.emplace_back("violation_order", std::to_string(rep.first_violation->order));
    rec.fields.emplace_back("violation_t", dec(rep.first_violation->t, prec));
    rec.fields.emplace_back("violation_value", dec(rep.first_violation->value, prec));
  }
  return rec;
}

inline void run_degree(const CommandRequest& req, Report& report) {
  report.inputs.emplace_back("k", std::to_string(req.k));
  report.inputs.emplace_back("tol", fmt(req.tol));
  report.inputs.emplace_back("max_order", std::to_string(req.max_order));
  report.inputs.emplace_back("r_min", fmt(req.r_min));
  report.inputs.emplace_back("r_max", fmt(req.r_max));
  add_grid_inputs(req.grid, report);
  const auto est = cmdeg::estimate_cm_degree(req.k, {req.r_min, req.r_max}, req.tol, req.grid, req.max_order, req.prec);
  const bool ok = est.downward_closed && est.contains(req.k + 1);
  Record rec{"degree", "bisection", ok, "[" + fmt(est.r_lo) + ", " + fmt(est.r_hi) + "]", {}};
  rec.fields.emplace_back("r_lo", fmt(est.r_lo));
  rec.fields.emplace_back("r_hi", fmt(est.r_hi));
  rec.fields.emplace_back("width", fmt(est.tol));
  rec.fields.emplace_back("scans", std::to_string(est.scans));
  rec.fields.emplace_back("contains_k_plus_1", est.contains(req.k + 1) ? "true" : "false");
  rec.fields.emplace_back("downward_closed", est.downward_closed ? "true" : "false");
  report.add(std::move(rec));
  // The scan at r_hi is supposed to fail; it is reported as the witness.
  Record witness = sign_record("witness_at_r_hi", est.witness, req.prec);
  witness.pass = true;
  report.add(std::move(witness));
}

inline void run_verify_cm(const CommandRequest& req, Report& report) {
  report.inputs.emplace_back("fn", req.fn);
  report.inputs.emplace_back("max_order", std::to_string(req.max_order));
  add_grid_inputs(req.grid, report);
  const auto& prec = req.prec;
  if (req.fn == "h") {
    auto oracle = [&](int n, const Real& t) { return laurent::h_derivative_any(n, t, prec); };
    report.add(sign_record("h", cmdeg::check_sign_pattern(oracle, req.grid, req.max_order, prec), prec));
  } else {
    report.inputs.emplace_back("k", std::to_string(req.k));
    report.inputs.emplace_back("r", req.r);
    PrecisionScope scope(prec);
    const Real r = parse_real(req.r, prec);
    const laurent::TailSeries series(req.k);
    auto oracle = [&](const Real& t, int max_order) { return series.scaled_derivatives(r, max_order, t, prec); };
    report.add(sign_record("scaled-remainder", cmdeg::check_sign_pattern(oracle, req.grid, req.max_order, prec), prec));
  }
}

inline void run_verify_integral(const CommandRequest& req, Report& report) {
  using laplace::Representation;
  const auto& prec = req.prec;
  PrecisionScope scope(prec);
  const Representation rep = req.rep == "F12"      ? Representation::F12
                             : req.rep == "BESSEL" ? Representation::Bessel
                             : req.rep == "H"      ? Representation::H
                                                   : Representation::HDeriv;
  const int index = rep == Representation::HDeriv ? req.n : (rep == Representation::H ? 0 : req.k);
  report.inputs.emplace_back("rep", req.rep);
  report.inputs.emplace_back(rep == Representation::HDeriv ? "n" : "k", std::to_string(index));
  report.inputs.emplace_back("z", req.point);
  report.inputs.emplace_back("rel_tol", fmt(req.rel_tol));
  const auto rec = laplace::verify_representation(rep, index, parse_real(req.point, prec), req.rel_tol, prec);
  report.add(value_record("lhs", "closed-form", rec.lhs, prec));
  Record rhs = value_record("rhs", "quadrature", rec.rhs, prec);
  rhs.fields.emplace_back("integral", dec(rec.quadrature.value, prec));
  rhs.fields.emplace_back("error_estimate", to_decimal(rec.quadrature.error_estimate, 6));
  rhs.fields.emplace_back("tail_bound", to_decimal(rec.quadrature.tail_bound, 6));
  rhs.fields.emplace_back("truncation_T", fmt(rec.quadrature.truncation_T));
  rhs.fields.emplace_back("nodes_used", std::to_string(rec.quadrature.nodes_used));
  if (rep == Representation::Bessel) rhs.fields.emplace_back("atom", dec(rec.atom, prec));
  report.add(std::move(rhs));
  report.add(Record{"rel_err", "quadrature", rec.pass, to_decimal(rec.rel_err, 6), {}});
}

inline void run_inequality(const CommandRequest& req, Report& report) {
  const auto& prec = req.prec;
  report.inputs.emplace_back("which", req.which);
  if (req.which == "difference") {
    report.inputs.emplace_back("i", std::to_string(req.i));
    report.inputs.emplace_back("t", req.point);
    PrecisionScope scope(prec);
    const auto rec = inequalities::check_difference_bound(req.i, parse_real(req.point, prec), prec);
    Record r{"difference_bound", "closed-form", rec.pass, rec.pass ? "lhs < rhs < 0" : "violated", {}};
    r.fields.emplace_back("lhs", dec(rec.lhs, prec));
    r.fields.emplace_back("rhs", dec(rec.rhs, prec));
    report.add(std::move(r));
    return;
  }
  add_grid_inputs(req.grid, report);
  const auto scan = req.which == "bessel" ? inequalities::check_ineq_bessel(req.grid, prec)
                                          : inequalities::check_ineq_trigamma(req.grid, prec);
  Record r{scan.id, "scan", scan.pass, dec(scan.min_margin, prec), {}};
  r.fields.emplace_back("argmin_t", dec(scan.argmin_t, prec));
  report.add(std::move(r));
}

inline void run_fpoly(const CommandRequest& req, Report& report) {
  using inequalities::FPolyForm;
  report.inputs.emplace_back("i", std::to_string(req.i));
  report.inputs.emplace_back("t", req.point);
  report.inputs.emplace_back("form", req.form);
  const Rational t = parse_rational(req.point);
  std::vector<FPolyForm> forms;
  if (req.form == "all") {
    forms = {FPolyForm::A, FPolyForm::B, FPolyForm::C, FPolyForm::D};
  } else {
    forms = {req.form == "A" ? FPolyForm::A : req.form == "B" ? FPolyForm::B : req.form == "C" ? FPolyForm::C : FPolyForm::D};
  }
  const Rational reference = inequalities::f_poly<Rational>(req.i, t, FPolyForm::A).value;
  for (auto form : forms) {
    const auto v = inequalities::f_poly<Rational>(req.i, t, form);
    Record r{"f_" + inequalities::to_string(form), "exact", true, v.value.str(), {}};
    r.fields.emplace_back("validated_range", v.validated ? "true" : "false");
    r.fields.emplace_back("matches_A", v.value == reference ? "true" : "false");
    r.fields.emplace_back("negative", v.value < 0 ? "true" : "false");
    // Outside the validated range (C/D at i = 0) a mismatch is informational.
    r.pass = v.value < 0 && (!v.validated || v.value == reference);
    report.add(std::move(r));
  }
}

inline void run_suite(const CommandRequest& req, Report& report) {
  for (const auto& c : suite::run_all(req.prec)) {
    Record r{"criterion_" + std::to_string(c.id), "suite", c.pass, c.title, {}};
    r.fields.emplace_back("detail", c.detail);
    r.fields.emplace_back("seconds", fmt(c.seconds));
    report.add(std::move(r));
  }
}

}  // namespace detail

/// Runs the request. Failures are reported through exit_code, never thrown.
inline Report execute(const CommandRequest& req) {
  Report report;
  report.command = to_string(req.subcommand) + (req.command_line.empty() ? "" : " | " + req.command_line);
  report.inputs.emplace_back("digits", std::to_string(req.prec.digits()));
  const auto start = std::chrono::steady_clock::now();
  try {
    switch (req.subcommand) {
      case Subcommand::Eval: detail::run_eval(req, report); break;
      case Subcommand::Degree: detail::run_degree(req, report); break;
      case Subcommand::VerifyCm: detail::run_verify_cm(req, report); break;
      case Subcommand::VerifyIntegral: detail::run_verify_integral(req, report); break;
      case Subcommand::Inequality: detail::run_inequality(req, report); break;
      case Subcommand::Fpoly: detail::run_fpoly(req, report); break;
      case Subcommand::Suite: detail::run_suite(req, report); break;
    }
    report.exit_code = report.pass ? kExitPass : kExitViolation;
  } catch (const NumericFailure& e) {
    report.pass = false;
    report.error = std::string("numeric failure: ") + e.what();
    report.exit_code = kExitNumeric;
  } catch (const cmdeg::BracketError& e) {
    report.pass = false;
    report.error = std::string("bracket error: ") + e.what();
    report.exit_code = kExitNumeric;
  } catch (const Error& e) {
    report.pass = false;
    report.error = std::string("argument error: ") + e.what();
    report.exit_code = kExitUsage;
  }
  report.timing_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return report;
}

inline std::string render(const Report& report, Format format) {
  return format == Format::Csv ? to_csv(report) : to_json(report).dump(2) + "\n";
}

/// Writes `text` to `path` via a temporary file and rename.
inline void write_atomically(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw Error("cannot open " + tmp + " for writing");
    os << text;
    if (!os) throw Error("write to " + tmp + " failed");
  }
  std::filesystem::rename(tmp, path);
}

/// Full CLI: parse, execute, emit. Returns the process exit code.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CommandRequest req;
  try {
    req = parse(args);
  } catch (const HelpRequested& h) {
    out << h.what();
    return kExitPass;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }
  const Report report = execute(req);
  const std::string text = render(report, req.format);
  try {
    if (req.out) {
      write_atomically(*req.out, text);
    } else {
      out << text;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  if (!report.error.empty()) err << report.error << "\n";
  return report.exit_code;
}

}  // namespace cmcheck::cli
