#include <gtest/gtest.h>

#include "cmcheck/inequalities.hpp"
#include "cmcheck/laplace.hpp"

namespace cmcheck {
namespace {

using inequalities::FPolyForm;
using inequalities::f_poly;

const WorkingPrecision kPrec{};

Real rel(const Real& a, const Real& b) { return boost::multiprecision::abs(a - b) / boost::multiprecision::abs(b); }

const std::vector<Rational>& rational_points() {
  static const std::vector<Rational> pts{Rational(1, 100), Rational(1, 3), Rational(1), Rational(7, 2),
                                         Rational(10), Rational(1000)};
  return pts;
}

TEST(FPoly, Examples) {
  EXPECT_EQ(f_poly(0, Rational(1), FPolyForm::A).value, -2);
  EXPECT_EQ(f_poly(0, Rational(1), FPolyForm::B).value, -2);
  EXPECT_EQ(f_poly(1, Rational(2), FPolyForm::A).value, -30);
  EXPECT_EQ(f_poly(1, Rational(2), FPolyForm::C).value, -30);
  const auto c0 = f_poly(0, Rational(1), FPolyForm::C);
  EXPECT_EQ(c0.value, -22);
  EXPECT_FALSE(c0.validated);
  EXPECT_TRUE(f_poly(1, Rational(1), FPolyForm::D).validated);
  EXPECT_TRUE(f_poly(0, Rational(1), FPolyForm::A).validated);
}

TEST(FPoly, DomainErrors) {
  EXPECT_THROW(f_poly(1, Rational(0), FPolyForm::A), DomainError);
  EXPECT_THROW(f_poly(1, Rational(-1), FPolyForm::B), DomainError);
  EXPECT_THROW(f_poly(-1, Rational(1), FPolyForm::A), ArgumentError);
}

TEST(FPoly, ExpandedFormsAgreeExactly) {
  for (int i = 0; i <= 12; ++i) {
    for (const auto& t : rational_points()) {
      const Rational a = f_poly(i, t, FPolyForm::A).value;
      EXPECT_EQ(f_poly(i, t, FPolyForm::B).value, a) << i << " " << t;
      if (i >= 1) {
        EXPECT_EQ(f_poly(i, t, FPolyForm::C).value, a) << i << " " << t;
        EXPECT_EQ(f_poly(i, t, FPolyForm::D).value, a) << i << " " << t;
      }
    }
  }
}

// Without the constant term the collected form is off by exactly (i+1)(i+2).
TEST(FPoly, CollectedFormNeedsConstantTerm) {
  for (int i = 1; i <= 12; ++i) {
    const Rational t(5, 2);
    const Rational without = f_poly(i, t, FPolyForm::C).value + Rational((i + 1) * (i + 2));
    EXPECT_NE(without, f_poly(i, t, FPolyForm::A).value);
    EXPECT_EQ(without - f_poly(i, t, FPolyForm::A).value, Rational((i + 1) * (i + 2)));
  }
}

TEST(FPoly, FormsDisagreeAtIndexZero) {
  EXPECT_NE(f_poly(0, Rational(1), FPolyForm::C).value, f_poly(0, Rational(1), FPolyForm::A).value);
  EXPECT_EQ(f_poly(0, Rational(1), FPolyForm::C).value, f_poly(0, Rational(1), FPolyForm::D).value);
}

TEST(FPoly, RealMatchesRational) {
  for (int i = 0; i <= 8; ++i) {
    const Real r = f_poly(i, Real("3.5"), FPolyForm::A, kPrec).value;
    const Rational q = f_poly(i, Rational(7, 2), FPolyForm::A).value;
    EXPECT_LT(rel(r, to_real(q)), Real("1e-45"));
  }
}

TEST(FPoly, NegativeOnGrid) {
  const auto ts = cmdeg::LogGrid(1e-2, 1e3, 200).values(kPrec);
  for (int i = 0; i <= 12; ++i) {
    for (const Real& t : ts) {
      EXPECT_LT(f_poly(i, t, FPolyForm::A, kPrec).value, 0) << i << " " << t;
    }
  }
}

TEST(Margins, Examples) {
  PrecisionScope scope(kPrec);
  const Real pi2 = pi_constant() * pi_constant();
  EXPECT_LT(rel(inequalities::trigamma_margin(Real(1)), euler_e() - 1 - pi2 / 6), Real("1e-45"));
  EXPECT_NEAR(static_cast<double>(inequalities::trigamma_margin(Real(1))), 0.0733477616, 1e-9);
  EXPECT_GT(inequalities::trigamma_margin(Real("0.1")), 0);
  EXPECT_GT(inequalities::trigamma_margin(Real(100)), 0);
  EXPECT_NEAR(static_cast<double>(inequalities::bessel_margin(Real(2))), 0.0086601, 1e-6);
  const Real small = inequalities::bessel_margin(Real("0.1"));
  EXPECT_GT(small, 0);
  EXPECT_LT(small, Real("1e-7"));
  EXPECT_THROW(inequalities::bessel_margin(Real(0)), DomainError);
  EXPECT_THROW(inequalities::trigamma_margin(Real(-1)), DomainError);
}

// I_1(t) - (t/2)^3/(1-e^{-(t/2)^2}) = (t/2) H((t/2)^2) with H the kernel of h.
TEST(Margins, BesselMarginIsScaledHKernel) {
  PrecisionScope scope(kPrec);
  for (const char* ts : {"0.02", "0.3", "1", "2", "9", "40"}) {
    const Real t(ts);
    const Real half = t / 2;
    EXPECT_LT(rel(inequalities::bessel_margin(t), half * laplace::h_kernel(half * half)), Real("1e-30")) << ts;
  }
}

TEST(Margins, BesselMarginSmallArgumentAsymptotics) {
  // Leading term t^7 / 18432.
  const Real t("0.01");
  EXPECT_LT(rel(inequalities::bessel_margin(t, kPrec), boost::multiprecision::pow(t, 7) / 18432), Real("1e-4"));
}

TEST(Scans, DefaultGridsPass) {
  const auto b = inequalities::check_ineq_bessel();
  EXPECT_TRUE(b.pass);
  EXPECT_EQ(b.id, "bessel");
  EXPECT_EQ(b.argmin_t, Real(0.01));
  EXPECT_GT(b.min_margin, 0);
  const auto g = inequalities::check_ineq_trigamma();
  EXPECT_TRUE(g.pass);
  EXPECT_GT(g.min_margin, 0);
}

TEST(DifferenceBound, Example) {
  PrecisionScope scope(kPrec);
  const auto rec = inequalities::check_difference_bound(0, Real(1), kPrec);
  EXPECT_TRUE(rec.pass);
  EXPECT_LT(rel(rec.rhs, Real(-2) / 96), Real("1e-45"));
  EXPECT_NEAR(static_cast<double>(rec.lhs), -0.0695611, 1e-6);
}

TEST(DifferenceBound, HoldsOnSampledPoints) {
  for (int i = 0; i <= 6; ++i) {
    for (const char* ts : {"0.25", "1", "3", "12", "50"}) {
      const auto rec = inequalities::check_difference_bound(i, Real(ts), kPrec);
      EXPECT_TRUE(rec.pass) << i << " " << ts << " lhs=" << rec.lhs << " rhs=" << rec.rhs;
    }
  }
  EXPECT_THROW(inequalities::check_difference_bound(1, Real(0), kPrec), DomainError);
}

}  // namespace
}  // namespace cmcheck
