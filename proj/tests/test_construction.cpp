#include <gtest/gtest.h>

#include "sqseq/construction.hpp"
#include "sqseq/fixture.hpp"
#include "test_support.hpp"

using namespace sqseq;

namespace {

// Closed forms for (a, b, c) through (t^2, d), ((t+1)^2, e), ((t+2)^2, f).
FamilyCurve abc_closed_form(const Rational& t, const Rational& d, const Rational& e, const Rational& f) {
  Rational t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
  Rational d2 = d * d, e2 = e * e, f2 = f * f;
  Rational a = ((3 + 2 * t) * d2 - 4 * (1 + t) * e2 + (1 + 2 * t) * f2) /
               (4 * (15 + 73 * t + 135 * t2 + 125 * t3 + 60 * t4 + 12 * t5));
  Rational b = (-(3 + 2 * t) * (3 + 3 * t + t2) * (7 + 9 * t + 3 * t2) * d2 +
                4 * (1 + t) * (4 + 2 * t + t2) * (4 + 6 * t + 3 * t2) * e2 -
                (1 + 2 * t) * (1 + t + t2) * (1 + 3 * t + 3 * t2) * f2) /
               (4 * (1 + 2 * t) * (15 + 43 * t + 49 * t2 + 27 * t3 + 6 * t4));
  Rational c = ((2 + t) * (2 + t) * (15 + 43 * t + 46 * t2 + 22 * t3 + 4 * t4) * d2 -
                8 * t2 * (2 + t) * (2 + t) * (2 + 2 * t + t2) * e2 +
                t2 * (1 + 5 * t + 10 * t2 + 10 * t3 + 4 * t4) * f2) /
               (4 * (1 + 2 * t) * (15 + 28 * t + 21 * t2 + 6 * t3));
  return {a, b, c};
}

Rational g_squared_closed_form(const Rational& t, const Rational& d, const Rational& e, const Rational& f) {
  Rational t2 = t * t;
  Rational num = (5 + 2 * t) * ((2 + t) * (14 + 12 * t + 3 * t2) * d * d -
                                3 * (1 + t) * (13 + 10 * t + 3 * t2) * e * e) +
                 3 * (2 + t) * (1 + 2 * t) * (10 + 8 * t + 3 * t2) * f * f;
  return num / ((1 + t) * (1 + 2 * t) * (5 + 6 * t + 3 * t2));
}

// Quadratic forms in (p, q, w), written out term by term.
YValues defg_closed_form(const Rational& t, const Rational& p, const Rational& q, const Rational& w) {
  Rational t2 = t * t, t3 = t2 * t, t4 = t3 * t;
  Rational k1 = (2 + t) * (5 + 2 * t) * (14 + 12 * t + 3 * t2);
  Rational k2 = (1 + t) * (5 + 2 * t) * (13 + 10 * t + 3 * t2);
  Rational k3 = (2 + t) * (1 + 2 * t) * (10 + 8 * t + 3 * t2);
  Rational q65 = 65 + 141 * t + 111 * t2 + 41 * t3 + 6 * t4;
  Rational q20 = 20 + 66 * t + 66 * t2 + 31 * t3 + 6 * t4;
  Rational q140 = 140 + 246 * t + 166 * t2 + 51 * t3 + 6 * t4;
  YValues y;
  y.d = k1 * p * p + 3 * k2 * q * q - 3 * k3 * w * w - 6 * q65 * p * q + 6 * q20 * p * w;
  y.e = -k1 * p * p - 3 * k2 * q * q - 3 * k3 * w * w + 2 * q140 * p * q + 6 * q20 * q * w;
  y.f = -k1 * p * p + 3 * k2 * q * q + 3 * k3 * w * w - 6 * k2 * q * w + 2 * k1 * p * w;
  y.g = -p * p * q140 + 3 * (q * q * q65 - q20 * w * w);
  return y;
}

const Rational kSeedH = parse_rational("1317462069/185600");

}  // namespace

TEST(Degeneracy, RejectsCollidingSquares) {
  for (const char* s : {"-1/2", "-1", "-3/2", "-2", "-5/2", "-3", "-7/2"}) {
    Rational t = parse_rational(s);
    EXPECT_TRUE(is_degenerate(t)) << s;
    EXPECT_THROW(require_nondegenerate(t), DegenerateParameter) << s;
    EXPECT_THROW(solve_abc(t, 1, 2, 3), DegenerateParameter) << s;
    EXPECT_THROW(quartic_from_params(t, 1, 1), DegenerateParameter) << s;
  }
  for (const char* s : {"0", "1", "-4", "1/2", "-1/3", "-9/2", "-5/4"}) EXPECT_FALSE(is_degenerate(parse_rational(s))) << s;
}

TEST(Degeneracy, ValidTKeepsFiveDistinctSquares) {
  test_support::Sampler s(1);
  for (int i = 0; i < 200; ++i) {
    Rational t = s.rational(40, 8);
    bool distinct = true;
    for (int a = 0; a < 5; ++a)
      for (int b = a + 1; b < 5; ++b) distinct = distinct && square_abscissa(t, a) != square_abscissa(t, b);
    EXPECT_EQ(is_degenerate(t), !distinct) << to_string(t);
  }
}

TEST(SolveAbc, ConstantOrdinatesGiveConstantCurve) {
  test_support::Sampler s(2);
  for (int i = 0; i < 20; ++i)
    EXPECT_EQ(solve_abc(s.valid_t(), 1, 1, 1), (FamilyCurve{Rational(0), Rational(0), Rational(1)}));
}

TEST(SolveAbc, PublishedCurveFromFirstThreePoints) {
  auto pts = fixture::expected_points();
  EXPECT_EQ(solve_abc(Rational(1), pts[0].y(), pts[1].y(), pts[2].y()), fixture::expected_curve());
}

TEST(SolveAbc, SubstitutionAndClosedForm) {
  test_support::Sampler s(3);
  for (int i = 0; i < 50; ++i) {
    Rational t = s.valid_t(), d = s.rational(), e = s.rational(), f = s.rational();
    FamilyCurve c = solve_abc(t, d, e, f);
    EXPECT_EQ(c.rhs(square_abscissa(t, 0)), d * d);
    EXPECT_EQ(c.rhs(square_abscissa(t, 1)), e * e);
    EXPECT_EQ(c.rhs(square_abscissa(t, 2)), f * f);
    EXPECT_EQ(c, abc_closed_form(t, d, e, f));
  }
}

TEST(GSquared, TrivialSolution) {
  test_support::Sampler s(4);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(g_squared(s.valid_t(), 1, 1, 1), 1);
}

TEST(GSquared, PublishedFourthOrdinate) {
  auto pts = fixture::expected_points();
  Rational g = parse_rational("29720351/18852320");
  EXPECT_EQ(g_squared(Rational(1), pts[0].y(), pts[1].y(), pts[2].y()), g * g);
}

TEST(GSquared, MatchesClosedForm) {
  test_support::Sampler s(5);
  for (int i = 0; i < 50; ++i) {
    Rational t = s.valid_t(), d = s.rational(), e = s.rational(), f = s.rational();
    EXPECT_EQ(g_squared(t, d, e, f), g_squared_closed_form(t, d, e, f));
  }
}

TEST(DefgParametrization, MatchesClosedForm) {
  test_support::Sampler s(6);
  for (int i = 0; i < 30; ++i) {
    Rational t = s.valid_t(), p = s.rational(), q = s.rational(), w = s.rational();
    EXPECT_EQ(defg_parametrization(t, p, q, w), defg_closed_form(t, p, q, w));
  }
}

TEST(DefgParametrization, FourPointsOnInducedCurve) {
  test_support::Sampler s(7);
  for (int i = 0; i < 50; ++i) {
    Rational t = s.valid_t(), p = s.rational(), q = s.rational(), w = s.rational();
    YValues y = defg_parametrization(t, p, q, w);
    EXPECT_EQ(y.g * y.g, g_squared(t, y.d, y.e, y.f));
    FamilyCurve c = solve_abc(t, y.d, y.e, y.f);
    const Rational ys[] = {y.d, y.e, y.f, y.g};
    for (int k = 0; k < 4; ++k) EXPECT_EQ(c.rhs(square_abscissa(t, k)), ys[k] * ys[k]);
  }
}

TEST(DefgParametrization, HomogeneousOfDegreeTwo) {
  test_support::Sampler s(8);
  for (int i = 0; i < 20; ++i) {
    Rational t = s.valid_t(), p = s.rational(), q = s.rational(), w = s.rational(), l = s.nonzero();
    YValues y = defg_parametrization(t, p, q, w);
    YValues z = defg_parametrization(t, l * p, l * q, l * w);
    Rational l2 = l * l;
    EXPECT_EQ(z, (YValues{l2 * y.d, l2 * y.e, l2 * y.f, l2 * y.g}));
    FamilyCurve c = solve_abc(t, y.d, y.e, y.f), cz = solve_abc(t, z.d, z.e, z.f);
    Rational l4 = l2 * l2;
    EXPECT_EQ(cz, (FamilyCurve{l4 * c.a, l4 * c.b, l4 * c.c}));
  }
}

TEST(DefgParametrization, FixtureIsProportionalToPublishedOrdinates) {
  YValues y = defg_parametrization(Rational(1), fixture::seed_p(), parse_rational("81/40"), Rational(1));
  auto pts = fixture::expected_points();
  Rational l = fixture::scale();
  EXPECT_EQ(l * y.d, pts[0].y());
  EXPECT_EQ(l * y.e, pts[1].y());
  EXPECT_EQ(l * y.f, pts[2].y());
  EXPECT_EQ(l * y.g, pts[3].y());
  EXPECT_EQ(l * kSeedH, pts[4].y());
}

TEST(Quartic, LeadingCoefficientAtOne) {
  EXPECT_EQ(quartic_leading_coefficient(Rational(1)), 370881);
  EXPECT_EQ(quartic_from_params(fixture::params()).A, 370881);
}

TEST(Quartic, AgreesWithDirectEvaluation) {
  test_support::Sampler s(9);
  for (int i = 0; i < 20; ++i) {
    Rational t = s.valid_t(), q = s.rational(), w = s.rational();
    QuarticCurve quartic = quartic_from_params(t, q, w);
    Rational l = 140 + 246 * t + 166 * t * t + 51 * t * t * t + 6 * t * t * t * t;
    EXPECT_EQ(quartic.A, l * l);
    for (int k = 0; k < 3; ++k) {
      Rational p = s.rational(200, 30);
      EXPECT_EQ(quartic.rhs(p), h_squared(t, p, q, w));
    }
  }
}

TEST(HFromQuartic, FixtureSeed) {
  QuarticCurve quartic = quartic_from_params(fixture::params());
  auto h = h_from_quartic(quartic, fixture::seed_p());
  ASSERT_TRUE(h);
  EXPECT_EQ(*h, kSeedH);
  EXPECT_EQ(fixture::seed(), CurvePoint::affine(fixture::seed_p(), kSeedH));
}

TEST(HFromQuartic, ZeroNegativeAndNonSquare) {
  QuarticCurve q{Rational(1), Rational(0), Rational(-1), Rational(0), Rational(0)};  // p^4 - p^2
  EXPECT_EQ(*h_from_quartic(q, Rational(1)), 0);
  EXPECT_FALSE(h_from_quartic(q, parse_rational("1/2")));  // negative value
  EXPECT_FALSE(h_from_quartic(q, Rational(3)));            // 72
  EXPECT_EQ(*h_from_quartic(q, parse_rational("5/4")), parse_rational("15/16"));
}
