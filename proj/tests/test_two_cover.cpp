#include <gtest/gtest.h>

#include <utility>
#include <vector>

#include "sqseq/fixture.hpp"
#include "sqseq/two_cover.hpp"
#include "test_support.hpp"

using namespace sqseq;

namespace {

// Quartic with square leading coefficient through a chosen point, and
// nonsingular Jacobian.
std::pair<QuarticCurve, CurvePoint> pointed_quartic(test_support::Sampler& s) {
  while (true) {
    Rational a = s.nonzero(9, 4);
    QuarticCurve q{a * a, s.rational(), s.rational(), s.rational(), Rational(0)};
    Rational p = s.rational(), h = s.rational();
    q.E = h * h - q.rhs(p);
    if (invariants(q).discriminant_factor() == 0) continue;
    return {q, CurvePoint::affine(p, h)};
  }
}

}  // namespace

TEST(Invariants, FixtureJacobian) {
  QuarticCurve q = quartic_from_params(fixture::params());
  QuarticInvariants inv = invariants(q);
  EXPECT_EQ(-27 * inv.I, parse_rational("-147183268996968521373/10000"));
  EXPECT_EQ(-27 * inv.J, parse_rational("171278570868444028577352480093/250000"));
  EXPECT_EQ(jacobian(q), fixture::expected_jacobian());
}

TEST(Invariants, HandComputedExample) {
  // p^4 + 2p^3 + 3p^2 + 4p + 5: I = 60 - 24 + 9, J = 1080 + 216 - 432 - 540 - 54.
  QuarticCurve q{Rational(1), Rational(2), Rational(3), Rational(4), Rational(5)};
  EXPECT_EQ(invariants(q), (QuarticInvariants{Rational(45), Rational(270)}));
}

TEST(Jacobian, SingularQuarticRejected) {
  QuarticCurve square{Rational(1), Rational(0), Rational(-2), Rational(0), Rational(1)};  // (p^2 - 1)^2
  EXPECT_EQ(invariants(square).discriminant_factor(), 0);
  EXPECT_THROW(jacobian(square), SingularJacobian);
}

TEST(Jacobian, DiscriminantProportionality) {
  test_support::Sampler s(31);
  for (int i = 0; i < 50; ++i) {
    Rational I = s.rational(1000, 50), J = s.rational(1000, 50);
    QuarticInvariants inv{I, J};
    WeierstrassCurve e{-27 * I, -27 * J};
    EXPECT_EQ(e.discriminant(), Rational(16 * 19683) * inv.discriminant_factor());
  }
}

TEST(DistinguishedPoint, FixtureValue) {
  QuarticCurve q = quartic_from_params(fixture::params());
  CurvePoint p = distinguished_point(q);
  EXPECT_EQ(p, fixture::expected_distinguished_point());
  EXPECT_EQ(p.x(), parse_rational("-4786935489/100"));
  EXPECT_EQ(abs(p.y()), parse_rational("56568093052527/50"));
  EXPECT_TRUE(is_on_curve(p, jacobian(q)));
}

TEST(DistinguishedPoint, OnJacobianForRandomSquareLeadingCoefficient) {
  test_support::Sampler s(32);
  for (int i = 0; i < 20; ++i) {
    auto [q, pt] = pointed_quartic(s);
    EXPECT_TRUE(is_on_curve(distinguished_point(q), jacobian(q)));
  }
}

TEST(DistinguishedPoint, NonSquareLeadingCoefficient) {
  EXPECT_THROW(distinguished_point(QuarticCurve{Rational(2), Rational(0), Rational(1), Rational(0), Rational(1)}),
               NotASquare);
  EXPECT_THROW(distinguished_point(QuarticCurve{Rational(-4), Rational(0), Rational(1), Rational(0), Rational(1)}),
               NotASquare);
  EXPECT_THROW(distinguished_point(QuarticCurve{Rational(0), Rational(1), Rational(1), Rational(0), Rational(1)}),
               NotASquare);
}

TEST(TwoCoverMap, SeedImageOnJacobian) {
  QuarticCurve q = quartic_from_params(fixture::params());
  CurvePoint image = quartic_to_cubic(fixture::seed(), q);
  EXPECT_TRUE(is_on_curve(image, fixture::expected_jacobian()));
  EXPECT_FALSE(is_torsion(image, fixture::expected_jacobian()));
  EXPECT_EQ(cubic_to_quartic(image, q), fixture::seed());
  CurvePoint mirrored = quartic_to_cubic(fixture::seed().negated(), q);
  EXPECT_TRUE(is_on_curve(mirrored, fixture::expected_jacobian()));
}

TEST(TwoCoverMap, RoundTripsOnSampledPoints) {
  test_support::Sampler s(33);
  int checked = 0;
  for (int i = 0; i < 20; ++i) {
    auto [q, pt] = pointed_quartic(s);
    TwoCoverMap map(q);
    CurvePoint image = map.to_cubic(pt);
    ASSERT_TRUE(is_on_curve(image, map.jacobian()));
    EXPECT_EQ(map.to_quartic(image), pt);
    // More quartic points from multiples on the Jacobian.
    for (int m = 2; m <= 4; ++m) {
      CurvePoint mult = scalar_mul(m, image, map.jacobian());
      CurvePoint back;
      try {
        back = map.to_quartic(mult);
      } catch (const ExceptionalPoint&) {
        continue;
      }
      EXPECT_TRUE(is_on_curve(back, q));
      EXPECT_EQ(map.to_cubic(back), mult);
      EXPECT_EQ(map.to_quartic(map.to_cubic(back)), back);
      ++checked;
    }
  }
  EXPECT_GE(checked, 40);
}

TEST(TwoCoverMap, ExceptionalAndOffCurveInputs) {
  QuarticCurve q = quartic_from_params(fixture::params());
  TwoCoverMap map(q);
  EXPECT_THROW(map.to_quartic(CurvePoint::infinity()), ExceptionalPoint);
  EXPECT_THROW(map.to_cubic(CurvePoint::affine(Rational(0), Rational(0))), OffCurve);
  EXPECT_THROW(map.to_quartic(CurvePoint::affine(Rational(0), Rational(0))), OffCurve);
}
