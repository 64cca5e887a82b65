#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "sqseq/family.hpp"
#include "sqseq/fixture.hpp"
#include "sqseq/heights.hpp"
#include "test_support.hpp"

using namespace sqseq;

namespace {

const WeierstrassCurve kRankOne{Rational(-16), Rational(16)};
const CurvePoint kGen = CurvePoint::affine(Rational(0), Rational(4));
// Regulator of 37a1, as tabulated (normalization without the factor 2).
constexpr double kRankOneHeight = 0.0511114082399688;

BoundedReal near(double v, double tol) { return BoundedReal::from_double(v, tol); }

struct E1 {
  WeierstrassCurve curve;
  std::vector<CurvePoint> points;
};

const E1& e1() {
  static const E1 data = [] {
    SequenceRecord rec = generate_member(fixture::params(), fixture::seed(), 1, fixture::options());
    FamilyIsomorphism iso(rec.curve);
    E1 out{iso.curve(), {}};
    for (const auto& pt : rec.points) out.points.push_back(iso.to_weierstrass(pt));
    return out;
  }();
  return data;
}

}  // namespace

TEST(BoundedReal, EnclosesElementaryValues) {
  BoundedReal l2 = log_of(Integer(2));
  EXPECT_TRUE(l2.overlaps(near(std::log(2.0), 1e-15)));
  EXPECT_LT(l2.rad(), 1e-60);
  BoundedReal third = BoundedReal::from_long(1) / BoundedReal::from_long(3);
  EXPECT_TRUE((third * BoundedReal::from_long(3)).overlaps(BoundedReal::from_long(1)));
  EXPECT_TRUE(BoundedReal::from_long(3).is_positive());
  EXPECT_TRUE(BoundedReal::from_long(-3).is_negative());
  EXPECT_TRUE(near(0.5, 1.0).contains_zero());
  EXPECT_THROW(log(near(0.0, 1.0)), DomainError);
}

TEST(BoundedReal, StringRoundTrip) {
  BoundedReal x = log_of(Integer(7)).widened(near(0.0, 3e-9));
  BoundedReal y = BoundedReal::from_strings(x.mid_string(40), x.rad_string(6));
  EXPECT_EQ(y.mid_string(40), x.mid_string(40));
  EXPECT_EQ(y.rad_string(6), x.rad_string(6));
  EXPECT_GE(y.rad(), 3e-9);
  EXPECT_THROW(BoundedReal::from_strings("abc", "1"), ParseError);
  EXPECT_THROW(BoundedReal::from_strings("1", "-1"), ParseError);
}

TEST(NaiveHeight, Definition) {
  EXPECT_TRUE(naive_height(CurvePoint::affine(parse_rational("2201/2320"), Rational(0)))
                  .overlaps(near(std::log(2320.0), 1e-14)));
  EXPECT_TRUE(naive_height(CurvePoint::affine(Rational(1), Rational(0))).overlaps(BoundedReal(256)));
  EXPECT_TRUE(naive_height(fixture::expected_distinguished_point()).overlaps(near(std::log(4786935489.0), 1e-13)));
  EXPECT_TRUE(naive_height(CurvePoint::infinity()).overlaps(BoundedReal(256)));
}

TEST(IntegralModel, ScalesToIntegers) {
  for (const WeierstrassCurve& c : {e1().curve, fixture::expected_jacobian(), kRankOne}) {
    IntegralModel m = integral_model(c);
    Rational u = m.scale;
    EXPECT_EQ(Rational(m.a4), c.alpha * u * u * u * u);
    EXPECT_EQ(Rational(m.a6), c.beta * u * u * u * u * u * u);
  }
  IntegralModel m = integral_model(e1().curve);
  for (const auto& pt : e1().points) EXPECT_TRUE(is_on_curve(m.map(pt), m.curve()));
  // Already minimal at p < 1000 here.
  EXPECT_EQ(integral_model(kRankOne).a4, -16);
  // y^2 = x^3 - 16 * 2^4 x + 16 * 2^6 reduces back.
  IntegralModel big = integral_model(WeierstrassCurve{Rational(-256), Rational(1024)});
  EXPECT_EQ(big.a4, -16);
  EXPECT_EQ(big.a6, 16);
}

TEST(GoodReduction, MultipleHasNonsingularReduction) {
  HeightCalculator calc(e1().curve);
  for (const auto& pt : e1().points) {
    CurvePoint q = calc.model().map(pt);
    auto [k, kq] = calc.good_reduction_multiple(q);
    EXPECT_GE(k, 1);
    EXPECT_TRUE(has_nonsingular_reduction(kq, calc.model()));
    EXPECT_EQ(kq, scalar_mul(k, q, calc.model().curve()));
    for (int j = 1; j < k; ++j)
      if (k % j == 0) EXPECT_FALSE(has_nonsingular_reduction(scalar_mul(j, q, calc.model().curve()), calc.model()));
  }
}

TEST(CanonicalHeight, RankOneGenerator) {
  BoundedReal h = canonical_height(kGen, kRankOne, 1e-12);
  EXPECT_LE(h.rad(), 1e-12);
  EXPECT_TRUE(h.overlaps(near(kRankOneHeight, 1e-15)));
}

TEST(CanonicalHeight, AgreesWithDoubling) {
  BoundedReal tate = canonical_height(kGen, kRankOne, 1e-10);
  for (int n : {4, 8, 10}) {
    BoundedReal dbl = canonical_height_by_doubling(kGen, kRankOne, n);
    EXPECT_TRUE(dbl.overlaps(tate)) << n;
  }
  BoundedReal jac = canonical_height(fixture::expected_distinguished_point(), fixture::expected_jacobian(), 1e-8);
  EXPECT_TRUE(canonical_height_by_doubling(fixture::expected_distinguished_point(), fixture::expected_jacobian(), 6)
                  .overlaps(jac));
}

TEST(CanonicalHeight, NaiveHeightWithinBound) {
  IntegralModel m = integral_model(e1().curve);
  BoundedReal bound = height_difference_bound(m);
  HeightCalculator calc(e1().curve);
  for (const auto& pt : e1().points) {
    BoundedReal diff = naive_height(m.map(pt)) - calc.canonical_height(pt, 1e-8);
    EXPECT_TRUE((bound - diff).is_positive());
    EXPECT_TRUE((bound + diff).is_positive());
  }
}

TEST(CanonicalHeight, TorsionIsZero) {
  WeierstrassCurve six{Rational(0), Rational(1)};
  for (int k = 1; k <= 5; ++k) {
    BoundedReal h = canonical_height(scalar_mul(k, CurvePoint::affine(Rational(2), Rational(3)), six), six, 1e-8);
    EXPECT_TRUE(h.is_exact());
    EXPECT_TRUE(h.contains_zero());
  }
}

TEST(CanonicalHeight, DistinguishedPointIsPositive) {
  EXPECT_TRUE(canonical_height(fixture::expected_distinguished_point(), fixture::expected_jacobian()).is_positive());
}

TEST(CanonicalHeight, Quadratic) {
  HeightCalculator calc(e1().curve);
  for (const auto& pt : {e1().points[0], e1().points[3]}) {
    BoundedReal h = calc.canonical_height(pt, 1e-9);
    for (long m : {2L, 3L, 4L}) {
      BoundedReal hm = calc.canonical_height(scalar_mul(m, pt, e1().curve), 1e-9);
      EXPECT_TRUE(hm.overlaps(h * BoundedReal::from_long(m * m))) << m;
    }
  }
  BoundedReal g = canonical_height(kGen, kRankOne, 1e-12);
  for (long m = 2; m <= 6; ++m)
    EXPECT_TRUE(canonical_height(scalar_mul(m, kGen, kRankOne), kRankOne, 1e-12).overlaps(g * BoundedReal::from_long(m * m)));
}

TEST(CanonicalHeight, ParallelogramLaw) {
  HeightCalculator calc(e1().curve);
  const auto& c = e1().curve;
  const auto& pts = e1().points;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto& p = pts[i];
    const auto& q = pts[(i + 2) % pts.size()];
    BoundedReal lhs = calc.canonical_height(add(p, q, c), 1e-9) + calc.canonical_height(subtract(p, q, c), 1e-9);
    BoundedReal rhs = (calc.canonical_height(p, 1e-9) + calc.canonical_height(q, 1e-9)).times_pow2(1);
    EXPECT_TRUE(lhs.overlaps(rhs)) << i;
  }
}

TEST(CanonicalHeight, RejectsBadInput) {
  EXPECT_THROW(canonical_height(CurvePoint::affine(Rational(1), Rational(2)), kRankOne), OffCurve);
  EXPECT_THROW(canonical_height(kGen, kRankOne, 0.0), InvalidArgument);
  EXPECT_THROW(HeightCalculator(WeierstrassCurve{Rational(0), Rational(0)}), DegenerateModel);
}

TEST(Determinant, ExactMatrices) {
  auto ball = [](long v) { return BoundedReal::from_long(v); };
  BoundedMatrix m3{{ball(2), ball(-1), ball(0)}, {ball(-1), ball(2), ball(-1)}, {ball(0), ball(-1), ball(2)}};
  EXPECT_TRUE(determinant(m3).overlaps(ball(4)));
  EXPECT_TRUE(determinant(m3).is_exact());
  // The tridiagonal [2, -1] matrix of size n has determinant n + 1; n = 8 uses elimination.
  for (std::size_t n : {5U, 7U, 8U, 9U}) {
    BoundedMatrix m(n, std::vector<BoundedReal>(n, ball(0)));
    for (std::size_t i = 0; i < n; ++i) {
      m[i][i] = ball(2);
      if (i + 1 < n) m[i][i + 1] = m[i + 1][i] = ball(-1);
    }
    BoundedReal d = determinant(m);
    EXPECT_TRUE(d.overlaps(ball(static_cast<long>(n) + 1))) << n;
    EXPECT_LT(d.rad(), 1e-50) << n;
  }
  EXPECT_TRUE(determinant(BoundedMatrix{}).overlaps(ball(1)));
}

TEST(GramMatrix, SinglePointAndSymmetry) {
  BoundedMatrix one = gram_matrix({kGen}, kRankOne, 1e-10);
  ASSERT_EQ(one.size(), 1U);
  EXPECT_TRUE(one[0][0].overlaps(near(kRankOneHeight, 1e-15)));

  BoundedMatrix g = gram_matrix(e1().points, e1().curve, 1e-8);
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = 0; j < g.size(); ++j) {
      EXPECT_TRUE(g[i][j].overlaps(g[j][i]));
      EXPECT_LE(g[i][j].rad(), 2e-8);
    }
}

TEST(GramMatrix, PairingIsBilinear) {
  const auto& c = e1().curve;
  const auto& p = e1().points[0];
  const auto& q = e1().points[1];
  BoundedReal pq = height_pairing(p, q, c, 1e-9);
  BoundedReal two_p_q = height_pairing(scalar_mul(2, p, c), q, c, 1e-9);
  EXPECT_TRUE(two_p_q.overlaps(pq.times_pow2(1)));
  BoundedReal pp = height_pairing(p, p, c, 1e-9);
  EXPECT_TRUE(pp.overlaps(canonical_height(p, c, 1e-9)));
}

TEST(GramMatrix, MultipleGivesDeterminantNearZero) {
  BoundedMatrix g = gram_matrix({kGen, scalar_mul(2, kGen, kRankOne)}, kRankOne, 1e-10);
  EXPECT_TRUE(determinant(g).contains_zero());
}

TEST(Certificate, PublishedPointsIndependent) {
  IndependenceCertificate cert = independence_certificate(e1().points, e1().curve, 1e-8);
  EXPECT_EQ(cert.verdict, Verdict::independent);
  EXPECT_TRUE(cert.determinant.is_positive());
  EXPECT_TRUE(cert.determinant.overlaps(near(711037.79, 0.01)));
  EXPECT_FALSE(cert.relation);
  ASSERT_EQ(cert.heights.size(), 5U);
  const double expected[] = {15.0067, 15.0838, 14.4901, 15.6318, 15.8437};
  for (std::size_t i = 0; i < 5; ++i) EXPECT_TRUE(cert.heights[i].overlaps(near(expected[i], 1e-4))) << i;
}

TEST(Certificate, DependentSets) {
  const auto& c = e1().curve;
  const auto& p = e1().points[0];
  for (const auto& other : {scalar_mul(2, p, c), p.negated()}) {
    IndependenceCertificate cert = independence_certificate({p, other}, c, 1e-8);
    EXPECT_EQ(cert.verdict, Verdict::dependent_suspected);
    ASSERT_TRUE(cert.relation);
    CurvePoint sum;
    std::vector<CurvePoint> pts{p, other};
    for (std::size_t i = 0; i < cert.relation->indices.size(); ++i)
      sum = add(sum, scalar_mul(cert.relation->coefficients[i], pts[cert.relation->indices[i]], c), c);
    EXPECT_TRUE(is_torsion(sum, c));
  }
  // Three points with P3 = P1 + P2.
  std::vector<CurvePoint> three{e1().points[0], e1().points[1], add(e1().points[0], e1().points[1], c)};
  EXPECT_EQ(independence_certificate(three, c, 1e-8).verdict, Verdict::dependent_suspected);
}

TEST(Certificate, SinglePointAndErrors) {
  EXPECT_EQ(independence_certificate({kGen}, kRankOne).verdict, Verdict::independent);
  EXPECT_THROW(independence_certificate({}, kRankOne), InvalidArgument);
  WeierstrassCurve six{Rational(0), Rational(1)};
  EXPECT_THROW(independence_certificate({CurvePoint::affine(Rational(2), Rational(3))}, six), TorsionInput);
}

TEST(Certificate, HugeTargetIsInconclusive) {
  IndependenceCertificate cert = independence_certificate(e1().points, e1().curve, 1e3);
  EXPECT_EQ(cert.verdict, Verdict::inconclusive);
  EXPECT_TRUE(cert.determinant.contains_zero());
}

TEST(Certificate, ShrinkingTargetNeverFlipsIndependent) {
  bool seen_independent = false;
  for (double target : {1e3, 1e1, 1.0, 1e-2, 1e-4, 1e-8, 1e-12}) {
    Verdict v = independence_certificate(e1().points, e1().curve, target).verdict;
    if (seen_independent) EXPECT_EQ(v, Verdict::independent) << target;
    EXPECT_NE(v, Verdict::dependent_suspected) << target;
    seen_independent = seen_independent || v == Verdict::independent;
  }
  EXPECT_TRUE(seen_independent);
  // Same on a dependent set: never independent at any resolution.
  const auto& c = e1().curve;
  for (double target : {1e1, 1e-4, 1e-8})
    EXPECT_NE(independence_certificate({e1().points[2], scalar_mul(3, e1().points[2], c)}, c, target).verdict,
              Verdict::independent);
}
