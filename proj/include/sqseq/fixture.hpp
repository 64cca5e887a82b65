#pragma once

// Built-in reference specialization t = 1, q = 81/40, w = 1, p = 2201/2320
// and the published values it must reproduce.

#include <array>

#include "sqseq/construction.hpp"
#include "sqseq/curves.hpp"
#include "sqseq/family.hpp"
#include "sqseq/rational.hpp"

namespace sqseq::fixture {

inline SequenceParams params() {
  return {Rational(1), parse_rational("81/40"), Rational(1)};
}

inline Rational seed_p() { return parse_rational("2201/2320"); }

/// The published curve E_1 equals the direct construction under
/// y -> scale * y; the published ordinates share the factor -40/85323.
inline Rational scale() { return parse_rational("-40/85323"); }

/// Seed on the quartic, with the non-negative root for h.
inline CurvePoint seed() {
  QuarticCurve quartic = quartic_from_params(params());
  return CurvePoint::affine(seed_p(), *h_from_quartic(quartic, seed_p()));
}

inline GenerationOptions options() {
  GenerationOptions opt;
  opt.scale = scale();
  return opt;
}

inline FamilyCurve expected_curve() {
  return {parse_rational("42674183/52786496000"), parse_rational("-612989889/7540928000"),
          parse_rational("1180698375893607/2487869785676800")};
}

inline std::array<CurvePoint, kSequenceLength> expected_points() {
  return {CurvePoint::affine(Rational(1), parse_rational("-2367005/3770464")),
          CurvePoint::affine(Rational(4), parse_rational("8455597/18852320")),
          CurvePoint::affine(Rational(9), parse_rational("-10868031/18852320")),
          CurvePoint::affine(Rational(16), parse_rational("-29720351/18852320")),
          CurvePoint::affine(Rational(25), parse_rational("-62736289/18852320"))};
}

inline Rational expected_leading_coefficient() { return Rational(370881); }

inline WeierstrassCurve expected_jacobian() {
  return {parse_rational("-147183268996968521373/10000"),
          parse_rational("171278570868444028577352480093/250000")};
}

inline CurvePoint expected_distinguished_point() {
  return CurvePoint::affine(parse_rational("-4786935489/100"), parse_rational("-56568093052527/50"));
}

}  // namespace sqseq::fixture
