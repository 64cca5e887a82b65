#pragma once

// The quartic h^2 = A p^4 + B p^3 + C p^2 + D p + E as a two-cover of its
// Jacobian y^2 = x^3 - 27 I x - 27 J, with explicit birational maps when A
// is a rational square.

#include <optional>

#include "sqseq/curves.hpp"
#include "sqseq/errors.hpp"
#include "sqseq/rational.hpp"

namespace sqseq {

struct QuarticInvariants {
  Rational I, J;

  /// 4 I^3 - J^2; the Jacobian is singular exactly when this vanishes.
  [[nodiscard]] Rational discriminant_factor() const { return 4 * I * I * I - J * J; }
  friend bool operator==(const QuarticInvariants&, const QuarticInvariants&) = default;
};

inline QuarticInvariants invariants(const QuarticCurve& q) {
  const auto& [A, B, C, D, E] = q;
  return QuarticInvariants{12 * A * E - 3 * B * D + C * C,
                           72 * A * C * E + 9 * B * C * D - 27 * A * D * D - 27 * B * B * E -
                               2 * C * C * C};
}

inline WeierstrassCurve jacobian(const QuarticCurve& q) {
  QuarticInvariants inv = invariants(q);
  if (inv.discriminant_factor() == 0) throw SingularJacobian("quartic has 4I^3 = J^2");
  return WeierstrassCurve{-27 * inv.I, -27 * inv.J};
}

/// Non-negative square root of the leading coefficient.
inline Rational leading_root(const QuarticCurve& q) {
  if (q.A == 0) throw NotASquare("quartic leading coefficient is zero");
  if (q.A < 0) throw NotASquare("quartic leading coefficient " + to_string(q.A) + " is negative");
  auto root = rat_sqrt(q.A);
  if (!root) throw NotASquare("quartic leading coefficient " + to_string(q.A) + " is not a square");
  return *root;
}

/// ( 3 (3B^2 - 8AC) / (4A), 27 (B^3 + 8A^2 D - 4ABC) / (8 A^{3/2}) ), with
/// A^{3/2} = A sqrt(A) taken with the non-negative root.
inline CurvePoint distinguished_point(const QuarticCurve& q) {
  Rational a = leading_root(q);
  const auto& [A, B, C, D, E] = q;
  Rational x = 3 * (3 * B * B - 8 * A * C) / (4 * A);
  Rational y = 27 * (B * B * B + 8 * A * A * D - 4 * A * B * C) / (8 * A * a);
  return CurvePoint::affine(std::move(x), std::move(y));
}

/// Birational equivalence between the affine quartic and jacobian(q).
///
/// With A = a^2 (a > 0) and k = B / (2a), write Y = a X^2 + k X + T. The
/// quartic becomes a quadratic in X,
///   (k^2 + 2aT - C) X^2 + (2kT - D) X + (T^2 - E) = 0,
/// whose discriminant S^2 is a cubic in T. The substitution
///   x = 3C - 18 a T,   y = 27 a S
/// turns that cubic into y^2 = x^3 - 27 I x - 27 J. The forward map is
/// polynomial; the inverse fails only on the points that go to the quartic's
/// points at infinity (including O).
class TwoCoverMap {
 public:
  explicit TwoCoverMap(const QuarticCurve& quartic)
      : quartic_(quartic), jacobian_(sqseq::jacobian(quartic)), a_(leading_root(quartic)) {
    k_ = quartic.B / (2 * a_);
  }

  [[nodiscard]] const QuarticCurve& quartic() const { return quartic_; }
  [[nodiscard]] const WeierstrassCurve& jacobian() const { return jacobian_; }

  [[nodiscard]] CurvePoint to_cubic(const CurvePoint& pt) const {
    if (!is_on_curve(pt, quartic_))
      throw OffCurve("point " + pt.to_string() + " is not on the quartic");
    const Rational& X = pt.x();
    Rational T = pt.y() - a_ * X * X - k_ * X;
    Rational S = 2 * quadratic_coefficient(T) * X + linear_coefficient(T);
    return CurvePoint::affine(3 * quartic_.C - 18 * a_ * T, 27 * a_ * S);
  }

  [[nodiscard]] CurvePoint to_quartic(const CurvePoint& pt) const {
    if (!is_on_curve(pt, jacobian_))
      throw OffCurve("point " + pt.to_string() + " is not on the Jacobian");
    if (pt.is_infinity()) throw ExceptionalPoint("O maps to a point at infinity of the quartic");
    Rational T = (3 * quartic_.C - pt.x()) / (18 * a_);
    Rational S = pt.y() / (27 * a_);
    Rational quad = quadratic_coefficient(T);
    Rational lin = linear_coefficient(T);
    Rational X;
    if (quad != 0) {
      X = (S - lin) / (2 * quad);
    } else if (lin != 0 && S == lin) {
      X = -(T * T - quartic_.E) / lin;
    } else {
      throw ExceptionalPoint("point " + pt.to_string() + " maps to a point at infinity of the quartic");
    }
    Rational Y = a_ * X * X + k_ * X + T;
    return CurvePoint::affine(std::move(X), std::move(Y));
  }

 private:
  [[nodiscard]] Rational quadratic_coefficient(const Rational& T) const {
    return k_ * k_ + 2 * a_ * T - quartic_.C;
  }
  [[nodiscard]] Rational linear_coefficient(const Rational& T) const {
    return 2 * k_ * T - quartic_.D;
  }

  QuarticCurve quartic_;
  WeierstrassCurve jacobian_;
  Rational a_;
  Rational k_;
};

inline CurvePoint quartic_to_cubic(const CurvePoint& pt, const QuarticCurve& q) {
  return TwoCoverMap(q).to_cubic(pt);
}

inline CurvePoint cubic_to_quartic(const CurvePoint& pt, const QuarticCurve& q) {
  return TwoCoverMap(q).to_quartic(pt);
}

}  // namespace sqseq
