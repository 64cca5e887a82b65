#pragma once

// Curve models and exact group arithmetic on y^2 = x^3 + alpha x + beta.

#include <cstdint>
#include <string>

#include "sqseq/errors.hpp"
#include "sqseq/rational.hpp"

namespace sqseq {

/// Infinity or an affine pair. Carries no curve; operations take the curve explicitly.
class CurvePoint {
 public:
  CurvePoint() = default;  // point at infinity

  static CurvePoint infinity() { return {}; }
  static CurvePoint affine(Rational x, Rational y) { return CurvePoint(std::move(x), std::move(y)); }

  [[nodiscard]] bool is_infinity() const { return infinity_; }
  [[nodiscard]] const Rational& x() const { return x_; }
  [[nodiscard]] const Rational& y() const { return y_; }

  [[nodiscard]] CurvePoint negated() const {
    return infinity_ ? *this : CurvePoint(x_, -y_);
  }

  friend bool operator==(const CurvePoint& a, const CurvePoint& b) {
    if (a.infinity_ || b.infinity_) return a.infinity_ == b.infinity_;
    return a.x_ == b.x_ && a.y_ == b.y_;
  }

  [[nodiscard]] std::string to_string() const {
    return infinity_ ? std::string("O") : "(" + sqseq::to_string(x_) + ", " + sqseq::to_string(y_) + ")";
  }

 private:
  CurvePoint(Rational x, Rational y) : infinity_(false), x_(std::move(x)), y_(std::move(y)) {}

  bool infinity_ = true;
  Rational x_;
  Rational y_;
};

/// y^2 = a x^3 + b x + c.
struct FamilyCurve {
  Rational a, b, c;

  [[nodiscard]] Rational rhs(const Rational& x) const { return (a * x * x + b) * x + c; }
  friend bool operator==(const FamilyCurve&, const FamilyCurve&) = default;
};

/// y^2 = x^3 + alpha x + beta.
struct WeierstrassCurve {
  Rational alpha, beta;

  [[nodiscard]] Rational rhs(const Rational& x) const { return (x * x + alpha) * x + beta; }

  /// -16 (4 alpha^3 + 27 beta^2)
  [[nodiscard]] Rational discriminant() const {
    return Rational(-16) * (4 * alpha * alpha * alpha + 27 * beta * beta);
  }
  [[nodiscard]] bool is_nonsingular() const { return discriminant() != 0; }

  /// j = -1728 (4 alpha)^3 / discriminant
  [[nodiscard]] Rational j_invariant() const {
    Rational four_alpha = 4 * alpha;
    return Rational(-1728) * four_alpha * four_alpha * four_alpha / discriminant();
  }

  friend bool operator==(const WeierstrassCurve&, const WeierstrassCurve&) = default;
};

/// h^2 = A p^4 + B p^3 + C p^2 + D p + E.
struct QuarticCurve {
  Rational A, B, C, D, E;

  [[nodiscard]] Rational rhs(const Rational& p) const {
    return (((A * p + B) * p + C) * p + D) * p + E;
  }
  friend bool operator==(const QuarticCurve&, const QuarticCurve&) = default;
};

inline bool is_on_curve(const CurvePoint& pt, const FamilyCurve& curve) {
  return pt.is_infinity() || pt.y() * pt.y() == curve.rhs(pt.x());
}

inline bool is_on_curve(const CurvePoint& pt, const WeierstrassCurve& curve) {
  return pt.is_infinity() || pt.y() * pt.y() == curve.rhs(pt.x());
}

/// The affine quartic model has no point at infinity.
inline bool is_on_curve(const CurvePoint& pt, const QuarticCurve& curve) {
  return !pt.is_infinity() && pt.y() * pt.y() == curve.rhs(pt.x());
}

/// Isomorphism (x, y) -> (a x, a y) from y^2 = a x^3 + b x + c onto
/// Y^2 = X^3 + (ab) X + a^2 c.
class FamilyIsomorphism {
 public:
  explicit FamilyIsomorphism(const FamilyCurve& family) : a_(family.a) {
    if (family.a == 0) throw DegenerateModel("family curve has a = 0");
    target_ = WeierstrassCurve{family.a * family.b, family.a * family.a * family.c};
  }

  [[nodiscard]] const WeierstrassCurve& curve() const { return target_; }

  [[nodiscard]] CurvePoint to_weierstrass(const CurvePoint& pt) const {
    if (pt.is_infinity()) return pt;
    return CurvePoint::affine(a_ * pt.x(), a_ * pt.y());
  }

  [[nodiscard]] CurvePoint to_family(const CurvePoint& pt) const {
    if (pt.is_infinity()) return pt;
    return CurvePoint::affine(pt.x() / a_, pt.y() / a_);
  }

 private:
  Rational a_;
  WeierstrassCurve target_;
};

inline FamilyIsomorphism family_to_weierstrass(const FamilyCurve& family) {
  return FamilyIsomorphism(family);
}

namespace detail {

inline void require_on_curve(const CurvePoint& pt, const WeierstrassCurve& curve) {
  if (!is_on_curve(pt, curve)) throw OffCurve("point " + pt.to_string() + " is not on the curve");
}

// Chord-tangent addition for points already known to be on the curve.
inline CurvePoint add_unchecked(const CurvePoint& p, const CurvePoint& q, const WeierstrassCurve& curve) {
  if (p.is_infinity()) return q;
  if (q.is_infinity()) return p;
  Rational slope;
  if (p.x() == q.x()) {
    if (p.y() + q.y() == 0) return CurvePoint::infinity();
    slope = (3 * p.x() * p.x() + curve.alpha) / (2 * p.y());
  } else {
    slope = (q.y() - p.y()) / (q.x() - p.x());
  }
  Rational x3 = slope * slope - p.x() - q.x();
  Rational y3 = slope * (p.x() - x3) - p.y();
  return CurvePoint::affine(std::move(x3), std::move(y3));
}

inline CurvePoint scalar_mul_unchecked(std::int64_t m, const CurvePoint& pt, const WeierstrassCurve& curve) {
  if (m == 0 || pt.is_infinity()) return CurvePoint::infinity();
  // Magnitude as unsigned so that INT64_MIN does not overflow.
  std::uint64_t n = m < 0 ? static_cast<std::uint64_t>(0) - static_cast<std::uint64_t>(m)
                          : static_cast<std::uint64_t>(m);
  CurvePoint base = m < 0 ? pt.negated() : pt;
  CurvePoint acc;
  int top = 63;
  while (((n >> top) & 1U) == 0) --top;
  for (int bit = top; bit >= 0; --bit) {
    acc = add_unchecked(acc, acc, curve);
    if ((n >> bit) & 1U) acc = add_unchecked(acc, base, curve);
  }
  return acc;
}

}  // namespace detail

inline CurvePoint add(const CurvePoint& p, const CurvePoint& q, const WeierstrassCurve& curve) {
  detail::require_on_curve(p, curve);
  detail::require_on_curve(q, curve);
  return detail::add_unchecked(p, q, curve);
}

inline CurvePoint subtract(const CurvePoint& p, const CurvePoint& q, const WeierstrassCurve& curve) {
  return add(p, q.negated(), curve);
}

/// m P by double-and-add; negative m gives -(|m| P).
inline CurvePoint scalar_mul(std::int64_t m, const CurvePoint& pt, const WeierstrassCurve& curve) {
  detail::require_on_curve(pt, curve);
  return detail::scalar_mul_unchecked(m, pt, curve);
}

/// Rational torsion has order at most 12 (Mazur).
inline constexpr int kMaxRationalTorsionOrder = 12;

/// True iff k P = O for some 1 <= k <= 12.
inline bool is_torsion(const CurvePoint& pt, const WeierstrassCurve& curve) {
  if (pt.is_infinity()) return true;
  if (pt.y() == 0) return true;
  // Torsion points have u^2 x integral on any integral model obtained by
  // scaling with u; u = den(alpha) den(beta) is such a scaling.
  Integer u = curve.alpha.get_den() * curve.beta.get_den();
  Rational scaled_x = pt.x() * Rational(u * u);
  if (scaled_x.get_den() != 1) return false;

  CurvePoint acc = pt;
  for (int k = 2; k <= kMaxRationalTorsionOrder; ++k) {
    acc = detail::add_unchecked(acc, pt, curve);
    if (acc.is_infinity()) return true;
    Rational sx = acc.x() * Rational(u * u);
    if (sx.get_den() != 1) return false;
  }
  return false;
}

}  // namespace sqseq
