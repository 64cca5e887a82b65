#pragma once

// Family members E_m: curves y^2 = a x^3 + b x + c with five points whose
// x-coordinates are (t+i)^2, i = 0..4, generated from multiples of a seed
// point on the parametrizing quartic.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sqseq/construction.hpp"
#include "sqseq/curves.hpp"
#include "sqseq/errors.hpp"
#include "sqseq/rational.hpp"
#include "sqseq/two_cover.hpp"

namespace sqseq {

inline constexpr std::size_t kSequenceLength = 5;
inline constexpr std::size_t kDefaultDigitGuard = 100000;

struct SequenceRecord {
  SequenceParams params;
  std::int64_t m = 1;
  /// Ordinates are multiplied by `scale` and (a, b, c) by scale^2; this is
  /// the isomorphism (x, y) -> (x, scale y) of the family model.
  Rational scale{1};
  /// Member point (p_m, h_m) on the quartic, before scaling.
  Rational p, h;
  FamilyCurve curve;
  std::array<CurvePoint, kSequenceLength> points;

  friend bool operator==(const SequenceRecord&, const SequenceRecord&) = default;
};

struct GenerationOptions {
  std::size_t digit_guard = kDefaultDigitGuard;
  Rational scale{1};
};

namespace detail {

inline void guard_digits(const Rational& r, std::size_t limit, const char* what) {
  if (digit_count(r) > limit)
    throw SizeLimit(std::string(what) + " has " + std::to_string(digit_count(r)) +
                    " digits, above the guard of " + std::to_string(limit));
}

inline void guard_digits(const CurvePoint& pt, std::size_t limit, const char* what) {
  if (pt.is_infinity()) return;
  guard_digits(pt.x(), limit, what);
  guard_digits(pt.y(), limit, what);
}

}  // namespace detail

/// Builds the record for a given quartic point (p, h) without any group law.
inline SequenceRecord build_record(const SequenceParams& params, std::int64_t m, const Rational& p,
                                   const Rational& h, const GenerationOptions& options = {}) {
  if (options.scale == 0) throw InvalidArgument("scale must be nonzero");
  YValues y = defg_parametrization(params.t, p, params.q, params.w);
  FamilyCurve base = solve_abc(params.t, y.d, y.e, y.f);
  if (base.rhs(square_abscissa(params.t, 4)) != h * h)
    throw InconsistentData("h^2 does not match the curve at (t+4)^2");

  const Rational& s = options.scale;
  Rational s2 = s * s;
  SequenceRecord rec;
  rec.params = params;
  rec.m = m;
  rec.scale = s;
  rec.p = p;
  rec.h = h;
  rec.curve = FamilyCurve{s2 * base.a, s2 * base.b, s2 * base.c};
  const std::array<Rational, kSequenceLength> ys{y.d, y.e, y.f, y.g, h};
  for (std::size_t i = 0; i < kSequenceLength; ++i)
    rec.points[i] = CurvePoint::affine(square_abscissa(params.t, static_cast<int>(i)), s * ys[i]);
  for (const auto& pt : rec.points) detail::guard_digits(pt, options.digit_guard, "sequence point");
  for (const auto* c : {&rec.curve.a, &rec.curve.b, &rec.curve.c})
    detail::guard_digits(*c, options.digit_guard, "curve coefficient");
  return rec;
}

/// Member E_m: m times the seed's image on the Jacobian, pulled back to the
/// quartic. m = 1 uses the seed as given.
inline SequenceRecord generate_member(const SequenceParams& params, const CurvePoint& seed, std::int64_t m,
                                      const GenerationOptions& options = {}) {
  if (m == 0) throw InvalidArgument("m must be nonzero");
  require_nondegenerate(params.t);
  QuarticCurve quartic = quartic_from_params(params);
  if (!is_on_curve(seed, quartic)) throw OffCurve("seed " + seed.to_string() + " is not on the quartic");
  TwoCoverMap cover(quartic);
  CurvePoint image = cover.to_cubic(seed);
  if (is_torsion(image, cover.jacobian()))
    throw TorsionSeed("seed " + seed.to_string() + " maps to a torsion point of the Jacobian");

  if (m == 1) return build_record(params, m, seed.x(), seed.y(), options);

  CurvePoint multiple = scalar_mul(m, image, cover.jacobian());
  detail::guard_digits(multiple, options.digit_guard, "Jacobian multiple");
  CurvePoint member;
  try {
    member = cover.to_quartic(multiple);
  } catch (const ExceptionalPoint& ex) {
    throw ExceptionalPoint("m = " + std::to_string(m) + ": " + ex.what());
  }
  return build_record(params, m, member.x(), member.y(), options);
}

struct VerificationReport {
  std::array<bool, kSequenceLength> on_curve{};
  /// u with x_i = (u + i)^2, recovered from the first two abscissae.
  std::optional<Rational> u;
  bool consecutive_squares = false;
  bool u_matches_t = false;
  bool nonsingular = false;
  /// h^2 equals the quartic at p and the fifth ordinate is scale * h.
  bool quartic_consistent = false;

  [[nodiscard]] bool pass() const {
    for (bool b : on_curve)
      if (!b) return false;
    return consecutive_squares && u_matches_t && nonsingular && quartic_consistent;
  }
};

inline bool family_is_nonsingular(const FamilyCurve& curve) {
  if (curve.a == 0) return false;
  return FamilyIsomorphism(curve).curve().is_nonsingular();
}

inline VerificationReport verify_sequence(const SequenceRecord& rec) {
  VerificationReport report;
  for (std::size_t i = 0; i < kSequenceLength; ++i)
    report.on_curve[i] = !rec.points[i].is_infinity() && is_on_curve(rec.points[i], rec.curve);

  bool affine = true;
  for (const auto& pt : rec.points) affine = affine && !pt.is_infinity();
  if (affine) {
    Rational u = (rec.points[1].x() - rec.points[0].x() - 1) / 2;
    bool consecutive = true;
    for (std::size_t i = 0; i < kSequenceLength; ++i)
      consecutive = consecutive && rec.points[i].x() == square_abscissa(u, static_cast<int>(i));
    report.u = u;
    report.consecutive_squares = consecutive;
    report.u_matches_t = consecutive && u == rec.params.t;
  }
  report.nonsingular = family_is_nonsingular(rec.curve);

  try {
    QuarticCurve quartic = quartic_from_params(rec.params);
    report.quartic_consistent = affine && rec.h * rec.h == quartic.rhs(rec.p) &&
                                rec.points[4].y() == rec.scale * rec.h;
  } catch (const Error&) {
    report.quartic_consistent = false;
  }
  return report;
}

/// y^2 = a X^6 + b X^2 + c, the genus-2 curve obtained by X^2 = x.
struct HyperellipticRecord {
  FamilyCurve sextic;
  std::vector<CurvePoint> points;

  [[nodiscard]] Rational rhs(const Rational& X) const {
    Rational X2 = X * X;
    return sextic.rhs(X2);
  }
  [[nodiscard]] bool contains(const CurvePoint& pt) const {
    return !pt.is_infinity() && pt.y() * pt.y() == rhs(pt.x());
  }
};

/// Lifts (x_i, y_i) to (t+i, y_i) and (-(t+i), y_i) on the sextic.
inline HyperellipticRecord to_hyperelliptic(const SequenceRecord& rec) {
  if (!verify_sequence(rec).pass()) throw InvalidArgument("record does not pass verification");
  HyperellipticRecord out;
  out.sextic = rec.curve;
  for (std::size_t i = 0; i < kSequenceLength; ++i)
    out.points.push_back(CurvePoint::affine(rec.params.t + static_cast<long>(i), rec.points[i].y()));
  for (std::size_t i = 0; i < kSequenceLength; ++i) {
    Rational X = rec.params.t + static_cast<long>(i);
    if (X != 0) out.points.push_back(CurvePoint::affine(-X, rec.points[i].y()));
  }
  for (const auto& pt : out.points)
    if (!out.contains(pt)) throw InconsistentData("lifted point " + pt.to_string() + " is off the sextic");
  return out;
}

}  // namespace sqseq
