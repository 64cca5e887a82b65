#pragma once

// Curves y^2 = a x^3 + b x + c through points whose abscissae are the
// consecutive squares t^2, (t+1)^2, ..., (t+4)^2.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "sqseq/curves.hpp"
#include "sqseq/errors.hpp"
#include "sqseq/linear_solve.hpp"
#include "sqseq/polynomial.hpp"
#include "sqseq/rational.hpp"

namespace sqseq {

/// The parameters (t, q, w) of the sequence family; p selects a member.
struct SequenceParams {
  Rational t, q, w;
  friend bool operator==(const SequenceParams&, const SequenceParams&) = default;
};

/// Ordinates d, e, f, g over the abscissae t^2 .. (t+3)^2.
struct YValues {
  Rational d, e, f, g;
  friend bool operator==(const YValues&, const YValues&) = default;
};

/// x-coordinate (t + i)^2 of the i-th term.
inline Rational square_abscissa(const Rational& t, int i) {
  Rational u = t + i;
  return u * u;
}

/// Rejects t for which two of (t+i)^2, i = 0..4, coincide:
/// t in {-1/2, -1, -3/2, -2, -5/2, -3, -7/2}. These include every rational
/// root of the construction denominators (1+t), (1+2t), (3+2t), (5+2t);
/// 5 + 6t + 3t^2 has no real roots.
inline void require_nondegenerate(const Rational& t) {
  Rational twice = 2 * t;
  if (twice.get_den() == 1) {
    const Integer& n = twice.get_num();
    if (n <= -1 && n >= -7)
      throw DegenerateParameter("t = " + to_string(t) +
                                " makes two of the five consecutive squares coincide");
  }
}

inline bool is_degenerate(const Rational& t) {
  try {
    require_nondegenerate(t);
    return false;
  } catch (const DegenerateParameter&) {
    return true;
  }
}

/// The unique (a, b, c) with y^2 = a x^3 + b x + c passing through
/// (t^2, d), ((t+1)^2, e), ((t+2)^2, f).
inline FamilyCurve solve_abc(const Rational& t, const Rational& d, const Rational& e, const Rational& f) {
  require_nondegenerate(t);
  Matrix3 m;
  for (int i = 0; i < 3; ++i) {
    Rational x = square_abscissa(t, i);
    m[static_cast<std::size_t>(i)] = Vector3{x * x * x, x, Rational(1)};
  }
  Vector3 rhs{d * d, e * e, f * f};
  try {
    Vector3 abc = solve_linear_3(m, rhs);
    return FamilyCurve{abc[0], abc[1], abc[2]};
  } catch (const SingularSystem&) {
    throw DegenerateParameter("abscissa system is singular at t = " + to_string(t));
  }
}

/// a (t+3)^6 + b (t+3)^2 + c for the curve through the first three points.
inline Rational g_squared(const Rational& t, const Rational& d, const Rational& e, const Rational& f) {
  return solve_abc(t, d, e, f).rhs(square_abscissa(t, 3));
}

namespace detail {

// Polynomial blocks of the quadratic-form parametrization, all in t.
struct DefgBlocks {
  Rational k1, k2, k3;  // (2+t)(5+2t)(14+12t+3t^2), (1+t)(5+2t)(13+10t+3t^2), (2+t)(1+2t)(10+8t+3t^2)
  Rational l1, l2, l3;  // quartics 65+141t+..., 20+66t+..., 140+246t+...
};

inline DefgBlocks defg_blocks(const Rational& t) {
  Rational t2 = t * t, t3 = t2 * t, t4 = t3 * t;
  DefgBlocks b;
  b.k1 = (2 + t) * (5 + 2 * t) * (14 + 12 * t + 3 * t2);
  b.k2 = (1 + t) * (5 + 2 * t) * (13 + 10 * t + 3 * t2);
  b.k3 = (2 + t) * (1 + 2 * t) * (10 + 8 * t + 3 * t2);
  b.l1 = 65 + 141 * t + 111 * t2 + 41 * t3 + 6 * t4;
  b.l2 = 20 + 66 * t + 66 * t2 + 31 * t3 + 6 * t4;
  b.l3 = 140 + 246 * t + 166 * t2 + 51 * t3 + 6 * t4;
  return b;
}

}  // namespace detail

/// General solution (d, e, f, g) of the four-term condition, as quadratic
/// forms in (p, q, w) obtained by projecting from the trivial solution (1, 1, 1, 1).
inline YValues defg_parametrization(const Rational& t, const Rational& p, const Rational& q,
                                    const Rational& w) {
  require_nondegenerate(t);
  const auto k = detail::defg_blocks(t);
  Rational pp = p * p, qq = q * q, ww = w * w;
  YValues y;
  y.d = k.k1 * pp + 3 * k.k2 * qq - 3 * k.k3 * ww - 6 * k.l1 * p * q + 6 * k.l2 * p * w;
  y.e = -k.k1 * pp - 3 * k.k2 * qq - 3 * k.k3 * ww + 2 * k.l3 * p * q + 6 * k.l2 * q * w;
  y.f = -k.k1 * pp + 3 * k.k2 * qq + 3 * k.k3 * ww - 6 * k.k2 * q * w + 2 * k.k1 * p * w;
  y.g = -k.l3 * pp + 3 * k.l1 * qq - 3 * k.l2 * ww;
  return y;
}

/// Leading coefficient (140 + 246t + 166t^2 + 51t^3 + 6t^4)^2 of the quartic in p.
inline Rational quartic_leading_coefficient(const Rational& t) {
  Rational l3 = detail::defg_blocks(t).l3;
  return l3 * l3;
}

/// h^2 = a (t+4)^6 + b (t+4)^2 + c, evaluated through the full chain
/// (t, p, q, w) -> (d, e, f) -> (a, b, c).
inline Rational h_squared(const Rational& t, const Rational& p, const Rational& q, const Rational& w) {
  YValues y = defg_parametrization(t, p, q, w);
  return solve_abc(t, y.d, y.e, y.f).rhs(square_abscissa(t, 4));
}

/// The quartic h^2 = A p^4 + ... + E, recovered by exact interpolation of
/// h_squared at p = 0..5 (the sixth sample checks the degree-4 fit).
inline QuarticCurve quartic_from_params(const Rational& t, const Rational& q, const Rational& w) {
  require_nondegenerate(t);
  std::vector<RationalPoint2> samples;
  for (int i = 0; i <= 5; ++i) {
    Rational p(i);
    samples.emplace_back(p, h_squared(t, p, q, w));
  }
  RationalPolynomial poly = interpolate(samples, 4);
  QuarticCurve quartic{poly.coefficient(4), poly.coefficient(3), poly.coefficient(2),
                       poly.coefficient(1), poly.coefficient(0)};
  if (quartic.A != quartic_leading_coefficient(t))
    throw InconsistentData("interpolated leading coefficient " + to_string(quartic.A) +
                           " differs from the closed form at t = " + to_string(t));
  return quartic;
}

inline QuarticCurve quartic_from_params(const SequenceParams& params) {
  return quartic_from_params(params.t, params.q, params.w);
}

/// Non-negative h with h^2 = Q(p), or nullopt when Q(p) is negative or not a square.
inline std::optional<Rational> h_from_quartic(const QuarticCurve& quartic, const Rational& p) {
  Rational value = quartic.rhs(p);
  if (value < 0) return std::nullopt;
  return rat_sqrt(value);
}

}  // namespace sqseq
