#pragma once

// Naive and canonical heights on y^2 = x^3 + alpha x + beta, the height
// pairing, and a certified regulator test for independence.
//
// Normalization: h(P) = log max(|num x|, den x) and
//   hhat(P) = lim 4^-n h(2^n P).
//
// Canonical heights are computed as follows. On an integral model,
// Q = k P is chosen so that Q has nonsingular reduction at every prime
// (checked with a gcd, no factorization). For such Q the non-archimedean
// local heights sum to log den(x(Q)) + (1/6) log|Delta|. The archimedean
// local height comes from Tate's series on the translated model x' = x - s
// with s below every real root, so that x' > 0 on E(R):
//   lambda_inf(Q) = log x'(Q) - (1/6) log|Delta| + (1/4) sum_n 4^-n log z(2^n Q),
//   z = 1 - b4 t^2 - 2 b6 t^3 - b8 t^4,  t = 1/x'.
// The discriminant terms cancel, so
//   hhat(Q) = log den(x(Q)) + log x'(Q) + (1/4) sum_n 4^-n log z(2^n Q),
// and hhat(P) = hhat(Q) / k^2. The series terms are evaluated in ball
// arithmetic. The tail after N terms is at most M 4^-N / 3, where
// M >= |log z| on the t-range of the identity component, certified by
// subdividing that range.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <future>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sqseq/bounded_real.hpp"
#include "sqseq/curves.hpp"
#include "sqseq/errors.hpp"
#include "sqseq/factor.hpp"
#include "sqseq/rational.hpp"

namespace sqseq {

inline constexpr double kDefaultTargetError = 1e-8;

struct HeightOptions {
  /// Largest multiplier tried when moving a point into the subgroup with
  /// nonsingular reduction at every prime.
  int max_multiplier = 240;
  std::size_t digit_guard = 100000;
  /// Starting working precision; doubled (up to max_precision) when balls
  /// come out wider than requested.
  mpfr_prec_t precision = default_precision_bits();
  mpfr_prec_t max_precision = 1 << 14;
};

/// y^2 = x^3 + a4 x + a6 with integer coefficients, reached from the
/// rational model by (x, y) -> (scale^2 x, scale^3 y).
struct IntegralModel {
  Integer a4, a6;
  Rational scale{1};

  [[nodiscard]] WeierstrassCurve curve() const { return {Rational(a4), Rational(a6)}; }
  [[nodiscard]] Integer discriminant() const { return -16 * (4 * a4 * a4 * a4 + 27 * a6 * a6); }

  [[nodiscard]] CurvePoint map(const CurvePoint& pt) const {
    if (pt.is_infinity()) return pt;
    Rational s2 = scale * scale;
    return CurvePoint::affine(pt.x() * s2, pt.y() * s2 * scale);
  }
};

namespace detail {

inline Integer int_pow(const Integer& base, unsigned long e) {
  Integer out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), e);
  return out;
}

inline bool divides(const Integer& d, const Integer& n) {
  return mpz_divisible_p(n.get_mpz_t(), d.get_mpz_t()) != 0;
}

}  // namespace detail

/// Smallest denominator-clearing scaling (from factoring the denominators),
/// then removal of any p < 1000 with p^4 | a4 and p^6 | a6. A cofactor that
/// resists factoring is treated as a single prime; if that leaves a
/// denominator, the scaling is multiplied by the remaining denominators.
inline IntegralModel integral_model(const WeierstrassCurve& curve) {
  const Integer& d4 = curve.alpha.get_den();
  const Integer& d6 = curve.beta.get_den();
  std::map<Integer, unsigned long> need;
  auto require = [&](const Integer& d, unsigned long per) {
    Factorization f = factor(d, 1U << 18);
    if (!f.complete()) f.primes[f.unfactored] = 0;
    for (const auto& [p, e] : f.primes) {
      Integer rest;
      unsigned long v = mpz_remove(rest.get_mpz_t(), d.get_mpz_t(), p.get_mpz_t());
      need[p] = std::max(need[p], (v + per - 1) / per);
    }
  };
  require(d4, 4);
  require(d6, 6);
  Integer u(1);
  for (const auto& [p, e] : need) u *= detail::int_pow(p, e);
  auto scaled = [&](const Rational& c, unsigned long e) { return Rational(c * Rational(detail::int_pow(u, e))); };
  Rational a4 = scaled(curve.alpha, 4), a6 = scaled(curve.beta, 6);
  if (a4.get_den() != 1 || a6.get_den() != 1) {
    u *= a4.get_den() * a6.get_den();
    a4 = scaled(curve.alpha, 4);
    a6 = scaled(curve.beta, 6);
  }
  IntegralModel model;
  model.scale = Rational(u);
  model.a4 = a4.get_num();
  model.a6 = a6.get_num();
  if (model.a4 == 0 && model.a6 == 0) throw DegenerateModel("curve y^2 = x^3 is singular");
  for (unsigned long p = 2; p < 1000; ++p) {
    if (mpz_probab_prime_p(Integer(p).get_mpz_t(), 10) == 0) continue;
    Integer p4 = detail::int_pow(Integer(p), 4);
    Integer p6 = detail::int_pow(Integer(p), 6);
    while (detail::divides(p4, model.a4) && detail::divides(p6, model.a6)) {
      model.a4 /= p4;
      model.a6 /= p6;
      model.scale /= Rational(p);
    }
  }
  return model;
}

/// Product (with multiplicity) of the primes where the affine point Q on
/// the integral model reduces to the singular point: the part of
/// gcd(3x^2 + a4, 2y) coprime to den(x).
inline Integer singular_part(const CurvePoint& q, const IntegralModel& model) {
  if (q.is_infinity()) return Integer(1);
  Rational slope_num = 3 * q.x() * q.x() + Rational(model.a4);
  Rational twice_y = 2 * q.y();
  Integer g;
  mpz_gcd(g.get_mpz_t(), slope_num.get_num_mpz_t(), twice_y.get_num_mpz_t());
  const Integer& den = q.x().get_den();
  Integer c;
  while (true) {
    mpz_gcd(c.get_mpz_t(), g.get_mpz_t(), den.get_mpz_t());
    if (c == 1) break;
    g /= c;
  }
  return g;
}

/// True iff Q reduces to a nonsingular point modulo every prime.
inline bool has_nonsingular_reduction(const CurvePoint& q, const IntegralModel& model) {
  return singular_part(q, model) == 1;
}

/// Naive height log max(|num x|, den x); 0 at infinity.
inline BoundedReal naive_height(const CurvePoint& pt, mpfr_prec_t precision = default_precision_bits()) {
  if (pt.is_infinity()) return BoundedReal(precision);
  Integer num = pt.x().get_num();
  if (num < 0) num = -num;
  const Integer& den = pt.x().get_den();
  return log_of(num > den ? num : den, precision);
}


namespace detail {

struct Mp {
  explicit Mp(mpfr_prec_t prec) { mpfr_init2(v, prec); }
  ~Mp() { mpfr_clear(v); }
  Mp(const Mp&) = delete;
  Mp& operator=(const Mp&) = delete;
  mpfr_t v;
};

inline Rational cubic_value(const IntegralModel& m, const Rational& x) {
  return (x * x + Rational(m.a4)) * x + Rational(m.a6);
}

inline Integer floor_of(const Rational& r) {
  Integer out;
  mpz_fdiv_q(out.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return out;
}

// Approximate real roots of x^3 + a4 x + a6, ascending. Only used to place
// the shift and the t-range; both are then checked exactly.
inline std::vector<Rational> approximate_real_roots(const IntegralModel& m, mpfr_prec_t prec) {
  auto bits = static_cast<mpfr_prec_t>(
      std::max(mpz_sizeinbase(m.a4.get_mpz_t(), 2), mpz_sizeinbase(m.a6.get_mpz_t(), 2)));
  prec = std::max(prec, bits + 64);
  Mp a4(prec), a6(prec), sq(prec), fx(prec);
  mpfr_set_z(a4.v, m.a4.get_mpz_t(), MPFR_RNDN);
  mpfr_set_z(a6.v, m.a6.get_mpz_t(), MPFR_RNDN);
  auto sign_at = [&](const mpfr_t x) {
    mpfr_sqr(sq.v, x, MPFR_RNDN);
    mpfr_add(sq.v, sq.v, a4.v, MPFR_RNDN);
    mpfr_mul(fx.v, sq.v, x, MPFR_RNDN);
    mpfr_add(fx.v, fx.v, a6.v, MPFR_RNDN);
    return mpfr_sgn(fx.v);
  };
  auto bisect = [&](const mpfr_t lo_in, const mpfr_t hi_in, bool increasing) {
    Mp lo(prec), hi(prec), mid(prec);
    mpfr_set(lo.v, lo_in, MPFR_RNDN);
    mpfr_set(hi.v, hi_in, MPFR_RNDN);
    for (mpfr_prec_t it = 0; it < 2 * prec + bits + 64; ++it) {
      mpfr_add(mid.v, lo.v, hi.v, MPFR_RNDN);
      mpfr_div_2ui(mid.v, mid.v, 1, MPFR_RNDN);
      if (mpfr_equal_p(mid.v, lo.v) || mpfr_equal_p(mid.v, hi.v)) break;
      if ((sign_at(mid.v) <= 0) == increasing)
        mpfr_set(lo.v, mid.v, MPFR_RNDN);
      else
        mpfr_set(hi.v, mid.v, MPFR_RNDN);
    }
    Rational out;
    mpfr_get_q(out.get_mpq_t(), lo.v);
    return out;
  };

  Integer big = 1 + std::max(Integer(abs(m.a4)), Integer(abs(m.a6)));
  Mp bound(prec), neg_bound(prec);
  mpfr_set_z(bound.v, big.get_mpz_t(), MPFR_RNDU);
  mpfr_neg(neg_bound.v, bound.v, MPFR_RNDN);
  if (m.a4 >= 0) return {bisect(neg_bound.v, bound.v, true)};

  Mp c(prec), neg_c(prec);
  mpfr_neg(c.v, a4.v, MPFR_RNDN);
  mpfr_div_ui(c.v, c.v, 3, MPFR_RNDN);
  mpfr_sqrt(c.v, c.v, MPFR_RNDN);
  mpfr_neg(neg_c.v, c.v, MPFR_RNDN);
  int at_max = sign_at(neg_c.v);
  int at_min = sign_at(c.v);
  if (at_max < 0) return {bisect(c.v, bound.v, true)};
  if (at_min > 0) return {bisect(neg_bound.v, neg_c.v, true)};
  return {bisect(neg_bound.v, neg_c.v, true), bisect(neg_c.v, c.v, false), bisect(c.v, bound.v, true)};
}

// Coefficients of Tate's series on the model shifted by x = x' + s.
struct TateData {
  Integer s, b2, b4, b6, b8;
  /// [0, t_max] contains 1/x' for every point of the identity component.
  Rational t_max;
  /// Upper bound on |log z| over [0, t_max].
  double log_z_bound = 0;
};

class TatePolynomials {
 public:
  TatePolynomials(const TateData& d, mpfr_prec_t prec)
      : b2_(BoundedReal::from_integer(d.b2, prec)),
        b4_(BoundedReal::from_integer(d.b4, prec)),
        two_b4_(BoundedReal::from_integer(2 * d.b4, prec)),
        b6_(BoundedReal::from_integer(d.b6, prec)),
        neg_two_b6_(BoundedReal::from_integer(-2 * d.b6, prec)),
        b8_(BoundedReal::from_integer(d.b8, prec)),
        one_(BoundedReal::from_long(1, prec)),
        four_(BoundedReal::from_long(4, prec)) {}

  // z = 1 - b4 t^2 - 2 b6 t^3 - b8 t^4
  [[nodiscard]] BoundedReal z(const BoundedReal& t) const {
    BoundedReal inner = neg_two_b6_ - b8_ * t;
    inner = inner * t - b4_;
    return one_ + t * t * inner;
  }
  // w = 4 t + b2 t^2 + 2 b4 t^3 + b6 t^4
  [[nodiscard]] BoundedReal w(const BoundedReal& t) const {
    BoundedReal inner = two_b4_ + b6_ * t;
    inner = b2_ + t * inner;
    inner = four_ + t * inner;
    return t * inner;
  }

 private:
  BoundedReal b2_, b4_, two_b4_, b6_, neg_two_b6_, b8_, one_, four_;
};

// Certified bound on |log z| over [0, t_max] by subdivision, or nullopt if
// positivity of z could not be established.
inline std::optional<double> log_z_bound(const TatePolynomials& poly, const Rational& t_max, mpfr_prec_t prec) {
  struct Piece {
    Rational lo, hi;
    int depth;
  };
  constexpr int kMaxDepth = 48;
  constexpr int kMaxPieces = 1 << 16;
  std::vector<Piece> work{{Rational(0), t_max, 0}};
  double zmin = HUGE_VAL, zmax = 0;
  int processed = 0;
  while (!work.empty()) {
    Piece piece = work.back();
    work.pop_back();
    if (++processed > kMaxPieces) return std::nullopt;
    BoundedReal t = hull(BoundedReal::from_rational(piece.lo, prec), BoundedReal::from_rational(piece.hi, prec));
    auto [lo, hi] = poly.z(t).bounds();
    if (lo > 0 && (hi - lo <= 0.25 * lo || piece.depth >= kMaxDepth)) {
      zmin = std::min(zmin, lo);
      zmax = std::max(zmax, hi);
      continue;
    }
    if (piece.depth >= kMaxDepth) return std::nullopt;
    Rational mid = (piece.lo + piece.hi) / 2;
    work.push_back({piece.lo, mid, piece.depth + 1});
    work.push_back({mid, piece.hi, piece.depth + 1});
  }
  // Slack covers the rounding of the double logarithms.
  double bound = std::max({std::log(zmax), -std::log(zmin), 0.0});
  return bound * (1 + 1e-12) + 1e-12;
}

inline TateData tate_data(const IntegralModel& m, mpfr_prec_t prec) {
  std::vector<Rational> roots = approximate_real_roots(m, prec);
  const Rational& e1 = roots.front();
  const Rational& e3 = roots.back();

  // Shift left of every root and of the local maximum by about the size
  // of the roots, so that b_i t^i stays of order one on the t-range.
  Rational anchor = e1;
  if (m.a4 < 0) anchor = std::min(anchor, Rational(-(isqrt(Integer(-m.a4 / 3)) + 1)));
  Integer cube_root;
  mpz_root(cube_root.get_mpz_t(), Integer(abs(m.a6)).get_mpz_t(), 3);
  Integer s = floor_of(anchor) - (isqrt(Integer(abs(m.a4))) + cube_root + 1);
  for (int tries = 0;; ++tries) {
    Integer s2 = s * s;
    bool ok = cubic_value(m, Rational(s)) < 0 && (m.a4 >= 0 || (s < 0 && 3 * s2 + m.a4 >= 0));
    if (ok) break;
    if (tries > 200) throw DomainError("could not place the shift below the real roots");
    s -= std::max(Integer(1), Integer(abs(s)));
  }

  TateData d;
  d.s = s;
  Integer a2p = 3 * s;
  Integer a4p = 3 * s * s + m.a4;
  Integer a6p = s * s * s + m.a4 * s + m.a6;
  d.b2 = 4 * a2p;
  d.b4 = 2 * a4p;
  d.b6 = 4 * a6p;
  d.b8 = 4 * a2p * a6p - a4p * a4p;
  TatePolynomials poly(d, prec);

  // ell just below e3 with f(ell) < 0, so 1/(ell - s) exceeds every t of
  // the identity component.
  Rational gap = (e3 - Rational(s)) / Rational(Integer(1) << 24);
  for (int tries = 0; tries < 24; ++tries) {
    Rational ell = e3 - gap;
    if (ell <= Rational(s) || cubic_value(m, ell) >= 0) {
      gap *= 256;
      continue;
    }
    d.t_max = 1 / (ell - Rational(s));
    if (auto bound = log_z_bound(poly, d.t_max, prec)) {
      d.log_z_bound = *bound;
      return d;
    }
    gap /= 256;
  }
  throw DomainError("could not bound the Tate series on this curve");
}

template <class F>
std::vector<BoundedReal> parallel_map(std::size_t n, F f) {
  std::vector<BoundedReal> out(n);
  if (n < 2 || mpfr_buildopt_tls_p() == 0) {
    for (std::size_t i = 0; i < n; ++i) out[i] = f(i);
    return out;
  }
  std::vector<std::future<BoundedReal>> jobs;
  jobs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) jobs.push_back(std::async(std::launch::async, f, i));
  for (std::size_t i = 0; i < n; ++i) out[i] = jobs[i].get();
  return out;
}

inline void guard_point_digits(const CurvePoint& pt, std::size_t limit) {
  if (pt.is_infinity()) return;
  std::size_t digits = std::max(digit_count(pt.x()), digit_count(pt.y()));
  if (digits > limit)
    throw SizeLimit("point coordinates reached " + std::to_string(digits) + " digits, above the guard of " +
                    std::to_string(limit));
}

}  // namespace detail

/// Canonical heights on one curve. The integral model and the Tate series
/// data are computed once; `canonical_height` is safe to call concurrently.
class HeightCalculator {
 public:
  explicit HeightCalculator(const WeierstrassCurve& curve, HeightOptions options = {})
      : curve_(curve), options_(options) {
    if (!curve.is_nonsingular()) throw DegenerateModel("curve is singular");
    model_ = integral_model(curve);
    tate_ = detail::tate_data(model_, options_.precision);
  }

  [[nodiscard]] const WeierstrassCurve& curve() const { return curve_; }
  [[nodiscard]] const IntegralModel& model() const { return model_; }
  [[nodiscard]] const HeightOptions& options() const { return options_; }

  /// Smallest k <= max_multiplier with k Q nonsingular mod every prime, for
  /// Q on the integral model. The order of Q modulo the nonsingular
  /// subgroup at each singular prime is read off small multiples, without
  /// factoring: the singular part is split by gcds as primes drop out. k is
  /// the lcm of those orders and k Q is formed by double-and-add.
  [[nodiscard]] std::pair<int, CurvePoint> good_reduction_multiple(const CurvePoint& q) const {
    if (q.is_infinity()) throw TorsionInput("point at infinity is torsion");
    Integer pending = singular_part(q, model_);
    if (pending == 1) return {1, q};

    WeierstrassCurve target = model_.curve();
    Integer k(1);
    CurvePoint acc = q;
    for (int j = 2; pending != 1; ++j) {
      if (j > options_.max_multiplier)
        throw SizeLimit("no multiple up to " + std::to_string(options_.max_multiplier) +
                        " has nonsingular reduction everywhere");
      acc = detail::add_unchecked(acc, q, target);
      if (acc.is_infinity()) throw TorsionInput("point " + q.to_string() + " is torsion");
      detail::guard_point_digits(acc, options_.digit_guard);
      // Split pending into the primes still singular at j Q and the rest.
      Integer still_singular = singular_part(acc, model_);
      Integer kept(1), rest = pending, d;
      while (true) {
        mpz_gcd(d.get_mpz_t(), rest.get_mpz_t(), still_singular.get_mpz_t());
        if (d == 1) break;
        kept *= d;
        rest /= d;
      }
      if (rest != 1) mpz_lcm_ui(k.get_mpz_t(), k.get_mpz_t(), static_cast<unsigned long>(j));
      pending = kept;
    }
    if (k > options_.max_multiplier)
      throw SizeLimit("multiplier " + to_string(k) + " exceeds " + std::to_string(options_.max_multiplier));
    int kk = static_cast<int>(k.get_si());
    CurvePoint result = detail::scalar_mul_unchecked(kk, q, target);
    detail::guard_point_digits(result, options_.digit_guard);
    if (!has_nonsingular_reduction(result, model_))
      throw InconsistentData("multiple " + std::to_string(kk) + " still has singular reduction");
    return {kk, result};
  }

  /// Ball of radius <= target_error containing hhat(P). Torsion points give
  /// an exact 0.
  [[nodiscard]] BoundedReal canonical_height(const CurvePoint& pt, double target_error) const {
    if (!(target_error > 0)) throw InvalidArgument("target error must be positive");
    detail::require_on_curve(pt, curve_);
    if (is_torsion(pt, curve_)) return BoundedReal(options_.precision);
    auto [k, q] = good_reduction_multiple(model_.map(pt));
    for (mpfr_prec_t prec = options_.precision;; prec *= 2) {
      BoundedReal value = tate_height(q, k, target_error, prec);
      if (value.is_finite() && value.rad() <= target_error) return value;
      if (prec * 2 > options_.max_precision)
        throw SizeLimit("canonical height did not reach the target error within " +
                        std::to_string(options_.max_precision) + " bits");
    }
  }

 private:
  [[nodiscard]] BoundedReal tate_height(const CurvePoint& q, int k, double target_error, mpfr_prec_t prec) const {
    Rational shifted = q.x() - Rational(tate_.s);
    double k2 = static_cast<double>(k) * k;
    double tail_budget = k2 * target_error / 4;
    int terms = 1;
    while (tate_.log_z_bound * std::ldexp(1.0, -2 * terms) / 3 > tail_budget && terms < 400) ++terms;

    detail::TatePolynomials poly(tate_, prec);
    BoundedReal t = BoundedReal::from_rational(1 / shifted, prec);
    BoundedReal sum(prec);
    try {
      for (int n = 0; n < terms; ++n) {
        BoundedReal z = poly.z(t);
        sum += log(z).times_pow2(-2L * n);
        if (n + 1 < terms) t = poly.w(t) / z;
      }
    } catch (const DomainError&) {
      return BoundedReal::unbounded(prec);
    }
    BoundedReal tail = BoundedReal::from_double(tate_.log_z_bound, 0.0, prec).times_pow2(-2L * terms) /
                       BoundedReal::from_long(3, prec);
    BoundedReal total = log_of(q.x().get_den(), prec) + log(BoundedReal::from_rational(shifted, prec)) +
                        sum.times_pow2(-2);
    total = total.widened(tail);
    return total / BoundedReal::from_long(static_cast<long>(k) * k, prec);
  }

  WeierstrassCurve curve_;
  HeightOptions options_;
  IntegralModel model_;
  detail::TateData tate_;
};

inline BoundedReal canonical_height(const CurvePoint& pt, const WeierstrassCurve& curve,
                                    double target_error = kDefaultTargetError, const HeightOptions& options = {}) {
  return HeightCalculator(curve, options).canonical_height(pt, target_error);
}

/// Upper bound B with |h(x(P)) - hhat(P)| <= B for points on the integral
/// model: (1/4) h(j) + (1/6) log|Delta| + (1/3) log+|j| + 2 log 2 + 2.2.
inline BoundedReal height_difference_bound(const IntegralModel& model,
                                           mpfr_prec_t precision = default_precision_bits()) {
  Integer disc = model.discriminant();
  if (disc == 0) throw DegenerateModel("curve is singular");
  Rational j = model.curve().j_invariant();
  Integer jn = abs(j.get_num());
  const Integer& jd = j.get_den();
  BoundedReal hj = log_of(jn > jd ? jn : jd, precision);
  BoundedReal log_plus_j(precision);
  if (jn > jd) log_plus_j = log(BoundedReal::from_rational(abs(j), precision));
  BoundedReal three = BoundedReal::from_long(3, precision);
  BoundedReal six = BoundedReal::from_long(6, precision);
  BoundedReal b = hj.times_pow2(-2) + log_of(abs(disc), precision) / six + log_plus_j / three +
                  log_of(Integer(2), precision).times_pow2(1) + BoundedReal::from_rational(Rational(11, 5), precision);
  return b.upper();
}

/// hhat(P) from h(2^n Q) / 4^n on the integral model, with the bound above
/// as error. Slow to converge; kept as an independent check.
inline BoundedReal canonical_height_by_doubling(const CurvePoint& pt, const WeierstrassCurve& curve, int doublings,
                                                const HeightOptions& options = {}) {
  detail::require_on_curve(pt, curve);
  mpfr_prec_t prec = options.precision;
  if (is_torsion(pt, curve)) return BoundedReal(prec);
  IntegralModel model = integral_model(curve);
  WeierstrassCurve target = model.curve();
  CurvePoint q = model.map(pt);
  for (int i = 0; i < doublings; ++i) {
    q = detail::add_unchecked(q, q, target);
    detail::guard_point_digits(q, options.digit_guard);
  }
  BoundedReal bound = height_difference_bound(model, prec).times_pow2(-2L * doublings);
  return naive_height(q, prec).times_pow2(-2L * doublings).widened(bound);
}

using BoundedMatrix = std::vector<std::vector<BoundedReal>>;

namespace detail {

struct PairingData {
  std::vector<BoundedReal> heights;
  BoundedMatrix gram;
};

inline PairingData pairing_data(const std::vector<CurvePoint>& points, const HeightCalculator& calc,
                                double target_error) {
  const std::size_t n = points.size();
  for (const auto& pt : points) require_on_curve(pt, calc.curve());
  std::vector<CurvePoint> work(points);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      pairs.emplace_back(i, j);
      work.push_back(add_unchecked(points[i], points[j], calc.curve()));
    }
  // Heights are computed to half the requested error and then reported at
  // the requested resolution, so the Gram matrix never claims more
  // precision than was asked for.
  double each = target_error / 2;
  BoundedReal slack = BoundedReal::from_double(each, 0.0, calc.options().precision);
  std::vector<BoundedReal> h = parallel_map(
      work.size(), [&](std::size_t i) { return calc.canonical_height(work[i], each).widened(slack); });

  PairingData out;
  out.heights.assign(h.begin(), h.begin() + static_cast<std::ptrdiff_t>(n));
  out.gram.assign(n, std::vector<BoundedReal>(n));
  for (std::size_t i = 0; i < n; ++i) out.gram[i][i] = h[i];
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    auto [i, j] = pairs[p];
    BoundedReal v = (h[n + p] - h[i] - h[j]).times_pow2(-1);
    out.gram[i][j] = v;
    out.gram[j][i] = v;
  }
  return out;
}

}  // namespace detail

/// <P, Q> = (hhat(P+Q) - hhat(P) - hhat(Q)) / 2.
inline BoundedReal height_pairing(const CurvePoint& p, const CurvePoint& q, const WeierstrassCurve& curve,
                                  double target_error = kDefaultTargetError, const HeightOptions& options = {}) {
  HeightCalculator calc(curve, options);
  return detail::pairing_data({p, q}, calc, target_error).gram[0][1];
}

inline BoundedMatrix gram_matrix(const std::vector<CurvePoint>& points, const WeierstrassCurve& curve,
                                 double target_error = kDefaultTargetError, const HeightOptions& options = {}) {
  HeightCalculator calc(curve, options);
  return detail::pairing_data(points, calc, target_error).gram;
}

/// Leibniz expansion up to 7x7, ball Gaussian elimination beyond. An empty
/// matrix has determinant 1.
inline BoundedReal determinant(const BoundedMatrix& g) {
  const std::size_t n = g.size();
  mpfr_prec_t prec = n == 0 ? default_precision_bits() : g[0][0].precision();
  if (n == 0) return BoundedReal::from_long(1, prec);
  if (n <= 7) {
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    BoundedReal total(prec);
    do {
      int inversions = 0;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
          if (perm[i] > perm[j]) ++inversions;
      BoundedReal term = g[0][perm[0]];
      for (std::size_t i = 1; i < n; ++i) term *= g[i][perm[i]];
      total = inversions % 2 == 0 ? total + term : total - term;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return total;
  }
  BoundedMatrix a = g;
  BoundedReal det = BoundedReal::from_long(1, prec);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a[r][col].mid()) > std::abs(a[pivot][col].mid())) pivot = r;
    if (a[pivot][col].contains_zero()) return BoundedReal::unbounded(prec);
    if (pivot != col) {
      std::swap(a[pivot], a[col]);
      det = -det;
    }
    det *= a[col][col];
    for (std::size_t r = col + 1; r < n; ++r) {
      BoundedReal factor = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= factor * a[col][c];
    }
  }
  return det;
}

enum class Verdict { independent, inconclusive, dependent_suspected };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::independent:
      return "independent";
    case Verdict::inconclusive:
      return "inconclusive";
    case Verdict::dependent_suspected:
      return "dependent-suspected";
  }
  return "inconclusive";
}

/// sum coefficients[i] * points[indices[i]] is torsion (checked exactly).
struct Relation {
  std::vector<std::size_t> indices;
  std::vector<int> coefficients;
};

struct IndependenceCertificate {
  double target_error = kDefaultTargetError;
  std::vector<BoundedReal> heights;
  BoundedMatrix gram;
  BoundedReal determinant;
  Verdict verdict = Verdict::inconclusive;
  std::optional<Relation> relation;
};

inline constexpr int kRelationCoefficientBound = 5;
inline constexpr std::size_t kRelationMaxPoints = 3;

namespace detail {

// Exhaustive search over 2- and 3-point combinations with coefficients in
// [-5, 5]; the Gram matrix prunes candidates whose quadratic form is
// provably nonzero.
inline std::optional<Relation> find_small_relation(const std::vector<CurvePoint>& points, const BoundedMatrix& gram,
                                                   const WeierstrassCurve& curve) {
  const std::size_t n = points.size();
  const int bound = kRelationCoefficientBound;
  // multiples[i][c] = c * P_i for c in 1..bound.
  std::vector<std::vector<CurvePoint>> multiples(n, std::vector<CurvePoint>(bound + 1));
  for (std::size_t i = 0; i < n; ++i)
    for (int c = 1; c <= bound; ++c) multiples[i][c] = add_unchecked(multiples[i][c - 1], points[i], curve);
  auto multiple = [&](std::size_t i, int c) { return c > 0 ? multiples[i][c] : multiples[i][-c].negated(); };

  std::vector<std::size_t> idx;
  std::vector<int> coef;
  std::optional<Relation> found;
  std::function<void(std::size_t, std::size_t)> choose;
  auto test = [&]() {
    BoundedReal q(gram[0][0].precision());
    for (std::size_t a = 0; a < idx.size(); ++a)
      for (std::size_t b = 0; b < idx.size(); ++b)
        q += gram[idx[a]][idx[b]] * BoundedReal::from_long(static_cast<long>(coef[a]) * coef[b]);
    if (!q.contains_zero()) return;
    CurvePoint sum;
    for (std::size_t a = 0; a < idx.size(); ++a) sum = add_unchecked(sum, multiple(idx[a], coef[a]), curve);
    if (is_torsion(sum, curve)) found = Relation{idx, coef};
  };
  std::function<void(std::size_t)> assign = [&](std::size_t pos) {
    if (found) return;
    if (pos == idx.size()) {
      test();
      return;
    }
    for (int c = -bound; c <= bound && !found; ++c) {
      if (c == 0 || (pos == 0 && c < 0)) continue;
      coef[pos] = c;
      assign(pos + 1);
    }
  };
  choose = [&](std::size_t start, std::size_t remaining) {
    if (found) return;
    if (remaining == 0) {
      coef.assign(idx.size(), 0);
      assign(0);
      return;
    }
    for (std::size_t i = start; i < n && !found; ++i) {
      idx.push_back(i);
      choose(i + 1, remaining - 1);
      idx.pop_back();
    }
  };
  for (std::size_t size = 2; size <= std::min(kRelationMaxPoints, n) && !found; ++size) choose(0, size);
  return found;
}

}  // namespace detail

/// Gram determinant test. Torsion inputs are rejected; the verdict is
/// independent only when the determinant ball is strictly positive.
inline IndependenceCertificate independence_certificate(const std::vector<CurvePoint>& points,
                                                        const WeierstrassCurve& curve,
                                                        double target_error = kDefaultTargetError,
                                                        const HeightOptions& options = {}) {
  if (points.empty()) throw InvalidArgument("no points given");
  for (std::size_t i = 0; i < points.size(); ++i) {
    detail::require_on_curve(points[i], curve);
    if (is_torsion(points[i], curve))
      throw TorsionInput("point " + std::to_string(i + 1) + " " + points[i].to_string() + " is torsion");
  }
  HeightCalculator calc(curve, options);
  detail::PairingData data = detail::pairing_data(points, calc, target_error);
  IndependenceCertificate cert;
  cert.target_error = target_error;
  cert.heights = std::move(data.heights);
  cert.gram = std::move(data.gram);
  cert.determinant = determinant(cert.gram);
  if (cert.determinant.is_positive()) {
    cert.verdict = Verdict::independent;
    return cert;
  }
  cert.relation = detail::find_small_relation(points, cert.gram, curve);
  cert.verdict = cert.relation || cert.determinant.is_negative() ? Verdict::dependent_suspected
                                                                  : Verdict::inconclusive;
  return cert;
}

}  // namespace sqseq
