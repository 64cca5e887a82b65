#pragma once

// Midpoint-radius balls over MPFR. Every operation returns a ball that
// contains all results of applying the exact operation to members of the
// operand balls: midpoints round to nearest, radii round upward and absorb
// the midpoint rounding error.

#include <gmpxx.h>
#include <mpfr.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <string>
#include <utility>

#include "sqseq/errors.hpp"
#include "sqseq/rational.hpp"

namespace sqseq {

inline constexpr mpfr_prec_t kMinPrecisionBits = 128;
inline constexpr mpfr_prec_t kRadiusPrecisionBits = 64;

namespace detail {
inline std::atomic<mpfr_prec_t>& default_precision_slot() {
  static std::atomic<mpfr_prec_t> bits{256};
  return bits;
}
}  // namespace detail

inline mpfr_prec_t default_precision_bits() { return detail::default_precision_slot().load(); }

/// Values below kMinPrecisionBits are raised to it.
inline void set_default_precision_bits(mpfr_prec_t bits) {
  detail::default_precision_slot().store(std::max(bits, kMinPrecisionBits));
}

class BoundedReal {
 public:
  explicit BoundedReal(mpfr_prec_t precision = default_precision_bits()) {
    mpfr_init2(mid_, std::max(precision, static_cast<mpfr_prec_t>(MPFR_PREC_MIN)));
    mpfr_init2(rad_, kRadiusPrecisionBits);
    mpfr_set_zero(mid_, 1);
    mpfr_set_zero(rad_, 1);
  }

  BoundedReal(const BoundedReal& other) {
    mpfr_init2(mid_, mpfr_get_prec(other.mid_));
    mpfr_init2(rad_, kRadiusPrecisionBits);
    mpfr_set(mid_, other.mid_, MPFR_RNDN);
    mpfr_set(rad_, other.rad_, MPFR_RNDU);
  }

  BoundedReal(BoundedReal&& other) noexcept {
    mpfr_init2(mid_, MPFR_PREC_MIN);
    mpfr_init2(rad_, MPFR_PREC_MIN);
    mpfr_swap(mid_, other.mid_);
    mpfr_swap(rad_, other.rad_);
  }

  BoundedReal& operator=(const BoundedReal& other) {
    if (this != &other) {
      mpfr_set_prec(mid_, mpfr_get_prec(other.mid_));
      mpfr_set(mid_, other.mid_, MPFR_RNDN);
      mpfr_set(rad_, other.rad_, MPFR_RNDU);
    }
    return *this;
  }

  BoundedReal& operator=(BoundedReal&& other) noexcept {
    mpfr_swap(mid_, other.mid_);
    mpfr_swap(rad_, other.rad_);
    return *this;
  }

  ~BoundedReal() {
    mpfr_clear(mid_);
    mpfr_clear(rad_);
  }

  static BoundedReal from_rational(const Rational& r, mpfr_prec_t precision = default_precision_bits()) {
    BoundedReal out(precision);
    int inexact = mpfr_set_q(out.mid_, r.get_mpq_t(), MPFR_RNDN);
    out.absorb_rounding(inexact);
    return out;
  }

  static BoundedReal from_integer(const Integer& z, mpfr_prec_t precision = default_precision_bits()) {
    BoundedReal out(precision);
    int inexact = mpfr_set_z(out.mid_, z.get_mpz_t(), MPFR_RNDN);
    out.absorb_rounding(inexact);
    return out;
  }

  static BoundedReal from_long(long v, mpfr_prec_t precision = default_precision_bits()) {
    BoundedReal out(precision);
    int inexact = mpfr_set_si(out.mid_, v, MPFR_RNDN);
    out.absorb_rounding(inexact);
    return out;
  }

  /// Ball with midpoint `mid` and radius at least `radius` (both exact doubles).
  static BoundedReal from_double(double mid, double radius = 0.0,
                                 mpfr_prec_t precision = default_precision_bits()) {
    BoundedReal out(precision);
    mpfr_set_d(out.mid_, mid, MPFR_RNDN);
    mpfr_set_d(out.rad_, std::abs(radius), MPFR_RNDU);
    return out;
  }

  /// Ball from decimal strings as written by mid_string / rad_string. The
  /// radius is read rounding down, which still covers the radius that was
  /// printed (that one was rounded up) and reprints identically.
  static BoundedReal from_strings(const std::string& mid, const std::string& rad,
                                  mpfr_prec_t precision = default_precision_bits()) {
    BoundedReal out(precision);
    if (mpfr_set_str(out.mid_, mid.c_str(), 10, MPFR_RNDN) != 0) throw ParseError("malformed midpoint '" + mid + "'");
    if (mpfr_set_str(out.rad_, rad.c_str(), 10, MPFR_RNDD) != 0 || mpfr_sgn(out.rad_) < 0)
      throw ParseError("malformed radius '" + rad + "'");
    return out;
  }

  /// Ball of radius +infinity around 0; represents "no information".
  static BoundedReal unbounded(mpfr_prec_t precision = default_precision_bits()) {
    BoundedReal out(precision);
    mpfr_set_inf(out.rad_, 1);
    return out;
  }

  [[nodiscard]] mpfr_prec_t precision() const { return mpfr_get_prec(mid_); }
  [[nodiscard]] double mid() const { return mpfr_get_d(mid_, MPFR_RNDN); }
  [[nodiscard]] double rad() const { return mpfr_get_d(rad_, MPFR_RNDU); }
  [[nodiscard]] bool is_exact() const { return mpfr_zero_p(rad_) != 0; }
  [[nodiscard]] bool is_finite() const { return mpfr_number_p(mid_) != 0 && mpfr_number_p(rad_) != 0; }

  /// Every member is > 0.
  [[nodiscard]] bool is_positive() const {
    if (!is_finite()) return false;
    mpfr_t lo;
    mpfr_init2(lo, precision());
    mpfr_sub(lo, mid_, rad_, MPFR_RNDD);
    bool pos = mpfr_sgn(lo) > 0;
    mpfr_clear(lo);
    return pos;
  }

  [[nodiscard]] bool is_negative() const { return (-*this).is_positive(); }
  [[nodiscard]] bool contains_zero() const { return !is_positive() && !is_negative(); }

  /// Upper bound on |x| over the ball.
  [[nodiscard]] double magnitude_bound() const {
    mpfr_t m;
    mpfr_init2(m, kRadiusPrecisionBits);
    mpfr_abs(m, mid_, MPFR_RNDU);
    mpfr_add(m, m, rad_, MPFR_RNDU);
    double out = mpfr_get_d(m, MPFR_RNDU);
    mpfr_clear(m);
    return out;
  }

  /// True unless the two balls are provably disjoint.
  [[nodiscard]] bool overlaps(const BoundedReal& other) const {
    BoundedReal diff = *this - other;
    return diff.contains_zero();
  }

  /// True if the ball lies inside [lo, hi].
  [[nodiscard]] bool within(double lo, double hi) const {
    BoundedReal low = *this - from_double(lo, 0.0, precision());
    BoundedReal high = from_double(hi, 0.0, precision()) - *this;
    return (low.is_positive() || is_zero_ball(low)) && (high.is_positive() || is_zero_ball(high));
  }

  /// Midpoint in scientific notation with `digits` significant digits.
  [[nodiscard]] std::string mid_string(int digits = 40) const { return format(mid_, digits, MPFR_RNDN); }

  /// Radius in scientific notation, rounded upward.
  [[nodiscard]] std::string rad_string(int digits = 6) const { return format(rad_, digits, MPFR_RNDU); }

  BoundedReal operator-() const {
    BoundedReal out(*this);
    mpfr_neg(out.mid_, out.mid_, MPFR_RNDN);
    return out;
  }

  friend BoundedReal operator+(const BoundedReal& a, const BoundedReal& b) {
    BoundedReal out(std::max(a.precision(), b.precision()));
    int inexact = mpfr_add(out.mid_, a.mid_, b.mid_, MPFR_RNDN);
    mpfr_add(out.rad_, a.rad_, b.rad_, MPFR_RNDU);
    out.absorb_rounding(inexact);
    return out;
  }

  friend BoundedReal operator-(const BoundedReal& a, const BoundedReal& b) {
    BoundedReal out(std::max(a.precision(), b.precision()));
    int inexact = mpfr_sub(out.mid_, a.mid_, b.mid_, MPFR_RNDN);
    mpfr_add(out.rad_, a.rad_, b.rad_, MPFR_RNDU);
    out.absorb_rounding(inexact);
    return out;
  }

  friend BoundedReal operator*(const BoundedReal& a, const BoundedReal& b) {
    BoundedReal out(std::max(a.precision(), b.precision()));
    int inexact = mpfr_mul(out.mid_, a.mid_, b.mid_, MPFR_RNDN);
    // |a| rb + |b| ra + ra rb
    Scratch abs_a, abs_b, term;
    mpfr_abs(abs_a.v, a.mid_, MPFR_RNDU);
    mpfr_abs(abs_b.v, b.mid_, MPFR_RNDU);
    mpfr_mul(out.rad_, abs_a.v, b.rad_, MPFR_RNDU);
    mpfr_mul(term.v, abs_b.v, a.rad_, MPFR_RNDU);
    mpfr_add(out.rad_, out.rad_, term.v, MPFR_RNDU);
    mpfr_mul(term.v, a.rad_, b.rad_, MPFR_RNDU);
    mpfr_add(out.rad_, out.rad_, term.v, MPFR_RNDU);
    out.absorb_rounding(inexact);
    return out;
  }

  /// Throws DomainError if the divisor ball contains zero.
  friend BoundedReal operator/(const BoundedReal& a, const BoundedReal& b) {
    if (b.contains_zero()) throw DomainError("division by a ball containing zero");
    BoundedReal out(std::max(a.precision(), b.precision()));
    int inexact = mpfr_div(out.mid_, a.mid_, b.mid_, MPFR_RNDN);
    // (ra + |ma/mb| rb) / (|mb| - rb)
    Scratch quotient, numer, denom;
    mpfr_abs(numer.v, a.mid_, MPFR_RNDU);
    mpfr_abs(denom.v, b.mid_, MPFR_RNDD);
    mpfr_div(quotient.v, numer.v, denom.v, MPFR_RNDU);
    mpfr_mul(numer.v, quotient.v, b.rad_, MPFR_RNDU);
    mpfr_add(numer.v, numer.v, a.rad_, MPFR_RNDU);
    mpfr_abs(denom.v, b.mid_, MPFR_RNDD);
    mpfr_sub(denom.v, denom.v, b.rad_, MPFR_RNDD);
    mpfr_div(out.rad_, numer.v, denom.v, MPFR_RNDU);
    out.absorb_rounding(inexact);
    return out;
  }

  BoundedReal& operator+=(const BoundedReal& o) { return *this = *this + o; }
  BoundedReal& operator-=(const BoundedReal& o) { return *this = *this - o; }
  BoundedReal& operator*=(const BoundedReal& o) { return *this = *this * o; }
  BoundedReal& operator/=(const BoundedReal& o) { return *this = *this / o; }

  /// Multiplication by 2^e is exact.
  [[nodiscard]] BoundedReal times_pow2(long e) const {
    BoundedReal out(*this);
    mpfr_mul_2si(out.mid_, out.mid_, e, MPFR_RNDN);
    mpfr_mul_2si(out.rad_, out.rad_, e, MPFR_RNDU);
    return out;
  }

  /// Widens the radius by `extra` (rounded up).
  [[nodiscard]] BoundedReal widened(const BoundedReal& extra) const {
    BoundedReal out(*this);
    Scratch e;
    mpfr_abs(e.v, extra.mid_, MPFR_RNDU);
    mpfr_add(e.v, e.v, extra.rad_, MPFR_RNDU);
    mpfr_add(out.rad_, out.rad_, e.v, MPFR_RNDU);
    return out;
  }

  /// Natural logarithm; throws DomainError unless the ball is positive.
  friend BoundedReal log(const BoundedReal& x) {
    if (!x.is_positive()) throw DomainError("log of a ball that is not strictly positive");
    BoundedReal out(x.precision());
    int inexact = mpfr_log(out.mid_, x.mid_, MPFR_RNDN);
    // |log y - log m| <= r / (m - r) for |y - m| <= r < m.
    Scratch lower;
    mpfr_sub(lower.v, x.mid_, x.rad_, MPFR_RNDD);
    mpfr_div(out.rad_, x.rad_, lower.v, MPFR_RNDU);
    out.absorb_rounding(inexact);
    return out;
  }

  /// Smallest and largest member, rounded outward to doubles.
  [[nodiscard]] std::pair<double, double> bounds() const {
    Scratch lo, hi;
    mpfr_sub(lo.v, mid_, rad_, MPFR_RNDD);
    mpfr_add(hi.v, mid_, rad_, MPFR_RNDU);
    return {mpfr_get_d(lo.v, MPFR_RNDD), mpfr_get_d(hi.v, MPFR_RNDU)};
  }

  /// Lower endpoint as a ball of radius 0 at this precision (rounded down).
  [[nodiscard]] BoundedReal lower() const {
    BoundedReal out(precision());
    mpfr_sub(out.mid_, mid_, rad_, MPFR_RNDD);
    return out;
  }

  /// Upper endpoint as a ball of radius 0 at this precision (rounded up).
  [[nodiscard]] BoundedReal upper() const {
    BoundedReal out(precision());
    mpfr_add(out.mid_, mid_, rad_, MPFR_RNDU);
    return out;
  }

  /// Ball covering both operands.
  friend BoundedReal hull(const BoundedReal& a, const BoundedReal& b) {
    mpfr_prec_t prec = std::max(a.precision(), b.precision());
    Scratch lo_a(prec), lo_b(prec), hi_a(prec), hi_b(prec);
    mpfr_sub(lo_a.v, a.mid_, a.rad_, MPFR_RNDD);
    mpfr_sub(lo_b.v, b.mid_, b.rad_, MPFR_RNDD);
    mpfr_add(hi_a.v, a.mid_, a.rad_, MPFR_RNDU);
    mpfr_add(hi_b.v, b.mid_, b.rad_, MPFR_RNDU);
    return from_endpoints(mpfr_cmp(lo_a.v, lo_b.v) < 0 ? lo_a.v : lo_b.v,
                          mpfr_cmp(hi_a.v, hi_b.v) > 0 ? hi_a.v : hi_b.v, prec);
  }

  /// Ball covering [lo, hi]; lo <= hi.
  static BoundedReal from_endpoints(const mpfr_t lo, const mpfr_t hi, mpfr_prec_t precision) {
    BoundedReal out(precision);
    int inexact = mpfr_add(out.mid_, lo, hi, MPFR_RNDN);
    mpfr_div_2ui(out.mid_, out.mid_, 1, MPFR_RNDN);
    Scratch d1, d2;
    mpfr_sub(d1.v, hi, out.mid_, MPFR_RNDU);
    mpfr_sub(d2.v, out.mid_, lo, MPFR_RNDU);
    mpfr_max(out.rad_, d1.v, d2.v, MPFR_RNDU);
    (void)inexact;
    return out;
  }

  [[nodiscard]] const __mpfr_struct* mid_ptr() const { return mid_; }
  [[nodiscard]] const __mpfr_struct* rad_ptr() const { return rad_; }

 private:
  struct Scratch {
    explicit Scratch(mpfr_prec_t prec = kRadiusPrecisionBits) { mpfr_init2(v, prec); }
    ~Scratch() { mpfr_clear(v); }
    Scratch(const Scratch&) = delete;
    Scratch& operator=(const Scratch&) = delete;
    mpfr_t v;
  };

  static bool is_zero_ball(const BoundedReal& b) { return mpfr_zero_p(b.mid_) && mpfr_zero_p(b.rad_); }

  // Round-to-nearest error is at most half an ulp, itself at most |mid| 2^(1-p).
  void absorb_rounding(int inexact) {
    if (inexact == 0) return;
    Scratch err;
    mpfr_abs(err.v, mid_, MPFR_RNDU);
    mpfr_mul_2si(err.v, err.v, 1 - static_cast<long>(precision()), MPFR_RNDU);
    mpfr_add(rad_, rad_, err.v, MPFR_RNDU);
  }

  static std::string format(const mpfr_t v, int digits, mpfr_rnd_t rnd) {
    if (mpfr_nan_p(v)) return "nan";
    if (mpfr_inf_p(v)) return mpfr_sgn(v) > 0 ? "inf" : "-inf";
    if (mpfr_zero_p(v)) return "0";
    mpfr_exp_t exp = 0;
    char* raw = mpfr_get_str(nullptr, &exp, 10, static_cast<std::size_t>(digits), v, rnd);
    std::string s(raw);
    mpfr_free_str(raw);
    bool neg = !s.empty() && s[0] == '-';
    if (neg) s.erase(0, 1);
    std::string out = neg ? "-" : "";
    out += s.substr(0, 1);
    if (s.size() > 1) out += "." + s.substr(1);
    out += "e" + std::to_string(static_cast<long>(exp) - 1);
    return out;
  }

  mpfr_t mid_;
  mpfr_t rad_;
};

/// Enclosure of the natural log of a positive integer.
inline BoundedReal log_of(const Integer& z, mpfr_prec_t precision = default_precision_bits()) {
  return log(BoundedReal::from_integer(z, precision));
}

}  // namespace sqseq
