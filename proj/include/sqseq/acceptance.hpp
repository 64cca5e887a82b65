#pragma once

// End-to-end acceptance checks, shared by the acceptance test binary and
// `sqseq --self-check`.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "sqseq/commands.hpp"
#include "sqseq/construction.hpp"
#include "sqseq/curves.hpp"
#include "sqseq/family.hpp"
#include "sqseq/fixture.hpp"
#include "sqseq/heights.hpp"
#include "sqseq/serialization.hpp"
#include "sqseq/two_cover.hpp"

namespace sqseq::acceptance {

struct CriterionResult {
  int number = 0;
  std::string title;
  bool passed = false;
  std::string detail;
  double seconds = 0;
};

/// Small random rationals for the identity suites.
class RationalSampler {
 public:
  explicit RationalSampler(std::uint64_t seed) : rng_(seed) {}

  Rational next(long numerator_bound = 60, long denominator_bound = 25) {
    std::uniform_int_distribution<long> num(-numerator_bound, numerator_bound);
    std::uniform_int_distribution<long> den(1, denominator_bound);
    Rational r(num(rng_), den(rng_));
    r.canonicalize();
    return r;
  }

  Rational nonzero(long numerator_bound = 60, long denominator_bound = 25) {
    Rational r;
    do r = next(numerator_bound, denominator_bound);
    while (r == 0);
    return r;
  }

  Rational nondegenerate_t() {
    Rational t;
    do t = next(20, 7);
    while (is_degenerate(t));
    return t;
  }

  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

 private:
  std::mt19937_64 rng_;
};

namespace detail {

struct Check {
  bool ok = true;
  std::string first_failure;
  void expect(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      first_failure = what;
    }
  }
};

template <class Ex, class F>
bool throws(F f) {
  try {
    f();
  } catch (const Ex&) {
    return true;
  } catch (...) {
    return false;
  }
  return false;
}

inline std::vector<CurvePoint> e1_weierstrass_points(const SequenceRecord& rec, WeierstrassCurve& curve) {
  FamilyIsomorphism iso(rec.curve);
  curve = iso.curve();
  std::vector<CurvePoint> pts;
  for (const auto& pt : rec.points) pts.push_back(iso.to_weierstrass(pt));
  return pts;
}

}  // namespace detail

inline CriterionResult criterion_fixture_record() {
  detail::Check c;
  JobConfig config;
  config.builtin_fixture = true;
  std::ostringstream out, err;
  int code = run_construct(config, out, err);
  c.expect(code == kExitOk, "construct exited with " + std::to_string(code));
  if (c.ok) {
    std::vector<SequenceRecord> recs = parse_records(out.str());
    c.expect(recs.size() == 1, "expected one record");
    if (c.ok) {
      const SequenceRecord& rec = recs[0];
      FamilyCurve expected = fixture::expected_curve();
      c.expect(rec.curve.a == expected.a && rec.curve.b == expected.b && rec.curve.c == expected.c,
               "curve coefficients differ");
      auto pts = fixture::expected_points();
      for (std::size_t i = 0; i < kSequenceLength; ++i) {
        c.expect(rec.points[i] == pts[i], "point " + std::to_string(i + 1) + " differs");
        c.expect(is_on_curve(pts[i], expected), "point " + std::to_string(i + 1) + " is off the curve");
      }
      c.expect(serialize(rec) == out.str(), "serialization is not canonical");
    }
  }
  return {1, "fixture record E_1", c.ok, c.first_failure};
}

inline CriterionResult criterion_two_cover_specialization() {
  detail::Check c;
  QuarticCurve quartic = quartic_from_params(fixture::params());
  c.expect(quartic.A == fixture::expected_leading_coefficient(), "leading coefficient is " + to_string(quartic.A));
  WeierstrassCurve jac = jacobian(quartic);
  WeierstrassCurve expected = fixture::expected_jacobian();
  c.expect(jac.alpha == expected.alpha && jac.beta == expected.beta, "Jacobian differs");
  CurvePoint p = distinguished_point(quartic);
  c.expect(p == fixture::expected_distinguished_point(), "distinguished point is " + p.to_string());
  c.expect(is_on_curve(p, jac), "distinguished point is off the Jacobian");
  return {2, "quartic, Jacobian and distinguished point at t = 1", c.ok, c.first_failure};
}

inline CriterionResult criterion_identities(std::uint64_t seed = 3) {
  detail::Check c;
  RationalSampler rs(seed);
  for (int i = 0; i < 50; ++i) {
    Rational t = rs.nondegenerate_t(), d = rs.next(), e = rs.next(), f = rs.next();
    FamilyCurve curve = solve_abc(t, d, e, f);
    c.expect(curve.rhs(square_abscissa(t, 0)) == d * d && curve.rhs(square_abscissa(t, 1)) == e * e &&
                 curve.rhs(square_abscissa(t, 2)) == f * f,
             "curve misses a prescribed point at t = " + to_string(t));
  }
  for (int i = 0; i < 50; ++i) {
    Rational t = rs.nondegenerate_t(), p = rs.next(), q = rs.next(), w = rs.next();
    YValues y = defg_parametrization(t, p, q, w);
    c.expect(g_squared(t, y.d, y.e, y.f) == y.g * y.g, "g^2 condition fails at t = " + to_string(t));
    FamilyCurve curve = solve_abc(t, y.d, y.e, y.f);
    const Rational ys[4] = {y.d, y.e, y.f, y.g};
    for (int k = 0; k < 4; ++k)
      c.expect(curve.rhs(square_abscissa(t, k)) == ys[k] * ys[k], "induced curve misses a point");
  }
  for (int i = 0; i < 20; ++i) {
    Rational t = rs.nondegenerate_t(), q = rs.next(), w = rs.next(), p = rs.next();
    QuarticCurve quartic = quartic_from_params(t, q, w);
    c.expect(quartic.rhs(p) == h_squared(t, p, q, w), "interpolated quartic disagrees at t = " + to_string(t));
  }
  return {3, "random specializations of the parametrization identities", c.ok, c.first_failure};
}

/// Random quartic with square leading coefficient through a chosen point.
inline std::pair<QuarticCurve, CurvePoint> random_pointed_quartic(RationalSampler& rs) {
  Rational a = rs.nonzero(12, 5);
  QuarticCurve q{a * a, rs.next(20, 5), rs.next(20, 5), rs.next(20, 5), Rational(0)};
  Rational p0 = rs.next(10, 4), h0 = rs.next(30, 6);
  q.E = h0 * h0 - (((q.A * p0 + q.B) * p0 + q.C) * p0 + q.D) * p0;
  return {q, CurvePoint::affine(p0, h0)};
}

inline CriterionResult criterion_two_cover(std::uint64_t seed = 4) {
  detail::Check c;
  RationalSampler rs(seed);
  int checked = 0;
  while (checked < 20) {
    auto [q, pt] = random_pointed_quartic(rs);
    if (invariants(q).discriminant_factor() == 0) continue;
    c.expect(is_on_curve(distinguished_point(q), jacobian(q)), "distinguished point off the Jacobian");
    ++checked;
  }
  int round_trips = 0;
  for (int guard = 0; round_trips < 100 && guard < 1000; ++guard) {
    auto [q, pt] = random_pointed_quartic(rs);
    if (invariants(q).discriminant_factor() == 0) continue;
    TwoCoverMap map(q);
    CurvePoint image = map.to_cubic(pt);
    c.expect(is_on_curve(image, map.jacobian()), "image off the Jacobian");
    try {
      c.expect(map.to_quartic(image) == pt, "round trip moved " + pt.to_string());
      ++round_trips;
    } catch (const ExceptionalPoint&) {
    }
  }
  c.expect(round_trips == 100, "only " + std::to_string(round_trips) + " round trips");
  for (int i = 0; i < 50; ++i) {
    QuarticCurve q{rs.next(), rs.next(), rs.next(), rs.next(), rs.next()};
    QuarticInvariants inv = invariants(q);
    WeierstrassCurve cubic{-27 * inv.I, -27 * inv.J};
    c.expect(cubic.discriminant() == Rational(16 * 19683) * inv.discriminant_factor(),
             "discriminant is not 2^4 3^9 (4I^3 - J^2)");
  }
  return {4, "two-cover maps and invariants", c.ok, c.first_failure};
}

inline CriterionResult criterion_family() {
  detail::Check c;
  for (std::int64_t m : {1, 2, 3}) {
    SequenceRecord rec = generate_member(fixture::params(), fixture::seed(), m, fixture::options());
    c.expect(verify_sequence(rec).pass(), "m = " + std::to_string(m) + " fails verification");
    HyperellipticRecord lift = to_hyperelliptic(rec);
    std::size_t on = 0;
    for (const auto& pt : lift.points) on += lift.contains(pt) ? 1 : 0;
    c.expect(on >= kSequenceLength && on == lift.points.size(), "lift of m = " + std::to_string(m) + " is short");
  }
  return {5, "family members m = 1, 2, 3 and their lifts", c.ok, c.first_failure};
}

inline CriterionResult criterion_independence() {
  detail::Check c;
  SequenceRecord rec = generate_member(fixture::params(), fixture::seed(), 1, fixture::options());
  WeierstrassCurve curve;
  std::vector<CurvePoint> pts = detail::e1_weierstrass_points(rec, curve);
  IndependenceCertificate cert = independence_certificate(pts, curve, 1e-8);
  c.expect(cert.verdict == Verdict::independent, "E_1 verdict is " + to_string(cert.verdict));
  c.expect(cert.determinant.is_positive(), "determinant interval is not positive");
  CurvePoint p = pts[0];
  auto pair = independence_certificate({p, scalar_mul(2, p, curve)}, curve, 1e-8);
  c.expect(pair.verdict != Verdict::independent, "{P, 2P} judged independent");
  auto opposite = independence_certificate({p, p.negated()}, curve, 1e-8);
  c.expect(opposite.verdict != Verdict::independent, "{P, -P} judged independent");
  std::string detail = "det = " + cert.determinant.mid_string(12) + " +- " + cert.determinant.rad_string(3);
  return {6, "regulator certificate for E_1", c.ok, c.ok ? detail : c.first_failure};
}

inline CriterionResult criterion_height_properties(std::uint64_t seed = 7) {
  detail::Check c;
  SequenceRecord rec = generate_member(fixture::params(), fixture::seed(), 1, fixture::options());
  WeierstrassCurve curve;
  std::vector<CurvePoint> gens = detail::e1_weierstrass_points(rec, curve);
  HeightCalculator calc(curve);
  RationalSampler rs(seed);
  auto random_point = [&]() {
    CurvePoint acc;
    while (acc.is_infinity()) {
      acc = CurvePoint::infinity();
      for (const auto& g : gens) acc = sqseq::detail::add_unchecked(acc, scalar_mul(rs.integer(-1, 1), g, curve), curve);
    }
    return acc;
  };
  const double eps = 1e-8;
  for (int i = 0; i < 10; ++i) {
    CurvePoint p = random_point();
    CurvePoint q = random_point();
    BoundedReal hp = calc.canonical_height(p, eps);
    for (int m : {2, 3, 4}) {
      BoundedReal hm = calc.canonical_height(scalar_mul(m, p, curve), eps);
      c.expect(hm.overlaps(hp * BoundedReal::from_long(m * m)), "hhat(" + std::to_string(m) + "P) != m^2 hhat(P)");
    }
    BoundedReal lhs = calc.canonical_height(add(p, q, curve), eps) + calc.canonical_height(subtract(p, q, curve), eps);
    BoundedReal rhs = (hp + calc.canonical_height(q, eps)).times_pow2(1);
    c.expect(lhs.overlaps(rhs), "parallelogram law fails");
  }
  return {7, "quadraticity and parallelogram law", c.ok, c.first_failure};
}

inline CriterionResult criterion_rejections() {
  detail::Check c;
  for (const char* t : {"-1", "-1/2", "-3/2", "-2"}) {
    Rational tv = parse_rational(t);
    c.expect(detail::throws<DegenerateParameter>([&] { solve_abc(tv, 1, 2, 3); }), std::string("t = ") + t + " accepted by solve_abc");
    c.expect(detail::throws<DegenerateParameter>([&] { quartic_from_params(tv, 1, 1); }),
             std::string("t = ") + t + " accepted by quartic_from_params");
  }
  QuarticCurve non_square{Rational(2), Rational(1), Rational(0), Rational(3), Rational(1)};
  c.expect(detail::throws<NotASquare>([&] { distinguished_point(non_square); }), "non-square A accepted");
  c.expect(detail::throws<InvalidArgument>([&] {
             generate_member(fixture::params(), fixture::seed(), 0, fixture::options());
           }),
           "m = 0 accepted by generate_member");
  c.expect(detail::throws<InvalidArgument>([&] { parse_m_values("0"); }), "m = 0 accepted by the m parser");

  // A record with one ordinate changed must fail with exit code 3.
  SequenceRecord rec = generate_member(fixture::params(), fixture::seed(), 1, fixture::options());
  rec.points[2] = CurvePoint::affine(rec.points[2].x(), rec.points[2].y() + 1);
  c.expect(!verify_sequence(rec).pass(), "tampered record passes");
  std::filesystem::path file = std::filesystem::temp_directory_path() /
                               ("sqseq-tampered-" + std::to_string(std::random_device{}()) + ".json");
  {
    std::ofstream(file) << serialize(rec);
  }
  JobConfig config;
  config.command = Command::verify;
  config.input = file.string();
  std::ostringstream out, err;
  int code = run_command(config, out, err);
  std::filesystem::remove(file);
  c.expect(code == kExitVerificationFailed, "verify on a tampered record exited with " + std::to_string(code));
  return {8, "degenerate and invalid inputs", c.ok, c.first_failure};
}

inline const std::vector<std::function<CriterionResult()>>& criteria() {
  static const std::vector<std::function<CriterionResult()>> all{
      [] { return criterion_fixture_record(); },        [] { return criterion_two_cover_specialization(); },
      [] { return criterion_identities(); },          [] { return criterion_two_cover(); },
      [] { return criterion_family(); },              [] { return criterion_independence(); },
      [] { return criterion_height_properties(); },   [] { return criterion_rejections(); },
  };
  return all;
}

/// Time limits per criterion, in seconds.
inline double time_limit(int number) {
  switch (number) {
    case 1:
    case 2:
      return 1;
    case 3:
    case 4:
      return 30;
    case 5:
      return 120;
    case 6:
      return 300;
    default:
      return 300;
  }
}

/// Runs one criterion with timing; exceptions count as failures.
inline CriterionResult run_criterion(std::size_t index) {
  auto start = std::chrono::steady_clock::now();
  CriterionResult r;
  try {
    r = criteria().at(index)();
  } catch (const std::exception& ex) {
    r.number = static_cast<int>(index) + 1;
    r.title = "(aborted)";
    r.passed = false;
    r.detail = std::string("exception: ") + ex.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (r.passed && r.seconds > time_limit(r.number)) {
    r.passed = false;
    r.detail = "took " + std::to_string(r.seconds) + " s";
  }
  return r;
}

inline std::string format_result(const CriterionResult& r) {
  std::ostringstream s;
  s << "criterion " << r.number << ": " << (r.passed ? "PASS" : "FAIL") << "  " << r.title;
  s.precision(3);
  s << std::fixed << "  [" << r.seconds << " s]";
  if (!r.detail.empty()) s << "  " << r.detail;
  return s.str();
}

/// Runs every criterion, printing one line each; true iff all pass.
inline bool run_all(std::ostream& out) {
  bool all = true;
  for (std::size_t i = 0; i < criteria().size(); ++i) {
    CriterionResult r = run_criterion(i);
    out << format_result(r) << std::endl;
    all = all && r.passed;
  }
  return all;
}

}  // namespace sqseq::acceptance
