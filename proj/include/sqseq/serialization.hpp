#pragma once

// JSON interchange. Every document is one compact JSON object per line with
// keys in a fixed order; rationals are strings "n" or "n/d", balls are
// {"mid": 40 significant digits, "rad": 6 digits rounded up}.

#include <array>
#include <charconv>
#include <cstdint>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "sqseq/bounded_real.hpp"
#include "sqseq/curves.hpp"
#include "sqseq/errors.hpp"
#include "sqseq/family.hpp"
#include "sqseq/heights.hpp"
#include "sqseq/rational.hpp"

namespace sqseq {

using Json = nlohmann::ordered_json;

inline constexpr int kFormatVersion = 1;
inline constexpr const char* kRecordFormat = "sqseq-record";
inline constexpr const char* kReportFormat = "sqseq-report";
inline constexpr const char* kHyperellipticFormat = "sqseq-hyperelliptic";
inline constexpr const char* kCertificateFormat = "sqseq-certificate";

/// Compact dump plus newline; the canonical byte form of a document.
inline std::string canonical(const Json& j) { return j.dump() + "\n"; }

/// Shortest decimal that reads back as the same double.
inline std::string format_double(double v) {
  std::array<char, 64> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

inline double parse_double(const std::string& s) {
  double v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw ParseError("malformed number '" + s + "'");
  return v;
}

namespace detail {

inline void expect_keys(const Json& j, std::initializer_list<const char*> keys, const char* what) {
  if (!j.is_object()) throw ParseError(std::string(what) + " must be a JSON object");
  std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [k, v] : j.items())
    if (allowed.count(k) == 0) throw ParseError(std::string(what) + " has unexpected key '" + k + "'");
  for (const char* k : keys)
    if (!j.contains(k)) throw ParseError(std::string(what) + " is missing '" + k + "'");
}

inline void expect_format(const Json& j, const char* format) {
  if (!j["format"].is_string() || j["format"].get<std::string>() != format)
    throw ParseError(std::string("expected format '") + format + "'");
  if (!j["version"].is_number_integer() || j["version"].get<int>() != kFormatVersion)
    throw ParseError("unsupported format version");
}

inline Rational rational_field(const Json& j, const char* key) {
  if (!j[key].is_string()) throw ParseError(std::string("'") + key + "' must be a rational string");
  return parse_rational(j[key].get<std::string>());
}

inline std::int64_t m_field(const Json& j) {
  if (!j["m"].is_number_integer()) throw ParseError("'m' must be an integer");
  auto m = j["m"].get<std::int64_t>();
  if (m == 0) throw ParseError("'m' must be nonzero");
  return m;
}

inline Json point_json(const CurvePoint& pt) {
  if (pt.is_infinity()) return Json("infinity");
  return Json::array({to_string(pt.x()), to_string(pt.y())});
}

inline CurvePoint point_from_json(const Json& j) {
  if (j.is_string() && j.get<std::string>() == "infinity") return CurvePoint::infinity();
  if (!j.is_array() || j.size() != 2 || !j[0].is_string() || !j[1].is_string())
    throw ParseError("a point must be [\"x\", \"y\"]");
  return CurvePoint::affine(parse_rational(j[0].get<std::string>()), parse_rational(j[1].get<std::string>()));
}

inline Json points_json(const std::vector<CurvePoint>& pts) {
  Json out = Json::array();
  for (const auto& pt : pts) out.push_back(point_json(pt));
  return out;
}

inline std::vector<CurvePoint> points_from_json(const Json& j) {
  if (!j.is_array()) throw ParseError("'points' must be an array");
  std::vector<CurvePoint> out;
  for (const auto& item : j) out.push_back(point_from_json(item));
  return out;
}

}  // namespace detail

inline Json to_json(const BoundedReal& b) { return Json{{"mid", b.mid_string(40)}, {"rad", b.rad_string(6)}}; }

inline BoundedReal bounded_real_from_json(const Json& j) {
  detail::expect_keys(j, {"mid", "rad"}, "bounded real");
  if (!j["mid"].is_string() || !j["rad"].is_string()) throw ParseError("bounded real fields must be strings");
  return BoundedReal::from_strings(j["mid"].get<std::string>(), j["rad"].get<std::string>());
}

// --- sequence records -------------------------------------------------------

inline Json to_json(const SequenceRecord& rec) {
  Json j;
  j["format"] = kRecordFormat;
  j["version"] = kFormatVersion;
  j["t"] = to_string(rec.params.t);
  j["q"] = to_string(rec.params.q);
  j["w"] = to_string(rec.params.w);
  j["m"] = rec.m;
  j["scale"] = to_string(rec.scale);
  j["p"] = to_string(rec.p);
  j["h"] = to_string(rec.h);
  j["a"] = to_string(rec.curve.a);
  j["b"] = to_string(rec.curve.b);
  j["c"] = to_string(rec.curve.c);
  j["points"] = detail::points_json({rec.points.begin(), rec.points.end()});
  return j;
}

/// Structural parse only; the mathematics is checked by verify_sequence.
inline SequenceRecord record_from_json(const Json& j) {
  detail::expect_keys(j, {"format", "version", "t", "q", "w", "m", "scale", "p", "h", "a", "b", "c", "points"},
                      "record");
  detail::expect_format(j, kRecordFormat);
  SequenceRecord rec;
  rec.params = {detail::rational_field(j, "t"), detail::rational_field(j, "q"), detail::rational_field(j, "w")};
  rec.m = detail::m_field(j);
  rec.scale = detail::rational_field(j, "scale");
  rec.p = detail::rational_field(j, "p");
  rec.h = detail::rational_field(j, "h");
  rec.curve = {detail::rational_field(j, "a"), detail::rational_field(j, "b"), detail::rational_field(j, "c")};
  std::vector<CurvePoint> pts = detail::points_from_json(j["points"]);
  if (pts.size() != kSequenceLength)
    throw ParseError("a record needs exactly " + std::to_string(kSequenceLength) + " points");
  for (std::size_t i = 0; i < kSequenceLength; ++i) rec.points[i] = pts[i];
  return rec;
}

inline std::string serialize(const SequenceRecord& rec) { return canonical(to_json(rec)); }

/// Documents from text holding either one JSON value or one value per line.
inline std::vector<Json> parse_documents(std::string_view text) {
  if (text.find_first_not_of(" \t\r\n") == std::string_view::npos) throw ParseError("input is empty");
  Json whole = Json::parse(text.begin(), text.end(), nullptr, false);
  if (!whole.is_discarded()) return {whole};
  std::vector<Json> out;
  std::istringstream lines{std::string(text)};
  std::string line;
  std::size_t number = 0;
  while (std::getline(lines, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    Json j = Json::parse(line, nullptr, false);
    if (j.is_discarded()) throw ParseError("line " + std::to_string(number) + " is not valid JSON");
    out.push_back(std::move(j));
  }
  return out;
}

inline std::vector<SequenceRecord> parse_records(std::string_view text) {
  std::vector<SequenceRecord> out;
  for (const Json& j : parse_documents(text)) out.push_back(record_from_json(j));
  return out;
}

// --- verification reports ---------------------------------------------------

inline Json to_json(const VerificationReport& report, std::int64_t m) {
  Json j;
  j["format"] = kReportFormat;
  j["version"] = kFormatVersion;
  j["m"] = m;
  j["on_curve"] = Json(std::vector<bool>(report.on_curve.begin(), report.on_curve.end()));
  j["u"] = report.u ? Json(to_string(*report.u)) : Json(nullptr);
  j["consecutive_squares"] = report.consecutive_squares;
  j["u_matches_t"] = report.u_matches_t;
  j["nonsingular"] = report.nonsingular;
  j["quartic_consistent"] = report.quartic_consistent;
  j["pass"] = report.pass();
  return j;
}

inline VerificationReport report_from_json(const Json& j) {
  detail::expect_keys(j,
                      {"format", "version", "m", "on_curve", "u", "consecutive_squares", "u_matches_t",
                       "nonsingular", "quartic_consistent", "pass"},
                      "report");
  detail::expect_format(j, kReportFormat);
  VerificationReport r;
  const Json& flags = j["on_curve"];
  if (!flags.is_array() || flags.size() != kSequenceLength) throw ParseError("'on_curve' must have five entries");
  for (std::size_t i = 0; i < kSequenceLength; ++i) {
    if (!flags[i].is_boolean()) throw ParseError("'on_curve' entries must be booleans");
    r.on_curve[i] = flags[i].get<bool>();
  }
  if (!j["u"].is_null()) r.u = detail::rational_field(j, "u");
  auto flag = [&](const char* key) {
    if (!j[key].is_boolean()) throw ParseError(std::string("'") + key + "' must be a boolean");
    return j[key].get<bool>();
  };
  r.consecutive_squares = flag("consecutive_squares");
  r.u_matches_t = flag("u_matches_t");
  r.nonsingular = flag("nonsingular");
  r.quartic_consistent = flag("quartic_consistent");
  if (flag("pass") != r.pass()) throw ParseError("'pass' disagrees with the individual checks");
  return r;
}

// --- hyperelliptic lifts ----------------------------------------------------

inline Json to_json(const HyperellipticRecord& rec, std::int64_t m) {
  Json j;
  j["format"] = kHyperellipticFormat;
  j["version"] = kFormatVersion;
  j["m"] = m;
  j["a"] = to_string(rec.sextic.a);
  j["b"] = to_string(rec.sextic.b);
  j["c"] = to_string(rec.sextic.c);
  j["points"] = detail::points_json(rec.points);
  return j;
}

inline HyperellipticRecord hyperelliptic_from_json(const Json& j) {
  detail::expect_keys(j, {"format", "version", "m", "a", "b", "c", "points"}, "hyperelliptic record");
  detail::expect_format(j, kHyperellipticFormat);
  detail::m_field(j);
  HyperellipticRecord rec;
  rec.sextic = {detail::rational_field(j, "a"), detail::rational_field(j, "b"), detail::rational_field(j, "c")};
  rec.points = detail::points_from_json(j["points"]);
  return rec;
}

// --- independence certificates ----------------------------------------------

/// A certificate together with the curve and points it speaks about.
struct CertificateDocument {
  std::int64_t m = 1;
  WeierstrassCurve curve;
  std::vector<CurvePoint> points;
  IndependenceCertificate certificate;
};

inline Json to_json(const CertificateDocument& doc) {
  const IndependenceCertificate& c = doc.certificate;
  Json j;
  j["format"] = kCertificateFormat;
  j["version"] = kFormatVersion;
  j["m"] = doc.m;
  j["target_error"] = format_double(c.target_error);
  j["alpha"] = to_string(doc.curve.alpha);
  j["beta"] = to_string(doc.curve.beta);
  j["points"] = detail::points_json(doc.points);
  Json heights = Json::array();
  for (const auto& h : c.heights) heights.push_back(to_json(h));
  j["heights"] = heights;
  Json gram = Json::array();
  for (const auto& row : c.gram) {
    Json r = Json::array();
    for (const auto& v : row) r.push_back(to_json(v));
    gram.push_back(r);
  }
  j["gram"] = gram;
  j["determinant"] = to_json(c.determinant);
  j["verdict"] = to_string(c.verdict);
  if (c.relation) {
    j["relation"] = Json{{"indices", c.relation->indices}, {"coefficients", c.relation->coefficients}};
  } else {
    j["relation"] = nullptr;
  }
  return j;
}

inline Verdict verdict_from_string(const std::string& s) {
  for (Verdict v : {Verdict::independent, Verdict::inconclusive, Verdict::dependent_suspected})
    if (to_string(v) == s) return v;
  throw ParseError("unknown verdict '" + s + "'");
}

inline CertificateDocument certificate_from_json(const Json& j) {
  detail::expect_keys(j,
                      {"format", "version", "m", "target_error", "alpha", "beta", "points", "heights", "gram",
                       "determinant", "verdict", "relation"},
                      "certificate");
  detail::expect_format(j, kCertificateFormat);
  CertificateDocument doc;
  doc.m = detail::m_field(j);
  if (!j["target_error"].is_string()) throw ParseError("'target_error' must be a string");
  doc.certificate.target_error = parse_double(j["target_error"].get<std::string>());
  doc.curve = {detail::rational_field(j, "alpha"), detail::rational_field(j, "beta")};
  doc.points = detail::points_from_json(j["points"]);
  const std::size_t n = doc.points.size();
  if (!j["heights"].is_array() || j["heights"].size() != n) throw ParseError("'heights' must match 'points'");
  for (const auto& h : j["heights"]) doc.certificate.heights.push_back(bounded_real_from_json(h));
  if (!j["gram"].is_array() || j["gram"].size() != n) throw ParseError("'gram' must be square");
  for (const auto& row : j["gram"]) {
    if (!row.is_array() || row.size() != n) throw ParseError("'gram' must be square");
    std::vector<BoundedReal> r;
    for (const auto& v : row) r.push_back(bounded_real_from_json(v));
    doc.certificate.gram.push_back(std::move(r));
  }
  doc.certificate.determinant = bounded_real_from_json(j["determinant"]);
  if (!j["verdict"].is_string()) throw ParseError("'verdict' must be a string");
  doc.certificate.verdict = verdict_from_string(j["verdict"].get<std::string>());
  if (!j["relation"].is_null()) {
    const Json& rel = j["relation"];
    detail::expect_keys(rel, {"indices", "coefficients"}, "relation");
    try {
      doc.certificate.relation =
          Relation{rel["indices"].get<std::vector<std::size_t>>(), rel["coefficients"].get<std::vector<int>>()};
    } catch (const nlohmann::json::exception&) {
      throw ParseError("malformed relation");
    }
  }
  return doc;
}

}  // namespace sqseq
