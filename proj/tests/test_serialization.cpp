#include <gtest/gtest.h>

#include <string>

#include "sqseq/fixture.hpp"
#include "sqseq/serialization.hpp"

using namespace sqseq;

namespace {

// Written out from the published curve, points, seed and scale.
const std::string kFirstMemberLine =
    R"({"format":"sqseq-record","version":1,"t":"1","q":"81/40","w":"1","m":1,"scale":"-40/85323",)"
    R"("p":"2201/2320","h":"1317462069/185600","a":"42674183/52786496000","b":"-612989889/7540928000",)"
    R"("c":"1180698375893607/2487869785676800","points":[["1","-2367005/3770464"],["4","8455597/18852320"],)"
    R"(["9","-10868031/18852320"],["16","-29720351/18852320"],["25","-62736289/18852320"]]})"
    "\n";

SequenceRecord member(std::int64_t m) {
  return generate_member(fixture::params(), fixture::seed(), m, fixture::options());
}

}  // namespace

TEST(RecordFormat, FirstMemberIsByteExact) { EXPECT_EQ(serialize(member(1)), kFirstMemberLine); }

TEST(RecordFormat, RoundTripIsCanonical) {
  for (std::int64_t m : {1, 2, -2}) {
    SequenceRecord rec = member(m);
    std::string text = serialize(rec);
    auto parsed = parse_records(text);
    ASSERT_EQ(parsed.size(), 1U);
    EXPECT_EQ(parsed[0], rec);
    EXPECT_EQ(serialize(parsed[0]), text);
  }
}

TEST(RecordFormat, LinesAndPrettyDocuments) {
  std::string two = serialize(member(1)) + "\n" + serialize(member(2));
  auto parsed = parse_records(two);
  ASSERT_EQ(parsed.size(), 2U);
  EXPECT_EQ(parsed[1].m, 2);
  auto pretty = parse_records(to_json(member(1)).dump(2));
  ASSERT_EQ(pretty.size(), 1U);
  EXPECT_EQ(serialize(pretty[0]), kFirstMemberLine);
}

TEST(RecordFormat, RejectsMalformedDocuments) {
  Json good = Json::parse(kFirstMemberLine);
  auto broken = [&](auto edit) {
    Json j = good;
    edit(j);
    return j;
  };
  EXPECT_THROW(parse_records(""), ParseError);
  EXPECT_THROW(parse_records("   \n"), ParseError);
  EXPECT_THROW(parse_records("{not json"), ParseError);
  EXPECT_THROW(record_from_json(broken([](Json& j) { j.erase("a"); })), ParseError);
  EXPECT_THROW(record_from_json(broken([](Json& j) { j["extra"] = 1; })), ParseError);
  EXPECT_THROW(record_from_json(broken([](Json& j) { j["version"] = 2; })), ParseError);
  EXPECT_THROW(record_from_json(broken([](Json& j) { j["format"] = "other"; })), ParseError);
  EXPECT_THROW(record_from_json(broken([](Json& j) { j["a"] = "1/0"; })), ParseError);
  EXPECT_THROW(record_from_json(broken([](Json& j) { j["a"] = 0.5; })), ParseError);
  EXPECT_THROW(record_from_json(broken([](Json& j) { j["m"] = "1"; })), ParseError);
  EXPECT_THROW(record_from_json(broken([](Json& j) { j["points"].erase(0); })), ParseError);
  EXPECT_THROW(record_from_json(broken([](Json& j) { j["points"][0] = Json::array({"1"}); })), ParseError);
}

TEST(RecordFormat, NonCanonicalRationalsAreNormalized) {
  Json j = Json::parse(kFirstMemberLine);
  j["q"] = "162/80";
  EXPECT_EQ(serialize(record_from_json(j)), kFirstMemberLine);
}

TEST(ReportFormat, RoundTrip) {
  SequenceRecord rec = member(1);
  VerificationReport report = verify_sequence(rec);
  Json j = to_json(report, rec.m);
  EXPECT_TRUE(j["pass"].get<bool>());
  EXPECT_EQ(j["u"], "1");
  VerificationReport back = report_from_json(j);
  EXPECT_EQ(canonical(to_json(back, rec.m)), canonical(j));

  rec.curve.b += 1;
  Json failing = to_json(verify_sequence(rec), rec.m);
  EXPECT_FALSE(failing["pass"].get<bool>());
  failing["pass"] = true;
  EXPECT_THROW(report_from_json(failing), ParseError);
}

TEST(HyperellipticFormat, RoundTrip) {
  HyperellipticRecord lift = to_hyperelliptic(member(1));
  Json j = to_json(lift, 1);
  HyperellipticRecord back = hyperelliptic_from_json(j);
  EXPECT_EQ(back.sextic, lift.sextic);
  EXPECT_EQ(back.points, lift.points);
  EXPECT_EQ(j["points"][0][0], "1");
  EXPECT_EQ(j["points"][0][1], "-2367005/3770464");
  EXPECT_EQ(j["points"][5][0], "-1");
}

TEST(CertificateFormat, RoundTrip) {
  SequenceRecord rec = member(1);
  FamilyIsomorphism iso(rec.curve);
  CertificateDocument doc;
  doc.m = 1;
  doc.curve = iso.curve();
  for (const auto& pt : rec.points) doc.points.push_back(iso.to_weierstrass(pt));
  doc.certificate = independence_certificate(doc.points, doc.curve, 1e-8);
  std::string text = canonical(to_json(doc));
  CertificateDocument back = certificate_from_json(Json::parse(text));
  EXPECT_EQ(canonical(to_json(back)), text);
  EXPECT_EQ(back.certificate.verdict, Verdict::independent);
  EXPECT_EQ(back.points, doc.points);
  for (std::size_t i = 0; i < 5; ++i) EXPECT_TRUE(back.certificate.heights[i].overlaps(doc.certificate.heights[i]));
  EXPECT_TRUE(back.certificate.determinant.is_positive());

  Json relation = Json::parse(text);
  relation["verdict"] = "dependent-suspected";
  relation["relation"] = Json{{"indices", {0, 1}}, {"coefficients", {1, -1}}};
  CertificateDocument with_relation = certificate_from_json(relation);
  ASSERT_TRUE(with_relation.certificate.relation);
  EXPECT_EQ(with_relation.certificate.relation->coefficients, (std::vector<int>{1, -1}));
  relation["verdict"] = "maybe";
  EXPECT_THROW(certificate_from_json(relation), ParseError);
}

TEST(Numbers, DoubleFormatting) {
  for (double v : {1e-8, 0.1, 1e3, 123.456, 5e-324}) EXPECT_EQ(parse_double(format_double(v)), v);
  EXPECT_EQ(format_double(1e-8), "1e-08");
  EXPECT_THROW(parse_double("1e"), ParseError);
  EXPECT_THROW(parse_double("abc"), ParseError);
}
