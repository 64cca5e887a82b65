#pragma once

// The four CLI commands as library functions writing to streams, plus the
// job configuration they share.

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <future>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "sqseq/construction.hpp"
#include "sqseq/errors.hpp"
#include "sqseq/family.hpp"
#include "sqseq/fixture.hpp"
#include "sqseq/heights.hpp"
#include "sqseq/serialization.hpp"

namespace sqseq {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitPartial = 2,
  kExitVerificationFailed = 3,
  kExitInconclusive = 4,
  kExitDependent = 5,
};

enum class Command { construct, verify, heights, lift };

inline constexpr std::size_t kMaxRangeLength = 100000;

struct JobConfig {
  Command command = Command::construct;
  std::optional<Rational> t, q, w, p;
  bool builtin_fixture = false;
  std::vector<std::int64_t> m_values{1};
  double target_error = kDefaultTargetError;
  std::size_t digit_guard = kDefaultDigitGuard;
  /// Record file for verify, heights and lift; "-" reads standard input.
  std::optional<std::string> input;
  std::optional<std::string> output;
};

inline Command parse_command(const std::string& s) {
  if (s == "construct") return Command::construct;
  if (s == "verify") return Command::verify;
  if (s == "heights") return Command::heights;
  if (s == "lift") return Command::lift;
  throw InvalidArgument("unknown command '" + s + "'");
}

namespace detail {

inline std::int64_t parse_int64(const std::string& s) {
  std::int64_t v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw InvalidArgument("malformed integer '" + s + "'");
  return v;
}

}  // namespace detail

/// "N" or "a..b" (inclusive, a <= b). Ranges may not contain 0.
inline std::vector<std::int64_t> parse_m_values(const std::string& text) {
  auto dots = text.find("..");
  std::int64_t lo = 0, hi = 0;
  if (dots == std::string::npos) {
    lo = hi = detail::parse_int64(text);
  } else {
    lo = detail::parse_int64(text.substr(0, dots));
    hi = detail::parse_int64(text.substr(dots + 2));
  }
  if (lo > hi) throw InvalidArgument("empty m range '" + text + "'");
  if (lo <= 0 && hi >= 0) throw InvalidArgument("m must be nonzero (got '" + text + "')");
  if (static_cast<std::uint64_t>(hi - lo) >= kMaxRangeLength) throw InvalidArgument("m range is too long");
  std::vector<std::int64_t> out;
  for (std::int64_t m = lo; m <= hi; ++m) out.push_back(m);
  return out;
}

/// Reads the JSON config schema: command, t, q, w, p, fixture, m,
/// target_error, digit_guard, input, output. Unknown keys are errors.
/// Names accepted for the built-in seed.
inline bool is_fixture_name(const std::string& name) { return name == "builtin" || name == "paper"; }

inline JobConfig config_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("config must be a JSON object");
  JobConfig c;
  for (const auto& [key, value] : j.items()) {
    auto str = [&]() {
      if (!value.is_string()) throw ParseError("config '" + key + "' must be a string");
      return value.get<std::string>();
    };
    if (key == "command") {
      c.command = parse_command(str());
    } else if (key == "t") {
      c.t = parse_rational(str());
    } else if (key == "q") {
      c.q = parse_rational(str());
    } else if (key == "w") {
      c.w = parse_rational(str());
    } else if (key == "p") {
      c.p = parse_rational(str());
    } else if (key == "fixture") {
      if (!is_fixture_name(str())) throw ParseError("unknown fixture '" + str() + "'");
      c.builtin_fixture = true;
    } else if (key == "m") {
      c.m_values = value.is_number_integer() ? parse_m_values(std::to_string(value.get<std::int64_t>()))
                                             : parse_m_values(str());
    } else if (key == "target_error") {
      c.target_error = value.is_number() ? value.get<double>() : parse_double(str());
    } else if (key == "digit_guard") {
      if (!value.is_number_unsigned()) throw ParseError("config 'digit_guard' must be a positive integer");
      c.digit_guard = value.get<std::size_t>();
    } else if (key == "input") {
      c.input = str();
    } else if (key == "output") {
      c.output = str();
    } else {
      throw ParseError("unknown config key '" + key + "'");
    }
  }
  return c;
}

namespace detail {

inline std::string read_input(const JobConfig& config) {
  if (!config.input) throw InvalidArgument("no input record file given");
  if (*config.input == "-") return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  std::ifstream in(*config.input, std::ios::binary);
  if (!in) throw InvalidArgument("cannot read '" + *config.input + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline std::vector<SequenceRecord> read_records(const JobConfig& config) {
  std::string text = read_input(config);
  try {
    return parse_records(text);
  } catch (const nlohmann::json::exception& ex) {
    throw ParseError(std::string("malformed record: ") + ex.what());
  }
}

struct Seed {
  SequenceParams params;
  CurvePoint point;
  GenerationOptions options;
};

inline Seed resolve_seed(const JobConfig& config) {
  bool any_param = config.t || config.q || config.w || config.p;
  Seed seed;
  if (config.builtin_fixture) {
    if (any_param) throw InvalidArgument("--fixture cannot be combined with --t/--q/--w/--p");
    seed = {fixture::params(), fixture::seed(), fixture::options()};
  } else {
    if (!(config.t && config.q && config.w && config.p))
      throw InvalidArgument("construct needs --t, --q, --w and --p, or --fixture");
    seed.params = {*config.t, *config.q, *config.w};
    require_nondegenerate(seed.params.t);
    QuarticCurve quartic = quartic_from_params(seed.params);
    std::optional<Rational> h = h_from_quartic(quartic, *config.p);
    if (!h) throw NotASquare("the quartic value at p = " + to_string(*config.p) + " is not a rational square");
    seed.point = CurvePoint::affine(*config.p, *h);
  }
  seed.options.digit_guard = config.digit_guard;
  return seed;
}

}  // namespace detail

/// One record per m, ascending. Exit 2 if some m had to be skipped.
inline int run_construct(const JobConfig& config, std::ostream& out, std::ostream& err) {
  detail::Seed seed = detail::resolve_seed(config);
  // m = 1 needs no group law, so this validates the seed for every m.
  generate_member(seed.params, seed.point, 1, seed.options);

  std::vector<std::int64_t> ms = config.m_values;
  std::sort(ms.begin(), ms.end());
  ms.erase(std::unique(ms.begin(), ms.end()), ms.end());
  for (std::int64_t m : ms)
    if (m == 0) throw InvalidArgument("m must be nonzero");

  std::vector<std::optional<SequenceRecord>> records(ms.size());
  std::vector<std::string> problems(ms.size());
  auto build = [&](std::size_t i) {
    try {
      records[i] = generate_member(seed.params, seed.point, ms[i], seed.options);
    } catch (const ExceptionalPoint& ex) {
      problems[i] = ex.what();
    } catch (const SizeLimit& ex) {
      problems[i] = "m = " + std::to_string(ms[i]) + ": " + ex.what();
    }
  };
  std::size_t width = std::max(1U, std::thread::hardware_concurrency());
  for (std::size_t start = 0; start < ms.size(); start += width) {
    std::vector<std::future<void>> jobs;
    for (std::size_t i = start; i < std::min(ms.size(), start + width); ++i)
      jobs.push_back(std::async(std::launch::async, build, i));
    for (auto& job : jobs) job.get();
  }

  bool skipped = false;
  for (std::size_t i = 0; i < ms.size(); ++i) {
    if (records[i]) {
      out << serialize(*records[i]);
    } else {
      skipped = true;
      err << "skipped " << problems[i] << "\n";
    }
  }
  return skipped ? kExitPartial : kExitOk;
}

/// One report per record; exit 0 iff all pass.
inline int run_verify(const JobConfig& config, std::ostream& out, std::ostream& err) {
  bool all = true;
  for (const SequenceRecord& rec : detail::read_records(config)) {
    VerificationReport report = verify_sequence(rec);
    out << canonical(to_json(report, rec.m));
    if (!report.pass()) {
      all = false;
      err << "record m = " << rec.m << " fails verification\n";
    }
  }
  return all ? kExitOk : kExitVerificationFailed;
}

/// Points the certificate is computed on: the record's points on the
/// Weierstrass model of its curve.
inline CertificateDocument certify_record(const SequenceRecord& rec, double target_error,
                                          const HeightOptions& options = {}) {
  VerificationReport report = verify_sequence(rec);
  bool on_curve = std::all_of(report.on_curve.begin(), report.on_curve.end(), [](bool b) { return b; });
  if (!on_curve || !report.nonsingular)
    throw InvalidArgument("record m = " + std::to_string(rec.m) + " has points off a nonsingular curve");
  FamilyIsomorphism iso(rec.curve);
  CertificateDocument doc;
  doc.m = rec.m;
  doc.curve = iso.curve();
  for (const auto& pt : rec.points) doc.points.push_back(iso.to_weierstrass(pt));
  doc.certificate = independence_certificate(doc.points, doc.curve, target_error, options);
  return doc;
}

/// Exit 0 if every record is independent, 5 if any is dependent-suspected,
/// otherwise 4 when some record is inconclusive.
inline int run_heights(const JobConfig& config, std::ostream& out, std::ostream& err) {
  if (!(config.target_error > 0)) throw InvalidArgument("target error must be positive");
  HeightOptions options;
  options.digit_guard = config.digit_guard;
  int code = kExitOk;
  for (const SequenceRecord& rec : detail::read_records(config)) {
    CertificateDocument doc = certify_record(rec, config.target_error, options);
    out << canonical(to_json(doc));
    Verdict v = doc.certificate.verdict;
    if (v == Verdict::dependent_suspected) {
      code = kExitDependent;
    } else if (v == Verdict::inconclusive && code != kExitDependent) {
      code = kExitInconclusive;
    }
    if (v != Verdict::independent) err << "record m = " << rec.m << ": " << to_string(v) << "\n";
  }
  return code;
}

/// Records must pass verification; each becomes a hyperelliptic record.
inline int run_lift(const JobConfig& config, std::ostream& out, std::ostream&) {
  for (const SequenceRecord& rec : detail::read_records(config))
    out << canonical(to_json(to_hyperelliptic(rec), rec.m));
  return kExitOk;
}

/// Runs a command and maps library errors to exit code 1 with a message.
inline int run_command(const JobConfig& config, std::ostream& out, std::ostream& err) {
  try {
    switch (config.command) {
      case Command::construct:
        return run_construct(config, out, err);
      case Command::verify:
        return run_verify(config, out, err);
      case Command::heights:
        return run_heights(config, out, err);
      case Command::lift:
        return run_lift(config, out, err);
    }
  } catch (const Error& ex) {
    err << "error: " << error_name(ex) << ": " << ex.what() << "\n";
  } catch (const nlohmann::json::exception& ex) {
    err << "error: " << ex.what() << "\n";
  }
  return kExitUsage;
}

}  // namespace sqseq
