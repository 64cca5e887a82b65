// sqseq: build, check and certify curves carrying five points with
// consecutive-square abscissae.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "sqseq/acceptance.hpp"
#include "sqseq/bounded_real.hpp"
#include "sqseq/commands.hpp"

namespace {

constexpr const char* kPrecisionVariable = "SQSEQ_PRECISION_BITS";

struct Flags {
  std::optional<std::string> t, q, w, p, m, fixture, target_error, out, config, input;
  std::optional<std::size_t> digit_guard;
};

void add_common(CLI::App* app, Flags& f) {
  app->add_option("--target-error", f.target_error, "error bound for canonical heights (default 1e-8)");
  app->add_option("--digit-guard", f.digit_guard, "largest number of digits allowed in a coordinate");
  app->add_option("--out", f.out, "write output here instead of standard output");
}

sqseq::JobConfig build_config(const Flags& f, std::optional<sqseq::Command> command) {
  sqseq::JobConfig config;
  if (f.config) {
    std::ifstream in(*f.config);
    if (!in) throw sqseq::InvalidArgument("cannot read config '" + *f.config + "'");
    sqseq::Json j = sqseq::Json::parse(in, nullptr, false);
    if (j.is_discarded()) throw sqseq::ParseError("config '" + *f.config + "' is not valid JSON");
    config = sqseq::config_from_json(j);
  }
  if (command) config.command = *command;
  if (f.t) config.t = sqseq::parse_rational(*f.t);
  if (f.q) config.q = sqseq::parse_rational(*f.q);
  if (f.w) config.w = sqseq::parse_rational(*f.w);
  if (f.p) config.p = sqseq::parse_rational(*f.p);
  if (f.fixture) {
    if (!sqseq::is_fixture_name(*f.fixture)) throw sqseq::InvalidArgument("unknown fixture '" + *f.fixture + "'");
    config.builtin_fixture = true;
  }
  if (f.m) config.m_values = sqseq::parse_m_values(*f.m);
  if (f.target_error) config.target_error = sqseq::parse_double(*f.target_error);
  if (f.digit_guard) config.digit_guard = *f.digit_guard;
  if (f.out) config.output = *f.out;
  if (f.input) config.input = *f.input;
  return config;
}

void apply_precision_variable() {
  const char* raw = std::getenv(kPrecisionVariable);
  if (raw == nullptr || *raw == '\0') return;
  try {
    long bits = std::stol(raw);
    if (bits <= 0) throw std::invalid_argument("non-positive");
    sqseq::set_default_precision_bits(bits);
  } catch (const std::exception&) {
    std::cerr << "warning: ignoring " << kPrecisionVariable << "='" << raw << "'\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  apply_precision_variable();

  CLI::App app{"Elliptic curves with five consecutive-square points"};
  app.require_subcommand(0, 1);
  Flags f;
  bool self_check = false;
  app.add_flag("--self-check", self_check, "run the acceptance checks and exit");
  app.add_option("--config", f.config, "JSON job file; flags given on the command line win");

  CLI::App* construct = app.add_subcommand("construct", "generate family members");
  construct->add_option("--t", f.t, "sequence start t (rational n/d)");
  construct->add_option("--q", f.q, "parameter q");
  construct->add_option("--w", f.w, "parameter w");
  construct->add_option("--p", f.p, "seed abscissa on the quartic");
  construct->add_option("--m", f.m, "multiple N or range a..b (0 not allowed)");
  construct->add_option("--fixture", f.fixture, "built-in seed: builtin (alias paper)");
  add_common(construct, f);

  CLI::App* verify = app.add_subcommand("verify", "check records");
  CLI::App* heights = app.add_subcommand("heights", "certify independence of the five points");
  CLI::App* lift = app.add_subcommand("lift", "lift records to the genus-2 curve");
  for (CLI::App* sub : {verify, heights, lift}) {
    sub->add_option("record", f.input, "record file ('-' for standard input)");
    add_common(sub, f);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e, std::cerr, std::cerr);
    return sqseq::kExitUsage;
  }

  if (self_check) {
    bool ok = sqseq::acceptance::run_all(std::cout);
    return ok ? sqseq::kExitOk : sqseq::kExitVerificationFailed;
  }

  std::optional<sqseq::Command> command;
  if (construct->parsed()) command = sqseq::Command::construct;
  if (verify->parsed()) command = sqseq::Command::verify;
  if (heights->parsed()) command = sqseq::Command::heights;
  if (lift->parsed()) command = sqseq::Command::lift;
  if (!command && !f.config) {
    std::cerr << app.help();
    return sqseq::kExitUsage;
  }

  sqseq::JobConfig config;
  try {
    config = build_config(f, command);
  } catch (const sqseq::Error& ex) {
    std::cerr << "error: " << sqseq::error_name(ex) << ": " << ex.what() << "\n";
    return sqseq::kExitUsage;
  }

  if (config.output) {
    std::ofstream out(*config.output, std::ios::binary);
    if (!out) {
      std::cerr << "error: cannot write '" << *config.output << "'\n";
      return sqseq::kExitUsage;
    }
    return sqseq::run_command(config, out, std::cerr);
  }
  return sqseq::run_command(config, std::cout, std::cerr);
}
