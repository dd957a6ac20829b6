#include "inbl/cli.hpp"

#include "inbl/detail/mix.hpp"
#include "inbl/errors.hpp"
#include "inbl/experiments.hpp"
#include "inbl/hats.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <memory>
#include <ostream>
#include <random>
#include <sstream>

namespace inbl::cli {
namespace {

using nlohmann::ordered_json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Format { Csv, Json };

std::string format_double(double v, int digits = 9) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

ordered_json exact_json(const DyadicSample& s) {
  return {{"numerator", s.numerator().str()}, {"scale", s.scale()}};
}

Seed require_seed(const std::string& token) {
  const auto seed = parse_seed(token);
  if (!seed) throw UsageError("invalid seed '" + token + "': expected decimal or 0x-hex");
  return *seed;
}

std::optional<Number> parse_number(std::string_view token) {
  Number v = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc{} || ptr != token.data() + token.size() || token.empty()) return std::nullopt;
  return v;
}

// Writes to --out when given, stdout otherwise.
void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open '" + path + "' for writing");
  file << text;
  if (!file.flush()) throw IoError("failed writing '" + path + "'");
}

void check_bits(unsigned bits) {
  if (bits < 1 || bits > kMaxBits) {
    throw UsageError("--bits must be in [1, 64], got " + std::to_string(bits));
  }
}

void check_number(Number k, unsigned bits, const char* flag) {
  if (bits < 64 && (k >> bits) != 0) {
    throw UsageError(std::string(flag) + " " + std::to_string(k) + " does not fit in " +
                     std::to_string(bits) + " bits");
  }
}

// ---------------------------------------------------------------- simulate-single

struct SingleArgs {
  unsigned bits = 32;
  std::string seed = "0";
  std::string hat = "random";
  std::string number = "random";
  Format format = Format::Json;
};

int simulate_single(const SingleArgs& a, std::ostream& out) {
  check_bits(a.bits);
  const Seed seed = require_seed(a.seed);
  std::mt19937_64 rng(detail::mix64(seed ^ 0x5151ULL));
  const Number mask = ReferenceSystem(a.bits, seed).max_number();

  HatId drawn_from = HatId::Hat1;
  if (a.hat == "1") {
    drawn_from = HatId::Hat1;
  } else if (a.hat == "2") {
    drawn_from = HatId::Hat2;
  } else if (a.hat == "random") {
    drawn_from = (rng() & 1) ? HatId::Hat2 : HatId::Hat1;
  } else {
    throw UsageError("--hat must be 1, 2 or random");
  }

  Number k = 0;
  if (a.number == "random") {
    k = rng() & mask;
  } else if (const auto parsed = parse_number(a.number)) {
    k = *parsed;
    check_number(k, a.bits, "--number");
  } else {
    throw UsageError("--number must be a non-negative integer or random");
  }

  const ReferenceSystem alice(a.bits, seed);
  auto [hat1, hat2] = setup_hats(alice);
  HatState& target = drawn_from == HatId::Hat1 ? hat1 : hat2;
  target = draw_number(target, k);
  const ReferenceSystem bob(a.bits, seed);
  const SingleDecision d = decide_single_draw(bob, stream_of(hat1), stream_of(hat2));

  const bool correct = d.deficient_hat == drawn_from;
  const int exponent = -d.witness.magnitude_exponent().value_or(0);
  if (a.format == Format::Json) {
    ordered_json j;
    j["command"] = "simulate-single";
    j["bits"] = a.bits;
    j["seed"] = seed;
    j["drawn_hat"] = static_cast<int>(drawn_from);
    j["number"] = k;
    j["deficient_hat"] = static_cast<int>(d.deficient_hat);
    j["correct"] = correct;
    j["clocks_used"] = d.clocks_used;
    j["witness"] = exact_json(d.witness);
    j["witness_log2_magnitude"] = exponent;
    out << j.dump(2) << '\n';
  } else {
    out << "bits,seed,drawn_hat,number,deficient_hat,correct,clocks_used,witness_numerator,"
           "witness_scale,witness_log2_magnitude\n"
        << a.bits << ',' << seed << ',' << static_cast<int>(drawn_from) << ',' << k << ','
        << static_cast<int>(d.deficient_hat) << ',' << (correct ? "true" : "false") << ','
        << d.clocks_used << ',' << d.witness.numerator().str() << ',' << d.witness.scale() << ','
        << exponent << '\n';
  }
  return correct ? kExitOk : kExitFailure;
}

// ---------------------------------------------------------------- simulate-double

struct DoubleArgs {
  unsigned bits = 32;
  Number p = 0;
  Number q = 0;
  Clock max_clocks = kDefaultMaxClocks;
  std::string seed = "0";
  std::string p_hat = "random";
  Format format = Format::Json;
};

int simulate_double(const DoubleArgs& a, std::ostream& out) {
  check_bits(a.bits);
  check_number(a.p, a.bits, "--p");
  check_number(a.q, a.bits, "--q");
  if (a.p == a.q) throw UsageError("--p and --q must differ");
  if (a.max_clocks < 1) throw UsageError("--max-clocks must be at least 1");
  const Seed seed = require_seed(a.seed);
  std::mt19937_64 rng(detail::mix64(seed ^ 0xd0b1eULL));

  bool p_from_hat1 = true;
  if (a.p_hat == "1") {
    p_from_hat1 = true;
  } else if (a.p_hat == "2") {
    p_from_hat1 = false;
  } else if (a.p_hat == "random") {
    p_from_hat1 = (rng() & 1) == 0;
  } else {
    throw UsageError("--p-hat must be 1, 2 or random");
  }

  const ReferenceSystem alice(a.bits, seed);
  auto [hat1, hat2] = setup_hats(alice);
  hat1 = draw_number(hat1, p_from_hat1 ? a.p : a.q);
  hat2 = draw_number(hat2, p_from_hat1 ? a.q : a.p);
  const ReferenceSystem bob(a.bits, seed);
  const DoubleOutcome outcome =
      decide_double_draw(bob, a.p, a.q, stream_of(hat1), stream_of(hat2), a.max_clocks);

  const auto* d = std::get_if<DoubleDecision>(&outcome);
  const Number truth1 = p_from_hat1 ? a.p : a.q;
  const bool correct = d && d->hat1_missing == truth1;
  const Clock clocks = d ? d->clocks_used : std::get<Undecided>(outcome).clocks_exhausted;

  if (a.format == Format::Json) {
    ordered_json j;
    j["command"] = "simulate-double";
    j["bits"] = a.bits;
    j["seed"] = seed;
    j["p"] = a.p;
    j["q"] = a.q;
    j["r_p"] = zero_bit_count(a.p, a.bits);
    j["r_q"] = zero_bit_count(a.q, a.bits);
    j["max_clocks"] = a.max_clocks;
    j["decided"] = d != nullptr;
    if (d) {
      j["hat1_missing"] = d->hat1_missing;
      j["hat2_missing"] = d->hat2_missing;
      j["correct"] = correct;
    }
    j["clocks_used"] = clocks;
    out << j.dump(2) << '\n';
  } else {
    out << "bits,seed,p,q,decided,hat1_missing,hat2_missing,correct,clocks_used\n"
        << a.bits << ',' << seed << ',' << a.p << ',' << a.q << ',' << (d ? "true" : "false")
        << ',' << (d ? std::to_string(d->hat1_missing) : "") << ','
        << (d ? std::to_string(d->hat2_missing) : "") << ','
        << (d ? (correct ? "true" : "false") : "") << ',' << clocks << '\n';
  }
  if (d && !correct) return kExitFailure;
  return kExitOk;
}

// ---------------------------------------------------------------- fig7

struct Fig7Args {
  unsigned bits = 32;
  Number p = 2;
  Number q = 1;
  std::uint64_t trials = 100000;
  Clock max_clocks = kDefaultMaxClocks;
  std::string seed = "0";
  std::string out;
  unsigned threads = 0;
};

int fig7(const Fig7Args& a, std::ostream& out) {
  check_bits(a.bits);
  check_number(a.p, a.bits, "--p");
  check_number(a.q, a.bits, "--q");
  if (a.p == a.q) throw UsageError("--p and --q must differ");
  if (a.trials < 1) throw UsageError("--trials must be at least 1");
  if (a.max_clocks < 1) throw UsageError("--max-clocks must be at least 1");

  TrialConfig cfg;
  cfg.n_bits = a.bits;
  cfg.trials = a.trials;
  cfg.base_seed = require_seed(a.seed);
  cfg.max_clocks = a.max_clocks;
  cfg.problem = DoubleProblem{a.p, a.q};
  cfg.threads = a.threads;
  const Histogram h = decision_time_histogram(cfg);

  std::ostringstream csv;
  csv << "clocks,count,fraction,analytic\n";
  for (const auto& [clocks, count] : h.buckets) {
    csv << clocks << ',' << count << ',' << format_double(h.fraction(clocks)) << ','
        << format_double(std::ldexp(1.0, -static_cast<int>(clocks))) << '\n';
  }
  emit(a.out, csv.str(), out);
  return h.incorrect_count == 0 ? kExitOk : kExitFailure;
}

// ---------------------------------------------------------------- trace

struct TraceArgs {
  unsigned bits = 32;
  std::string seed = "0";
  Clock clocks = 2000;
  std::string signal = "universe";
  bool distort = false;
  std::string out;
};

std::function<DyadicSample(Clock)> signal_source(const ReferenceSystem& ref,
                                                 const std::string& spec) {
  if (spec == "universe") {
    return [ref](Clock t) { return universe_sample(ref, t); };
  }
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw UsageError("unknown signal '" + spec + "'");
  const std::string kind = spec.substr(0, colon);
  const auto arg = parse_number(std::string_view(spec).substr(colon + 1));
  if (!arg) throw UsageError("signal '" + spec + "' needs a non-negative integer argument");

  if (kind == "product" || kind == "hat-minus") {
    check_number(*arg, ref.n_bits(), kind.c_str());
    if (kind == "product") {
      return [ref, k = *arg](Clock t) { return product_string_sample(ref, k, t); };
    }
    return stream_of(HatState(ref).draw(*arg));
  }
  if (kind == "high" || kind == "low") {
    if (*arg < 1 || *arg > ref.n_bits()) {
      throw UsageError("bit index in '" + spec + "' must be in [1, " +
                       std::to_string(ref.n_bits()) + "]");
    }
    const Role role = kind == "high" ? Role::High : Role::Low;
    return [ref, role, bit = static_cast<unsigned>(*arg)](Clock t) {
      return rtw_sample(ref, bit, role, t);
    };
  }
  throw UsageError("unknown signal '" + spec + "'");
}

int trace(const TraceArgs& a, std::ostream& out) {
  check_bits(a.bits);
  const ReferenceSystem ref(a.bits, require_seed(a.seed));
  const auto source = signal_source(ref, a.signal);

  std::ostringstream csv;
  csv << "clock,numerator,scale,approx_value";
  if (a.distort) csv << ",log_distort";
  csv << '\n';
  for (Clock t = 1; t <= a.clocks; ++t) {
    const DyadicSample s = source(t);
    csv << t << ',' << s.numerator().str() << ',' << s.scale() << ','
        << format_double(s.to_double(), 17);
    if (a.distort) csv << ',' << format_double(log_distort(s, a.bits));
    csv << '\n';
  }
  emit(a.out, csv.str(), out);
  return kExitOk;
}

// ---------------------------------------------------------------- verify

struct Check {
  std::string name;
  bool passed;
  std::string detail;
};

void oracle_suite(Seed seed, std::vector<Check>& checks) {
  for (unsigned n = 1; n <= kMaxOracleEquivalenceBits; ++n) {
    const OracleReport r = oracle_equivalence(n, 100, seed);
    checks.push_back({"oracle_N" + std::to_string(n), r.passed,
                      r.passed ? "100 clocks exact, drawn " + std::to_string(r.drawn.front())
                               : r.message});
  }
}

void opcount_suite(std::vector<Check>& checks) {
  for (const unsigned n : {1u, 8u, 32u, 64u}) {
    const OpCountReport r = op_count_report(n);
    checks.push_back({"universe_ops_N" + std::to_string(n), r.universe_ops() == 2ull * n - 1,
                      std::to_string(r.universe_ops()) + " ops, expected " +
                          std::to_string(2 * n - 1)});
  }
  for (const unsigned n : {8u, 16u, 32u}) {
    const double ratio = static_cast<double>(op_count_report(2 * n).universe_ops()) /
                         static_cast<double>(op_count_report(n).universe_ops());
    checks.push_back({"linear_scaling_N" + std::to_string(n), std::abs(ratio - 2.0) <= 1.0 / n,
                      "ops(2N)/ops(N) = " + format_double(ratio)});
  }
}

void probability_suite(Seed seed, std::vector<Check>& checks) {
  constexpr std::uint64_t kTrials = 100000;
  for (const Clock n : {Clock{1}, Clock{5}}) {
    const MatchProbability m = match_probability(32, 2, 1, n, kTrials, seed);
    const double expected = std::ldexp(1.0, -static_cast<int>(n));
    const double sigma = std::sqrt(expected * (1 - expected) / kTrials);
    const double got = m.probability();
    checks.push_back({"match_probability_n" + std::to_string(n),
                      std::abs(got - expected) <= 3 * sigma,
                      "P = " + format_double(got) + ", expected " + format_double(expected) +
                          " +- " + format_double(3 * sigma)});
  }
}

int verify(const std::string& suite, const std::string& seed_token, std::ostream& out,
           std::ostream& err) {
  const Seed seed = require_seed(seed_token);
  std::vector<Check> checks;
  if (suite == "oracle" || suite == "all") oracle_suite(seed, checks);
  if (suite == "opcount" || suite == "all") opcount_suite(checks);
  if (suite == "probability" || suite == "all") probability_suite(seed, checks);

  bool passed = true;
  ordered_json j;
  j["suite"] = suite;
  j["seed"] = seed;
  j["checks"] = ordered_json::array();
  for (const Check& c : checks) {
    j["checks"].push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    if (!c.passed && passed) {
      err << "first failing check: " << c.name << " (" << c.detail << ")\n";
      passed = false;
    }
  }
  j["passed"] = passed;
  out << j.dump(2) << '\n';
  return passed ? kExitOk : kExitFailure;
}

void add_format_option(CLI::App* cmd, Format& format) {
  static const std::map<std::string, Format> kFormats{{"csv", Format::Csv}, {"json", Format::Json}};
  cmd->add_option("--output", format, "Output format: csv or json")
      ->transform(CLI::CheckedTransformer(kFormats, CLI::ignore_case));
}

}  // namespace

std::optional<Seed> parse_seed(std::string_view token) {
  int base = 10;
  if (token.size() > 2 && token[0] == '0' && (token[1] == 'x' || token[1] == 'X')) {
    token.remove_prefix(2);
    base = 16;
  }
  if (token.empty()) return std::nullopt;
  Seed v = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v, base);
  if (ec != std::errc{} || ptr != token.data() + token.size()) return std::nullopt;
  return v;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Asymmetric random-telegraph-wave noise-based logic: drawing from hats"};
  app.name("inbl");
  app.require_subcommand(1);

  SingleArgs single;
  auto* single_cmd = app.add_subcommand("simulate-single", "One arbitrary number drawn from one of two hats");
  single_cmd->add_option("--bits", single.bits, "Number of noise-bits N")->capture_default_str();
  single_cmd->add_option("--seed", single.seed, "Seed (decimal or 0x-hex)")->capture_default_str();
  single_cmd->add_option("--hat", single.hat, "Hat Alice draws from: 1, 2 or random")->capture_default_str();
  single_cmd->add_option("--number", single.number, "Drawn number k or random")->capture_default_str();
  add_format_option(single_cmd, single.format);

  DoubleArgs dbl;
  auto* double_cmd = app.add_subcommand("simulate-double", "Known numbers p and q drawn one from each hat");
  double_cmd->add_option("--bits", dbl.bits, "Number of noise-bits N")->capture_default_str();
  double_cmd->add_option("--p", dbl.p, "First number")->required();
  double_cmd->add_option("--q", dbl.q, "Second number")->required();
  double_cmd->add_option("--max-clocks", dbl.max_clocks, "Clock budget before giving up")->capture_default_str();
  double_cmd->add_option("--seed", dbl.seed, "Seed (decimal or 0x-hex)")->capture_default_str();
  double_cmd->add_option("--p-hat", dbl.p_hat, "Hat that loses p: 1, 2 or random")->capture_default_str();
  add_format_option(double_cmd, dbl.format);

  Fig7Args f7;
  auto* fig7_cmd = app.add_subcommand("fig7", "Decision-time histogram of the double draw as CSV");
  fig7_cmd->add_option("--bits", f7.bits)->capture_default_str();
  fig7_cmd->add_option("--p", f7.p)->capture_default_str();
  fig7_cmd->add_option("--q", f7.q)->capture_default_str();
  fig7_cmd->add_option("--trials", f7.trials)->capture_default_str();
  fig7_cmd->add_option("--max-clocks", f7.max_clocks)->capture_default_str();
  fig7_cmd->add_option("--seed", f7.seed)->capture_default_str();
  fig7_cmd->add_option("--threads", f7.threads, "Worker threads, 0 = all cores")->capture_default_str();
  fig7_cmd->add_option("--out", f7.out, "Output CSV path (stdout if omitted)");

  TraceArgs tr;
  auto* trace_cmd = app.add_subcommand("trace", "Per-clock exact signal trace as CSV");
  trace_cmd->add_option("--bits", tr.bits)->capture_default_str();
  trace_cmd->add_option("--seed", tr.seed)->capture_default_str();
  trace_cmd->add_option("--clocks", tr.clocks)->capture_default_str();
  trace_cmd->add_option("--signal", tr.signal,
                        "universe | product:K | hat-minus:K | high:I | low:I")
      ->capture_default_str();
  trace_cmd->add_flag("--distort", tr.distort, "Add the sign(x)*ln(2^N|x|) column");
  trace_cmd->add_option("--out", tr.out, "Output CSV path (stdout if omitted)");

  std::string suite = "all";
  std::string verify_seed = "0";
  auto* verify_cmd = app.add_subcommand("verify", "Run a verification suite, JSON report on stdout");
  verify_cmd->add_option("--suite", suite)
      ->check(CLI::IsMember({"oracle", "opcount", "probability", "all"}))
      ->capture_default_str();
  verify_cmd->add_option("--seed", verify_seed)->capture_default_str();

  std::vector<const char*> argv{"inbl"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (*single_cmd) return simulate_single(single, out);
    if (*double_cmd) return simulate_double(dbl, out);
    if (*fig7_cmd) return fig7(f7, out);
    if (*trace_cmd) return trace(tr, out);
    if (*verify_cmd) return verify(suite, verify_seed, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ArgumentError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ProtocolError& e) {
    err << "protocol error: " << e.what() << '\n';
    return kExitFailure;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace inbl::cli
