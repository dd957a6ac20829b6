#pragma once

#include "inbl/hats.hpp"
#include "inbl/rtw_core.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace inbl {

struct SingleProblem {};

struct DoubleProblem {
  Number p;
  Number q;
};

struct TrialConfig {
  unsigned n_bits = 32;
  std::uint64_t trials = 1;
  Seed base_seed = 0;
  Clock max_clocks = kDefaultMaxClocks;
  std::variant<SingleProblem, DoubleProblem> problem = SingleProblem{};
  /// Worker threads; 0 picks hardware concurrency. Results do not depend on it.
  unsigned threads = 0;
};

/// Independent, reproducible seed of trial `index`.
Seed derive_trial_seed(Seed base_seed, std::uint64_t index);

struct TrialStats {
  std::uint64_t trials = 0;
  std::uint64_t correct = 0;
  std::map<Clock, std::uint64_t> clocks_used;
  /// Histogram of r(k) of the drawn numbers, i.e. of -log2 |witness|.
  std::map<unsigned, std::uint64_t> witness_exponents;
  std::uint64_t witness_magnitude_mismatches = 0;

  double correctness_rate() const noexcept;
  friend bool operator==(const TrialStats&, const TrialStats&) = default;
};

struct Histogram {
  std::map<Clock, std::uint64_t> buckets;
  std::uint64_t undecided_count = 0;
  std::uint64_t incorrect_count = 0;
  std::uint64_t trials = 0;

  /// Mean decision time over decided trials.
  double mean() const noexcept;
  double fraction(Clock n) const noexcept;
  friend bool operator==(const Histogram&, const Histogram&) = default;
};

struct MatchProbability {
  unsigned n_bits = 0;
  Number p = 0;
  Number q = 0;
  Clock clocks = 0;
  std::uint64_t trials = 0;
  std::uint64_t matches = 0;
  /// Set when r(p) != r(q): the probability is exactly 0 and no trials were run.
  bool guarded = false;

  double probability() const noexcept;
};

struct OracleReport {
  bool passed = true;
  unsigned n_bits = 0;
  Clock clocks_checked = 0;
  std::vector<Number> drawn;
  std::optional<Clock> first_failure;
  std::string message;
};

struct OpCountReport {
  unsigned n_bits = 0;
  std::uint64_t per_clock_adds = 0;            // one universe evaluation
  std::uint64_t per_clock_muls = 0;
  std::uint64_t per_clock_stream_samples = 0;
  std::uint64_t draw_ops = 0;                  // one draw: product string + subtraction
  std::uint64_t single_decision_ops = 0;       // one decision clock of problem 1
  std::uint64_t double_decision_ops = 0;       // one decision clock of problem 2
  unsigned word_bits = 0;                      // width of an exact universe numerator, sign included

  std::uint64_t universe_ops() const noexcept { return per_clock_adds + per_clock_muls; }
  /// Per-clock universe ops times word width; the N^2 hardware-size proxy.
  std::uint64_t hardware_proxy() const noexcept { return universe_ops() * word_bits; }
};

TrialStats run_single_trials(const TrialConfig& cfg);

Histogram decision_time_histogram(const TrialConfig& cfg);

/// Fraction of trials in which the non-matching difference hat1 - U^(q) stays
/// zero over clocks 1..n when hat1 lost p.
MatchProbability match_probability(unsigned n_bits, Number p, Number q, Clock clocks,
                                   std::uint64_t trials, Seed seed);

inline constexpr unsigned kMaxOracleEquivalenceBits = 12;

/// Checks universe_sample and hat_sample after `drawn` against brute-force sums.
OracleReport oracle_equivalence(unsigned n_bits, Clock clocks, Seed seed,
                                std::vector<Number> drawn = {});

OpCountReport op_count_report(unsigned n_bits);

}  // namespace inbl
