#include "inbl/experiments.hpp"

#include "inbl/detail/mix.hpp"
#include "inbl/errors.hpp"

#include <algorithm>
#include <exception>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>

namespace inbl {
namespace {

using detail::mix64;

// Runs fn(i) for i in [0, count) on up to `threads` workers and returns the
// results in index order, so the reduction never depends on scheduling.
template <typename Result, typename Fn>
std::vector<Result> run_indexed(std::uint64_t count, unsigned threads, Fn fn) {
  std::vector<Result> results(count);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, std::max<std::uint64_t>(count, 1)));

  std::vector<std::exception_ptr> errors(threads);
  auto worker = [&](unsigned w) {
    try {
      for (std::uint64_t i = w; i < count; i += threads) results[i] = fn(i);
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(worker, w);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

Number mask_for(unsigned n_bits) {
  return n_bits == 64 ? ~Number{0} : (Number{1} << n_bits) - 1;
}

// Alice's private choices in a trial come from a generator keyed off the trial
// seed; the reference noises use the trial seed itself.
std::mt19937_64 choice_rng(Seed trial_seed) { return std::mt19937_64(mix64(trial_seed ^ 0xa11ceULL)); }

void validate(const TrialConfig& cfg) {
  if (cfg.n_bits < 1 || cfg.n_bits > kMaxBits) {
    throw ArgumentError("n_bits must be in [1, 64], got " + std::to_string(cfg.n_bits));
  }
  if (cfg.trials < 1) throw ArgumentError("trials must be at least 1");
  if (cfg.max_clocks < 1) throw ArgumentError("max_clocks must be at least 1");
}

void validate_pair(unsigned n_bits, Number p, Number q) {
  require_number_in_range(p, n_bits);
  require_number_in_range(q, n_bits);
  if (p == q) throw ArgumentError("p and q must differ, got " + std::to_string(p) + " twice");
}

}  // namespace

Seed derive_trial_seed(Seed base_seed, std::uint64_t index) {
  return mix64(mix64(base_seed) + (index + 1) * detail::kGolden);
}

double TrialStats::correctness_rate() const noexcept {
  return trials ? static_cast<double>(correct) / static_cast<double>(trials) : 0.0;
}

double Histogram::mean() const noexcept {
  std::uint64_t decided = 0;
  double total = 0.0;
  for (const auto& [clocks, count] : buckets) {
    decided += count;
    total += static_cast<double>(clocks) * static_cast<double>(count);
  }
  return decided ? total / static_cast<double>(decided) : 0.0;
}

double Histogram::fraction(Clock n) const noexcept {
  const auto it = buckets.find(n);
  if (it == buckets.end() || trials == 0) return 0.0;
  return static_cast<double>(it->second) / static_cast<double>(trials);
}

double MatchProbability::probability() const noexcept {
  if (guarded || trials == 0) return 0.0;
  return static_cast<double>(matches) / static_cast<double>(trials);
}

TrialStats run_single_trials(const TrialConfig& cfg) {
  validate(cfg);
  if (!std::holds_alternative<SingleProblem>(cfg.problem)) {
    throw ArgumentError("run_single_trials needs a single-draw configuration");
  }
  struct Outcome {
    bool correct = false;
    Clock clocks = 0;
    unsigned exponent = 0;
    bool magnitude_ok = false;
  };
  const Number mask = mask_for(cfg.n_bits);
  const auto outcomes = run_indexed<Outcome>(cfg.trials, cfg.threads, [&](std::uint64_t i) {
    const Seed seed = derive_trial_seed(cfg.base_seed, i);
    auto rng = choice_rng(seed);
    const HatId drawn_from = (rng() & 1) ? HatId::Hat2 : HatId::Hat1;
    const Number k = rng() & mask;

    const ReferenceSystem alice(cfg.n_bits, seed);
    auto [hat1, hat2] = setup_hats(alice);
    if (drawn_from == HatId::Hat1) {
      hat1 = draw_number(hat1, k);
    } else {
      hat2 = draw_number(hat2, k);
    }
    const ReferenceSystem bob(cfg.n_bits, seed);
    const SingleDecision d = decide_single_draw(bob, stream_of(hat1), stream_of(hat2));

    const unsigned r = zero_bit_count(k, cfg.n_bits);
    return Outcome{d.deficient_hat == drawn_from, d.clocks_used, r,
                   d.witness.magnitude_exponent() == static_cast<int>(r)};
  });

  TrialStats stats;
  stats.trials = cfg.trials;
  for (const Outcome& o : outcomes) {
    stats.correct += o.correct;
    ++stats.clocks_used[o.clocks];
    ++stats.witness_exponents[o.exponent];
    stats.witness_magnitude_mismatches += !o.magnitude_ok;
  }
  return stats;
}

Histogram decision_time_histogram(const TrialConfig& cfg) {
  validate(cfg);
  const auto* problem = std::get_if<DoubleProblem>(&cfg.problem);
  if (!problem) throw ArgumentError("decision_time_histogram needs a double-draw configuration");
  const Number p = problem->p;
  const Number q = problem->q;
  validate_pair(cfg.n_bits, p, q);

  struct Outcome {
    bool decided = false;
    bool correct = false;
    Clock clocks = 0;
  };
  const auto outcomes = run_indexed<Outcome>(cfg.trials, cfg.threads, [&](std::uint64_t i) {
    const Seed seed = derive_trial_seed(cfg.base_seed, i);
    auto rng = choice_rng(seed);
    const bool p_from_hat1 = (rng() & 1) == 0;

    const ReferenceSystem alice(cfg.n_bits, seed);
    auto [hat1, hat2] = setup_hats(alice);
    hat1 = draw_number(hat1, p_from_hat1 ? p : q);
    hat2 = draw_number(hat2, p_from_hat1 ? q : p);

    const ReferenceSystem bob(cfg.n_bits, seed);
    const DoubleOutcome out =
        decide_double_draw(bob, p, q, stream_of(hat1), stream_of(hat2), cfg.max_clocks);
    if (const auto* d = std::get_if<DoubleDecision>(&out)) {
      return Outcome{true, d->hat1_missing == (p_from_hat1 ? p : q), d->clocks_used};
    }
    return Outcome{};
  });

  Histogram h;
  h.trials = cfg.trials;
  for (const Outcome& o : outcomes) {
    if (!o.decided) {
      ++h.undecided_count;
      continue;
    }
    ++h.buckets[o.clocks];
    h.incorrect_count += !o.correct;
  }
  return h;
}

MatchProbability match_probability(unsigned n_bits, Number p, Number q, Clock clocks,
                                   std::uint64_t trials, Seed seed) {
  validate_pair(n_bits, p, q);
  if (clocks < 1) throw ArgumentError("clocks must be at least 1");
  if (trials < 1) throw ArgumentError("trials must be at least 1");

  MatchProbability result{n_bits, p, q, clocks, trials, 0, false};
  if (zero_bit_count(p, n_bits) != zero_bit_count(q, n_bits)) {
    // |G^p| != |G^q| at every clock, so the non-matching difference never vanishes.
    result.guarded = true;
    result.trials = 0;
    return result;
  }

  const auto matched = run_indexed<char>(trials, 0, [&](std::uint64_t i) -> char {
    const ReferenceSystem ref(n_bits, derive_trial_seed(seed, i));
    const HatState hat1 = draw_number(HatState(ref), p);
    for (Clock t = 1; t <= clocks; ++t) {
      const DyadicSample without_q =
          universe_sample(ref, t) - product_string_sample(ref, q, t);
      if (!(hat1.sample(t) - without_q).is_zero()) return 0;
    }
    return 1;
  });
  for (const char m : matched) result.matches += static_cast<std::uint64_t>(m);
  return result;
}

OracleReport oracle_equivalence(unsigned n_bits, Clock clocks, Seed seed,
                                std::vector<Number> drawn) {
  if (n_bits < 1 || n_bits > kMaxOracleEquivalenceBits) {
    throw ArgumentError("oracle equivalence refuses N = " + std::to_string(n_bits) +
                        "; supported range is [1, " +
                        std::to_string(kMaxOracleEquivalenceBits) + "]");
  }
  const ReferenceSystem ref(n_bits, seed);
  if (drawn.empty()) drawn.push_back(mix64(seed ^ n_bits) & ref.max_number());

  HatState hat(ref);
  for (const Number k : drawn) hat = hat.draw(k);

  OracleReport report;
  report.n_bits = n_bits;
  report.drawn = drawn;
  for (Clock t = 1; t <= clocks; ++t) {
    if (universe_sample(ref, t) != universe_sum_oracle(ref, t)) {
      report.passed = false;
      report.first_failure = t;
      report.message = "universe differs from the sum of all product strings at clock " +
                       std::to_string(t);
      return report;
    }
    DyadicSample remaining(0, n_bits);
    for (Number k = 0; k <= ref.max_number(); ++k) {
      if (!hat.removed().contains(k)) remaining += product_string_sample(ref, k, t);
    }
    if (hat.sample(t) != remaining) {
      report.passed = false;
      report.first_failure = t;
      report.message = "hat differs from the sum over its remaining numbers at clock " +
                       std::to_string(t);
      return report;
    }
    report.clocks_checked = t;
  }
  return report;
}

OpCountReport op_count_report(unsigned n_bits) {
  const ReferenceSystem ref(n_bits, 0);
  OpCountReport report;
  report.n_bits = n_bits;

  OpCounter universe;
  universe_sample(ref, 1, &universe);
  if (universe.arithmetic() != 2ull * n_bits - 1) {
    throw std::logic_error("universe evaluation used " + std::to_string(universe.arithmetic()) +
                           " operations, expected 2N - 1");
  }
  report.per_clock_adds = universe.additions;
  report.per_clock_muls = universe.multiplications;
  report.per_clock_stream_samples = universe.stream_samples;

  const HatState hat = HatState(ref).draw(0);
  OpCounter reduced;
  hat.sample(1, &reduced);
  report.draw_ops = reduced.arithmetic() - universe.arithmetic();

  OpCounter single;
  decide_single_draw(ref, stream_of(hat), stream_of(HatState(ref)), &single);
  report.single_decision_ops = single.arithmetic();

  // r(all ones) = 0 != N = r(0): decides at the first clock.
  const Number p = ref.max_number();
  const Number q = 0;
  OpCounter dbl;
  decide_double_draw(ref, p, q, stream_of(HatState(ref).draw(p)), stream_of(HatState(ref).draw(q)),
                     1, &dbl);
  report.double_decision_ops = dbl.arithmetic();

  BigInt max_universe = boost::multiprecision::pow(BigInt(3), n_bits);
  report.word_bits = static_cast<unsigned>(boost::multiprecision::msb(max_universe)) + 2;
  return report;
}

}  // namespace inbl
