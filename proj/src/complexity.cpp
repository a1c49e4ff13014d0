#include "loopsim/complexity.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "loopsim/errors.hpp"

namespace loopsim::complexity {

MemoryTrace memory_of_outcome(const circuit::LoopArchitecture& arch,
                              const std::vector<int>& outcome) {
  if (static_cast<int>(outcome.size()) != arch.mode_count)
    throw ContractViolationError(
        "memory_of_outcome: outcome must list one occupation per mode");
  for (int x : outcome)
    if (x < 0) throw ImpossibleOutcomeError("memory_of_outcome: occupations must be >= 0");
  lattice::Tracker tracker(arch);
  const auto schedule = circuit::progressive_schedule(arch);
  MemoryTrace trace;
  trace.per_step_counts.reserve(schedule.events.size());
  for (const auto& event : schedule.events) {
    switch (event.kind) {
      case circuit::EventKind::kGate:
        tracker.apply_gate(event.mode_a, event.mode_b);
        break;
      case circuit::EventKind::kMeasure:
        tracker.apply_measure(event.mode_a, outcome[static_cast<std::size_t>(event.mode_a)]);
        break;
      case circuit::EventKind::kLoss:
        // Unreachable: the tracker's constructor rejects loss > 0 and
        // lossless schedules contain no Loss events.
        throw UnsupportedArchitectureError("memory_of_outcome: loss is not modeled");
    }
    trace.per_step_counts.push_back(tracker.count());
  }
  trace.peak = *std::max_element(trace.per_step_counts.begin(), trace.per_step_counts.end());
  return trace;
}

std::map<int, BigRat> heuristic_marginals(const lattice::PCS& p, int slot) {
  const auto counts = lattice::marginal_counts(p, slot);
  BigInt total = 0;
  for (const auto& [x, c] : counts) total += c;
  std::map<int, BigRat> probabilities;
  for (const auto& [x, c] : counts) {
    BigRat ratio(c, total);
    ratio.canonicalize();
    probabilities[x] = ratio;
  }
  return probabilities;
}

HeuristicSample heuristic_sample(const circuit::LoopArchitecture& arch,
                                 rng::Xoshiro256& gen) {
  lattice::Tracker tracker(arch);
  tracker.evolve_all_gates();
  HeuristicSample sample;
  sample.outcome.assign(static_cast<std::size_t>(arch.mode_count), 0);
  sample.probability = 1;
  for (int mode = 0; mode < arch.mode_count; ++mode) {
    const auto counts = tracker.measure_marginals(mode);
    BigInt total = 0;
    for (const auto& [x, c] : counts) total += c;
    const BigInt draw = gen.below(total);
    BigInt cumulative = 0;
    int picked = counts.rbegin()->first;
    BigRat picked_probability(1);
    for (const auto& [x, c] : counts) {
      cumulative += c;
      if (draw < cumulative) {
        picked = x;
        picked_probability = BigRat(c, total);
        break;
      }
    }
    picked_probability.canonicalize();
    sample.probability *= picked_probability;
    sample.outcome[static_cast<std::size_t>(mode)] = picked;
    tracker.apply_measure(mode, picked);
  }
  sample.probability.canonicalize();
  sample.trace = memory_of_outcome(arch, sample.outcome);
  return sample;
}

ComplexityStats batch_stats(const std::vector<BigInt>& peaks) {
  if (peaks.empty()) throw DomainError("batch_stats: need at least one sample");
  std::vector<BigInt> sorted = peaks;
  std::sort(sorted.begin(), sorted.end());
  ComplexityStats stats;
  stats.count = sorted.size();
  BigInt sum = 0;
  for (const auto& peak : sorted) sum += peak;
  stats.mean = BigRat(sum, BigInt(static_cast<unsigned long>(sorted.size())));
  stats.mean.canonicalize();
  const auto nearest_rank = [&sorted](int percentile) {
    // 1-based rank ceil(percentile * N / 100), clamped to [1, N].
    const std::size_t rank =
        (static_cast<std::size_t>(percentile) * sorted.size() + 99) / 100;
    return sorted[std::max<std::size_t>(rank, 1) - 1];
  };
  stats.p25 = nearest_rank(25);
  stats.p50 = nearest_rank(50);
  stats.p75 = nearest_rank(75);
  stats.p95 = nearest_rank(95);
  stats.min = sorted.front();
  stats.max = sorted.back();
  return stats;
}

Bounds theoretical_bounds(const std::vector<int>& loop_lengths, int mode_count) {
  if (mode_count < 1) throw DomainError("theoretical_bounds: mode count must be >= 1");
  Bounds bounds;
  bounds.mode_count = mode_count;
  bounds.relevant_modes = circuit::relevant_modes(loop_lengths);

  // Closed-form runtime classes exist for the power-law family
  // (1, ell, ell^2, ..., ell^(Lambda-1)).
  if (loop_lengths.front() != 1) return bounds;
  const int levels = static_cast<int>(loop_lengths.size());
  const int ell = levels >= 2 ? loop_lengths[1] : 1;
  long long expected = 1;
  for (int j = 0; j < levels; ++j) {
    if (loop_lengths[static_cast<std::size_t>(j)] != expected) return bounds;
    if (j + 1 < levels) {
      expected *= ell;
      if (expected > std::numeric_limits<int>::max()) return bounds;
    }
  }

  RuntimeClass runtime;
  runtime.ell = ell;
  runtime.levels = levels;
  if (ell == 1) {
    runtime.exponent = levels;
    runtime.polynomial_factor = BigInt(levels) * levels * levels;
    runtime.expression = "m * Lambda^3 * 2.6^Lambda";
  } else {
    BigInt power;
    mpz_ui_pow_ui(power.get_mpz_t(), static_cast<unsigned long>(ell),
                  static_cast<unsigned long>(levels - 1));
    runtime.exponent = power;
    runtime.polynomial_factor = BigInt(levels) * power * power;
    runtime.expression = "m * Lambda * ell^(2*(Lambda-1)) * 2.6^(ell^(Lambda-1))";
  }
  bounds.runtime = runtime;
  return bounds;
}

}  // namespace loopsim::complexity
