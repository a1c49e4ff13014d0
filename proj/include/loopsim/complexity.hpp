#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "loopsim/bigint.hpp"
#include "loopsim/circuit.hpp"
#include "loopsim/lattice.hpp"
#include "loopsim/rng.hpp"

namespace loopsim::complexity {

/// Per-event lattice-path counts of a progressive replay and their maximum:
/// the memory it takes to run the simulation of one outcome.
struct MemoryTrace {
  std::vector<BigInt> per_step_counts;
  BigInt peak;
};

/// Replay the progressive schedule on the lattice tracker for a fixed
/// outcome, recording the downset count after every event (gates and
/// measurements). Angle-free and amplitude-free. Throws
/// ImpossibleOutcomeError for outcomes outside the reachable lattice.
MemoryTrace memory_of_outcome(const circuit::LoopArchitecture& arch,
                              const std::vector<int>& outcome);

/// Exact rational measurement marginals on a permuted cumulative space:
/// p(x) = (paths with step x at the slot's lattice mode) / (all paths).
std::map<int, BigRat> heuristic_marginals(const lattice::PCS& p, int slot);

struct HeuristicSample {
  std::vector<int> outcome;
  MemoryTrace trace;
  BigRat probability;  ///< chained heuristic probability of the outcome
};

/// Sample an outcome uniformly over the feasible set: evolve the tracker
/// through ALL gates first, then measure modes 0..m-1 on the final space with
/// exact count-ratio marginals (the chained product telescopes to
/// 1 / |final downset|, hence exact uniformity). Sampling measurements
/// mid-schedule instead would NOT be uniform: coupling a later mode after an
/// earlier measurement reweights the conditional space. The memory trace is
/// produced by replaying the progressive schedule for the sampled outcome, so
/// it equals memory_of_outcome(arch, outcome) exactly.
HeuristicSample heuristic_sample(const circuit::LoopArchitecture& arch,
                                 rng::Xoshiro256& gen);

/// Summary statistics of peak-memory samples. Quantiles are nearest-rank
/// (no interpolation): sample ceil(p*N/100) of the ascending order statistics.
struct ComplexityStats {
  std::size_t count = 0;
  BigRat mean;
  BigInt p25, p50, p75, p95;
  BigInt min, max;
};

ComplexityStats batch_stats(const std::vector<BigInt>& peaks);

/// Structured runtime class for power-law loop vectors (1, l, l^2, ...):
///   l == 1: O(m * Lambda^3 * 2.6^Lambda)
///   l >  1: O(m * Lambda * l^(2(Lambda-1)) * 2.6^(l^(Lambda-1)))
/// kept as factors and exponents, not collapsed to a float.
struct RuntimeClass {
  int ell = 0;             ///< power-law base of the loop lengths
  int levels = 0;          ///< Lambda, the number of loops
  double base = 2.6;       ///< base of the exponential factor
  BigInt exponent;         ///< Lambda (ell == 1) or ell^(Lambda-1)
  BigInt polynomial_factor;///< Lambda^3 (ell == 1) or Lambda * ell^(2(Lambda-1))
  std::string expression;  ///< human-readable form including the symbolic m
};

struct Bounds {
  int mode_count = 0;
  long long relevant_modes = 0;       ///< R = 1 + sum of loop lengths
  std::optional<RuntimeClass> runtime;///< only for power-law loop vectors
};

Bounds theoretical_bounds(const std::vector<int>& loop_lengths, int mode_count);

}  // namespace loopsim::complexity
