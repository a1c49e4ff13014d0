#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "loopsim/circuit.hpp"
#include "loopsim/rng.hpp"

namespace loopsim::progressive {

/// One progressive sample: the measured occupation per global mode, the
/// sparse-support size after every schedule event, and the exact probability
/// of the full record (product of conditional marginals; with loss configured
/// this includes the environment-mode marginals, i.e. it is the probability of
/// the whole loss trajectory).
struct SampleRecord {
  std::vector<int> outcome;
  std::vector<std::size_t> support_trace;
  std::size_t peak_support = 0;
  double chained_probability = 1.0;
  int photons_lost = 0;
};

/// Draw one sample by strong simulation of the progressive schedule:
/// components evolve the sparse state, each Measure samples its marginal by
/// inverse CDF over ascending occupations and collapses. `max_support` > 0
/// aborts with SupportLimitError when the live support exceeds it.
SampleRecord sample_once(const circuit::LoopArchitecture& arch, rng::Xoshiro256& gen,
                         std::size_t max_support = 0);

/// Exact probability of a complete outcome, by replaying the schedule with
/// every measurement forced; returns 0 as soon as a conditional marginal
/// vanishes. Requires loss == 0.
double outcome_probability(const circuit::LoopArchitecture& arch,
                           const std::vector<int>& outcome);

/// `count` independent samples; run i uses the stream derived from
/// (master_seed, i), so results are byte-identical across reruns and across
/// any worker count. Results are ordered by run index.
std::vector<SampleRecord> run_batch(const circuit::LoopArchitecture& arch,
                                    std::size_t count, std::uint64_t master_seed,
                                    int workers = 1, std::size_t max_support = 0);

}  // namespace loopsim::progressive
