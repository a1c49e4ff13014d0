#include "loopsim/progressive.hpp"

#include <algorithm>
#include <string>
#include <utility>

#include "loopsim/errors.hpp"
#include "loopsim/fock.hpp"
#include "loopsim/parallel.hpp"

namespace loopsim::progressive {

namespace {

/// Walks a progressive schedule over the sparse state, with pluggable
/// measurement choice (sampled or forced).
class Walker {
 public:
  Walker(const circuit::LoopArchitecture& arch, std::size_t max_support)
      : arch_(arch),
        schedule_(circuit::progressive_schedule(arch)),
        max_support_(max_support) {
    if (static_cast<int>(arch.input.size()) != arch.mode_count)
      throw ConfigError("sampling: input must list one occupation per mode");
    state_ = fock::product_state({arch.input[0]});
    window_ = {0};
    record_.outcome.assign(static_cast<std::size_t>(arch.mode_count), 0);
    record_.support_trace.reserve(schedule_.events.size());
  }

  /// Runs the whole schedule. `choose(marginals, global_mode)` picks each
  /// measurement outcome; returns false if a forced outcome had probability
  /// zero (the walk stops there and the record is meaningless except for its
  /// zero chained probability).
  template <typename ChooseFn>
  bool run(ChooseFn&& choose, rng::Xoshiro256* gen) {
    for (std::size_t i = 0; i < schedule_.events.size(); ++i) {
      const auto& event = schedule_.events[i];
      switch (event.kind) {
        case circuit::EventKind::kGate: {
          if (slot_of(event.mode_a) < 0) activate(event.mode_a);
          if (slot_of(event.mode_b) < 0) activate(event.mode_b);
          state_ = fock::apply_beamsplitter(
              state_, {slot_of(event.mode_a), slot_of(event.mode_b), event.theta});
          break;
        }
        case circuit::EventKind::kLoss: {
          if (slot_of(event.mode_a) < 0) activate(event.mode_a);
          auto lossy = fock::apply_loss(state_, slot_of(event.mode_a), arch_.loss, *gen);
          state_ = std::move(lossy.state);
          record_.photons_lost += lossy.photons_lost;
          record_.chained_probability *= lossy.probability;
          break;
        }
        case circuit::EventKind::kMeasure: {
          if (slot_of(event.mode_a) < 0) activate(event.mode_a);
          const int slot = slot_of(event.mode_a);
          const auto marginals = fock::measurement_marginals(state_, slot);
          const int x = choose(marginals, event.mode_a);
          const auto hit = marginals.find(x);
          const double p = hit == marginals.end() ? 0.0 : hit->second;
          record_.outcome[static_cast<std::size_t>(event.mode_a)] = x;
          record_.chained_probability *= p;
          if (p == 0.0) {
            record_.chained_probability = 0.0;
            return false;
          }
          state_ = fock::collapse_and_drop(state_, slot, x);
          window_.erase(window_.begin() + slot);
          break;
        }
      }
      note_support(i);
    }
    return true;
  }

  SampleRecord take_record() {
    record_.peak_support = record_.support_trace.empty()
                               ? 0
                               : *std::max_element(record_.support_trace.begin(),
                                                   record_.support_trace.end());
    return std::move(record_);
  }

 private:
  int slot_of(int global_mode) const {
    const auto it = std::find(window_.begin(), window_.end(), global_mode);
    return it == window_.end() ? -1 : static_cast<int>(it - window_.begin());
  }

  void activate(int global_mode) {
    state_ = fock::append_mode(state_, arch_.input[static_cast<std::size_t>(global_mode)]);
    window_.push_back(global_mode);
  }

  void note_support(std::size_t event_index) {
    const std::size_t support = state_.support_size();
    record_.support_trace.push_back(support);
    if (max_support_ > 0 && support > max_support_)
      throw SupportLimitError("live support " + std::to_string(support) +
                              " exceeds the configured limit " +
                              std::to_string(max_support_) + " after schedule event " +
                              std::to_string(event_index));
  }

  const circuit::LoopArchitecture& arch_;
  circuit::GateSchedule schedule_;
  std::size_t max_support_;
  fock::SparseState state_;
  std::vector<int> window_;
  SampleRecord record_;
};

}  // namespace

SampleRecord sample_once(const circuit::LoopArchitecture& arch, rng::Xoshiro256& gen,
                         std::size_t max_support) {
  Walker walker(arch, max_support);
  const auto choose = [&gen](const std::map<int, double>& marginals, int) {
    const double u = gen.uniform01();
    double cumulative = 0.0;
    int picked = marginals.rbegin()->first;
    for (const auto& [x, p] : marginals) {
      if (u < cumulative + p) {
        picked = x;
        break;
      }
      cumulative += p;
    }
    return picked;
  };
  walker.run(choose, &gen);
  return walker.take_record();
}

double outcome_probability(const circuit::LoopArchitecture& arch,
                           const std::vector<int>& outcome) {
  if (arch.loss > 0.0)
    throw UnsupportedArchitectureError(
        "outcome_probability: outcomes are not exclusive events under loss");
  if (static_cast<int>(outcome.size()) != arch.mode_count)
    throw ContractViolationError(
        "outcome_probability: outcome must list one occupation per mode");
  for (int x : outcome)
    if (x < 0)
      throw ContractViolationError("outcome_probability: occupations must be >= 0");
  Walker walker(arch, 0);
  const auto choose = [&outcome](const std::map<int, double>&, int global_mode) {
    return outcome[static_cast<std::size_t>(global_mode)];
  };
  if (!walker.run(choose, nullptr)) return 0.0;
  return walker.take_record().chained_probability;
}

std::vector<SampleRecord> run_batch(const circuit::LoopArchitecture& arch,
                                    std::size_t count, std::uint64_t master_seed,
                                    int workers, std::size_t max_support) {
  if (count < 1) throw DomainError("run_batch: need at least one sample");
  std::vector<SampleRecord> out(count);
  parallel_indices(count, workers, [&](std::size_t i) {
    auto gen = rng::derive_stream(master_seed, i, rng::kTagSample);
    out[i] = sample_once(arch, gen, max_support);
  });
  return out;
}

}  // namespace loopsim::progressive
