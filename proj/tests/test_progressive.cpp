#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <vector>

#include "loopsim/circuit.hpp"
#include "loopsim/errors.hpp"
#include "loopsim/fock.hpp"
#include "loopsim/lattice.hpp"
#include "loopsim/progressive.hpp"
#include "oracles.hpp"

using loopsim::ContractViolationError;
using loopsim::DomainError;
using loopsim::SupportLimitError;
using loopsim::UnsupportedArchitectureError;
namespace circuit = loopsim::circuit;
namespace lattice = loopsim::lattice;
namespace progressive = loopsim::progressive;
namespace rng = loopsim::rng;

namespace {

circuit::LoopArchitecture make_arch(int m, std::vector<int> loops, std::vector<int> input,
                                    std::vector<double> thetas = {}) {
  circuit::LoopArchitecture arch;
  arch.mode_count = m;
  arch.loop_lengths = std::move(loops);
  arch.input = std::move(input);
  if (!thetas.empty()) arch.thetas = std::move(thetas);
  return arch;
}

}  // namespace

TEST_CASE("identity circuit returns the input and swap angles permute it") {
  SUBCASE("theta = 0 everywhere reproduces the input exactly") {
    const auto arch = make_arch(4, {1}, {2, 0, 1, 0}, {0.0, 0.0, 0.0});
    rng::Xoshiro256 gen(1);
    const auto record = progressive::sample_once(arch, gen);
    CHECK(record.outcome == std::vector<int>{2, 0, 1, 0});
    CHECK(record.chained_probability == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(record.photons_lost == 0);
  }
  SUBCASE("theta = pi/2 swaps the pair up to sign") {
    // B(pi/2): a^dag -> -b^dag, b^dag -> a^dag; |1,0> -> -|0,1>.
    const double half_pi = std::acos(-1.0) / 2.0;
    const auto arch = make_arch(2, {1}, {1, 0}, {half_pi});
    rng::Xoshiro256 gen(2);
    const auto record = progressive::sample_once(arch, gen);
    CHECK(record.outcome == std::vector<int>{0, 1});
    CHECK(record.chained_probability == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("outcome_probability pinned values and contracts") {
  const auto arch = make_arch(3, {1}, {1, 0, 1}, {0.0, 0.0});
  CHECK(progressive::outcome_probability(arch, {1, 0, 1}) == doctest::Approx(1.0));
  CHECK(progressive::outcome_probability(arch, {0, 1, 1}) == doctest::Approx(0.0));
  // Wrong total photon number has probability zero but is a legal query.
  CHECK(progressive::outcome_probability(arch, {0, 0, 0}) == doctest::Approx(0.0));
  CHECK(progressive::outcome_probability(arch, {5, 5, 5}) == doctest::Approx(0.0));
  CHECK_THROWS_AS(progressive::outcome_probability(arch, {1, 0}), ContractViolationError);
  CHECK_THROWS_AS(progressive::outcome_probability(arch, {1, 0, -1}),
                  ContractViolationError);
  auto lossy = arch;
  lossy.loss = 0.5;
  CHECK_THROWS_AS(progressive::outcome_probability(lossy, {1, 0, 1}),
                  UnsupportedArchitectureError);
}

TEST_CASE("outcome probabilities sum to one and match the permanent oracle") {
  auto arch = make_arch(4, {1, 2}, {1, 0, 1, 0});
  arch.thetas = std::vector<double>{0.4, 1.1, 2.3, 0.7, 1.9};
  const auto exact = oracles::dense_distribution(arch);
  double total = 0.0;
  for (const auto& occupation : oracles::enumerate_occupations(4, 2)) {
    const double p = progressive::outcome_probability(arch, occupation);
    const auto it = exact.find(occupation);
    const double reference = it == exact.end() ? 0.0 : it->second;
    CHECK(std::abs(p - reference) < 1e-10);
    total += p;
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("sampled outcomes conserve photons and carry consistent records") {
  auto arch = make_arch(5, {1, 3}, {1, 1, 0, 1, 0});
  arch.theta_seed = 7;
  rng::Xoshiro256 gen(99);
  for (int trial = 0; trial < 50; ++trial) {
    const auto record = progressive::sample_once(arch, gen);
    int total = 0;
    for (int x : record.outcome) total += x;
    CHECK(total == 3);
    CHECK(record.photons_lost == 0);
    CHECK(record.chained_probability > 0.0);
    CHECK(record.chained_probability <= 1.0 + 1e-12);
    CHECK(record.peak_support >= 1);
    CHECK(record.support_trace.size() ==
          circuit::progressive_schedule(arch).events.size());
    CHECK(record.peak_support ==
          *std::max_element(record.support_trace.begin(), record.support_trace.end()));
    // The chained probability is the probability of the outcome.
    CHECK(std::abs(progressive::outcome_probability(arch, record.outcome) -
                   record.chained_probability) < 1e-10);
  }
}

TEST_CASE("empirical distribution approaches outcome_probability") {
  auto arch = make_arch(3, {1}, {1, 1, 0});
  arch.thetas = std::vector<double>{0.9, 0.4};
  std::map<std::vector<int>, std::size_t> histogram;
  const std::size_t n = 20000;
  const auto records = progressive::run_batch(arch, n, 2025, 4);
  for (const auto& record : records) ++histogram[record.outcome];
  std::map<std::vector<int>, double> exact;
  for (const auto& occupation : oracles::enumerate_occupations(3, 2))
    exact[occupation] = progressive::outcome_probability(arch, occupation);
  CHECK(oracles::tv_distance(exact, histogram, n) < 0.02);
}

TEST_CASE("run_batch is deterministic and worker-count independent") {
  auto arch = make_arch(6, {1, 2}, {1, 0, 1, 0, 1, 0});
  arch.theta_seed = 11;
  const auto one = progressive::run_batch(arch, 40, 777, 1);
  const auto four = progressive::run_batch(arch, 40, 777, 4);
  const auto rerun = progressive::run_batch(arch, 40, 777, 4);
  REQUIRE(one.size() == 40);
  for (std::size_t i = 0; i < one.size(); ++i) {
    CHECK(one[i].outcome == four[i].outcome);
    CHECK(one[i].chained_probability == four[i].chained_probability);
    CHECK(one[i].support_trace == four[i].support_trace);
    CHECK(four[i].outcome == rerun[i].outcome);
  }
  // Sample i of a batch is the same as a direct draw from stream (seed, i).
  auto gen = rng::derive_stream(777, 5, rng::kTagSample);
  const auto direct = progressive::sample_once(arch, gen);
  CHECK(direct.outcome == one[5].outcome);
  CHECK(direct.support_trace == one[5].support_trace);
  CHECK_THROWS_AS(progressive::run_batch(arch, 0, 1, 1), DomainError);
}

TEST_CASE("live support stays inside the lattice downset image") {
  // Lock-step walk: after every schedule event, each basis state in the
  // sparse support must be a member of the tracker's reachable set, and for
  // generic angles the support should exactly fill it.
  rng::Xoshiro256 gen(31337);
  const std::vector<std::vector<int>> families = {{1}, {1, 2}, {1, 3}, {1, 2, 3}};
  for (int trial = 0; trial < 12; ++trial) {
    const int m = 2 + oracles::below(gen, 4);
    auto arch = make_arch(m, families[static_cast<std::size_t>(oracles::below(gen, 4))], {});
    arch.input.resize(static_cast<std::size_t>(m));
    int photons = 0;
    for (auto& occ : arch.input) {
      occ = oracles::below(gen, 3);
      photons += occ;
    }
    if (photons == 0) arch.input[0] = 1;
    const auto gate_count = circuit::total_gate_count(arch);
    std::vector<double> thetas(static_cast<std::size_t>(gate_count));
    // Angles away from multiples of pi/2 keep every branch amplitude nonzero.
    for (auto& theta : thetas) theta = 0.2 + 1.1 * gen.uniform01();
    arch.thetas = thetas;

    // Walk the schedule manually, mirroring sample_once, with the tracker in
    // lock step.
    lattice::Tracker tracker(arch);
    auto state = loopsim::fock::product_state({arch.input[0]});
    std::vector<int> window = {0};
    const auto slot_of = [&window](int mode) {
      const auto it = std::find(window.begin(), window.end(), mode);
      return it == window.end() ? -1 : static_cast<int>(it - window.begin());
    };
    const auto schedule = circuit::progressive_schedule(arch);
    for (const auto& event : schedule.events) {
      if (event.kind == circuit::EventKind::kGate) {
        if (slot_of(event.mode_a) < 0) {
          state = loopsim::fock::append_mode(state, arch.input[static_cast<std::size_t>(event.mode_a)]);
          window.push_back(event.mode_a);
        }
        if (slot_of(event.mode_b) < 0) {
          state = loopsim::fock::append_mode(state, arch.input[static_cast<std::size_t>(event.mode_b)]);
          window.push_back(event.mode_b);
        }
        state = loopsim::fock::apply_beamsplitter(
            state, {slot_of(event.mode_a), slot_of(event.mode_b), event.theta});
        tracker.apply_gate(event.mode_a, event.mode_b);
      } else {
        if (slot_of(event.mode_a) < 0) {
          state = loopsim::fock::append_mode(state, arch.input[static_cast<std::size_t>(event.mode_a)]);
          window.push_back(event.mode_a);
        }
        const int slot = slot_of(event.mode_a);
        const auto marginals = loopsim::fock::measurement_marginals(state, slot);
        // Take the most likely outcome to keep amplitudes healthy.
        int best = marginals.begin()->first;
        for (const auto& [x, p] : marginals)
          if (p > marginals.at(best)) best = x;
        state = loopsim::fock::collapse_and_drop(state, slot, best);
        window.erase(window.begin() + slot);
        tracker.apply_measure(event.mode_a, best);
      }
      // Window bookkeeping must agree...
      REQUIRE(window == tracker.window());
      // ...and the support must fill the reachable set exactly.
      std::set<std::vector<int>> support;
      for (const auto& [basis, amplitude] : state.terms) support.insert(basis);
      const auto reachable = oracles::pcs_image(tracker.pcs());
      CHECK(support == reachable);
    }
  }
}

TEST_CASE("max_support aborts oversized walks") {
  auto arch = make_arch(6, {1, 2}, {1, 1, 1, 1, 1, 1});
  arch.theta_seed = 3;
  rng::Xoshiro256 gen(8);
  CHECK_THROWS_AS(progressive::sample_once(arch, gen, 2), SupportLimitError);
  // A generous cap does not interfere.
  rng::Xoshiro256 gen2(8);
  const auto record = progressive::sample_once(arch, gen2, 1000000);
  CHECK(record.peak_support <= 1000000);
}

TEST_CASE("full loss removes every photon") {
  auto arch = make_arch(3, {1}, {1, 1, 1}, {0.3, 0.9});
  arch.loss = 1.0;
  rng::Xoshiro256 gen(5);
  const auto record = progressive::sample_once(arch, gen);
  CHECK(record.photons_lost == 3);
  CHECK(record.outcome == std::vector<int>{0, 0, 0});
}

TEST_CASE("partial loss splits photons between outcome and environment") {
  auto arch = make_arch(3, {1}, {1, 1, 1}, {0.7, 1.2});
  arch.loss = 0.4;
  std::size_t lost_total = 0;
  std::size_t kept_total = 0;
  const auto records = progressive::run_batch(arch, 2000, 31, 2);
  for (const auto& record : records) {
    int kept = 0;
    for (int x : record.outcome) kept += x;
    CHECK(kept + record.photons_lost == 3);
    lost_total += static_cast<std::size_t>(record.photons_lost);
    kept_total += static_cast<std::size_t>(kept);
  }
  // Loss events cover every mode/loop pass; each photon independently
  // survives with probability (1 - 0.4) per pass it sits in the loop, so a
  // noticeable fraction must vanish but not everything.
  CHECK(lost_total > 0);
  CHECK(kept_total > 0);
}
