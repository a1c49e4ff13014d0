#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <json.hpp>

#include "loopsim/bigint.hpp"
#include "loopsim/circuit.hpp"

namespace loopsim::cli {

/// Entry point for the `loopsim` binary (subcommands: sample,
/// estimate-memory, validate, count-space, bounds). Returns the process exit
/// code; all diagnostics go to stderr as one-line JSON.
int run(int argc, const char* const* argv);

// Document builders behind the subcommands, exposed so tests can exercise the
// exact emitted structures in-process. Big integers are serialized as decimal
// strings throughout (they exceed 64 bits).

/// {"mean","p25","p50","p75","p95","N","R"} from N heuristic memory samples.
nlohmann::json estimate_memory_document(const circuit::LoopArchitecture& arch,
                                        std::size_t samples, std::uint64_t seed,
                                        int workers,
                                        std::vector<BigInt>* raw_peaks = nullptr);

/// Without outcome: final-space count, heights, permutation and per-slot
/// maxima after the full circuit. With outcome: the per-event counts and peak
/// of the progressive replay.
nlohmann::json count_space_document(const circuit::LoopArchitecture& arch,
                                    const std::optional<std::vector<int>>& outcome);

/// {"R", "runtime_class"} with the structured runtime record (null for
/// non-power-law loop vectors).
nlohmann::json bounds_document(const circuit::LoopArchitecture& arch);

/// Paired true-vs-heuristic memory statistics plus their quantile ratios.
/// True samples redraw angles per sample index. Refuses (ConfigError) when
/// fock_dimension(R, photons) exceeds `cap`.
nlohmann::json validate_document(const circuit::LoopArchitecture& arch,
                                 std::size_t samples, std::uint64_t seed,
                                 int workers, const BigInt& cap);

}  // namespace loopsim::cli
