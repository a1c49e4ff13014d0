#pragma once

#include <array>
#include <cstdint>

#include "loopsim/bigint.hpp"

namespace loopsim::rng {

/// xoshiro256** generator. Hand-rolled (with a SplitMix64 seeder) instead of
/// <random> engines because the standard distributions are not bit-reproducible
/// across standard-library implementations, and byte-identical reruns are part
/// of the CLI contract.
class Xoshiro256 {
 public:
  explicit Xoshiro256(std::uint64_t seed);

  /// Next raw 64-bit word.
  std::uint64_t next();

  /// Uniform double in [0, 1) with 53 bits of resolution.
  double uniform01();

  /// Uniform integer in [0, bound) for bound >= 1, by rejection over 64-bit
  /// limbs; exact (no floating point involved).
  BigInt below(const BigInt& bound);

 private:
  std::array<std::uint64_t, 4> state_;
};

/// Stateless SplitMix64 finalizer (used for stream derivation).
std::uint64_t mix64(std::uint64_t x);

/// Derive an independent, reproducible stream for (master seed, run index,
/// purpose tag). Identical triples always yield identical streams; runs can be
/// distributed over any number of workers without changing results.
Xoshiro256 derive_stream(std::uint64_t master_seed, std::uint64_t index,
                         std::uint64_t tag);

// Purpose tags for derived streams (arbitrary distinct constants).
inline constexpr std::uint64_t kTagAngles = 0x616e676c65ULL;          // angle draws
inline constexpr std::uint64_t kTagSample = 0x73616d706cULL;          // true sampling
inline constexpr std::uint64_t kTagHeuristic = 0x686575ULL;           // heuristic draws
inline constexpr std::uint64_t kTagValidateAngles = 0x76616e67ULL;    // per-sample angles

}  // namespace loopsim::rng
