#include "loopsim/rng.hpp"

#include <vector>

#include "loopsim/errors.hpp"

namespace loopsim::rng {

namespace {

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

std::uint64_t splitmix_next(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Xoshiro256::Xoshiro256(std::uint64_t seed) {
  std::uint64_t s = seed;
  for (auto& word : state_) word = splitmix_next(s);
}

std::uint64_t Xoshiro256::next() {
  const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

double Xoshiro256::uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

BigInt Xoshiro256::below(const BigInt& bound) {
  if (bound <= 0) throw DomainError("Xoshiro256::below: bound must be >= 1");
  const std::size_t bits = mpz_sizeinbase(bound.get_mpz_t(), 2);
  const std::size_t chunks = (bits + 63) / 64;
  const unsigned top_bits = bits % 64;
  std::vector<std::uint64_t> limbs(chunks);
  // Rejection sampling over [0, 2^bits): since 2^(bits-1) <= bound, each round
  // accepts with probability > 1/2, so the loop terminates quickly.
  while (true) {
    for (auto& limb : limbs) limb = next();
    if (top_bits != 0) limbs[chunks - 1] &= ~std::uint64_t{0} >> (64 - top_bits);
    BigInt value;
    mpz_import(value.get_mpz_t(), chunks, -1, sizeof(std::uint64_t), 0, 0, limbs.data());
    if (value < bound) return value;
  }
}

Xoshiro256 derive_stream(std::uint64_t master_seed, std::uint64_t index, std::uint64_t tag) {
  // A fixed-point-free mixing cascade over (seed, tag, index); equal triples
  // give identical streams, distinct triples statistically independent ones.
  const std::uint64_t seed =
      mix64(mix64(master_seed ^ mix64(tag ^ 0x9E3779B97F4A7C15ULL)) ^
            mix64(index ^ 0xD1B54A32D192ED03ULL));
  return Xoshiro256(seed);
}

}  // namespace loopsim::rng
