#pragma once

#include <gmpxx.h>

#include <string>

namespace loopsim {

/// Arbitrary-precision integer; lattice-path counts exceed 64 bits long before
/// the interesting parameter regimes are reached.
using BigInt = mpz_class;

/// Exact rational of BigInts; used for heuristic probabilities so that chained
/// products stay exact instead of underflowing.
using BigRat = mpq_class;

/// Exact binomial coefficient C(n, k); returns 0 for k < 0 or k > n.
BigInt binomial(long n, long k);

/// Rounded decimal rendering of numerator/denominator with `digits` fractional
/// digits (half-up), e.g. (7, 2, 6) -> "3.500000". Denominator must be > 0.
std::string fixed_point_decimal(const BigInt& numerator, const BigInt& denominator,
                                int digits);

}  // namespace loopsim
