#include "loopsim/bigint.hpp"

#include "loopsim/errors.hpp"

namespace loopsim {

BigInt binomial(long n, long k) {
  if (n < 0 || k < 0 || k > n) return 0;
  BigInt result;
  mpz_bin_uiui(result.get_mpz_t(), static_cast<unsigned long>(n),
               static_cast<unsigned long>(k));
  return result;
}

std::string fixed_point_decimal(const BigInt& numerator, const BigInt& denominator,
                                int digits) {
  if (denominator <= 0) throw DomainError("fixed_point_decimal: denominator must be > 0");
  if (digits < 0) throw DomainError("fixed_point_decimal: digits must be >= 0");
  const bool negative = numerator < 0;
  const BigInt magnitude = abs(numerator);
  BigInt scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits));
  // Half-up rounding: floor((2 * magnitude * scale + denominator) / (2 * denominator)).
  const BigInt scaled = (magnitude * scale * 2 + denominator) / (denominator * 2);
  const BigInt whole = scaled / scale;
  const BigInt frac = scaled % scale;
  std::string out = whole.get_str();
  if (digits > 0) {
    std::string f = frac.get_str();
    f.insert(0, static_cast<std::size_t>(digits) - f.size(), '0');
    out += "." + f;
  }
  if (negative && scaled != 0) out.insert(0, "-");
  return out;
}

}  // namespace loopsim
