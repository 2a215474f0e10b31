#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

namespace mixedsdp {

using Rational = mpq_class;
using BigInt = mpz_class;

inline std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

inline Rational rational_from_string(const std::string& text) {
  Rational q(text, 10);
  q.canonicalize();
  return q;
}

inline double to_double(const Rational& q) { return q.get_d(); }

// Number of bits needed to represent q exactly as a binary fraction mantissa,
// or a large value when the denominator is not a power of two.
inline std::size_t exact_bits(const Rational& q) {
  const BigInt& den = q.get_den();
  if (mpz_popcount(den.get_mpz_t()) != 1) return SIZE_MAX;
  BigInt num = abs(q.get_num());
  if (num == 0) return 0;
  // strip trailing zeros, the remaining odd part is the mantissa
  std::size_t tz = mpz_scan1(num.get_mpz_t(), 0);
  return mpz_sizeinbase(num.get_mpz_t(), 2) - tz;
}

inline BigInt binomial(unsigned n, unsigned k) {
  BigInt r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

inline BigInt factorial(unsigned n) {
  BigInt r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return r;
}

inline BigInt power(unsigned long base, unsigned long exp) {
  BigInt r;
  mpz_ui_pow_ui(r.get_mpz_t(), base, exp);
  return r;
}

inline BigInt multinomial(const std::vector<int>& parts) {
  unsigned total = 0;
  for (int p : parts) total += static_cast<unsigned>(p);
  BigInt r = factorial(total);
  for (int p : parts) r /= factorial(static_cast<unsigned>(p));
  return r;
}

}  // namespace mixedsdp
