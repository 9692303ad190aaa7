#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace urnlab {

// Exact rational arithmetic throughout the library rides on GMP.
// All quantities that are rational in closed form (spectral data,
// transition probabilities, moment tables, rising-factorial ratios)
// stay exact; only Gamma-function values are floating point.
using Rational = mpq_class;

inline Rational make_rational(std::int64_t num, std::int64_t den = 1) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  Rational r(static_cast<long>(num), static_cast<long>(den));
  r.canonicalize();
  return r;
}

inline double to_double(const Rational &r) { return r.get_d(); }

// Serialized as "num/den" ("num" when den == 1), the exact CSV form.
inline std::string to_string(const Rational &r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

inline Rational pow_int(const Rational &base, unsigned long e) {
  Rational out;
  mpz_pow_ui(out.get_num_mpz_t(), base.get_num_mpz_t(), e);
  mpz_pow_ui(out.get_den_mpz_t(), base.get_den_mpz_t(), e);
  out.canonicalize();
  return out;
}

// x (x+1) ... (x+k-1); equals Gamma(x+k)/Gamma(x) for integer k >= 0.
inline Rational rising_factorial(const Rational &x, unsigned long k) {
  Rational out(1);
  Rational term = x;
  for (unsigned long i = 0; i < k; ++i) {
    out *= term;
    term += 1;
  }
  return out;
}

inline Rational factorial(unsigned long n) {
  Rational out;
  mpz_fac_ui(out.get_num_mpz_t(), n);
  return out;
}

}  // namespace urnlab
