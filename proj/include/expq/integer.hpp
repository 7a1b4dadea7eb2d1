#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <string>

namespace expq {

using Integer = mpz_class;

inline Integer pow2(unsigned long n) {
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), 2, n);
  return r;
}

// Number of bits of |n|; 0 for n = 0.
inline std::size_t bitLength(const Integer& n) {
  if (sgn(n) == 0) return 0;
  return mpz_sizeinbase(n.get_mpz_t(), 2);
}

inline Integer floorDiv(const Integer& a, const Integer& b) {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

inline Integer ceilDiv(const Integer& a, const Integer& b) {
  Integer r;
  mpz_cdiv_q(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

// Residue in [0, |m| - 1].
inline Integer mod(const Integer& a, const Integer& m) {
  Integer r;
  mpz_mod(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

inline Integer lcm(const Integer& a, const Integer& b) {
  Integer r;
  mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

inline Integer gcd(const Integer& a, const Integer& b) {
  Integer r;
  mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

inline bool divides(const Integer& q, const Integer& n) {
  return mpz_divisible_p(n.get_mpz_t(), q.get_mpz_t()) != 0;
}

inline std::string toString(const Integer& n) { return n.get_str(); }

// Exponent of a positive power of two, or -1 if n is not one.
inline long log2Exact(const Integer& n) {
  if (sgn(n) <= 0) return -1;
  std::size_t bits = bitLength(n);
  if (mpz_scan1(n.get_mpz_t(), 0) != bits - 1) return -1;
  return static_cast<long>(bits - 1);
}

inline std::size_t hashInteger(const Integer& n) {
  const mpz_srcptr p = n.get_mpz_t();
  std::size_t h = static_cast<std::size_t>(p->_mp_size) * 0x9E3779B97F4A7C15ULL;
  int limbs = p->_mp_size < 0 ? -p->_mp_size : p->_mp_size;
  for (int i = 0; i < limbs; ++i) {
    h ^= static_cast<std::size_t>(p->_mp_d[i]) + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

inline std::size_t hashCombine(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9E3779B97F4A7C15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace expq
