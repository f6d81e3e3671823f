#ifndef SYMSQ_UTIL_HH
#define SYMSQ_UTIL_HH

/*
 * Elementary number-theoretic helpers shared by every module: prime sieves,
 * factorization of word-sized integers, Euler phi, multiplicative orders,
 * primitive roots of prime powers, rational Bernoulli numbers and Bernoulli
 * polynomials, p-adic valuations of GMP rationals, a seedable xorshift
 * generator for the property tests, and the error type the library throws.
 *
 * Everything here is exact; floating point never enters.
 */

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace symsq {

/* Error codes mirror the failure modes the public operations document.
 * Each throw site picks the code that names its contract violation, so
 * callers can match on code() instead of parsing messages. */
enum class errc {
  bad_input,
  denominator_at_p,
  ramified_embedding,
  ramified_character,
  out_of_branch,
  pole_at_one,
  division_by_zero,
  not_rational,
  not_convergent,
  self_check_failed,
  missing_petersson,
  missing_prime,
  insufficient_nodes,
  io_error,
  parity_violation,
  conjugation_violation,
  bad_prime,
  pole_at,
  out_of_window,
  missing_normalization,
  missing_an_star,
};

class Error : public std::runtime_error {
public:
  Error(errc c, const std::string& msg) : std::runtime_error(msg), code_(c) {}
  errc code() const { return code_; }

private:
  errc code_;
};

[[noreturn]] inline void fail(errc c, const std::string& msg) {
  throw Error(c, msg);
}

namespace util {

using Rational = mpq_class;

/* Primes up to and including limit, by plain sieve. */
std::vector<uint64_t> primes_upto(uint64_t limit);

bool is_prime(uint64_t n);

/* Factorization of n >= 1 as (prime, exponent) pairs, primes ascending. */
std::vector<std::pair<uint64_t, unsigned>> factor(uint64_t n);

uint64_t euler_phi(uint64_t n);

/* Largest e with p^e | n; n != 0. */
unsigned valuation_ui(uint64_t n, uint64_t p);

/* p-adic valuation of a nonzero GMP integer / rational (can be negative
 * for rationals).  Throws division_by_zero on zero input. */
long valuation(const mpz_class& n, unsigned long p);
long valuation(const mpq_class& q, unsigned long p);

uint64_t gcd_u64(uint64_t a, uint64_t b);
uint64_t lcm_u64(uint64_t a, uint64_t b);

/* a^e mod m, m > 0, via GMP to dodge overflow. */
uint64_t powmod(uint64_t a, uint64_t e, uint64_t m);

/* Multiplicative order of a modulo m, gcd(a, m) = 1. */
uint64_t mult_order(uint64_t a, uint64_t m);

/* Least primitive root modulo an odd prime power q^e (or modulo 2, 4).
 * Throws bad_input when the group is not cyclic. */
uint64_t primitive_root(uint64_t q, unsigned e);

/* Inverse of a mod m, gcd(a, m) = 1. */
uint64_t invmod(uint64_t a, uint64_t m);
mpz_class invmod(const mpz_class& a, const mpz_class& m);

/* b^e as an exact rational, e may be negative */
mpq_class pow_q(uint64_t b, long e);

/* Bernoulli number B_n in the t/(e^t - 1) convention, so B_1 = -1/2.
 * Values are cached; thread safe. */
Rational bernoulli(unsigned n);

/* Coefficients of the Bernoulli polynomial B_n(x), ascending in x:
 * B_n(x) = sum_k C(n,k) B_{n-k} x^k. */
std::vector<Rational> bernoulli_poly(unsigned n);

mpz_class binomial(unsigned long n, unsigned long k);
mpz_class factorial(unsigned long n);

/* xorshift64* generator: tiny, seedable, reproducible across platforms.
 * Used by the property tests and the fixture filler; never for security. */
class Rng {
public:
  explicit Rng(uint64_t seed) : s_(seed ? seed : 0x9e3779b97f4a7c15ull) {}
  uint64_t next() {
    s_ ^= s_ >> 12;
    s_ ^= s_ << 25;
    s_ ^= s_ >> 27;
    return s_ * 0x2545f4914f6cdd1dull;
  }
  /* uniform in [0, n) */
  uint64_t below(uint64_t n) { return n ? next() % n : 0; }
  /* uniform in [lo, hi] inclusive */
  int64_t range(int64_t lo, int64_t hi) {
    return lo + static_cast<int64_t>(below(static_cast<uint64_t>(hi - lo + 1)));
  }

private:
  uint64_t s_;
};

/* FNV-1a, used as the cache-file name hash.  The cache layer stores the
 * full key next to the payload and verifies it on load, so a collision
 * costs a recompute, never a wrong answer. */
uint64_t fnv1a64(const std::string& data);

}  // namespace util
}  // namespace symsq

#endif
