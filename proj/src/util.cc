#include "symsq/util.hh"

#include <algorithm>
#include <mutex>

namespace symsq::util {

std::vector<uint64_t> primes_upto(uint64_t limit) {
  std::vector<uint64_t> out;
  if (limit < 2) return out;
  std::vector<bool> comp(limit + 1, false);
  for (uint64_t p = 2; p <= limit; ++p) {
    if (comp[p]) continue;
    out.push_back(p);
    for (uint64_t q = p * p; q <= limit; q += p) comp[q] = true;
  }
  return out;
}

bool is_prime(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::vector<std::pair<uint64_t, unsigned>> factor(uint64_t n) {
  if (n == 0) fail(errc::bad_input, "factor: n = 0");
  std::vector<std::pair<uint64_t, unsigned>> out;
  for (uint64_t d = 2; d * d <= n; ++d) {
    if (n % d) continue;
    unsigned e = 0;
    while (n % d == 0) {
      n /= d;
      ++e;
    }
    out.emplace_back(d, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

uint64_t euler_phi(uint64_t n) {
  uint64_t r = 1;
  for (auto [p, e] : factor(n)) {
    uint64_t pe = 1;
    for (unsigned i = 1; i < e; ++i) pe *= p;
    r *= pe * (p - 1);
  }
  return n == 1 ? 1 : r;
}

unsigned valuation_ui(uint64_t n, uint64_t p) {
  if (n == 0) fail(errc::division_by_zero, "valuation_ui: n = 0");
  unsigned v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

long valuation(const mpz_class& n, unsigned long p) {
  if (n == 0) fail(errc::division_by_zero, "valuation: n = 0");
  mpz_class q = n, r;
  long v = 0;
  for (;;) {
    mpz_class quo;
    mpz_fdiv_qr_ui(quo.get_mpz_t(), r.get_mpz_t(), q.get_mpz_t(), p);
    if (r != 0) break;
    q = quo;
    ++v;
  }
  return v;
}

long valuation(const mpq_class& q, unsigned long p) {
  if (q == 0) fail(errc::division_by_zero, "valuation: q = 0");
  return valuation(q.get_num(), p) - valuation(q.get_den(), p);
}

uint64_t gcd_u64(uint64_t a, uint64_t b) {
  while (b) {
    uint64_t t = a % b;
    a = b;
    b = t;
  }
  return a;
}

uint64_t lcm_u64(uint64_t a, uint64_t b) {
  if (a == 0 || b == 0) return 0;
  return a / gcd_u64(a, b) * b;
}

uint64_t powmod(uint64_t a, uint64_t e, uint64_t m) {
  mpz_class base(static_cast<unsigned long>(a)), mod(static_cast<unsigned long>(m)), out;
  mpz_powm_ui(out.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(e),
              mod.get_mpz_t());
  return out.get_ui();
}

uint64_t mult_order(uint64_t a, uint64_t m) {
  if (m == 1) return 1;
  if (gcd_u64(a % m, m) != 1) fail(errc::bad_input, "mult_order: gcd(a,m) != 1");
  uint64_t ord = euler_phi(m);
  for (auto [p, e] : factor(ord)) {
    (void)e;
    while (ord % p == 0 && powmod(a, ord / p, m) == 1) ord /= p;
  }
  return ord;
}

uint64_t primitive_root(uint64_t q, unsigned e) {
  if (q == 2) {
    if (e == 1) return 1;
    if (e == 2) return 3;
    fail(errc::bad_input, "primitive_root: (Z/2^e)^x not cyclic for e >= 3");
  }
  if (!is_prime(q) || q % 2 == 0)
    fail(errc::bad_input, "primitive_root: q must be an odd prime (or 2)");
  /* root mod q first, then check it survives mod q^2 and therefore mod q^e */
  uint64_t g = 0;
  for (uint64_t c = 2; c < q; ++c) {
    if (mult_order(c, q) == q - 1) {
      g = c;
      break;
    }
  }
  if (e == 1) return g;
  /* g lifts to every q^e exactly when it is primitive mod q^2;
   * otherwise g + q is. */
  if (mult_order(g, q * q) == q * (q - 1)) return g;
  return g + q;
}

uint64_t invmod(uint64_t a, uint64_t m) {
  mpz_class out, az(static_cast<unsigned long>(a)), mz(static_cast<unsigned long>(m));
  if (!mpz_invert(out.get_mpz_t(), az.get_mpz_t(), mz.get_mpz_t()))
    fail(errc::bad_input, "invmod: not invertible");
  return out.get_ui();
}

mpz_class invmod(const mpz_class& a, const mpz_class& m) {
  mpz_class out;
  if (!mpz_invert(out.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()))
    fail(errc::bad_input, "invmod: not invertible");
  return out;
}

mpq_class pow_q(uint64_t b, long e) {
  if (b == 0) fail(errc::bad_input, "pow_q of zero base");
  mpz_class t;
  mpz_ui_pow_ui(t.get_mpz_t(), b, (unsigned long)(e < 0 ? -e : e));
  mpq_class q(t);
  if (e < 0) q = 1 / q;
  return q;
}

/*
 * B_n via the defining recurrence sum_{k=0}^{n} C(n+1,k) B_k = 0 (n >= 1),
 * cached monotonically.  Exact rationals; n stays small enough (a few
 * hundred at most, from deep Newton node ladders) that quadratic cost in
 * the cache length is irrelevant.
 */
Rational bernoulli(unsigned n) {
  static std::vector<Rational> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  if (cache.empty()) {
    cache.push_back(Rational(1));
    cache.push_back(Rational(-1, 2));
  }
  while (cache.size() <= n) {
    unsigned m = static_cast<unsigned>(cache.size());
    if (m % 2 == 1 && m > 1) {
      cache.push_back(Rational(0));
      continue;
    }
    Rational acc(0);
    for (unsigned k = 0; k < m; ++k)
      acc += Rational(binomial(m + 1, k)) * cache[k];
    acc /= Rational(binomial(m + 1, m));
    acc = -acc;
    acc.canonicalize();
    cache.push_back(acc);
  }
  return cache[n];
}

std::vector<Rational> bernoulli_poly(unsigned n) {
  std::vector<Rational> c(n + 1);
  for (unsigned k = 0; k <= n; ++k) {
    c[k] = Rational(binomial(n, k)) * bernoulli(n - k);
    c[k].canonicalize();
  }
  return c;
}

mpz_class binomial(unsigned long n, unsigned long k) {
  mpz_class out;
  if (k > n) return 0;
  mpz_bin_uiui(out.get_mpz_t(), n, k);
  return out;
}

mpz_class factorial(unsigned long n) {
  mpz_class out;
  mpz_fac_ui(out.get_mpz_t(), n);
  return out;
}

uint64_t fnv1a64(const std::string& data) {
  uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace symsq::util
