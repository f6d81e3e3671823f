#ifndef SYMSQ_CYCLOTOMIC_HH
#define SYMSQ_CYCLOTOMIC_HH

/*
 * Exact arithmetic in cyclotomic fields Q(zeta_m).
 *
 * An element is a rational vector of length phi(m) in the power basis
 * 1, zeta, ..., zeta^{phi(m)-1} modulo the m-th cyclotomic polynomial.
 * Representation is unique, so equality is coefficient equality after
 * lifting both operands to the compositum Q(zeta_lcm).  All reductions
 * x^e -> power basis are precomputed per order in a shared registry
 * (integer rows, since Phi_m is monic over Z) and reused; the registry is
 * guarded by a mutex, so the arithmetic is safe under OpenMP.
 *
 * Orders stay modest here (a few hundred at most, from Gauss sums of
 * characters to modulus ~24 times their value order), so schoolbook
 * convolution plus table folding is the right tool.
 */

#include <string>
#include <vector>

#include <gmpxx.h>

#include "symsq/ball.hh"
#include "symsq/util.hh"

namespace symsq::exactnum {

struct CycloTables {
  unsigned m = 1;
  unsigned phi = 1;
  /* Phi_m coefficients, ascending degree; monic of degree phi */
  std::vector<mpz_class> minpoly;
  /* red[e - phi] = coordinates of x^e in the power basis, phi <= e <= emax
   * with emax = max(m-1, 2 phi - 2), enough for products and order lifts */
  std::vector<std::vector<mpz_class>> red;
};

const CycloTables& cyclo_tables(unsigned m);

class Cyclo {
public:
  Cyclo() : m_(1), c_(1, mpq_class(0)) {}
  static Cyclo zero(unsigned m = 1);
  static Cyclo one(unsigned m = 1);
  static Cyclo rational(const mpq_class& q, unsigned m = 1);
  static Cyclo integer(long v, unsigned m = 1) {
    return rational(mpq_class(v), m);
  }
  /* zeta_m^k, any integer k */
  static Cyclo root(unsigned m, long k);

  unsigned order() const { return m_; }
  const std::vector<mpq_class>& coeffs() const { return c_; }

  bool is_zero() const;
  bool is_rational() const;
  /* throws not_rational when the element has a nonzero zeta part */
  mpq_class to_rational() const;

  /* re-express in Q(zeta_M); m must divide M */
  Cyclo lift(unsigned M) const;

  Cyclo add(const Cyclo& o) const;
  Cyclo sub(const Cyclo& o) const;
  Cyclo mul(const Cyclo& o) const;
  Cyclo mul_q(const mpq_class& q) const;
  Cyclo neg() const;
  /* Galois twist zeta -> zeta^j, gcd(j, m) = 1 */
  Cyclo galois(long j) const;
  Cyclo conj() const { return galois(-1); }
  /* exact inverse via the multiplication matrix; throws division_by_zero */
  Cyclo inv() const;
  Cyclo pow(long e) const;

  bool eq(const Cyclo& o) const;
  bool operator==(const Cyclo& o) const { return eq(o); }
  bool operator!=(const Cyclo& o) const { return !eq(o); }

  std::string str() const;
  /* canonical serialization, usable as a cache key component */
  std::string key() const;

private:
  explicit Cyclo(unsigned m) : m_(m), c_(cyclo_tables(m).phi, mpq_class(0)) {}
  /* fold a raw coefficient vector of length >= phi back into the basis */
  static Cyclo reduce(unsigned m, std::vector<mpq_class> raw);

  unsigned m_;
  std::vector<mpq_class> c_;
};

inline Cyclo operator+(const Cyclo& a, const Cyclo& b) { return a.add(b); }
inline Cyclo operator-(const Cyclo& a, const Cyclo& b) { return a.sub(b); }
inline Cyclo operator*(const Cyclo& a, const Cyclo& b) { return a.mul(b); }
inline Cyclo operator-(const Cyclo& a) { return a.neg(); }

/* numeric embedding zeta_m -> exp(2 pi i / m) */
Ball embed_complex(const Cyclo& z, unsigned prec);

}  // namespace symsq::exactnum

#endif
