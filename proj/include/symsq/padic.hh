#ifndef SYMSQ_PADIC_HH
#define SYMSQ_PADIC_HH

/*
 * Unramified p-adic arithmetic: Z_p[x]/(H) with H monic irreducible of
 * degree f over F_p, coefficients held modulo p^prec.
 *
 * Elements are Laurent-normalised, value = p^val * unit, and carry a
 * relative precision rel: the unit vector is trusted modulo p^rel.
 * Addition can cancel leading digits and division by factorials loses
 * them, so rel shrinks exactly the way the ultrametric says it must;
 * absprec() = val + rel is the honest "known modulo p^absprec" bound a
 * result can be compared at.  A result that cancels below its known
 * precision degenerates to an "unknown zero": rel = 0, absprec = what
 * survived.  Exact zero has absprec effectively infinite.
 *
 * H is chosen deterministically: the monic irreducible of degree f whose
 * coefficient vector (c_0..c_{f-1}), read as a base-p integer, is smallest.
 * The search runs in plain uint64 residue arithmetic with cheap
 * linear-factor rejection before the Rabin test, and the result is cached
 * per (p, f), so contexts at several precisions share one search.
 */

#include <cstdint>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "symsq/util.hh"

namespace symsq::padic {

struct PadicCtx {
  uint64_t p = 0;
  unsigned f = 1;
  unsigned prec = 1;
  mpz_class pM;                              /* p^prec */
  std::vector<mpz_class> H;                  /* ascending, monic, degree f */
  std::vector<std::vector<mpz_class>> red;   /* x^e mod H for f <= e <= 2f-2 */
};

/* shared registry, one context per (p, f, prec); p must be an odd prime */
const PadicCtx& padic_ctx(uint64_t p, unsigned f, unsigned prec);

class Padic {
public:
  Padic() : ctx_(nullptr), val_(0), rel_(0) {}

  static Padic zero(const PadicCtx& c);
  /* zero as far as anyone knows: O(p^absprec) */
  static Padic unknown_zero(const PadicCtx& c, long absprec);
  static Padic from_rational(const PadicCtx& c, const mpq_class& q);
  static Padic from_long(const PadicCtx& c, long v) {
    return from_rational(c, mpq_class(v));
  }
  /* p^shift * (polynomial with the given coefficients), full precision */
  static Padic from_vec(const PadicCtx& c, std::vector<mpz_class> u, long shift);

  const PadicCtx& ctx() const;
  bool is_exact_zero() const;
  /* zero at its known precision (includes exact zero) */
  bool is_zero() const { return rel_ == 0; }
  long val() const;            /* fails on anything zero-ish */
  unsigned relprec() const { return rel_; }
  long absprec() const;

  Padic add(const Padic& o) const;
  Padic sub(const Padic& o) const;
  Padic neg() const;
  Padic mul(const Padic& o) const;
  Padic mul_q(const mpq_class& q) const;
  Padic inv() const;
  Padic div(const Padic& o) const { return mul(o.inv()); }
  Padic pow(long e) const;

  /* the root of unity congruent to this unit mod p */
  Padic teichmuller() const;
  /* one-unit logarithm and its inverse; both need p odd and val >= 1
   * on the relevant side, and fail out of domain */
  Padic log1() const;
  Padic exp1() const;

  /* equal modulo p^k; fails if either side is not known that far */
  bool eq_mod(const Padic& o, long k) const;

  /* value as an integer in [0, p^k) for scalar (f = 1) nonnegative elements */
  mpz_class lift_int(long k) const;
  /* base-p digits of lift_int(k) */
  std::vector<uint64_t> digits(long k) const;

  /* unit coefficient vector reduced mod p (residue field image) */
  std::vector<uint64_t> residue() const;

  /* re-express a scalar (f = 1) element in another context at the same p,
   * keeping the honest precision */
  Padic scalar_to(const PadicCtx& c2) const;

  std::string str() const;

private:
  const PadicCtx* ctx_;
  long val_;
  unsigned rel_;                /* 0 means zero at precision val_ */
  std::vector<mpz_class> u_;    /* unit part, length f, coeffs mod p^prec */

  static Padic make(const PadicCtx& c, std::vector<mpz_class> u, long shift,
                    long known_abs);
};

inline Padic operator+(const Padic& a, const Padic& b) { return a.add(b); }
inline Padic operator-(const Padic& a, const Padic& b) { return a.sub(b); }
inline Padic operator*(const Padic& a, const Padic& b) { return a.mul(b); }
inline Padic operator/(const Padic& a, const Padic& b) { return a.div(b); }

/* deterministic primitive n-th root of unity in the context's field;
 * needs gcd(n, p) = 1 and n | p^f - 1.  Per prime power q^a dividing n the
 * residue root is the candidate of exact order q^a whose coefficient
 * vector, read as a base-p integer, is smallest; the composite root is the
 * CRT product of those, Hensel-lifted to full precision. */
Padic padic_root_of_unity(const PadicCtx& c, uint64_t n);

/* Teichmuller representative of r in Z_p, as an integer mod p^prec */
mpz_class teichmuller_int(uint64_t r, uint64_t p, unsigned prec);

}  // namespace symsq::padic

#endif
