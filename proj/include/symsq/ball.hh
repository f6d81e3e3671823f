#ifndef SYMSQ_BALL_HH
#define SYMSQ_BALL_HH

/*
 * Complex midpoint-radius arithmetic on top of MPFR.
 *
 * A Ball is (re, im, rad): the value it represents lies within distance rad
 * of the midpoint re + i*im.  Midpoints live at a per-value precision in
 * bits; the radius is a double, inflated pessimistically after every
 * operation so it covers both the propagated input radii and the midpoint
 * rounding (one ulp per component, bounded by 2^{1-prec} * |mid|).
 *
 * The radius model is deliberately simple: doubles reach 1e-308, far below
 * any tolerance used here, and every radius update goes through up(), which
 * adds a relative 2^-48 cushion that dwarfs the rounding error of the
 * double computation itself.  Transcendental kernels (log-gamma) use a
 * first-order derivative model for radius transport; the evaluation paths
 * that lean on them are additionally gated by overlap self-checks.
 */

#include <string>
#include <vector>

#include <gmpxx.h>
#include <mpfr.h>

#include "symsq/util.hh"

namespace symsq::exactnum {

/* RAII wrapper for a single mpfr_t. */
class Real {
public:
  explicit Real(mpfr_prec_t prec = 64) {
    mpfr_init2(x_, prec);
    mpfr_set_zero(x_, 1);
  }
  Real(const Real& o) {
    mpfr_init2(x_, mpfr_get_prec(o.x_));
    mpfr_set(x_, o.x_, MPFR_RNDN);
  }
  Real(Real&& o) noexcept {
    mpfr_init2(x_, mpfr_get_prec(o.x_));
    mpfr_swap(x_, o.x_);
  }
  Real& operator=(const Real& o) {
    if (this != &o) {
      mpfr_set_prec(x_, mpfr_get_prec(o.x_));
      mpfr_set(x_, o.x_, MPFR_RNDN);
    }
    return *this;
  }
  Real& operator=(Real&& o) noexcept {
    mpfr_swap(x_, o.x_);
    return *this;
  }
  ~Real() { mpfr_clear(x_); }

  mpfr_ptr get() { return x_; }
  mpfr_srcptr get() const { return x_; }

private:
  mpfr_t x_;
};

/* Pessimistic upward rounding for radius bookkeeping. */
inline double rad_up(double x) {
  if (x < 0) x = 0;
  return x + x * 0x1p-48 + 0x1p-1000;
}

class Ball {
public:
  Ball() : re_(64), im_(64), rad_(0), prec_(64) {}

  static Ball zero(unsigned prec);
  static Ball from_rational(const mpq_class& re, const mpq_class& im,
                            unsigned prec);
  static Ball from_long(long re, unsigned prec) {
    return from_rational(mpq_class(re), mpq_class(0), prec);
  }
  static Ball from_double(double re, double im, double rad, unsigned prec);
  /* decimal strings at full precision; parse rounding goes into the radius */
  static Ball from_strings(const std::string& re, const std::string& im,
                           double rad, unsigned prec);
  static Ball pi(unsigned prec);       /* cached, thread safe */
  static Ball i_unit(unsigned prec);

  unsigned prec() const { return prec_; }
  double rad() const { return rad_; }
  mpfr_srcptr re() const { return re_.get(); }
  mpfr_srcptr im() const { return im_.get(); }
  double re_d() const { return mpfr_get_d(re_.get(), MPFR_RNDN); }
  double im_d() const { return mpfr_get_d(im_.get(), MPFR_RNDN); }

  /* upper / lower bounds for |value| over the whole ball */
  double abs_upper() const;
  double abs_lower() const;
  /* lower bound for Re(value) over the ball */
  double re_lower() const;
  double re_upper() const;

  bool contains_zero() const { return abs_lower() <= 0; }
  bool is_exact_int() const;

  Ball add(const Ball& o) const;
  Ball sub(const Ball& o) const;
  Ball mul(const Ball& o) const;
  Ball mul_q(const mpq_class& q) const;
  Ball neg() const;
  Ball conj() const;
  Ball inv() const; /* throws division_by_zero if the ball meets 0 */
  Ball div(const Ball& o) const { return mul(o.inv()); }

  Ball sqrt_principal() const; /* ball must exclude 0 unless exact 0 */
  Ball exp() const;
  Ball log() const; /* principal; ball must exclude 0 */
  Ball pow_int(long e) const;
  Ball pow(const Ball& s) const { return log().mul(s).exp(); }
  Ball abs_ball() const; /* |z| as a real ball */

  /* true iff the two balls intersect (midpoint distance <= rad sum) */
  bool overlaps(const Ball& o) const;
  /* upper bound on |mid(this) - mid(o)| */
  double mid_distance(const Ball& o) const;

  std::string str(int digits = 20) const;

private:
  Ball(unsigned prec, double rad) : re_(prec), im_(prec), rad_(rad), prec_(prec) {}
  void add_round_eps();
  static double mag_upper(mpfr_srcptr re, mpfr_srcptr im);

  Real re_, im_;
  double rad_;
  unsigned prec_;

  friend Ball lngamma(const Ball& z);
};

inline Ball operator+(const Ball& a, const Ball& b) { return a.add(b); }
inline Ball operator-(const Ball& a, const Ball& b) { return a.sub(b); }
inline Ball operator*(const Ball& a, const Ball& b) { return a.mul(b); }
inline Ball operator/(const Ball& a, const Ball& b) { return a.div(b); }
inline Ball operator-(const Ball& a) { return a.neg(); }

/* n^s for integer n >= 1 (exact log of n, then exp). */
Ball npow(unsigned long n, const Ball& s);

/*
 * Principal log-gamma by Stirling with argument shifting: the argument is
 * pushed right until its real part clears a precision-dependent threshold,
 * the Binet tail is bounded by the first omitted term times the classical
 * secant factor, and the shift is unwound with principal logs (safe in the
 * right half plane).  Throws bad_input when the midpoint has Re <= 0.
 */
Ball lngamma(const Ball& z);

/*
 * Truncated Taylor expansion f(s + eps) = sum_j a[j] eps^j, used to carry
 * derivatives through the Euler-Maclaurin and Dirichlet series plumbing.
 */
class Jet {
public:
  Jet(unsigned terms, unsigned prec)
      : a(terms, Ball::zero(prec)) {}
  static Jet constant(const Ball& v, unsigned terms);
  static Jet variable(const Ball& v, unsigned terms); /* v + eps */
  /* c0 * exp(L * eps) = sum c0 L^j / j! eps^j */
  static Jet exp_affine(const Ball& c0, const Ball& L, unsigned terms);

  unsigned size() const { return static_cast<unsigned>(a.size()); }
  Jet add(const Jet& o) const;
  Jet sub(const Jet& o) const;
  Jet mul(const Jet& o) const;
  Jet scale(const Ball& c) const;
  Jet inv() const; /* a[0] must exclude 0 */
  /* j-th derivative value: a[j] * j! */
  Ball derivative(unsigned j) const;

  std::vector<Ball> a;
};

}  // namespace symsq::exactnum

#endif
