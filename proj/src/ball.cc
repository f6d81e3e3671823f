#include "symsq/ball.hh"

#include <cmath>
#include <map>
#include <mutex>

namespace symsq::exactnum {

double Ball::mag_upper(mpfr_srcptr re, mpfr_srcptr im) {
  mpfr_t h;
  mpfr_init2(h, 53);
  mpfr_hypot(h, re, im, MPFR_RNDU);
  double out = mpfr_get_d(h, MPFR_RNDU);
  mpfr_clear(h);
  return out;
}

void Ball::add_round_eps() {
  /* one ulp per component after an MPFR op, covered by 2^{1-prec}|mid| */
  double m = mag_upper(re_.get(), im_.get());
  rad_ = rad_up(rad_ + std::ldexp(m, 1 - static_cast<int>(prec_)));
}

Ball Ball::zero(unsigned prec) { return Ball(prec, 0.0); }

Ball Ball::from_rational(const mpq_class& re, const mpq_class& im,
                         unsigned prec) {
  Ball b(prec, 0.0);
  int tr = mpfr_set_q(b.re_.get(), re.get_mpq_t(), MPFR_RNDN);
  int ti = mpfr_set_q(b.im_.get(), im.get_mpq_t(), MPFR_RNDN);
  /* the ternary value tells us whether prec bits held the value exactly;
   * only pad the radius when rounding actually happened */
  if (tr != 0 || ti != 0) b.add_round_eps();
  return b;
}

Ball Ball::from_double(double re, double im, double rad, unsigned prec) {
  Ball b(prec, rad_up(rad));
  mpfr_set_d(b.re_.get(), re, MPFR_RNDN);
  mpfr_set_d(b.im_.get(), im, MPFR_RNDN);
  return b;
}

Ball Ball::from_strings(const std::string& re, const std::string& im,
                        double rad, unsigned prec) {
  Ball b(prec, rad_up(rad));
  int tr = mpfr_set_str(b.re_.get(), re.c_str(), 10, MPFR_RNDN);
  int ti = mpfr_set_str(b.im_.get(), im.c_str(), 10, MPFR_RNDN);
  if (tr == -1 || ti == -1) fail(errc::io_error, "unparsable decimal string");
  b.add_round_eps(); /* decimal input is almost never binary-exact */
  return b;
}

Ball Ball::pi(unsigned prec) {
  /* mpfr_const_pi caches internally; serialize the first computation per
   * precision so OpenMP regions never race a growing cache. */
  static std::map<unsigned, Ball> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(prec);
  if (it == cache.end()) {
    Ball b(prec, 0.0);
    mpfr_const_pi(b.re_.get(), MPFR_RNDN);
    b.add_round_eps();
    it = cache.emplace(prec, b).first;
  }
  return it->second;
}

Ball Ball::i_unit(unsigned prec) {
  return from_rational(mpq_class(0), mpq_class(1), prec);
}

double Ball::abs_upper() const {
  return rad_up(mag_upper(re_.get(), im_.get()) + rad_);
}

double Ball::abs_lower() const {
  mpfr_t h;
  mpfr_init2(h, 53);
  mpfr_hypot(h, re_.get(), im_.get(), MPFR_RNDD);
  double m = mpfr_get_d(h, MPFR_RNDD);
  mpfr_clear(h);
  double out = m - rad_ - m * 0x1p-48;
  return out > 0 ? out : 0.0;
}

double Ball::re_lower() const {
  double r = mpfr_get_d(re_.get(), MPFR_RNDD);
  return r - rad_ - std::fabs(r) * 0x1p-48;
}

double Ball::re_upper() const {
  double r = mpfr_get_d(re_.get(), MPFR_RNDU);
  return r + rad_ + std::fabs(r) * 0x1p-48;
}

bool Ball::is_exact_int() const {
  return rad_ == 0 && mpfr_zero_p(im_.get()) && mpfr_integer_p(re_.get());
}

Ball Ball::add(const Ball& o) const {
  unsigned p = std::max(prec_, o.prec_);
  Ball out(p, rad_up(rad_ + o.rad_));
  mpfr_add(out.re_.get(), re_.get(), o.re_.get(), MPFR_RNDN);
  mpfr_add(out.im_.get(), im_.get(), o.im_.get(), MPFR_RNDN);
  out.add_round_eps();
  return out;
}

Ball Ball::sub(const Ball& o) const { return add(o.neg()); }

Ball Ball::mul(const Ball& o) const {
  unsigned p = std::max(prec_, o.prec_);
  double ma = mag_upper(re_.get(), im_.get());
  double mb = mag_upper(o.re_.get(), o.im_.get());
  Ball out(p, rad_up(ma * o.rad_ + mb * rad_ + rad_ * o.rad_));
  mpfr_t t1, t2;
  mpfr_init2(t1, p);
  mpfr_init2(t2, p);
  /* (a+bi)(c+di) = (ac - bd) + (ad + bc) i */
  mpfr_mul(t1, re_.get(), o.re_.get(), MPFR_RNDN);
  mpfr_mul(t2, im_.get(), o.im_.get(), MPFR_RNDN);
  mpfr_sub(out.re_.get(), t1, t2, MPFR_RNDN);
  mpfr_mul(t1, re_.get(), o.im_.get(), MPFR_RNDN);
  mpfr_mul(t2, im_.get(), o.re_.get(), MPFR_RNDN);
  mpfr_add(out.im_.get(), t1, t2, MPFR_RNDN);
  mpfr_clear(t1);
  mpfr_clear(t2);
  /* the intermediate products round too; fold an extra ulp layer in */
  out.add_round_eps();
  out.add_round_eps();
  return out;
}

Ball Ball::mul_q(const mpq_class& q) const {
  Ball out(prec_, 0.0);
  mpfr_t t;
  mpfr_init2(t, prec_);
  mpfr_set_q(t, q.get_mpq_t(), MPFR_RNDN);
  double mq = std::fabs(mpfr_get_d(t, MPFR_RNDU));
  out.rad_ = rad_up(rad_ * mq);
  mpfr_mul(out.re_.get(), re_.get(), t, MPFR_RNDN);
  mpfr_mul(out.im_.get(), im_.get(), t, MPFR_RNDN);
  mpfr_clear(t);
  out.add_round_eps();
  out.add_round_eps();
  return out;
}

Ball Ball::neg() const {
  Ball out(prec_, rad_);
  mpfr_neg(out.re_.get(), re_.get(), MPFR_RNDN);
  mpfr_neg(out.im_.get(), im_.get(), MPFR_RNDN);
  return out;
}

Ball Ball::conj() const {
  Ball out(prec_, rad_);
  mpfr_set(out.re_.get(), re_.get(), MPFR_RNDN);
  mpfr_neg(out.im_.get(), im_.get(), MPFR_RNDN);
  return out;
}

Ball Ball::inv() const {
  mpfr_t h;
  mpfr_init2(h, 53);
  mpfr_hypot(h, re_.get(), im_.get(), MPFR_RNDD);
  double magd = mpfr_get_d(h, MPFR_RNDD) * (1 - 0x1p-48);
  mpfr_clear(h);
  if (magd <= rad_)
    fail(errc::division_by_zero, "Ball::inv: ball contains zero");
  /* |1/z - 1/m| <= r / (|m| (|m| - r)) */
  Ball out(prec_, rad_up(rad_ / (magd * (magd - rad_))));
  mpfr_t den, t1, t2;
  mpfr_init2(den, prec_);
  mpfr_init2(t1, prec_);
  mpfr_init2(t2, prec_);
  mpfr_mul(t1, re_.get(), re_.get(), MPFR_RNDN);
  mpfr_mul(t2, im_.get(), im_.get(), MPFR_RNDN);
  mpfr_add(den, t1, t2, MPFR_RNDN);
  mpfr_div(out.re_.get(), re_.get(), den, MPFR_RNDN);
  mpfr_div(t1, im_.get(), den, MPFR_RNDN);
  mpfr_neg(out.im_.get(), t1, MPFR_RNDN);
  mpfr_clear(den);
  mpfr_clear(t1);
  mpfr_clear(t2);
  out.add_round_eps();
  out.add_round_eps();
  return out;
}

Ball Ball::sqrt_principal() const {
  if (rad_ == 0 && mpfr_zero_p(re_.get()) && mpfr_zero_p(im_.get()))
    return zero(prec_);
  mpfr_t h;
  mpfr_init2(h, 53);
  mpfr_hypot(h, re_.get(), im_.get(), MPFR_RNDD);
  double magd = mpfr_get_d(h, MPFR_RNDD) * (1 - 0x1p-48);
  mpfr_clear(h);
  if (magd <= rad_)
    fail(errc::division_by_zero, "Ball::sqrt: ball contains zero");
  Ball out(prec_, 0.0);
  if (mpfr_zero_p(im_.get()) && mpfr_sgn(re_.get()) > 0) {
    mpfr_sqrt(out.re_.get(), re_.get(), MPFR_RNDN);
    mpfr_set_zero(out.im_.get(), 1);
  } else {
    /* u = sqrt((|m| + a)/2), v = sign(b) sqrt((|m| - a)/2) */
    mpfr_t r, u, v, t;
    mpfr_init2(r, prec_);
    mpfr_init2(u, prec_);
    mpfr_init2(v, prec_);
    mpfr_init2(t, prec_);
    mpfr_hypot(r, re_.get(), im_.get(), MPFR_RNDN);
    mpfr_add(t, r, re_.get(), MPFR_RNDN);
    mpfr_div_ui(t, t, 2, MPFR_RNDN);
    mpfr_sqrt(u, t, MPFR_RNDN);
    mpfr_sub(t, r, re_.get(), MPFR_RNDN);
    mpfr_div_ui(t, t, 2, MPFR_RNDN);
    mpfr_sqrt(v, t, MPFR_RNDN);
    if (mpfr_sgn(im_.get()) < 0) mpfr_neg(v, v, MPFR_RNDN);
    mpfr_set(out.re_.get(), u, MPFR_RNDN);
    mpfr_set(out.im_.get(), v, MPFR_RNDN);
    mpfr_clear(r);
    mpfr_clear(u);
    mpfr_clear(v);
    mpfr_clear(t);
  }
  /* |sqrt(z) - sqrt(m)| <= r / (2 sqrt(|m| - r)) on a disc avoiding 0 */
  out.rad_ = rad_up(rad_ / (2.0 * std::sqrt(magd - rad_)));
  out.add_round_eps();
  out.add_round_eps();
  return out;
}

Ball Ball::exp() const {
  Ball out(prec_, 0.0);
  mpfr_t ea, s, c;
  mpfr_init2(ea, prec_);
  mpfr_init2(s, prec_);
  mpfr_init2(c, prec_);
  mpfr_exp(ea, re_.get(), MPFR_RNDN);
  mpfr_sin_cos(s, c, im_.get(), MPFR_RNDN);
  mpfr_mul(out.re_.get(), ea, c, MPFR_RNDN);
  mpfr_mul(out.im_.get(), ea, s, MPFR_RNDN);
  mpfr_clear(ea);
  mpfr_clear(s);
  mpfr_clear(c);
  /* |e^{m+d} - e^m| <= |e^m| (e^r - 1) */
  double m = mag_upper(out.re_.get(), out.im_.get());
  out.rad_ = rad_up(m * std::expm1(rad_));
  out.add_round_eps();
  out.add_round_eps();
  return out;
}

Ball Ball::log() const {
  mpfr_t h;
  mpfr_init2(h, 53);
  mpfr_hypot(h, re_.get(), im_.get(), MPFR_RNDD);
  double magd = mpfr_get_d(h, MPFR_RNDD) * (1 - 0x1p-48);
  mpfr_clear(h);
  if (magd <= rad_)
    fail(errc::division_by_zero, "Ball::log: ball contains zero");
  Ball out(prec_, 0.0);
  mpfr_t r;
  mpfr_init2(r, prec_);
  mpfr_hypot(r, re_.get(), im_.get(), MPFR_RNDN);
  mpfr_log(out.re_.get(), r, MPFR_RNDN);
  mpfr_atan2(out.im_.get(), im_.get(), re_.get(), MPFR_RNDN);
  mpfr_clear(r);
  /* |log z - log m| <= -log(1 - r/|m|) <= r/(|m| - r) */
  out.rad_ = rad_up(rad_ / (magd - rad_));
  out.add_round_eps();
  out.add_round_eps();
  return out;
}

Ball Ball::pow_int(long e) const {
  if (e == 0) return from_long(1, prec_);
  Ball base = e < 0 ? inv() : *this;
  unsigned long k = static_cast<unsigned long>(e < 0 ? -e : e);
  Ball acc = from_long(1, prec_);
  while (k) {
    if (k & 1) acc = acc.mul(base);
    base = base.mul(base);
    k >>= 1;
  }
  return acc;
}

Ball Ball::abs_ball() const {
  Ball out(prec_, rad_);
  mpfr_hypot(out.re_.get(), re_.get(), im_.get(), MPFR_RNDN);
  mpfr_set_zero(out.im_.get(), 1);
  out.add_round_eps();
  return out;
}

bool Ball::overlaps(const Ball& o) const {
  return mid_distance(o) <= rad_up(rad_ + o.rad_);
}

double Ball::mid_distance(const Ball& o) const {
  mpfr_t dr, di, h;
  mpfr_init2(dr, 64);
  mpfr_init2(di, 64);
  mpfr_init2(h, 64);
  mpfr_sub(dr, re_.get(), o.re_.get(), MPFR_RNDA);
  mpfr_sub(di, im_.get(), o.im_.get(), MPFR_RNDA);
  mpfr_hypot(h, dr, di, MPFR_RNDU);
  double out = mpfr_get_d(h, MPFR_RNDU);
  mpfr_clear(dr);
  mpfr_clear(di);
  mpfr_clear(h);
  return rad_up(out);
}

std::string Ball::str(int digits) const {
  char* s = nullptr;
  std::string out;
  if (mpfr_zero_p(im_.get())) {
    mpfr_asprintf(&s, "%.*Rg", digits, re_.get());
    out = s;
  } else {
    char* t = nullptr;
    mpfr_asprintf(&s, "%.*Rg", digits, re_.get());
    mpfr_asprintf(&t, "%.*Rg", digits, im_.get());
    out = std::string(s) + " + " + t + "*I";
    mpfr_free_str(t);
  }
  mpfr_free_str(s);
  char buf[48];
  std::snprintf(buf, sizeof buf, " +/- %.3e", rad_);
  return out + buf;
}

Ball npow(unsigned long n, const Ball& s) {
  if (n == 0) fail(errc::bad_input, "npow: n = 0");
  Ball nn = Ball::from_rational(mpq_class(n), mpq_class(0), s.prec());
  return nn.log().mul(s).exp();
}

/*
 * lnGamma(z) = (z - 1/2) log z - z + log(2 pi)/2
 *            + sum_{r=1}^{R} B_{2r} / (2r (2r-1) z^{2r-1}) + R_R,
 * |R_R| <= |B_{2R+2}| / ((2R+2)(2R+1) |z|^{2R+1}) * sec(arg(z)/2)^{2R+2}.
 * The argument is shifted right until Re is comfortable for the target
 * precision, which also keeps |arg z| < pi/2 so the secant factor is at
 * most sqrt(2) per power.
 */
Ball lngamma(const Ball& z) {
  unsigned p = z.prec();
  /* principal logs along the shift stay consistent off the negative axis */
  if (mpfr_sgn(z.re()) <= 0 && mpfr_zero_p(z.im()))
    fail(errc::bad_input, "lngamma: argument on the nonpositive real axis");
  double target = std::max(12.0, 0.25 * p + 6.0);
  /* shift: lnGamma(z) = lnGamma(z + K) - sum_{j<K} log(z + j) */
  Ball shifted = z;
  Ball logsum = Ball::zero(p);
  unsigned K = 0;
  while (mpfr_get_d(shifted.re(), MPFR_RNDD) < target) {
    logsum = logsum.add(shifted.log());
    shifted = shifted.add(Ball::from_long(1, p));
    ++K;
    if (K > 4096) fail(errc::bad_input, "lngamma: shift ran away");
  }
  Ball w = shifted;
  Ball out = w.sub(Ball::from_rational(mpq_class(1, 2), 0, p)).mul(w.log());
  out = out.sub(w);
  Ball two_pi = Ball::pi(p).mul_q(2);
  out = out.add(two_pi.log().mul_q(mpq_class(1, 2)));
  Ball winv = w.inv();
  Ball winv2 = winv.mul(winv);
  Ball zpow = winv; /* z^{-(2r-1)} */
  double wabs = w.abs_lower();
  double tail = 0;
  unsigned R = 0;
  for (R = 1; R <= 8 * p; ++R) {
    mpq_class coef = util::bernoulli(2 * R) / mpq_class(2 * R * (2 * R - 1));
    Ball term = zpow.mul_q(coef);
    out = out.add(term);
    zpow = zpow.mul(winv2);
    /* first omitted term bound, secant factor sqrt(2)^{2R+2} = 2^{R+1} */
    mpq_class nb = util::bernoulli(2 * R + 2);
    double bnum = std::fabs(nb.get_d());
    tail = bnum / ((2.0 * R + 2) * (2.0 * R + 1)) *
           std::pow(wabs, -(2.0 * R + 1)) * std::ldexp(1.0, R + 1);
    if (tail < std::ldexp(1.0, -static_cast<int>(p) - 8)) break;
  }
  Ball res = out.sub(logsum);
  return Ball::from_double(0, 0, tail, p).add(res);
}

Jet Jet::constant(const Ball& v, unsigned terms) {
  Jet j(terms, v.prec());
  j.a[0] = v;
  return j;
}

Jet Jet::variable(const Ball& v, unsigned terms) {
  Jet j(terms, v.prec());
  j.a[0] = v;
  if (terms > 1) j.a[1] = Ball::from_long(1, v.prec());
  return j;
}

Jet Jet::exp_affine(const Ball& c0, const Ball& L, unsigned terms) {
  Jet j(terms, c0.prec());
  Ball cur = c0;
  j.a[0] = cur;
  for (unsigned k = 1; k < terms; ++k) {
    cur = cur.mul(L).mul_q(mpq_class(1, k));
    j.a[k] = cur;
  }
  return j;
}

Jet Jet::add(const Jet& o) const {
  Jet out(size(), a[0].prec());
  for (unsigned k = 0; k < size(); ++k) out.a[k] = a[k].add(o.a[k]);
  return out;
}

Jet Jet::sub(const Jet& o) const {
  Jet out(size(), a[0].prec());
  for (unsigned k = 0; k < size(); ++k) out.a[k] = a[k].sub(o.a[k]);
  return out;
}

Jet Jet::mul(const Jet& o) const {
  Jet out(size(), a[0].prec());
  for (unsigned i = 0; i < size(); ++i)
    for (unsigned j = 0; i + j < size(); ++j)
      out.a[i + j] = out.a[i + j].add(a[i].mul(o.a[j]));
  return out;
}

Jet Jet::scale(const Ball& c) const {
  Jet out(size(), a[0].prec());
  for (unsigned k = 0; k < size(); ++k) out.a[k] = a[k].mul(c);
  return out;
}

Jet Jet::inv() const {
  Jet out(size(), a[0].prec());
  Ball inv0 = a[0].inv();
  out.a[0] = inv0;
  for (unsigned k = 1; k < size(); ++k) {
    Ball acc = Ball::zero(a[0].prec());
    for (unsigned j = 1; j <= k; ++j) acc = acc.add(a[j].mul(out.a[k - j]));
    out.a[k] = acc.neg().mul(inv0);
  }
  return out;
}

Ball Jet::derivative(unsigned j) const {
  if (j >= size()) fail(errc::bad_input, "Jet::derivative: order too large");
  return a[j].mul_q(mpq_class(util::factorial(j)));
}

}  // namespace symsq::exactnum
