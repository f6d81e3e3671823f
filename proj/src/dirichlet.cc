#include "symsq/dirichlet.hh"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <utility>

#include "symsq/util.hh"

namespace symsq::lfun {

using exactnum::Jet;

namespace {

mpq_class frac(long num, unsigned long den) {
  mpq_class q(num, den);
  q.canonicalize();
  return q;
}

long md(long x, long m) {
  long r = x % m;
  return r < 0 ? r + m : r;
}

/*
 * Generalized Bernoulli numbers by EGF division.  With
 * N(t)/t = sum_j P_j t^j, P_j = sum_{a=1..F} chi(a) a^j / j!, and
 * D(t)/t = sum_j D_j t^j, D_j = F^{j+1}/(j+1)!, the quotient
 * Q = (N/t)/(D/t) has Q_j = B_{j,chi}/j! and the recurrence
 * Q_j = (P_j - sum_{k<j} Q_k D_{j-k}) / F.  The a = 1..F range is the
 * convention that gives the trivial character mod 1 B_1 = +1/2.
 */
struct BernEntry {
  DirichletChar chi;
  std::vector<Cyclo> q;        /* q[j] = B_{j,chi}/j! */
  std::vector<mpq_class> pw;   /* pw[a] = a^j/j! at the current top j */
  std::vector<mpq_class> dj;   /* dj[i] = F^{i+1}/(i+1)! */
};

std::map<std::string, BernEntry> g_bern;
std::mutex g_bern_mx;

}  // namespace

Cyclo bernoulli_char(unsigned n, const DirichletChar& chi) {
  std::lock_guard<std::mutex> lk(g_bern_mx);
  BernEntry& e = g_bern[chi.key()];
  if (e.q.empty()) {
    e.chi = chi;
    e.pw.assign(chi.modulus() + 1, mpq_class(1));
    e.dj.assign(1, mpq_class((unsigned long)chi.modulus()));
  }
  const uint64_t F = e.chi.modulus();
  const unsigned d = e.chi.order();
  while (e.q.size() <= n) {
    const unsigned j = (unsigned)e.q.size();
    if (j > 0) {
      for (uint64_t a = 1; a <= F; ++a) e.pw[a] *= frac((long)a, j);
      e.dj.push_back(e.dj.back() * frac((long)F, j + 1));
    }
    /* P_j grouped by value class, so the cyclotomic work scales with the
     * order rather than the modulus */
    std::vector<mpq_class> cls(d, mpq_class(0));
    for (uint64_t a = 1; a <= F; ++a) {
      long ex = e.chi.exponent_at(a);
      if (ex >= 0) cls[(size_t)ex] += e.pw[a];
    }
    Cyclo acc = Cyclo::zero();
    for (unsigned ex = 0; ex < d; ++ex)
      if (cls[ex] != 0) acc = acc.add(Cyclo::root(d, ex).mul_q(cls[ex]));
    for (unsigned k = 0; k < j; ++k)
      acc = acc.sub(e.q[k].mul_q(e.dj[j - k]));
    e.q.push_back(acc.mul_q(frac(1, F)));
  }
  return e.q[n].mul_q(mpq_class(util::factorial(n)));
}

Cyclo bernoulli_char_sum(unsigned n, const DirichletChar& chi) {
  const uint64_t F = chi.modulus();
  const unsigned d = chi.order();
  const auto poly = util::bernoulli_poly(n);
  std::vector<mpq_class> cls(d, mpq_class(0));
  for (uint64_t a = 1; a <= F; ++a) {
    long ex = chi.exponent_at(a);
    if (ex < 0) continue;
    mpq_class x = frac((long)a, F);
    mpq_class v = poly.back();
    for (size_t i = poly.size() - 1; i-- > 0;) v = v * x + poly[i];
    cls[(size_t)ex] += v;
  }
  Cyclo acc = Cyclo::zero();
  for (unsigned ex = 0; ex < d; ++ex)
    if (cls[ex] != 0) acc = acc.add(Cyclo::root(d, ex).mul_q(cls[ex]));
  return acc.mul_q(util::pow_q(F, (long)n - 1));
}

Cyclo dirichlet_L_exact(const DirichletChar& chi, long s) {
  if (s > 0) fail(errc::bad_input, "exact L-values live at integers <= 0");
  const unsigned m = (unsigned)(1 - s);
  return bernoulli_char(m, chi).mul_q(frac(-1, m));
}

Cyclo euler_factor_at(const DirichletChar& chi, uint64_t p, long x) {
  DirichletChar chi0 = chi.primitive_part();
  Cyclo v = chi0(p);
  if (v.is_zero()) return Cyclo::one();
  return Cyclo::one().sub(v.mul_q(util::pow_q(p, -x)));
}

/* ---------- complex side ---------- */

Ball hurwitz_zeta(const Ball& s, const mpq_class& a, unsigned prec,
                  unsigned order) {
  if (order > 0) return hurwitz_zeta_jet(s, a, order + 1, prec).derivative(order);
  if (sgn(a) <= 0 || a > 1) fail(errc::bad_input, "hurwitz_zeta wants 0 < a <= 1");
  const double sig = s.re_lower();
  const double height = std::abs(s.im_d()) + s.rad();
  unsigned K = std::max<unsigned>(16, prec / 2);
  if (height > (double)K && height < 1e6) K = (unsigned)std::ceil(height);

  for (int attempt = 0; attempt < 7; ++attempt, K *= 2) {
    Ball ms = s.neg();
    Ball acc = Ball::zero(prec);
    for (unsigned k = 0; k < K; ++k)
      acc = acc.add(Ball::from_rational(mpq_class(k) + a, mpq_class(0), prec).pow(ms));

    Ball w = Ball::from_rational(mpq_class(K) + a, mpq_class(0), prec);
    Ball wpow = w.pow(ms);
    Ball sm1 = s.sub(Ball::from_long(1, prec));
    if (sm1.contains_zero()) fail(errc::pole_at_one, "hurwitz_zeta at s = 1");
    acc = acc.add(wpow.mul(w).div(sm1));
    acc = acc.add(wpow.mul_q(frac(1, 2)));

    /* Euler-Maclaurin correction terms; the remainder after R of them is
     * bounded by the first omitted term times |s+2R+1|/(sigma+2R+1), valid
     * once that denominator is positive */
    Ball winv = w.inv();
    Ball winv2 = winv.mul(winv);
    Ball poch = s;                 /* (s)_{2r-1} */
    Ball pwr = wpow.mul(winv);     /* (K+a)^{-s-2r+1} */
    double prev_mag = HUGE_VAL;
    const double smag = std::hypot(s.re_d(), s.im_d()) + s.rad();
    for (unsigned r = 1; r <= 320; ++r) {
      mpq_class coef = util::bernoulli(2 * r) / mpq_class(util::factorial(2 * r));
      Ball term = poch.mul(pwr).mul_q(coef);
      acc = acc.add(term);

      Ball s2a = s.add(Ball::from_long(2 * (long)r - 1, prec));
      Ball s2b = s.add(Ball::from_long(2 * (long)r, prec));
      mpq_class ncoef = abs(util::bernoulli(2 * r + 2)) /
                        mpq_class(util::factorial(2 * r + 2));
      Ball nxt = poch.mul(s2a).mul(s2b).mul(pwr).mul(winv2).mul_q(ncoef);
      const double denom = sig + 2.0 * r + 1.0;
      if (denom > 0.5) {
        const double bound = nxt.abs_upper() * ((smag + 2.0 * r + 1.0) / denom);
        const double target =
            std::ldexp(std::max(1.0, acc.abs_upper()), -(int)(prec + 4));
        if (bound <= target)
          return acc.add(Ball::from_double(0.0, 0.0, bound, prec));
      }
      const double mag = term.abs_upper();
      if (r >= 4 && mag > prev_mag) break;  /* asymptotic regime exhausted */
      prev_mag = mag;
      poch = poch.mul(s2a).mul(s2b);
      pwr = pwr.mul(winv2);
    }
  }
  fail(errc::not_convergent, "hurwitz_zeta failed to stabilise");
}

/* Same Euler-Maclaurin scheme as above, run on truncated Taylor series in a
 * formal increment x of the argument.  Every evaluated piece is an entire (or
 * explicitly poled) function of s, so coefficient arithmetic is exact ball
 * work; only the discarded remainder needs thought.  The remainder function
 * R(s + x) is analytic on |x| <= rho (the pole at s = 1 cancels between
 * zeta and the w^{1-s}/(s-1) tail term), so a uniform bound B on that disc
 * bounds the j-th coefficient by B / rho^j.  B comes from the classical
 * first-omitted-term estimate with |s| inflated and Re s deflated by rho,
 * using |B_{2m}|/(2m)! <= 4 (2 pi)^{-2m}; the log-space double evaluation of
 * that product is slack by far more than its rounding error, and a 1.01
 * safety factor is folded in anyway. */
Jet hurwitz_zeta_jet(const Ball& s, const mpq_class& a, unsigned terms,
                     unsigned prec) {
  if (terms == 0) fail(errc::bad_input, "hurwitz_zeta_jet wants terms >= 1");
  if (sgn(a) <= 0 || a > 1) fail(errc::bad_input, "hurwitz_zeta wants 0 < a <= 1");
  Ball sm1 = s.sub(Ball::from_long(1, prec));
  if (sm1.contains_zero()) fail(errc::pole_at_one, "hurwitz_zeta jet at s = 1");

  const double rho = 1.0;
  const double sig = s.re_lower();
  const double height = std::abs(s.im_d()) + s.rad();
  const double smag = std::hypot(s.re_d(), s.im_d()) + s.rad();
  unsigned K = std::max<unsigned>(16, prec / 2);
  if (height > (double)K && height < 1e6) K = (unsigned)std::ceil(height);

  for (int attempt = 0; attempt < 7; ++attempt, K *= 2) {
    Ball ms = s.neg();
    Jet acc(terms, prec);
    for (unsigned k = 0; k < K; ++k) {
      Ball base = Ball::from_rational(mpq_class(k) + a, mpq_class(0), prec);
      Ball lb = base.log();
      acc = acc.add(Jet::exp_affine(ms.mul(lb).exp(), lb.neg(), terms));
    }

    Ball w = Ball::from_rational(mpq_class(K) + a, mpq_class(0), prec);
    Ball lw = w.log();
    Ball wpow = ms.mul(lw).exp(); /* w^{-s} */
    acc = acc.add(Jet::exp_affine(wpow.mul(w), lw.neg(), terms)
                      .mul(Jet::variable(sm1, terms).inv()));
    acc = acc.add(Jet::exp_affine(wpow.mul_q(frac(1, 2)), lw.neg(), terms));

    const double lnw = std::log(mpq_class(mpq_class(K) + a).get_d());
    Ball winv = w.inv();
    Ball winv2 = winv.mul(winv);
    Jet poch = Jet::variable(s, terms);                      /* (s+x)_{2r-1} */
    Jet pwr = Jet::exp_affine(wpow.mul(winv), lw.neg(), terms);
    double prev_mag = HUGE_VAL;
    for (unsigned r = 1; r <= 320; ++r) {
      mpq_class coef = util::bernoulli(2 * r) / mpq_class(util::factorial(2 * r));
      Jet term = poch.mul(pwr).scale(Ball::from_rational(coef, mpq_class(0), prec));
      acc = acc.add(term);

      const double denom = (sig - rho) + 2.0 * r + 1.0;
      if (denom > 0.5) {
        double logB = std::log(4.0) - (2.0 * r + 2.0) * std::log(2.0 * M_PI);
        for (unsigned j = 0; j <= 2 * r; ++j) logB += std::log(smag + rho + j);
        const double e = -(sig - rho) - 2.0 * r - 1.0;
        logB += e * lnw; /* w exceeds 1, so this is monotone in e as written */
        logB += std::log((smag + rho + 2.0 * r + 1.0) / denom);
        const double B = std::exp(logB) * 1.01;
        const double target =
            std::ldexp(std::max(1.0, acc.a[0].abs_upper()), -(int)(prec + 4));
        if (B <= target) {
          double cb = B;
          for (unsigned j = 0; j < terms; ++j, cb /= rho)
            acc.a[j] = acc.a[j].add(Ball::from_double(0.0, 0.0, cb, prec));
          return acc;
        }
      }
      const double mag = term.a[0].abs_upper();
      if (r >= 4 && mag > prev_mag) break; /* asymptotic regime exhausted */
      prev_mag = mag;
      Jet s2a = Jet::variable(s.add(Ball::from_long(2 * (long)r - 1, prec)), terms);
      Jet s2b = Jet::variable(s.add(Ball::from_long(2 * (long)r, prec)), terms);
      poch = poch.mul(s2a).mul(s2b);
      pwr = pwr.scale(winv2);
    }
  }
  fail(errc::not_convergent, "hurwitz_zeta jet failed to stabilise");
}

namespace {

/* L(chi, 1) in closed form: the per-term Hurwitz route poles there even
 * though the combination is finite.  Odd characters get the Gauss-sum and
 * Bernoulli expression, even nontrivial ones the log|1 - zeta^a| sum; the
 * depleted Euler factors of an imprimitive modulus are multiplied back. */
Ball L_at_one(const DirichletChar& chi, unsigned prec) {
  DirichletChar chi0 = chi.primitive_part();
  const uint64_t F = chi0.modulus();
  if (F == 1) fail(errc::pole_at_one, "L(chi, s) at s = 1 with trivial chi");
  Ball v = Ball::zero(prec);
  if (chi0.is_odd()) {
    Cyclo c = chars::gauss_sum(chi0)
                  .mul(bernoulli_char(1, chi0.inverse()))
                  .mul_q(frac(1, F));
    v = exactnum::embed_complex(c, prec).mul(Ball::pi(prec)).mul(Ball::i_unit(prec));
  } else {
    Ball acc = Ball::zero(prec);
    for (uint64_t a = 1; a < F; ++a) {
      if (chi0.exponent_at(a) < 0) continue;
      Ball om = Ball::from_long(1, prec).sub(
          exactnum::embed_complex(Cyclo::root((unsigned)F, (long)a), prec));
      acc = acc.add(exactnum::embed_complex(chi0.inverse()(a), prec)
                        .mul(om.abs_ball().log()));
    }
    v = acc.mul(exactnum::embed_complex(chars::gauss_sum(chi0), prec))
            .mul_q(frac(-1, F));
  }
  Cyclo extra = Cyclo::one();
  for (auto [l, e] : util::factor(chi.modulus()))
    if (F % l != 0) extra = extra.mul(euler_factor_at(chi0, l, 1));
  return v.mul(exactnum::embed_complex(extra, prec));
}

}  // namespace

namespace {

std::vector<uint64_t> checked_depletion(const DirichletChar& chi,
                                        std::vector<uint64_t> ls) {
  std::sort(ls.begin(), ls.end());
  ls.erase(std::unique(ls.begin(), ls.end()), ls.end());
  for (uint64_t l : ls)
    if (!util::is_prime(l)) fail(errc::bad_input, "depletion set must be prime");
  /* primes the modulus already kills contribute a factor 1 */
  std::erase_if(ls, [&](uint64_t l) { return chi.exponent_at(l) < 0; });
  return ls;
}

}  // namespace

Ball dirichlet_L_ball(const DirichletChar& chi, const Ball& s, unsigned prec,
                      unsigned order, const std::vector<uint64_t>& depleted_at) {
  if (order > 0)
    return dirichlet_L_jet(chi, s, order + 1, prec, depleted_at).derivative(order);
  if (!depleted_at.empty()) {
    Ball v = dirichlet_L_ball(chi, s, prec);
    for (uint64_t l : checked_depletion(chi, depleted_at))
      v = v.mul(Ball::from_long(1, prec).sub(
          exactnum::embed_complex(chi(l), prec).mul(exactnum::npow(l, s.neg()))));
    return v;
  }
  const uint64_t F = chi.modulus();
  if (s.rad() == 0 && s.is_exact_int() && s.re_d() == 1.0)
    return L_at_one(chi, prec);
  if (F == 1) return hurwitz_zeta(s, mpq_class(1), prec);
  Ball acc = Ball::zero(prec);
  for (uint64_t r = 1; r < F; ++r) {
    if (chi.exponent_at(r) < 0) continue;
    Ball z = hurwitz_zeta(s, frac((long)r, F), prec);
    acc = acc.add(exactnum::embed_complex(chi(r), prec).mul(z));
  }
  return acc.mul(exactnum::npow(F, s.neg()));
}

Jet dirichlet_L_jet(const DirichletChar& chi, const Ball& s, unsigned terms,
                    unsigned prec, const std::vector<uint64_t>& depleted_at) {
  const uint64_t F = chi.modulus();
  Jet acc(terms, prec);
  if (F == 1) {
    acc = hurwitz_zeta_jet(s, mpq_class(1), terms, prec);
  } else {
    for (uint64_t r = 1; r < F; ++r) {
      if (chi.exponent_at(r) < 0) continue;
      acc = acc.add(hurwitz_zeta_jet(s, frac((long)r, F), terms, prec)
                        .scale(exactnum::embed_complex(chi(r), prec)));
    }
    Ball lF = Ball::from_long((long)F, prec).log();
    acc = Jet::exp_affine(exactnum::npow(F, s.neg()), lF.neg(), terms).mul(acc);
  }
  for (uint64_t l : checked_depletion(chi, depleted_at)) {
    Ball ll = Ball::from_long((long)l, prec);
    Jet fac = Jet::constant(Ball::from_long(1, prec), terms)
                  .sub(Jet::exp_affine(
                      exactnum::embed_complex(chi(l), prec).mul(
                          exactnum::npow(l, s.neg())),
                      ll.log().neg(), terms));
    acc = acc.mul(fac);
  }
  return acc;
}

/* ---------- p-adic side ---------- */

namespace {

unsigned vp_factorial(unsigned long t, uint64_t p) {
  unsigned v = 0;
  while (t) {
    t /= p;
    v += (unsigned)t;
  }
  return v;
}

/* smallest T with t - v_p(t!) >= digits + 6 for every t >= T, via
 * v_p(t!) <= (t-1)/(p-1), i.e. t - v_p(t!) >= (t(p-2)+1)/(p-1) */
unsigned kl_seed_count(unsigned digits, uint64_t p) {
  const unsigned long target = digits + 6;
  unsigned long t = 1;
  while ((t * (p - 2) + 1) / (p - 1) < target) ++t;
  return (unsigned)t;
}

/* working precision: the binomial factors in the Newton sum cost at most
 * v_p(T!) digits off the seeds' relative precision */
unsigned kl_work(unsigned digits, uint64_t p) {
  return digits + 8 + vp_factorial(kl_seed_count(digits, p), p);
}

DirichletChar kl_check(const DirichletChar& chi, uint64_t p) {
  if (p < 3 || !util::is_prime(p)) fail(errc::bad_input, "the prime must be odd");
  if (!chi.is_primitive())
    fail(errc::bad_input, "branches want the primitive character");
  if (chi.modulus() % p == 0)
    fail(errc::bad_input, "the conductor must be prime to p");
  if (chi.order() % p == 0)
    fail(errc::ramified_character,
         "a character of order divisible by p has ramified values");
  return chi;
}

unsigned compositum_of(const DirichletChar& chi, uint64_t p) {
  uint64_t m = util::lcm_u64(chi.order(), p - 1);
  m = util::lcm_u64(m, chi.modulus());
  m = util::lcm_u64(m, 4);
  return (unsigned)m;
}

}  // namespace

KLBranch::KLBranch(const DirichletChar& chi, uint64_t p, unsigned a,
                   unsigned digits)
    : chi_(kl_check(chi, p)),
      p_(p),
      a_(a % (unsigned)(p - 1)),
      digits_(digits ? digits : 1),
      work_(kl_work(digits_, p)),
      nseeds_(kl_seed_count(digits_, p)),
      direct_(((a_ + chi.parity_exponent()) & 1u) == 1u),
      pole_branch_(chi.is_trivial() && a_ == 1u % (unsigned)(p - 1)),
      emb_(p, compositum_of(chi, p), work_),
      omega_(chars::teichmuller_char(p)) {
  if (direct_) {
    /* seeds at s = 0, -1, ..., then in-place forward differences; on the
     * branch through the pole the seeds are of h(s) = (s-1) L_p(s) */
    std::vector<Padic> u;
    u.reserve(nseeds_);
    for (unsigned t = 0; t < nseeds_; ++t) {
      const long n = -(long)t;
      Padic w = emb_(node_exact(n));
      if (pole_branch_) w = w.mul_q(mpq_class(n - 1));
      u.push_back(std::move(w));
    }
    for (unsigned lev = 1; lev < nseeds_; ++lev)
      for (unsigned i = nseeds_ - 1; i >= lev; --i)
        u[i] = u[i].sub(u[i - 1]);
    delta_ = std::move(u);
  } else {
    const unsigned pm1 = (unsigned)(p_ - 1);
    inner_ = std::make_shared<KLBranch>(
        chi_.inverse(), p_, (unsigned)md(1 - (long)a_, (long)pm1), digits_);
  }
}

Cyclo KLBranch::node_exact(long n) const {
  if (!direct_) fail(errc::out_of_branch, "this parity has no nodes at s <= 0");
  if (n > 0) fail(errc::bad_input, "nodes sit at integers <= 0");
  DirichletChar xi = chi_.mul(omega_.power(n - (long)a_)).primitive_part();
  return euler_factor_at(xi, p_, n).mul(dirichlet_L_exact(xi, n));
}

Cyclo KLBranch::node_plus_exact(long n) const {
  if (direct_)
    fail(errc::out_of_branch, "closed n >= 1 values live on the transported parity");
  if (n < 1) fail(errc::bad_input, "this bridge wants integers n >= 1");
  const long pm1 = (long)(p_ - 1);
  const long b = md((long)a_ - n, pm1);
  if (b != 0 && 2 * b != pm1)
    fail(errc::out_of_branch,
         "a tame twist of order > 2 falls outside the unramified bridge");
  const unsigned delta = chi_.parity_exponent();
  const uint64_t N = chi_.modulus();

  /* reflect the node at 1-n <= 0 of the inverse character through the
   * functional equation and keep every factor exact:
   *   V = -i^delta chi(-1) theta(N) tau(chi) E_p(xi^{-1}, 1-n) B_{n, xi^{-1}} / (n N^n)
   * with theta = omega^b and xi = chi theta.  For b = 0 this is the classical
   * bridge to L(chi, n); for the quadratic twist it is the only normalisation
   * that stays p-integral (a literal tau(theta)/N_theta^n reading sheds a
   * stray p^{2n-1}) */
  DirichletChar theta = omega_.power(b);
  DirichletChar xi = chi_.mul(theta).primitive_part();
  Cyclo v = Cyclo::root(4, md(3 * (long)delta + 2, 4))
                .mul(theta(N))
                .mul(chars::gauss_sum(chi_))
                .mul(euler_factor_at(xi.inverse(), p_, 1 - n))
                .mul(bernoulli_char((unsigned)n, xi.inverse()));
  return v.mul_q(util::pow_q(N, -n) / n);
}

Padic KLBranch::eval_direct(const Padic& s, bool* hit_pole, Padic* residue) const {
  const padic::PadicCtx& c = emb_.ctx();
  *hit_pole = false;
  /* Newton sum against nodes x = 0, 1, 2, ... in the variable x = -s */
  Padic x = s.neg();
  Padic acc = Padic::zero(c);
  Padic cbin = Padic::from_long(c, 1);
  for (unsigned t = 0; t < delta_.size(); ++t) {
    acc = acc.add(delta_[t].mul(cbin));
    cbin = cbin.mul(x.sub(Padic::from_long(c, (long)t))).mul_q(frac(1, t + 1));
  }
  /* tail terms beyond the seeds sit below the certified target */
  const long cap = (long)digits_ + 6;
  acc = acc.add(Padic::unknown_zero(c, cap));
  if (!pole_branch_) return acc;

  Padic d = s.sub(Padic::from_long(c, 1));
  if (!d.is_zero()) return acc.mul(d.inv());

  /* at the pole itself: C(-1,t) = (-1)^t gives the residue h(1), and the
   * constant Laurent term is h'(1) = sum_t (-1)^t H_t Delta^t */
  Padic res = Padic::zero(c);
  Padic fin = Padic::zero(c);
  mpq_class H(0);
  for (unsigned t = 0; t < delta_.size(); ++t) {
    const mpq_class sg((t % 2) ? -1 : 1);
    res = res.add(delta_[t].mul_q(sg));
    if (t >= 1) {
      H += frac(1, t);
      fin = fin.add(delta_[t].mul_q(sg * H));
    }
  }
  *hit_pole = true;
  *residue = res.add(Padic::unknown_zero(c, cap));
  return fin.add(Padic::unknown_zero(c, cap));
}

KLBranch::Result KLBranch::eval_at(const Padic& s) const {
  Result r;
  const padic::PadicCtx& c = emb_.ctx();
  if (direct_) {
    bool pole = false;
    Padic res = Padic::zero(c);
    r.value = eval_direct(s, &pole, &res);
    r.pole = pole;
    r.residue = res;
    return r;
  }

  /* functional-equation transport onto the node-carrying branch of the
   * inverse character: the value at omega^a <.>^s equals
   * i^{a_chi}/tau(chi^{-1}) kappa(N) L_p(chi^{-1}, kappa) with
   * kappa = omega^{1-a} <.>^{1-s} */
  Padic s_in = Padic::from_long(c, 1).sub(s);
  bool pole = false;
  Padic res = Padic::zero(c);
  Padic v_in = inner_->eval_direct(s_in, &pole, &res);

  if (pole) {
    /* only the trivial character reaches the pole; the prefactor is 1 there
     * and s -> 1-s flips the residue sign */
    r.pole = true;
    r.residue = res.neg();
    r.value = v_in;
    return r;
  }

  const uint64_t N = chi_.modulus();
  Padic A = Padic::from_long(c, 1);
  if (N > 1) {
    /* 1/tau(chi^{-1}) = chi(-1) tau(chi) / N */
    Cyclo invtau =
        chars::gauss_sum(chi_).mul_q(frac(chi_.is_odd() ? -1 : 1, N));
    Cyclo pref = invtau.mul(Cyclo::root(4, (long)chi_.parity_exponent()))
                     .mul(omega_.power(1 - (long)a_)(N));
    A = emb_(pref);
    Padic Nz = Padic::from_long(c, (long)N);
    Padic one_unit = Nz.mul(Nz.teichmuller().inv());
    A = A.mul(one_unit.log1().mul(s_in).exp1());  /* <N>^{1-s} */
  }
  r.value = A.mul(v_in);
  return r;
}

KLBranch::Result KLBranch::eval_int(long s) const {
  return eval_at(Padic::from_long(emb_.ctx(), s));
}

KLBranch::Result KLBranch::eval(const Padic& s) const {
  if (s.ctx().p != p_)
    fail(errc::bad_input, "weight parameter lives at a different prime");
  const padic::PadicCtx& c = emb_.ctx();
  return eval_at(&s.ctx() == &c ? s : s.scalar_to(c));
}

KLBranch::Result kl_value(const DirichletChar& chi, uint64_t p, long b, long n,
                          unsigned digits) {
  const long a = md(b + n, (long)(p - 1));
  KLBranch br(chi, p, (unsigned)a, digits);
  return br.eval_int(n);
}

}  // namespace symsq::lfun
