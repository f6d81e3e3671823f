#include "symsq/interp.hh"

#include <algorithm>
#include <set>
#include <sstream>

#include "symsq/embed.hh"
#include "symsq/rankin.hh"

namespace symsq::interp {

using exactnum::embed_complex;

namespace {

/* carrier of the quadratic: alpha^2 = t alpha - n */
struct QuadCtx {
  Cyclo t, n;
};

SatakeElt mul_elt(const QuadCtx& q, const SatakeElt& u, const SatakeElt& v) {
  Cyclo yy = u.y.mul(v.y);
  return SatakeElt{u.x.mul(v.x).sub(q.n.mul(yy)),
                   u.x.mul(v.y).add(u.y.mul(v.x)).add(q.t.mul(yy))};
}

mpq_class q_half(long num) {
  mpq_class q(num, 2);
  q.canonicalize();
  return q;
}

Cyclo i_pow(long e) { return Cyclo::root(4, ((e % 4) + 4) % 4); }

/* Vanishing of x + y alpha at the chosen root.  y = 0 reduces to the
 * scalar.  Otherwise the linear part has the single zero r = -x/y, which
 * counts only when it satisfies the quadratic and sits on the chosen side
 * of the valuation split.  Genuinely distinct roots of equal valuation
 * cannot be told apart by anything exact, so that case is flagged (code 2)
 * and counted as a zero rather than silently hiding one.
 * Returns 0 nonzero, 1 zero, 2 zero with ambiguous matching. */
int vanish_code(const QuadCtx& q, const SatakeElt& e, uint64_t p,
                bool beta_root) {
  if (e.y.is_zero()) return e.x.is_zero() ? 1 : 0;
  if (e.x.is_zero()) return 0; /* the root 0 is excluded by norm != 0 */
  Cyclo r = e.x.neg().mul(e.y.inv());
  if (!r.mul(r).sub(q.t.mul(r)).add(q.n).is_zero()) return 0;
  Cyclo r2 = q.t.sub(r);
  if (r.eq(r2)) return 1;
  mpq_class va = forms::cyclo_valuation(r, p);
  mpq_class vb = forms::cyclo_valuation(r2, p);
  if (va == vb) return 2;
  const bool r_is_alpha = va < vb;
  return (r_is_alpha != beta_root) ? 1 : 0;
}

/* every Euler factor at p as an element of the Satake algebra, with the
 * exact vanishing codes at the chosen root */
struct FactorPack {
  QuadCtx q;
  Cyclo disc;
  bool equal_roots = false;
  SatakeElt Ef, Es, F1, F2, F3, F4;
  int zEf = 0, zEs = 0, zF1 = 0, zF2 = 0, zF3 = 0, zF4 = 0;

  SatakeElt sym2() const { return mul_elt(q, mul_elt(q, F1, F3), F4); }
  SatakeElt rs() const {
    return mul_elt(q, mul_elt(q, F1, F2), mul_elt(q, F3, F4));
  }
  bool sym2_vanishes() const { return zF1 || zF3 || zF4; }
};

FactorPack build_factors(const NewformData& f, uint64_t p, long j,
                         bool beta_root) {
  forms::SatakeParams s = forms::satake(f, p);
  FactorPack P;
  P.q = QuadCtx{s.trace, s.norm};
  P.disc = s.disc;
  P.equal_roots = s.equal_roots;
  const Cyclo& t = P.q.t;
  const Cyclo& n = P.q.n;

  /* beta^2 = (t^2 - n) - t alpha turns every quotient by a root into a
   * division by the scalar norm, so no root is ever extracted here */
  Cyclo ninv = n.inv();
  Cyclo t2n = t.mul(t).sub(n);
  mpq_class pinv = util::pow_q(p, -1);
  mpq_class pj = util::pow_q(p, j);
  mpq_class pj1inv = util::pow_q(p, -(j + 1));

  Cyclo cEf = ninv.mul_q(pinv); /* E(f)  = 1 - beta/(p alpha) = 1 - beta^2/(p n) */
  P.Ef = SatakeElt{Cyclo::one().sub(t2n.mul(cEf)), t.mul(cEf)};
  P.Es = SatakeElt{Cyclo::one().sub(t2n.mul(ninv)), t.mul(ninv)};
  Cyclo c1 = ninv.mul(ninv).mul_q(pj); /* 1 - p^j/alpha^2 = 1 - p^j beta^2/n^2 */
  P.F1 = SatakeElt{Cyclo::one().sub(t2n.mul(c1)), t.mul(c1)};
  P.F2 = SatakeElt{Cyclo::one().sub(ninv.mul_q(pj)), Cyclo::zero()};
  P.F3 = SatakeElt{Cyclo::one().sub(n.mul_q(pj1inv)), Cyclo::zero()};
  P.F4 = SatakeElt{Cyclo::one().sub(t2n.mul_q(pj1inv)), t.mul_q(pj1inv)};

  P.zEf = vanish_code(P.q, P.Ef, p, beta_root);
  P.zEs = vanish_code(P.q, P.Es, p, beta_root);
  P.zF1 = vanish_code(P.q, P.F1, p, beta_root);
  P.zF2 = vanish_code(P.q, P.F2, p, beta_root);
  P.zF3 = vanish_code(P.q, P.F3, p, beta_root);
  P.zF4 = vanish_code(P.q, P.F4, p, beta_root);
  return P;
}

Ball ball_one(unsigned prec) { return Ball::from_long(1, prec); }

}  // namespace

EulerFactorReport euler_factors(const NewformData& f, uint64_t p, long j,
                                bool beta_root) {
  FactorPack P = build_factors(f, p, j, beta_root);
  EulerFactorReport r;
  r.p = p;
  r.j = j;
  r.trace = P.q.t;
  r.norm = P.q.n;
  r.equal_roots = P.equal_roots;
  r.beta_root = beta_root;
  r.E_f = P.Ef;
  r.E_star_f = P.Es;
  r.E_rs = P.rs();
  r.E_sym2 = P.sym2();
  auto note = [&](int code, const char* name) {
    if (code == 0) return;
    r.vanishing.emplace_back(
        name, code == 2 ? "zero; the valuations cannot arbitrate between the "
                          "two roots, counted as vanishing"
                        : "exact zero at the chosen stabilisation");
  };
  note(P.zF1, "1 - p^j/alpha^2");
  note(P.zF2, "1 - p^j/(alpha beta)");
  note(P.zF3, "1 - alpha beta/p^{j+1}");
  note(P.zF4, "1 - beta^2/p^{j+1}");
  note(P.zEf, "1 - beta/(p alpha)");
  note(P.zEs, "1 - beta/alpha");
  return r;
}

std::pair<Ball, Ball> satake_roots_ball(const NewformData& f, uint64_t p,
                                        unsigned prec, bool beta_root) {
  forms::SatakeParams s = forms::satake(f, p);
  if (s.trace.is_rational() && s.disc.is_rational()) {
    /* visibly split case: a square rational discriminant gives exact
     * rational roots which can be ordered by their exact valuations */
    mpq_class d = s.disc.to_rational();
    if (sgn(d) >= 0) {
      mpz_class num = d.get_num(), den = d.get_den();
      if (mpz_perfect_square_p(num.get_mpz_t()) &&
          mpz_perfect_square_p(den.get_mpz_t())) {
        mpz_class rn, rd;
        mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
        mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
        mpq_class sq(rn, rd);
        sq.canonicalize();
        mpq_class t = s.trace.to_rational();
        mpq_class r1 = (t + sq) / 2, r2 = (t - sq) / 2;
        if (r1 != r2 && util::valuation(r2, p) < util::valuation(r1, p))
          std::swap(r1, r2);
        Ball a = Ball::from_rational(r1, mpq_class(0), prec);
        Ball b = Ball::from_rational(r2, mpq_class(0), prec);
        return beta_root ? std::pair{b, a} : std::pair{a, b};
      }
    }
  }
  /* general case: the root called alpha is (t + principal sqrt(disc))/2,
   * a fixed convention rather than a valuation statement */
  Ball t = embed_complex(s.trace, prec);
  Ball sq = embed_complex(s.disc, prec).sqrt_principal();
  Ball a = t.add(sq).mul_q(q_half(1));
  Ball b = t.sub(sq).mul_q(q_half(1));
  return beta_root ? std::pair{b, a} : std::pair{a, b};
}

Ball satake_embed(const SatakeElt& e, const Ball& alpha, unsigned prec) {
  return embed_complex(e.x, prec).add(embed_complex(e.y, prec).mul(alpha));
}

PairEulerFactors euler_factors_pair(const NewformData& f, const NewformData& g,
                                    uint64_t p, long j, unsigned prec,
                                    bool beta_root) {
  auto [af, bf] = satake_roots_ball(f, p, prec, beta_root);
  auto [ag, bg] = satake_roots_ball(g, p, prec, false);
  Ball one = ball_one(prec);
  Ball pj = Ball::from_rational(util::pow_q(p, j), mpq_class(0), prec);
  Ball pj1inv =
      Ball::from_rational(util::pow_q(p, -(j + 1)), mpq_class(0), prec);
  PairEulerFactors out;
  out.E_f = one.sub(bf.div(af).mul_q(util::pow_q(p, -1)));
  out.E_star_f = one.sub(bf.div(af));
  out.E_rs = one.sub(pj.div(af.mul(ag)))
                 .mul(one.sub(pj.div(af.mul(bg))))
                 .mul(one.sub(bf.mul(ag).mul(pj1inv)))
                 .mul(one.sub(bf.mul(bg).mul(pj1inv)));
  return out;
}

SlopeReport stabilisation_slopes(const NewformData& f, uint64_t p,
                                 unsigned prec) {
  forms::SatakeParams s = forms::satake(f, p);
  SlopeReport r;
  r.v_alpha = s.val_alpha;
  r.v_beta = s.val_beta;
  const Cyclo& ap = f.ap(p);
  r.a_p_zero = ap.is_zero();
  r.supersingular = r.a_p_zero || forms::cyclo_valuation(ap, p) > 0;
  auto [a, b] = satake_roots_ball(f, p, prec);
  Ball target =
      Ball::from_rational(util::pow_q(p, static_cast<long>(f.k) + 1),
                          mpq_class(0), prec)
          .sqrt_principal();
  r.purity_ok =
      a.abs_ball().overlaps(target) && b.abs_ball().overlaps(target);
  return r;
}

InterpPoint classify_point(const NewformData& f, long j0, uint64_t p) {
  const long k0 = static_cast<long>(f.k);
  InterpPoint pt;
  pt.k0 = k0;
  pt.j0 = j0;
  if (j0 >= 0 && j0 <= k0 && j0 % 2 == 0)
    pt.branch = Branch::even;
  else if (j0 >= k0 + 1 && j0 <= 2 * k0 + 1 && j0 % 2 == 1)
    pt.branch = Branch::odd;
  else
    fail(errc::bad_input,
         "j0 = " + std::to_string(j0) +
             " lies in neither parity window at weight " +
             std::to_string(k0 + 2));
  pt.H1 = f.psi.is_primitive() && !f.psi.is_trivial();
  FactorPack bd = build_factors(f, p, k0, false);
  pt.H2 = !bd.sym2_vanishes();
  pt.M3 = f.psi.is_primitive() && f.psi.power(2).is_primitive();
  return pt;
}

Ball geom_interp_rhs(const NewformData& f, const NewformData& g, long j0,
                     uint64_t p, unsigned prec, const Ball* lvalue) {
  const long k = static_cast<long>(f.k);
  const long kp = static_cast<long>(g.k);
  if (j0 < kp + 1 || j0 > k)
    fail(errc::out_of_window,
         "the interpolation range is k' + 1 <= j0 <= k; got j0 = " +
             std::to_string(j0));
  auto P = f.petersson(prec);
  if (!P)
    fail(errc::missing_petersson,
         "the higher-weight form carries no petersson norm");

  FactorPack own = build_factors(f, p, j0, false);
  if (own.zEs)
    fail(errc::division_by_zero,
         "1 - beta/alpha vanishes; the prefactor is undefined at equal roots");
  if (own.zEf) fail(errc::division_by_zero, "1 - beta/(p alpha) vanishes");

  PairEulerFactors pe = euler_factors_pair(f, g, p, j0, prec);

  Ball L;
  if (lvalue) {
    L = *lvalue;
  } else {
    const double sigma = (k + kp) / 2.0 + 2.0;
    if (static_cast<double>(j0 + 1) < sigma + 1.0)
      fail(errc::not_convergent,
           "s = " + std::to_string(j0 + 1) +
               " lies below the convergent region; supply the value");
    auto S = rankin::series_coeffs(f, g, 20000, rankin::Route::convolution);
    L = rankin::eval_convergent(S, Ball::from_long(j0 + 1, prec), sigma, prec);
  }

  /* j0! (j0-k'-1)! / (pi^{2j0-k'+1} (-i)^{k-k'} 2^{2j0+2+k-k'} <f,f>) */
  mpq_class rat(util::factorial(static_cast<unsigned long>(j0)) *
                util::factorial(static_cast<unsigned long>(j0 - kp - 1)));
  rat *= util::pow_q(2, -(2 * j0 + 2 + k - kp));
  Cyclo alg = i_pow(-3 * (k - kp)).mul_q(rat); /* 1/(-i)^{k-k'} */
  Ball trans = Ball::pi(prec).pow_int(-(2 * j0 - kp + 1)).mul(P->inv());
  return embed_complex(alg, prec)
      .mul(trans)
      .mul(pe.E_rs.div(pe.E_f.mul(pe.E_star_f)))
      .mul(L);
}

namespace {

/* shared plumbing for the two interpolation branches and the consistency
 * ratio.  Every field is an override; the cores fall back to the form's
 * own data when one is absent. */
struct CoreOpts {
  const Ball* alpha = nullptr;     /* complex image of the chosen root */
  const Ball* lvalue = nullptr;
  const Ball* petersson = nullptr;
  const Cyclo* w = nullptr;
  const std::pair<Cyclo, Ball>* eps = nullptr;
  bool beta_root = false;
};

Ball need_petersson(const NewformData& f, unsigned prec, const CoreOpts& o) {
  if (o.petersson) return *o.petersson;
  auto P = f.petersson(prec);
  if (!P) fail(errc::missing_petersson, "no petersson norm in the data");
  return *P;
}

Sym2Prediction even_core(const NewformData& F, long j0, uint64_t p,
                         unsigned prec, const CoreOpts& o) {
  const long k0 = static_cast<long>(F.k);
  Sym2Prediction out;
  out.point = classify_point(F, j0, p);
  if (out.point.branch != Branch::even)
    fail(errc::bad_input, "even core called at an odd-branch point");

  FactorPack atj = build_factors(F, p, j0, o.beta_root);
  if (j0 == k0) {
    if (!F.psi.is_primitive())
      fail(errc::out_of_branch,
           "the boundary point needs the nebentypus at full level");
    if (atj.sym2_vanishes())
      fail(errc::out_of_branch,
           "the boundary point needs a nonvanishing critical Euler factor");
  }
  if (atj.zEs)
    fail(errc::division_by_zero,
         "1 - beta/alpha vanishes; the prefactor is undefined at equal roots");
  if (atj.zEf) fail(errc::division_by_zero, "1 - beta/(p alpha) vanishes");

  /* (-1)^{k0+1} j0! (2 pi i)^{k0-j0} i^{a_psi} / (4 tau(psi) (4 pi)^{k0+1}) */
  mpq_class rat(util::factorial(static_cast<unsigned long>(j0)));
  rat *= util::pow_q(2, k0 - j0);
  rat *= util::pow_q(4, -(k0 + 2));
  if ((k0 + 1) % 2 == 1) rat = -rat;
  Cyclo tau = chars::gauss_sum(F.psi);
  out.alg =
      i_pow(k0 - j0 + static_cast<long>(F.psi.parity_exponent()))
          .mul(tau.inv())
          .mul_q(rat);

  chars::DirichletChar prim = F.psi.primitive_part();
  const uint64_t cond = prim.modulus();
  out.depletion = Cyclo::one();
  for (const auto& [l, e] : util::factor(F.N))
    if (cond % l != 0)
      out.depletion = out.depletion.mul(
          Cyclo::one().sub(prim(l).mul_q(util::pow_q(l, k0 - j0))));

  Ball pet = need_petersson(F, prec, o);
  out.trans = Ball::pi(prec).pow_int(-(j0 + 1)).mul(pet.inv());

  if (atj.sym2_vanishes()) {
    /* only reachable away from the boundary; with the critical factor
     * exactly zero the whole right-hand side is an exact zero */
    out.eratio = Ball::zero(prec);
    out.notes.push_back(
        "critical Euler factor vanishes exactly; the value is an exact zero");
    out.lvalue = o.lvalue ? *o.lvalue : Ball::zero(prec);
    out.value = Ball::zero(prec);
    return out;
  }

  Ball alpha =
      o.alpha ? *o.alpha : satake_roots_ball(F, p, prec, o.beta_root).first;
  out.eratio = satake_embed(atj.sym2(), alpha, prec)
                   .div(satake_embed(atj.Ef, alpha, prec)
                            .mul(satake_embed(atj.Es, alpha, prec)));

  if (o.lvalue) {
    out.lvalue = *o.lvalue;
  } else {
    out.notes.push_back("series value from the analytic continuation engine");
    out.lvalue = rankin::eval_continuation(
        F, rankin::SeriesKind::sym_square, Ball::from_long(j0 + 1, prec),
        rankin::default_gamma_config(F, rankin::SeriesKind::sym_square), prec);
  }
  out.value = embed_complex(out.alg.mul(out.depletion), prec)
                  .mul(out.trans)
                  .mul(out.eratio)
                  .mul(out.lvalue);
  return out;
}

Sym2Prediction odd_core(const NewformData& f, long j0, uint64_t p,
                        unsigned prec, const CoreOpts& o) {
  const long k0 = static_cast<long>(f.k);
  Sym2Prediction out;
  out.point = classify_point(f, j0, p);
  if (out.point.branch != Branch::odd)
    fail(errc::bad_input, "odd core called at an even-branch point");
  if (!out.point.M3)
    fail(errc::out_of_branch,
         "the odd branch needs the nebentypus and its square at full level");
  if (!o.w)
    fail(errc::missing_normalization,
         "the odd branch needs the epsilon normalization scalar");
  if (o.w->is_zero())
    fail(errc::missing_normalization, "the normalization scalar is zero");

  const long jc = 2 * k0 - j0 + 1; /* mirrored even index */
  NewformData fstar = forms::conjugate_form(f);
  FactorPack mirror = build_factors(fstar, p, jc, o.beta_root);
  if (j0 == k0 + 1 && mirror.sym2_vanishes())
    fail(errc::out_of_branch,
         "the boundary point needs a nonvanishing critical Euler factor of "
         "the conjugate system");
  FactorPack own = build_factors(f, p, 0, o.beta_root);
  if (own.zEs)
    fail(errc::division_by_zero,
         "1 - beta/alpha vanishes; the prefactor is undefined at equal roots");
  if (own.zEf) fail(errc::division_by_zero, "1 - beta/(p alpha) vanishes");

  std::pair<Cyclo, Ball> eps =
      o.eps ? *o.eps : epsilon_complex(f, j0 + 1, p, prec, *o.w);

  /* (-1)^{k0+1} (2k0-j0+1)! (2 pi i N)^{j0-k0-1} / (4 (4 pi)^{k0+1}),
   * with the epsilon factor folded into the split parts */
  mpq_class rat(util::factorial(static_cast<unsigned long>(jc)));
  rat *= util::pow_q(2, j0 - k0 - 1);
  rat *= util::pow_q(f.N, j0 - k0 - 1);
  rat *= util::pow_q(4, -(k0 + 2));
  if ((k0 + 1) % 2 == 1) rat = -rat;
  out.alg = i_pow(j0 - k0 - 1).mul(eps.first).mul_q(rat);
  out.depletion = Cyclo::one(); /* empty under the full-level hypothesis */

  Ball pet = need_petersson(f, prec, o);
  out.trans =
      Ball::pi(prec).pow_int(j0 - 2 * k0 - 2).mul(pet.inv()).mul(eps.second);

  Ball alpha =
      o.alpha ? *o.alpha : satake_roots_ball(f, p, prec, o.beta_root).first;
  /* the conjugate system's roots are the transported ones, never an
   * independent principal-branch extraction */
  Ball alpha_star = embed_complex(f.psi_at(p).conj(), prec).mul(alpha);

  if (mirror.sym2_vanishes()) {
    out.eratio = Ball::zero(prec);
    out.notes.push_back(
        "critical Euler factor vanishes exactly; the value is an exact zero");
    out.lvalue = o.lvalue ? *o.lvalue : Ball::zero(prec);
    out.value = Ball::zero(prec);
    return out;
  }
  out.eratio = satake_embed(mirror.sym2(), alpha_star, prec)
                   .div(satake_embed(own.Ef, alpha, prec)
                            .mul(satake_embed(own.Es, alpha, prec)));

  if (o.lvalue) {
    out.lvalue = *o.lvalue;
  } else {
    out.notes.push_back(
        "twisted series value routed through the conjugate system, whose "
        "coefficients agree exactly, and continued analytically");
    out.lvalue = rankin::eval_continuation(
        fstar, rankin::SeriesKind::sym_square, Ball::from_long(jc + 1, prec),
        rankin::default_gamma_config(fstar, rankin::SeriesKind::sym_square),
        prec);
  }
  out.value = embed_complex(out.alg.mul(out.depletion), prec)
                  .mul(out.trans)
                  .mul(out.eratio)
                  .mul(out.lvalue);
  return out;
}

}  // namespace

Sym2Prediction sym2_interp_rhs(const NewformData& f, long j0, uint64_t p,
                               unsigned prec, const Cyclo* w,
                               const Ball* lvalue, bool beta_root) {
  InterpPoint pt = classify_point(f, j0, p);
  CoreOpts o;
  o.lvalue = lvalue;
  o.w = w;
  o.beta_root = beta_root;
  return pt.branch == Branch::even ? even_core(f, j0, p, prec, o)
                                   : odd_core(f, j0, p, prec, o);
}

Padic epsilon_p(const NewformData& f, const NewformData& g, long kappa1,
                long kappa2, long s0, uint64_t p, unsigned digits,
                const Cyclo& w, long a_override) {
  if (!util::is_prime(p) || p == 2)
    fail(errc::bad_prime, "the epsilon factor needs an odd prime");
  if (w.is_zero())
    fail(errc::missing_normalization, "the normalization scalar is zero");
  const long k = static_cast<long>(f.k);
  const long kp = static_cast<long>(g.k);
  const uint64_t N = f.N, Np = g.N;
  const uint64_t N2 = util::lcm_u64(N, Np);
  if (N % p == 0 || Np % p == 0)
    fail(errc::ramified_embedding, "p divides a level");

  forms::SatakeParams sf = forms::satake(f, p), sg = forms::satake(g, p);
  if (sf.equal_roots || sg.equal_roots)
    fail(errc::bad_input, "distinct Satake roots required on both sides");
  if (!(sf.val_alpha < k + 1) || !(sg.val_alpha < kp + 1))
    fail(errc::bad_input, "a chosen slope reaches the weight bound");
  if (!f.psi.is_primitive() || !g.psi.is_primitive() ||
      !f.psi.lift_to(N2).mul(g.psi.lift_to(N2)).is_primitive())
    fail(errc::bad_input,
         "the two nebentypus characters and their product must be at full "
         "level");

  const mpz_class Qz = mpz_class(N) * Np * N2;
  const long pm1 = static_cast<long>(p - 1);
  const long a = a_override >= 0 ? a_override : ((s0 % pm1) + pm1) % pm1;

  padic::Embedding emb(
      p, static_cast<unsigned>(util::lcm_u64(2 * (p - 1), w.order())), digits);
  const padic::PadicCtx& ctx = emb.ctx();

  /* the half-integer power of Q needs a square root of its Teichmuller
   * part; zeta generates the order-2(p-1) roots, and zeta^{2d} walks
   * through the Teichmuller group */
  Padic zeta = padic::padic_root_of_unity(ctx, 2 * (p - 1));
  Padic targ = Padic::from_rational(ctx, mpq_class(Qz)).teichmuller();
  Padic z2 = zeta.mul(zeta);
  Padic cur = Padic::from_long(ctx, 1);
  long d = -1;
  for (long i = 0; i <= pm1 - 1; ++i) {
    if (cur.residue() == targ.residue()) {
      d = i;
      break;
    }
    cur = cur.mul(z2);
  }
  if (d < 0)
    fail(errc::bad_input, "no match for the Teichmuller part of the level");

  auto unit_pow = [&](const mpz_class& x, const mpq_class& e) {
    Padic xp = Padic::from_rational(ctx, mpq_class(x));
    Padic u = xp.mul(xp.teichmuller().inv());
    return u.log1().mul_q(e).exp1();
  };

  const mpq_class u = q_half(k + kp + 3) - a; /* global power of Q */
  const long two_u = k + kp + 3 - 2 * a;
  const long ord2 = 2 * pm1;
  const long ez = (((d % ord2) * (two_u % ord2)) % ord2 + ord2) % ord2;

  Padic out = emb(w);
  out = out.mul(zeta.pow(ez));
  out = out.mul(unit_pow(Qz, u + a - s0));
  out = out.mul(unit_pow(mpz_class(N), q_half(kappa2 - kp) - 1));
  out = out.mul(unit_pow(mpz_class(Np), q_half(kappa1 - k) - 1));
  return out;
}

std::pair<Cyclo, Ball> epsilon_complex(const NewformData& f, long s0,
                                       uint64_t p, unsigned prec,
                                       const Cyclo& w) {
  if (!util::is_prime(p) || p == 2)
    fail(errc::bad_prime, "the epsilon factor needs an odd prime");
  if (f.N % p == 0) fail(errc::ramified_embedding, "p divides the level");
  if (w.is_zero())
    fail(errc::missing_normalization, "the normalization scalar is zero");
  if (f.N >= (1ull << 21))
    fail(errc::bad_input, "level too large for the cubed conductor product");
  const long k = static_cast<long>(f.k);
  const uint64_t N = f.N;
  const uint64_t Q = N * N * N;
  const long pm1 = static_cast<long>(p - 1);
  const long a = ((s0 % pm1) + pm1) % pm1;

  chars::DirichletChar omega = chars::teichmuller_char(p);
  /* omega(Q)^{s0-a} is 1 since s0 = a mod p-1; kept so the shape matches
   * the p-adic side term for term */
  Cyclo alg = w.mul(omega(Q).pow(s0 - a)).mul(omega(N).pow(2));
  alg = alg.mul_q(util::pow_q(Q, k + 1 - s0) * util::pow_q(N, -2));
  Ball trans =
      Ball::from_rational(mpq_class(Q), mpq_class(0), prec).sqrt_principal();
  return {alg, trans};
}

FEConsistencyReport fe_consistency(const NewformData& f, long j0, uint64_t p,
                                   unsigned prec, const Cyclo& w,
                                   uint64_t series_bound) {
  InterpPoint pt = classify_point(f, j0, p);
  if (pt.branch != Branch::odd)
    fail(errc::bad_input, "the consistency ratio is formed at odd-branch points");
  const long k0 = pt.k0;
  const long jc = 2 * k0 - j0 + 1;

  FEConsistencyReport rep;
  rep.j0 = j0;
  rep.series_bound = series_bound;

  /* everything the two sides share is computed once, so it enters both
   * numerator and denominator bit for bit and drops out of the ratio */
  auto eps = epsilon_complex(f, j0 + 1, p, prec, w);
  auto P = f.petersson(prec);
  Ball pet = P ? *P : ball_one(prec);
  if (!P)
    rep.notes.push_back(
        "petersson norm not supplied; placeholder 1 enters both sides and "
        "cancels in the ratio");

  auto roots = satake_roots_ball(f, p, prec);
  Ball alpha_star = embed_complex(f.psi_at(p).conj(), prec).mul(roots.first);

  NewformData fstar = forms::conjugate_form(f);
  auto S_twist = rankin::sym2_series_coeffs(f, series_bound,
                                            rankin::Route::convolution, -2);
  auto S_conj = rankin::sym2_series_coeffs(fstar, series_bound,
                                           rankin::Route::convolution, 0);
  Ball sref = Ball::from_long(2 * k0 + 4, prec);
  const double sigma_abs = 2.0 * k0 + 3.0;
  Ball L_twist = rankin::eval_convergent(S_twist, sref, sigma_abs, prec);
  Ball L_conj = rankin::eval_convergent(S_conj, sref, sigma_abs, prec);
  rep.notes.push_back(
      "both series read at the shared convergent point s = " +
      std::to_string(2 * k0 + 4) +
      "; their coefficients agree exactly, so the values differ only by "
      "assembly rounding");

  CoreOpts lo;
  lo.alpha = &roots.first;
  lo.eps = &eps;
  lo.lvalue = &L_twist;
  lo.petersson = &pet;
  lo.w = &w;
  Sym2Prediction lhs = odd_core(f, j0, p, prec, lo);

  CoreOpts ro;
  ro.alpha = &alpha_star;
  ro.lvalue = &L_conj;
  ro.petersson = &pet;
  Sym2Prediction rhs = even_core(fstar, jc, p, prec, ro);

  /* functional-equation factor between the point and its mirror */
  Ball eps_ball = embed_complex(eps.first, prec).mul(eps.second);
  Cyclo fe_cyc =
      i_pow(-static_cast<long>(f.psi.parity_exponent()))
          .mul(chars::gauss_sum(f.psi.inverse()));
  Ball fe = eps_ball.mul(embed_complex(fe_cyc, prec))
                .mul_q(util::pow_q(f.N, j0 - k0 - 1));

  rep.ratio = lhs.value.div(fe.mul(rhs.value));
  rep.deviation = rep.ratio.mid_distance(ball_one(prec));
  return rep;
}

UpsilonResult upsilon(const NewformData& f, long j, unsigned prec,
                      const Cyclo* I_exact, const Ball* L_value) {
  const long k = static_cast<long>(f.k);
  if (j < 0 || j > k || j % 2 != 0)
    fail(errc::bad_input, "the scalar is defined at even j in [0, k]");
  if (!f.aN_star)
    fail(errc::missing_an_star,
         "the pseudo-eigenvalue datum a_N of the conjugate system is needed");
  if (f.aN_star->is_zero())
    fail(errc::bad_input, "the pseudo-eigenvalue must be nonzero");

  chars::DirichletChar prim = f.psi.primitive_part();
  const uint64_t cond = prim.modulus();
  Cyclo D = Cyclo::one();
  for (const auto& [l, e] : util::factor(f.N))
    if (cond % l != 0)
      D = D.mul(Cyclo::one().sub(prim(l).mul_q(util::pow_q(l, k - j))));

  UpsilonResult out;
  if (I_exact) {
    if (k % 2 != 0)
      fail(errc::bad_input,
           "the exact route needs an even k so the level power stays "
           "integral");
    /* N_psi^{k-j} N^{k/2+1} (k!/(k-j)!)^2 D I / (2 a_N tau(psi) 4^{k+1}) */
    mpq_class fac(util::factorial(static_cast<unsigned long>(k)));
    fac /= mpq_class(util::factorial(static_cast<unsigned long>(k - j)));
    mpq_class rat = fac * fac;
    rat *= util::pow_q(cond, k - j);
    rat *= util::pow_q(f.N, k / 2 + 1);
    rat *= util::pow_q(2, -1) * util::pow_q(4, -(k + 1));
    out.exact = true;
    out.alg = I_exact->mul(D)
                  .mul(chars::gauss_sum(f.psi).inv())
                  .mul(f.aN_star->inv())
                  .mul_q(rat);
    out.numeric = embed_complex(out.alg, prec);
    out.notes.push_back(
        "the normalized critical value supplied refers to the imprimitive "
        "series the rest of this module evaluates");
    return out;
  }

  if (!L_value)
    fail(errc::not_convergent,
         "the critical value lies below the convergent region; supply it");
  auto P = f.petersson(prec);
  if (!P) fail(errc::missing_petersson, "no petersson norm in the data");

  /* (-1)^{k+1} (2 pi i N_psi)^{k-j} lambda_N / (2 tau(psi) (-4 pi)^{k+1}
   * <f,f>) (k!/(k-j)!)^2 L D, with lambda_N = N^{k/2+1} tau(psi^{-1})/a_N */
  Ball twopii = Ball::pi(prec).mul(Ball::i_unit(prec)).mul_q(mpq_class(2));
  Ball A = twopii.pow_int(k - j).mul_q(util::pow_q(cond, k - j));
  Ball lamN =
      Ball::from_rational(util::pow_q(f.N, k + 2), mpq_class(0), prec)
          .sqrt_principal()
          .mul(embed_complex(chars::gauss_sum(f.psi.inverse()), prec))
          .mul(embed_complex(f.aN_star->inv(), prec));
  mpq_class fac(util::factorial(static_cast<unsigned long>(k)));
  fac /= mpq_class(util::factorial(static_cast<unsigned long>(k - j)));
  mpq_class rat = fac * fac * util::pow_q(2, -1) * util::pow_q(4, -(k + 1));
  if ((k + 1) % 2 == 1) rat = -rat; /* (-1)^{k+1} */
  if ((k + 1) % 2 == 1) rat = -rat; /* 1/(-1)^{k+1} from (-4 pi)^{k+1} */
  out.exact = false;
  out.numeric = A.mul(lamN)
                    .mul(embed_complex(chars::gauss_sum(f.psi).inv(), prec))
                    .mul(Ball::pi(prec).pow_int(-(k + 1)))
                    .mul(P->inv())
                    .mul_q(rat)
                    .mul(*L_value)
                    .mul(embed_complex(D, prec));
  out.notes.push_back(
      "the supplied series value is taken in the imprimitive normalization");
  return out;
}

ZeroCountReport count_zeros_core(const SatakeConfig& cfg, long j0) {
  if (cfg.m == 0) fail(errc::bad_input, "root-of-unity order must be positive");
  if (j0 < 0 || j0 > cfg.k0 || j0 % 2 != 0)
    fail(errc::bad_input, "the table covers even j0 in [0, k0]");
  const long m = static_cast<long>(cfg.m);
  auto md = [&](long x) { return ((x % m) + m) % m; };
  const bool equal = md(cfg.a - cfg.b) == 0;
  const bool psi1 = md(cfg.a + cfg.b) == 0;
  const bool boundary = (j0 == cfg.k0);

  /* direct count over the factors.  The powers of p pin everything: the
   * two quotient factors and E(f) carry a nonzero power everywhere in the
   * window, so only the product factors and E* can contribute. */
  int direct = 0;
  if (boundary && psi1) ++direct;             /* 1 - alpha beta/p^{j0+1} */
  if (boundary && md(2 * cfg.b) == 0) ++direct; /* 1 - beta^2/p^{j0+1} */
  if (equal) --direct;                        /* 1 - beta/alpha */

  ZeroCountReport r;
  r.branch = Branch::even;
  r.direct = direct;
  r.boundary = boundary;
  if (equal) {
    r.table = boundary ? (psi1 ? 1 : -1) : -1;
  } else if (!boundary) {
    r.table = 0;
  } else if (psi1) {
    r.table = 1;
  } else {
    r.table = md(2 * cfg.b) == 0 ? 1 : 0;
  }
  r.cell = std::string(equal ? "alpha = beta" : "alpha != beta") +
           (psi1 ? ", psi(p) = 1" : ", psi(p) != 1") +
           (boundary ? ", boundary" : ", interior");
  r.agrees = (r.table == r.direct);
  return r;
}

ZeroCountReport count_zeros(const NewformData& f, uint64_t...
