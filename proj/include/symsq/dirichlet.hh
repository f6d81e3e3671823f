#ifndef SYMSQ_DIRICHLET_HH
#define SYMSQ_DIRICHLET_HH

/*
 * Dirichlet L-functions, three ways:
 *
 *   exact     generalized Bernoulli numbers (a = 1..F convention, so the
 *             trivial character mod 1 has B_1 = +1/2), giving L(chi, n)
 *             at integers n <= 0 for the character as given (an
 *             imprimitive table yields the Euler-factor-depleted series);
 *   complex   Hurwitz zeta by Euler-Maclaurin with rigorous tails,
 *             assembled into L(chi, s) balls;
 *   p-adic    one branch of the p-adic L-function of a tame character,
 *             built from the exact values at nonpositive integers by
 *             Newton interpolation, step 1, with capped-relative
 *             precision tracking end to end.
 *
 * A branch (chi, p, a) carries its own interpolation nodes exactly when
 * (-1)^a = -chi(-1); the other parity is evaluated through the functional
 * equation, which lands on a node-carrying branch of the inverse
 * character.  Node values at n >= 1 for tame twists of order <= 2 are
 * also computed in closed form (Gauss-sum identities keep everything
 * unramified there); comparing them against the functional-equation route
 * is a genuine consistency test of the whole construction, and the test
 * suite leans on that.
 *
 * The trivial character's branch through the pole interpolates
 * h(s) = (s-1) L_p(s) instead and reports Laurent data at the pole.
 */

#include <memory>
#include <vector>

#include "symsq/ball.hh"
#include "symsq/characters.hh"
#include "symsq/cyclotomic.hh"
#include "symsq/embed.hh"
#include "symsq/padic.hh"

namespace symsq::lfun {

using chars::DirichletChar;
using exactnum::Ball;
using exactnum::Cyclo;
using padic::Padic;

/* generalized Bernoulli number B_{n,chi}; EGF series division, cached */
Cyclo bernoulli_char(unsigned n, const DirichletChar& chi);
/* same number by the Bernoulli-polynomial sum F^{n-1} sum chi(a) B_n(a/F);
 * independent route kept for cross-checking */
Cyclo bernoulli_char_sum(unsigned n, const DirichletChar& chi);

/* L(chi, s) at integers s <= 0: -B_{1-s,chi}/(1-s) */
Cyclo dirichlet_L_exact(const DirichletChar& chi, long s);

/* Euler factor 1 - chi(p) p^{-x} of the primitive character inducing chi */
Cyclo euler_factor_at(const DirichletChar& chi, uint64_t p, long x);

/* Hurwitz zeta(s, a) for rational a in (0, 1], rigorous enclosure; order > 0
 * asks for the order-th s-derivative instead of the value */
Ball hurwitz_zeta(const Ball& s, const mpq_class& a, unsigned prec,
                  unsigned order = 0);
/* Taylor jet of x -> zeta(s + x, a) at x = 0, `terms` coefficients.  The
 * remainder of the Euler-Maclaurin tail is bounded uniformly on a disc of
 * radius 1 around s and pushed into the coefficient radii via the Cauchy
 * estimate, so every coefficient is a true enclosure. */
exactnum::Jet hurwitz_zeta_jet(const Ball& s, const mpq_class& a,
                               unsigned terms, unsigned prec);

/* order-th derivative of L(chi, s) * prod_{l in depleted_at} (1 - chi(l) l^{-s}),
 * the character taken as given (an imprimitive modulus already omits its own
 * bad primes).  depleted_at entries must be prime. */
Ball dirichlet_L_ball(const DirichletChar& chi, const Ball& s, unsigned prec,
                      unsigned order = 0,
                      const std::vector<uint64_t>& depleted_at = {});
/* jet of the same depleted product */
exactnum::Jet dirichlet_L_jet(const DirichletChar& chi, const Ball& s,
                              unsigned terms, unsigned prec,
                              const std::vector<uint64_t>& depleted_at = {});

class KLBranch {
public:
  /* chi must be primitive with conductor and order prime to p (a ramified
   * order raises ramified_character); a is the branch index mod p-1;
   * digits is the target certified precision in powers of p */
  KLBranch(const DirichletChar& chi, uint64_t p, unsigned a, unsigned digits);

  struct Result {
    Padic value;          /* the value, or the constant Laurent term at a pole */
    bool pole = false;
    Padic residue;        /* only meaningful when pole is set */
  };

  uint64_t p() const { return p_; }
  unsigned branch() const { return a_; }
  unsigned digits() const { return digits_; }
  /* true when this branch carries its own nonpositive-integer nodes */
  bool direct() const { return direct_; }
  const padic::Embedding& embedding() const { return emb_; }
  const padic::PadicCtx& ctx() const { return emb_.ctx(); }

  /* exact node value at s = n <= 0 (direct branches only) */
  Cyclo node_exact(long n) const;
  /* exact node value at s = n >= 1 through the classical bridge; needs the
   * tame twist omega^{a-n} to have order <= 2, i.e. n = a or
   * n = a - (p-1)/2 mod p-1 (throws out_of_branch otherwise) */
  Cyclo node_plus_exact(long n) const;

  /* evaluate at integer weight parameter s */
  Result eval_int(long s) const;
  /* evaluate at s in Z_p (any scalar context at the same p) */
  Result eval(const Padic& s) const;

  /* forward differences of the seed values (h-seeds on the pole branch);
   * their valuation growth is the analyticity certificate the property
   * tests inspect */
  const std::vector<Padic>& differences() const { return delta_; }

private:
  Result eval_at(const Padic& s) const;
  Padic eval_direct(const Padic& s, bool* hit_pole, Padic* residue) const;

  DirichletChar chi_;
  uint64_t p_;
  unsigned a_;
  unsigned digits_;
  unsigned work_;              /* working precision */
  unsigned nseeds_;
  bool direct_;
  bool pole_branch_;           /* trivial chi, branch through the pole */
  padic::Embedding emb_;
  DirichletChar omega_;
  std::vector<Padic> delta_;   /* empty on transported branches */
  /* the node-carrying branch of the inverse character backing a
   * transported branch; same compositum, so the contexts coincide */
  std::shared_ptr<KLBranch> inner_;
};

/* value at the arithmetic weight nu_{omega^b, n} = omega^b <.>^n */
KLBranch::Result kl_value(const DirichletChar& chi, uint64_t p, long b, long n,
                          unsigned digits);

}  // namespace symsq::lfun

#endif
