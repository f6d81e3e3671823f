#ifndef SYMSQ_INTERP_HH
#define SYMSQ_INTERP_HH

/*
 * The p-adic side of the symmetric-square machinery: Euler factors at p,
 * stabilisation slopes, the interpolation formulas (both parity branches),
 * the epsilon factor and the functional-equation consistency check, the
 * Upsilon scalar, zero-counting tables, exceptional-zero predictions, and
 * the unit-eigenspace dimension formula.
 *
 * Exact arithmetic happens in the "Satake algebra" K[alpha] with
 * alpha^2 = t alpha - n over the cyclotomic coefficient field K, where
 * t = a_p and n = psi(p) p^{k+1}.  Elements are pairs x + y alpha; the
 * letter alpha denotes the root of smallest p-adic valuation under the
 * fixed embedding (the ordinary stabilisation) unless a beta_root flag
 * asks for the other one.  Conjugation swaps alpha with beta = t - alpha.
 * Division is avoided inside the algebra: the quadratic may split over K,
 * so quotients are assembled from conjugates and norms, and every exact
 * zero test is a coordinate test plus, for factors tied to one specific
 * root, a valuation arbitration.
 *
 * Numeric values are complex balls.  Where a formula mixes exact
 * cyclotomic data (Gauss sums, i-powers, character values) with
 * transcendental blocks (pi powers, the Petersson norm, odd powers of
 * sqrt(N)), results carry the two parts separately so callers can build
 * transcendence-cancelling ratios; fe_consistency below is the canonical
 * consumer.
 *
 * Complex images of the Satake roots: when the quadratic splits over the
 * coefficient field the roots are exact and "alpha" is pinned by its
 * p-adic valuation.  When it does not split, the complex root named alpha
 * is (t + principal sqrt(disc))/2, a convention, not a theorem; the root
 * pairing between a form and its conjugate is NOT respected by that
 * convention, so every identity relating f to f* carries the f-roots
 * across explicitly (alpha* = conj(psi(p)) alpha) instead of re-extracting
 * them.  fe_consistency does exactly that.
 *
 * Conventions pinned here rather than by the source material:
 *   - <x> means x omega(x)^{-1}, a principal unit; powers of it go
 *     through the p-adic exp/log pair.  Half-integer powers of the level
 *     use the square root of the Teichmueller root of unity in the
 *     order-2(p-1) cyclotomic context, and the positive real root on the
 *     complex side.  The two conventions are each internally consistent;
 *     they are never compared against each other, only inside ratios
 *     where the factor cancels.
 *   - The branch representative a of an integer point s is taken in
 *     {0, ..., p-2}.  Tests re-run with a + (p-1) to confirm the
 *     decomposition glues.
 *   - The epsilon normalization w(f, g) is an input everywhere.  It is
 *     never guessed, and every gated check forms a ratio in which it
 *     cancels.
 */

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "symsq/ball.hh"
#include "symsq/characters.hh"
#include "symsq/cyclotomic.hh"
#include "symsq/dirichlet.hh"
#include "symsq/modforms.hh"
#include "symsq/padic.hh"

namespace symsq::interp {

using chars::DirichletChar;
using exactnum::Ball;
using exactnum::Cyclo;
using forms::NewformData;
using padic::Padic;

/* ---- Satake algebra and Euler factors ---------------------------------- */

/* x + y alpha with alpha^2 = t alpha - n; the carrier (t, n) lives in the
 * surrounding report */
struct SatakeElt {
  Cyclo x, y;
  bool is_zero() const { return x.is_zero() && y.is_zero(); }
};

struct EulerFactorReport {
  uint64_t p = 0;
  long j = 0;                /* E_rs / E_sym2 taken at evaluation point j+1 */
  Cyclo trace, norm;         /* alpha + beta and alpha beta */
  bool equal_roots = false;  /* alpha = beta: E_star_f = 0, flagged only */
  bool beta_root = false;    /* generator taken as the larger-slope root */
  SatakeElt E_f;             /* 1 - beta/(p alpha) */
  SatakeElt E_star_f;        /* 1 - beta/alpha */
  SatakeElt E_rs;            /* the four-factor product at j+1 */
  SatakeElt E_sym2;          /* E_rs with the middle factor divided out */
  /* (factor name, reason) for every factor that is exactly zero */
  std::vector<std::pair<std::string, std::string>> vanishing;
};

/* exact Euler-factor pack for g = f; p must be a good prime */
EulerFactorReport euler_factors(const NewformData& f, uint64_t p, long j,
                                bool beta_root = false);

/* numeric pack for two distinct forms.  E_rs is symmetric in the g-roots,
 * so only the f-side root choice is exposed. */
struct PairEulerFactors {
  Ball E_f, E_star_f, E_rs;
};
PairEulerFactors euler_factors_pair(const NewformData& f,
                                    const NewformData& g, uint64_t p, long j,
                                    unsigned prec, bool beta_root = false);

/* complex images (alpha, beta) of the Satake roots in report order */
std::pair<Ball, Ball> satake_roots_ball(const NewformData& f, uint64_t p,
                                        unsigned prec, bool beta_root = false);
/* image of x + y alpha given the image of alpha */
Ball satake_embed(const SatakeElt& e, const Ball& alpha, unsigned prec);

/* ---- slopes and valuations --------------------------------------------- */

struct SlopeReport {
  mpq_class v_alpha, v_beta;  /* Newton-polygon slopes, v_alpha <= v_beta */
  bool a_p_zero = false;
  bool supersingular = false; /* v_p(a_p) > 0, computed from a_p directly */
  bool purity_ok = false;     /* |alpha| = |beta| = p^{(k+1)/2} within radii */
};
SlopeReport stabilisation_slopes(const NewformData& f, uint64_t p,
                                 unsigned prec);

/* ---- interpolation points and hypotheses ------------------------------- */

enum class Branch { even, odd };

struct InterpPoint {
  long k0 = 0, j0 = 0;
  Branch branch = Branch::even;
  bool H1 = false;  /* psi primitive and nontrivial */
  bool H2 = false;  /* E(Sym^2 f, k0+1) != 0 at p */
  bool M3 = false;  /* psi and psi^2 both primitive mod N */
};

/* parity/window classification plus hypothesis flags; throws bad_input
 * when j0 sits in neither branch window */
InterpPoint classify_point(const NewformData& f, long j0, uint64_t p);

/* ---- interpolation formulas -------------------------------------------- */

/* RHS of the two-form interpolation property at (k0, k0', j0+1), as a
 * complex ball.  The Rankin L-value is taken from *lvalue when supplied;
 * otherwise the series is evaluated in the convergent region, and points
 * below it raise not_convergent. */
Ball geom_interp_rhs(const NewformData& f, const NewformData& g, long j0,
                     uint64_t p, unsigned prec, const Ball* lvalue = nullptr);

/* predicted value of the symmetric-square p-adic L-function at
 * (k0, j0+1), decomposed so ratios can cancel the transcendental part:
 *   value = embed(alg) * embed(depletion) * trans * eratio * lvalue */
struct Sym2Prediction {
  InterpPoint point;
  Ball value;
  Cyclo alg;        /* exact part: signs, i-powers, Gauss sums, rationals */
  Cyclo depletion;  /* the prod over l | N, l coprime to the twist level */
  Ball trans;       /* pi powers, Petersson norm, odd sqrt(N) powers */
  Ball eratio;      /* E(Sym^2 .., ..) / (E(f) E*(f)), embedded */
  Ball lvalue;      /* the L-series value used */
  std::vector<std::string> notes;
};

/* Both branches of the main interpolation theorem.  Even branch needs
 * j0 even in [0, k0]; odd branch needs j0 odd in [k0+1, 2k0+1], the
 * epsilon normalization w, and hypothesis M3.  The L-value override is
 * honored as in geom_interp_rhs; without it the even branch tries the
 * analytic continuation engine and the odd branch the convergent region
 * of the twisted series, when the point allows it. */
Sym2Prediction sym2_interp_rhs(const NewformData& f, long j0, uint64_t p,
                               unsigned prec, const Cyclo* w = nullptr,
                               const Ball* lvalue = nullptr,
                               bool beta_root = false);

/* ---- epsilon factor ----------------------------------------------------- */

/* exact p-adic epsilon factor at integer weights (kappa1, kappa2, s0);
 * w is the supplied normalization scalar.  a_override replaces the branch
 * representative of s0 (used by the decomposition-consistency tests). */
Padic epsilon_p(const NewformData& f, const NewformData& g, long kappa1,
                long kappa2, long s0, uint64_t p, unsigned digits,
                const Cyclo& w, long a_override = -1);

/* complex image of the same factor for f = g at the classical point
 * (k0, k0, s0): exact cyclotomic part and transcendental part (an odd
 * power of sqrt(N) when the half-integer exponent calls for one) */
std::pair<Cyclo, Ball> epsilon_complex(const NewformData& f, long s0,
                                       uint64_t p, unsigned prec,
                                       const Cyclo& w);

/* ---- functional-equation consistency ------------------------------------ */

/* Forms the ratio [odd-branch RHS at (k0, j0+1)] over [FE factor times
 * even-branch RHS of the conjugate form at the mirrored point].  The
 * Petersson norm, epsilon factor, Euler blocks and L-values all cancel
 * structurally; the two sides assemble them through different code paths
 * (twisted series vs conjugate series, separate prefactor transcriptions),
 * so a deviation of the ratio from 1 beyond rounding exposes a
 * transcription error.  Both L-values are read off at the shared
 * reference point s = 2k0+4 where the series converge; the underlying
 * twist identity that makes this legitimate is enforced separately and
 * exactly by the series-level checks. */
struct FEConsistencyReport {
  long j0 = 0;
  Ball ratio;
  double deviation = 0.0;  /* |mid(ratio) - 1| */
  uint64_t series_bound = 0;
  std::vector<std::string> notes;
};
FEConsistencyReport fe_consistency(const NewformData& f, long j0, uint64_t p,
                                   unsigned prec, const Cyclo& w,
                                   uint64_t series_bound = 400);

/* ---- the Upsilon scalar -------------------------------------------------- */

/* Upsilon at even j <= k.  Exact mode takes the normalized critical value
 * I = L(j+1) tau(psi^{-1}) (2 pi i)^{k-j} / (pi^{k+1} <f,f>) as cyclotomic
 * input and returns the cyclotomic Upsilon; it needs even weight so the
 * level power stays integral.  Numeric mode assembles the defining formula
 * from L_value and the Petersson norm.  Both need the pseudo-eigenvalue
 * datum a_N(f*). */
struct UpsilonResult {
  bool exact = false;
  Cyclo alg;     /* exact-mode value */
  Ball numeric;  /* numeric-mode value, or the embedded exact value */
  std::vector<std::string> notes;
};
UpsilonResult upsilon(const NewformData& f, long j, unsigned prec,
                      const Cyclo* I_exact = nullptr,
                      const Ball* L_value = nullptr);

/* ---- zero counting ------------------------------------------------------ */

/* symbolic Satake configuration alpha = zeta_m^a P, beta = zeta_m^b P with
 * P^2 = p^{k0+1}; purity holds by construction and psi(p) = zeta_m^{a+b} */
struct SatakeConfig {
  uint64_t p = 2;
  long k0 = 0;
  unsigned m = 1;
  long a = 0, b = 0;
};

struct ZeroCountReport {
  Branch branch = Branch::even;
  int o_prime = 0;   /* depletion-product zeros, boundary point only */
  int table = 0;     /* net order predicted by the table cell */
  int direct = 0;    /* independent symbolic count over the factors */
  bool boundary = false;
  std::string cell;
  bool agrees = false; /* table == direct */
};

/* table-vs-direct count on a symbolic configuration at even-branch j0 */
ZeroCountReport count_zeros_core(const SatakeConfig& cfg, long j0);

/* the same on a fixture; odd j0 routes through the conjugate form at the
 * mirrored index, which is how the mirrored table is stated */
ZeroCountReport count_zeros(const NewformData& f, long j0, uint64_t p);

/* ---- exceptional zeros (conjectural) ------------------------------------ */

struct ExceptionalZeroReport {
  struct Row {
    long j0 = 0;
    int order = 0;          /* predicted net order: >0 zero, <0 pole */
    std::string kind;       /* "zero" / "pole" / "analytic" / "outside" */
    std::string note;
  };
  std::vector<Row> rows;
  bool equal_roots = false;
  std::string tag;          /* always "CONJECTURAL" */
  std::vector<std::string> notes;
};

/* predicted exceptional zero/pole orders at the even interpolation points
 * (k0, j0+1), j0 even in [0, k0], or the supplied j0 subrange.  Interior
 * points carry the table's extra-factor order; the boundary point is
 * covered by the conjecture only when the critical Euler factor survives
 * and the nebentypus is primitive, and is marked "outside" otherwise. */
ExceptionalZeroReport exceptional_zero_report(
    const NewformData& f, uint64_t p,
    std::optional<std::pair<long, long>> j0_range = std::nullopt);

/* ---- unit-eigenspace dimension ------------------------------------------ */

/* |{l in S : l coprime to the conductor, primitive character trivial on l}|
 * plus 1 when chi is even and nontrivial */
unsigned eigenspace_dimension(const DirichletChar& chi,
                              const std::vector<uint64_t>& S);

/* ---- bundled prediction -------------------------------------------------- */

struct PredictedValue {
  Sym2Prediction sym2;
  bool kl_defined = false;
  bool kl_pole = false;
  Padic kl_factor;            /* L_p(psi, j0 - k0) when evaluable */
  ZeroCountReport zeros;
  std::vector<std::string> notes;
};

/* the user-facing bundle: the sym2 prediction, the Kubota-Leopoldt factor
 * of the factorisation at this point (when its branch is evaluable), and
 * zero-count annotations.  digits is the p-adic precision for the KL
 * factor. */
PredictedValue predicted_value(const NewformData& f, long j0, uint64_t p,
                               unsigned prec, unsigned digits,
                               const Cyclo* w = nullptr,
                               const Ball* lvalue = nullptr,
                               bool beta_root = false);

}  // namespace symsq::interp

#endif
