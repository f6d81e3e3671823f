#ifndef SYMSQ_RANKIN_HH
#define SYMSQ_RANKIN_HH

/*
 * Imprimitive Rankin-Selberg and symmetric-square L-series attached to
 * Hecke eigensystems.  The module owns four layers:
 *
 *   1. exact local factors at every prime (good primes by the closed-form
 *      symmetric functions of the Satake pairs, bad primes by the
 *      degenerate pair (a_l, 0)), together with the prime-by-prime check
 *      of the factorisation
 *          P_l(f,f)  =  Q_l(Sym^2 f) * (1 - psi(l) l^{k+1} X);
 *
 *   2. exact Dirichlet series coefficients up to a bound B, each series
 *      built by two independent routes (divisor-sum convolution against
 *      the square-supported character weights, and an Euler-product sieve
 *      from the local factors) so the tests can cross-check them, plus
 *      the series-level factorisation and conjugation/twist identities;
 *
 *   3. rigorous numeric evaluation in the half-plane of absolute
 *      convergence: the truncation tail is certified through the divisor
 *      bound d(n) <= 3.53 n^{1/3} (sharpened below 10^6 by a sieved
 *      divisor-square sum) and folded into the ball radius.  A separate
 *      Euler-product evaluator with a certified log tail gives a third
 *      route;
 *
 *   4. best-effort analytic continuation by a smoothed approximate
 *      functional equation.  The gamma data (conductor, weight, Gamma_R
 *      shifts, declared poles, bad Euler factors of the primitive series)
 *      comes in by explicit configuration, the root number and pole
 *      residues are solved from sample points inside the convergent
 *      region, and the engine refuses to construct unless its value at
 *      s = 2k+4 agrees with the rigorous route.  Radii on continued
 *      values are honest estimates (quadrature halving plus observed
 *      tails), not certificates; the self-check is the gate.
 *
 * Character convention used throughout: the auxiliary character attached
 * to a series is taken primitive and then explicitly depleted at the
 * level primes.  For powers of the nebentypus this is the difference
 * between psi^e mod N and its primitive part: when psi^e collapses (real
 * psi, e even; or e = 0) the primitive part is the trivial character mod
 * 1 and the twisted coefficients survive at every n, including n sharing
 * a factor with N.  The conjugation identity
 *     series(Sym^2 f~)  =  series(Sym^2 f twisted by psi^{-2})
 * therefore holds coefficientwise exactly when a_l(f) = 0 at the primes
 * l | N where psi^{-2} stays ramified; the bundled cubic fixture is
 * built that way.
 *
 * Error mapping: evaluation below the convergence abscissa throws
 * not_convergent, a declared pole inside the requested ball throws
 * pole_at, a failed overlap gate throws self_check_failed, eigenvalues
 * missing from the coefficient data throw missing_prime, and malformed
 * requests throw bad_input.
 */

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "symsq/ball.hh"
#include "symsq/characters.hh"
#include "symsq/cyclotomic.hh"
#include "symsq/modforms.hh"

namespace symsq::rankin {

using chars::DirichletChar;
using exactnum::Ball;
using exactnum::Cyclo;
using forms::NewformData;

enum class Route { convolution, euler_product };
enum class SeriesKind { rankin_selberg, sym_square };

/* Coefficient growth certificate carried by a series so the evaluator can
 * bound its own truncation tail.  hecke: |c_n| <= n^{w0} g(n) with
 * g(n) = sum_{m^2 | n} d(n/m^2)^2 (and g(n) <= d(n)^3 <= 44 n as the
 * analytic fallback).  character: |c_n| <= n^{w0} with c supported on
 * units, so the plain zeta tail applies. */
struct Growth {
  enum class Kind { hecke, character } kind = Kind::hecke;
  double w0 = 0.0;
};

struct FormalDirichletSeries {
  uint64_t B = 0;
  std::vector<Cyclo> c;  /* 1-based: coefficient of n^{-s} is c[n-1] */
  std::string label;
  Growth growth;

  const Cyclo& at(uint64_t n) const;  /* bad_input outside [1, B] */
  FormalDirichletSeries conjugated() const;
};

struct LocalFactor {
  enum class Kind { rs_imp, sym2_imp, dirichlet };
  uint64_t l = 0;
  Kind kind = Kind::rs_imp;
  std::vector<Cyclo> poly;  /* ascending powers of X, poly[0] = 1 */

  /* 1/poly as a power series, coefficients of X^0..X^len-1 */
  std::vector<Cyclo> inverse_series(unsigned len) const;
  Ball eval(const Ball& x, unsigned prec) const;
};

/* Good l: symmetric functions of the Satake pairs; the rs_imp factor has
 * degree 4, sym2_imp degree 3, both computed in Q(psi) without root
 * extraction.  Bad l (l | level): degree <= 1 from the degenerate pair.
 * The dirichlet kind is the cofactor 1 - psi(l) l^{k+1} X completing the
 * factorisation at good l; it degenerates to 1 at bad l.  For rs_imp the
 * two systems may differ; the other kinds ignore g. */
LocalFactor local_factor(const NewformData& f, const NewformData& g,
                         uint64_t l, LocalFactor::Kind kind);
bool factorization_check_local(const NewformData& f, uint64_t l);

/* Full imprimitive Rankin-Selberg coefficients c_n(f,g) to B.  Both
 * routes are exact; they only differ in how the multiplicative structure
 * is assembled, which is what the cross-check tests exploit. */
FormalDirichletSeries series_coeffs(const NewformData& f,
                                    const NewformData& g, uint64_t B,
                                    Route route = Route::convolution);

/* Symmetric-square coefficients of f, optionally twisted by the primitive
 * part of psi^{twist_power} (0 = untwisted). */
FormalDirichletSeries sym2_series_coeffs(const NewformData& f, uint64_t B,
                                         Route route = Route::convolution,
                                         long twist_power = 0);

/* sum_n chi(n) n^{shift} n^{-s} truncated at B, chi used as given (an
 * imprimitive chi already vanishes on its bad residues). */
FormalDirichletSeries shifted_character_series(const DirichletChar& chi,
                                               long shift, uint64_t B);

struct SeriesReport {
  bool ok = true;
  uint64_t first_mismatch = 0;  /* 0 when ok */
  std::string detail;
};

/* Coefficientwise check of series(f,f) = series(Sym^2 f) * series(psi at
 * shift k+1) up to B. */
SeriesReport factorization_check_series(const NewformData& f, uint64_t B);
/* Coefficientwise check of series(Sym^2 f~) = series(Sym^2 f, twist -2),
 * f~ the conjugated system. */
SeriesReport twist_identity_check(const NewformData& f, uint64_t B);

namespace kernels {
/* The two convolution kernels behind the series builders, exposed for the
 * benchmark target and the parallel-vs-serial tests.  square_weight
 * convolves u against a weight vector supported on squares (w[m] is the
 * weight at m^2); general is the plain divisor-sum product.  Lengths are
 * truncated to the shorter operand. */
std::vector<Cyclo> square_weight_convolve(const std::vector<Cyclo>& u,
                                          const std::vector<Cyclo>& w,
                                          bool parallel);
std::vector<Cyclo> dirichlet_convolve(const std::vector<Cyclo>& a,
                                      const std::vector<Cyclo>& b,
                                      bool parallel);
/* Truncated sum_{n<=B} c_n n^{-s} with no tail; the evaluator's kernel. */
Ball partial_sum(const FormalDirichletSeries& S, const Ball& s,
                 unsigned prec, bool parallel);
}  // namespace kernels

/* Rigorous evaluation of S at s.  sigma_abs is the abscissa of absolute
 * convergence of the underlying full series (2k+3 for Rankin-Selberg and
 * the symmetric square, k+... the caller knows its series); the contract
 * requires Re s >= sigma_abs + 1 over the whole input ball, else
 * not_convergent.  The returned radius includes the certified tail. */
Ball eval_convergent(const FormalDirichletSeries& S, const Ball& s,
                     double sigma_abs, unsigned prec);

/* Third route: prod_{l <= prime_bound} P_l(l^{-s})^{-1} with a certified
 * bound on the omitted log tail.  Same convergence contract. */
Ball eval_euler_product(const NewformData& f, const NewformData& g,
                        SeriesKind kind, const Ball& s, uint64_t prime_bound,
                        unsigned prec);

/* Analytic data of the completed primitive L-function
 *   Lambda(s) = q^{s/2} prod_j Gamma_R(s + shift_j) L^prim(s).
 * bad[] records, per level prime, the imprimitive and primitive local
 * polynomials in p^{-s} (ascending, constant term 1) so the engine can
 * convert between the two normalisations. */
struct GammaConfig {
  std::string kind;  /* informational: "rs" or "sym2" */
  uint64_t q = 1;
  long w = 0;  /* functional equation s <-> w - s */
  std::vector<long> shifts;
  std::vector<long> poles;  /* real poles of Lambda, each simple */
  struct BadFactor {
    uint64_t p = 0;
    std::vector<mpq_class> imp, prim;
  };
  std::vector<BadFactor> bad;
};

/* Defaults for the self-pairing of f: rs uses shifts {-k-1, -k, 0, 1},
 * conductor N^2, w = 2k+3, poles {k+1, k+2}; sym2 uses {-k, 0, 1},
 * conductor N^2, w = 2k+3, no poles.  Bad local data is filled from the
 * eigensystem (primitive = imprimitive at the level primes except for the
 * trivial-nebentypus rs pairing, where the primitive factor gains the
 * unitary cofactor).  These match the bundled fixtures; anything more
 * exotic should come from an explicit JSON config. */
GammaConfig default_gamma_config(const NewformData& f, SeriesKind kind);
GammaConfig gamma_config_from_json(const std::string& text);
std::string gamma_config_to_json(const GammaConfig& cfg);

/*
 * Smoothed approximate functional equation engine.  Construction runs the
 * whole setup: quadrature tables, the linear solve for the root number
 * and the residues of the declared poles (from sample points in the
 * convergent region), and the mandatory overlap check at s = w/2 + 5/2
 * against eval_convergent; it throws self_check_failed when the two
 * routes disagree by more than ten times the combined radii.
 *
 * S is the imprimitive series of the object, Sdual the series of the
 * dual object (the conjugated system); both must carry enough
 * coefficients for the cutoffs the engine derives from its target
 * accuracy, else bad_input names the shortfall.
 */
class Continuation {
 public:
  Continuation(FormalDirichletSeries S, FormalDirichletSeries Sdual,
               GammaConfig cfg, unsigned prec);
  ~Continuation();
  Continuation(Continuation&&) noexcept;
  Continuation& operator=(Continuation&&) noexcept;

  /* finite imprimitive L at s; pole_at when s overlaps a declared pole
   * that survives division by the gamma factor */
  Ball eval(const Ball& s) const;
  /* completed primitive Lambda at s (pole_at near declared poles) */
  Ball completed(const Ball& s) const;

  Ball epsilon() const;        /* solved root number */
  double self_check_gap() const;  /* |afe - convergent| at the gate */
  std::string report() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/* One-shot wrapper: build the series pair at an adequate bound, run the
 * engine, evaluate.  kind picks the self-pairing series of f. */
Ball eval_continuation(const NewformData& f, SeriesKind kind, const Ball& s,
                       const GammaConfig& cfg, unsigned prec);

/* Leading-terms comparison at s = j+1 for even j in [0, k]: the contour
 * derivative of the continued Rankin-Selberg self-pairing against the
 * product of the continued symmetric square value and the derivative of
 * the depleted character L-factor at j - k.  Odd or out-of-range j is
 * refused with bad_input.  When either engine fails its overlap gate the
 * report survives with overlap_ok = false and the offending message, so
 * callers can degrade to a warning instead of aborting. */
struct LeadingTermsReport {
  Ball lhs, rhs;
  double rel_gap = 0.0;
  bool overlap_ok = true;
  std::string note;
};
LeadingTermsReport leading_terms_check(const NewformData& f, long j,
                                       const GammaConfig& rs_cfg,
                                       const GammaConfig& sym2_cfg,
                                       unsigned prec);

}  // namespace symsq::rankin

#endif
