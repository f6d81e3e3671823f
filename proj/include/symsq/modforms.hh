#ifndef SYMSQ_MODFORMS_HH
#define SYMSQ_MODFORMS_HH

/*
 * Hecke eigenvalue systems and their local data: loading and validating
 * newform-style eigenvalue packets, synthesizing systems that satisfy the
 * same relations, the conjugate system, Satake parameters at good primes,
 * p-stabilisations with exact Newton-polygon slopes, and the ordinary /
 * supersingular / regular classification.
 *
 * Weight convention: we store k and the form has weight k+2.  The
 * nebentypus psi lives mod the level N and must satisfy psi(-1) = (-1)^k.
 * Eigenvalues are cyclotomic numbers; for n coprime to the conductor of
 * psi they satisfy conj(a_n) = psi^{-1}(n) a_n.  Composite eigenvalues
 * follow multiplicativity together with
 *
 *     a_{l^{r+1}} = a_l a_{l^r} - psi(l) l^{k+1} a_{l^{r-1}}   (l not | N)
 *     a_{l^r}     = a_l^r                                      (l | N)
 *
 * which is the (a_l, 0) Satake convention at bad primes.  Slopes are exact
 * rationals read off the Newton polygon of X^2 - a_p X + psi(p) p^{k+1};
 * "alpha" always names the root of smaller (or equal) valuation.
 */

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "symsq/ball.hh"
#include "symsq/characters.hh"
#include "symsq/cyclotomic.hh"
#include "symsq/util.hh"

namespace symsq::forms {

struct NewformData {
  uint64_t N = 1;               /* level */
  unsigned k = 0;               /* weight is k+2 */
  chars::DirichletChar psi;     /* nebentypus mod N */
  std::map<uint64_t, exactnum::Cyclo> a_prime;

  /* optional extras carried by the JSON schema */
  std::optional<std::array<std::string, 3>> petersson_str;  /* re, im, radius */
  std::optional<exactnum::Cyclo> aN_star;                   /* a_N(f*) */
  bool is_newform = false;
  bool has_CM = false;

  std::string provenance;             /* free-form history notes */
  std::vector<std::string> warnings;  /* non-fatal diagnostics */

  bool has_ap(uint64_t l) const { return a_prime.count(l) != 0; }
  const exactnum::Cyclo& ap(uint64_t l) const;     /* throws missing_prime */
  exactnum::Cyclo psi_at(uint64_t r) const;        /* psi(r); 0 off units */

  /* a_{l^j} by the recursion above */
  exactnum::Cyclo prime_power(uint64_t l, unsigned j) const;
  /* a_n for arbitrary n >= 1 by multiplicativity */
  exactnum::Cyclo a_n(uint64_t n) const;
  /* dense table a_1..a_B (index 0 unused, set to 0) */
  std::vector<exactnum::Cyclo> expand(uint64_t B) const;

  std::optional<exactnum::Ball> petersson(unsigned prec) const;

  /* checks parity, the conjugation law at every stored prime, and the
   * Ramanujan bound (bound failures only warn); loud on violations */
  void validate();
};

/* memoizing prime-power table; one instance per coefficient expansion job
 * so repeated a_{n^2} extraction does not redo the recursion */
class HeckeTable {
public:
  explicit HeckeTable(const NewformData& f) : f_(f) {}
  const exactnum::Cyclo& prime_power(uint64_t l, unsigned j);
  exactnum::Cyclo at(uint64_t n);
  exactnum::Cyclo at_square(uint64_t n);  /* a_{n^2} */

private:
  const NewformData& f_;
  std::map<uint64_t, std::vector<exactnum::Cyclo>> pw_;
};

/* JSON schema:
 *   { "level": N, "weight": k+2, "character": <descriptor>,
 *     "an": [[n, value], ...],
 *     "petersson_norm": [re, im, radius]?, "aN_star": value?,
 *     "has_CM": bool?, "is_newform": bool? }
 * where value is an integer, a "p/q" string, or
 * { "zeta": m, "coeffs": ["p/q", ...] } on the power basis of zeta_m,
 * and <descriptor> is { "modulus": N, "values": [[r, value], ...] } or
 * { "modulus": N, "index": i } into the enumeration order.
 * Composite "an" entries are validated against the recursion, then
 * dropped (they are derived data). */
NewformData load_newform_text(const std::string& json_text);
NewformData load_newform_file(const std::string& path);
std::string serialize_newform(const NewformData& f);

/* builds a system from seed eigenvalues; same validation as loading */
NewformData synth_hecke_system(uint64_t N, unsigned k,
                               const chars::DirichletChar& psi,
                               const std::map<uint64_t, exactnum::Cyclo>& seeds);

/* f*: conjugated eigenvalues, nebentypus psi^{-1}.  The level is recorded
 * as N with a provenance note; the true level only divides N N_psi^2, but
 * nothing downstream needs more than its prime support, which is the same. */
NewformData conjugate_form(const NewformData& f);

struct SatakeParams {
  uint64_t l = 0;
  exactnum::Cyclo trace;   /* a_l */
  exactnum::Cyclo norm;    /* psi(l) l^{k+1} */
  exactnum::Cyclo disc;    /* trace^2 - 4 norm; alpha,beta = (trace +- sqrt)/2 */
  bool equal_roots = false;
  mpq_class val_alpha;     /* l-adic valuations, val_alpha <= val_beta */
  mpq_class val_beta;
  std::vector<std::string> notes;
};

/* exact Satake data at a good prime; purity |alpha| = |beta| = l^{(k+1)/2}
 * is re-checked numerically and reported as a note, never an error */
SatakeParams satake(const NewformData& f, uint64_t l);

struct StabilisationData {
  uint64_t p = 0;
  char which = 'a';        /* 'a' or 'b' */
  mpq_class slope;         /* v_p of the chosen root, exact */
  bool ordinary = false;   /* slope == 0 */
  std::string level_tag;   /* "Gamma1(N) cap Gamma0(p)" */
};

StabilisationData stabilise(const NewformData& f, uint64_t p, char which);

struct Classification {
  bool ordinary = false;       /* v_p(a_p) = 0 */
  bool supersingular = false;  /* v_p(a_p) > 0, including a_p = 0 */
  bool ap_zero = false;
  mpq_class slope_ap;          /* meaningless when ap_zero */
  mpq_class slope_alpha, slope_beta;
  bool p_regular = false;      /* alpha != beta */
  bool noble_alpha = false, noble_beta = false;
  std::string nobility_note;
};

/* cm_split: whether p splits in the CM field when f.has_CM; this is input
 * data, never inferred.  A stabilisation is flagged noble when the roots
 * are distinct and the critical-slope CM-split case is excluded. */
Classification classify(const NewformData& f, uint64_t p, bool cm_split);

/* exact valuation of a cyclotomic number at p under the fixed embedding;
 * the element must be nonzero and must descend to a field where p is
 * unramified */
mpq_class cyclo_valuation(const exactnum::Cyclo& z, uint64_t p);

}  // namespace symsq::forms

#endif
