#ifndef SYMSQ_EMBED_HH
#define SYMSQ_EMBED_HH

/*
 * Fixed embeddings of cyclotomic fields into unramified p-adic fields.
 *
 * An Embedding is pinned to one compositum order m: it strips the p-part
 * of m, builds the context of degree f = ord_{m'}(p), and maps the
 * primitive m'-th root of unity to the deterministic choice from
 * padic_root_of_unity.  Every element of a multi-term identity must go
 * through the same Embedding; mapping two terms through embeddings of
 * different orders can silently pick incompatible roots, so operator()
 * refuses elements whose order does not divide the declared compositum.
 *
 * Elements whose order has a p-part are first descended to the prime-to-p
 * subfield when they actually lie there (checked by Galois invariance);
 * anything genuinely involving p-power roots of unity is ramified and
 * rejected.
 */

#include <cstdint>

#include "symsq/cyclotomic.hh"
#include "symsq/padic.hh"

namespace symsq::padic {

/* strip the p-part of m and return the context of degree ord_{m'}(p) */
const PadicCtx& embedding_ctx(uint64_t p, unsigned m, unsigned prec);

/* rewrite z in the prime-to-p subfield, or throw ramified_embedding */
exactnum::Cyclo descend_to_tame(const exactnum::Cyclo& z, uint64_t p);

class Embedding {
public:
  Embedding(uint64_t p, unsigned m, unsigned prec);

  const PadicCtx& ctx() const { return *c_; }
  uint64_t p() const { return c_->p; }
  /* the compositum order with its p-part removed */
  unsigned tame_order() const { return mt_; }
  /* image of the primitive tame_order()-th root of unity */
  const Padic& zeta() const { return zeta_; }

  Padic operator()(const exactnum::Cyclo& z) const;

private:
  const PadicCtx* c_;
  unsigned mt_;
  Padic zeta_;
};

/* one-off embedding of a single element */
Padic embed_padic(const exactnum::Cyclo& z, uint64_t p, unsigned prec);

}  // namespace symsq::padic

#endif
