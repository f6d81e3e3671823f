#include "symsq/embed.hh"

#include <map>
#include <mutex>
#include <utility>

namespace symsq::padic {

using exactnum::Cyclo;

const PadicCtx& embedding_ctx(uint64_t p, unsigned m, unsigned prec) {
  unsigned mt = m;
  while (mt % p == 0) mt /= (unsigned)p;
  unsigned f = mt <= 2 ? 1 : (unsigned)util::mult_order(p % mt, mt);
  return padic_ctx(p, f, prec);
}

Cyclo descend_to_tame(const Cyclo& z, uint64_t p) {
  const unsigned m = z.order();
  if (m % p != 0) return z;
  if (z.is_rational()) return Cyclo::rational(z.to_rational(), 1);

  unsigned pe = 1, mt = m;
  while (mt % p == 0) {
    mt /= (unsigned)p;
    pe *= (unsigned)p;
  }

  /* invariance under the generator of Gal(Q(zeta_m)/Q(zeta_mt)): that
   * subgroup is cyclic for odd p, generated by any j with j = 1 mod mt
   * and j a primitive root mod p^e */
  unsigned e = 0;
  for (unsigned t = pe; t > 1; t /= (unsigned)p) ++e;
  uint64_t g = util::primitive_root(p, e);
  uint64_t j0;
  if (mt == 1) {
    j0 = g % pe;
  } else {
    uint64_t inv_mt = util::invmod(mt % pe, pe);
    uint64_t inv_pe = util::invmod(pe % mt, mt);
    j0 = ((g % pe) * inv_mt % pe) * mt + (1 * inv_pe % mt) * pe;
    j0 %= m;
  }
  if (!(z.galois((long)j0) == z))
    fail(errc::ramified_embedding,
         "element involves p-power roots of unity");

  /* solve for coordinates in the zeta_mt power basis */
  const unsigned phi_m = (unsigned)z.coeffs().size();
  const unsigned phi_t = exactnum::cyclo_tables(mt).phi;
  std::vector<std::vector<mpq_class>> a(phi_m,
                                        std::vector<mpq_class>(phi_t + 1));
  for (unsigned j = 0; j < phi_t; ++j) {
    Cyclo col = Cyclo::root(mt, (long)j).lift(m);
    for (unsigned r = 0; r < phi_m; ++r) a[r][j] = col.coeffs()[r];
  }
  for (unsigned r = 0; r < phi_m; ++r) a[r][phi_t] = z.coeffs()[r];

  unsigned row = 0;
  std::vector<unsigned> pivot_row(phi_t, 0);
  for (unsigned k = 0; k < phi_t; ++k) {
    unsigned piv = row;
    while (piv < phi_m && a[piv][k] == 0) ++piv;
    if (piv == phi_m)
      fail(errc::bad_input, "degenerate basis in cyclotomic descent");
    if (piv != row) std::swap(a[piv], a[row]);
    mpq_class d = a[row][k];
    for (unsigned cc = k; cc <= phi_t; ++cc) a[row][cc] /= d;
    for (unsigned r = 0; r < phi_m; ++r) {
      if (r == row || a[r][k] == 0) continue;
      mpq_class f2 = a[r][k];
      for (unsigned cc = k; cc <= phi_t; ++cc) a[r][cc] -= f2 * a[row][cc];
    }
    pivot_row[k] = row;
    ++row;
  }
  for (unsigned r = row; r < phi_m; ++r)
    if (a[r][phi_t] != 0)
      fail(errc::ramified_embedding,
           "element does not descend to the prime-to-p subfield");

  std::vector<mpq_class> x(phi_t);
  for (unsigned k = 0; k < phi_t; ++k) x[k] = a[pivot_row[k]][phi_t];
  Cyclo out = Cyclo::zero(mt);
  for (unsigned k = 0; k < phi_t; ++k)
    if (x[k] != 0)
      out = out.add(Cyclo::root(mt, (long)k).mul_q(x[k]));
  return out;
}

namespace {
std::mutex root_mx;
std::map<std::pair<const PadicCtx*, uint64_t>, Padic>& root_cache() {
  static std::map<std::pair<const PadicCtx*, uint64_t>, Padic> m;
  return m;
}

Padic cached_root(const PadicCtx& c, uint64_t n) {
  std::lock_guard<std::mutex> lk(root_mx);
  auto key = std::make_pair(&c, n);
  auto& rc = root_cache();
  auto it = rc.find(key);
  if (it == rc.end()) it = rc.emplace(key, padic_root_of_unity(c, n)).first;
  return it->second;
}
}  // namespace

Embedding::Embedding(uint64_t p, unsigned m, unsigned prec) {
  if (m == 0) fail(errc::bad_input, "embedding needs a positive order");
  unsigned mt = m;
  while (mt % p == 0) mt /= (unsigned)p;
  mt_ = mt;
  c_ = &embedding_ctx(p, m, prec);
  zeta_ = cached_root(*c_, mt_);
}

Padic Embedding::operator()(const Cyclo& z) const {
  if (z.is_rational()) return Padic::from_rational(*c_, z.to_rational());
  Cyclo zt = descend_to_tame(z, c_->p);
  const unsigned mz = zt.order();
  if (mt_ % mz != 0)
    fail(errc::bad_input, "element lies outside the declared compositum");
  Padic w = zeta_.pow((long)(mt_ / mz));
  const auto& b = zt.coeffs();
  Padic acc = Padic::from_rational(*c_, b.back());
  for (size_t i = b.size() - 1; i-- > 0;)
    acc = acc.mul(w).add(Padic::from_rational(*c_, b[i]));
  return acc;
}

Padic embed_padic(const Cyclo& z, uint64_t p, unsigned prec) {
  return Embedding(p, z.order(), prec)(z);
}

}  // namespace symsq::padic
