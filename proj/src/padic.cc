#include "symsq/padic.hh"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <tuple>
#include <utility>

namespace symsq::padic {

namespace {

constexpr long kInfVal = 1L << 48;

/* ---- F_p[x] helpers on uint64 coefficient vectors, ascending ---- */

using Vu = std::vector<uint64_t>;

size_t plen(const Vu& a) {
  size_t d = a.size();
  while (d > 0 && a[d - 1] == 0) --d;
  return d; /* degree + 1, or 0 for the zero polynomial */
}

Vu pmul(const Vu& a, const Vu& b, uint64_t p) {
  size_t la = plen(a), lb = plen(b);
  if (la == 0 || lb == 0) return {};
  Vu c(la + lb - 1, 0);
  for (size_t i = 0; i < la; ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < lb; ++j) {
      if (b[j] == 0) continue;
      unsigned __int128 t = (unsigned __int128)a[i] * b[j] + c[i + j];
      c[i + j] = (uint64_t)(t % p);
    }
  }
  return c;
}

/* in-place remainder by a monic divisor */
void pred(Vu& a, const Vu& h, uint64_t p) {
  size_t dh = plen(h) - 1;
  for (size_t i = plen(a); i-- > 0;) {
    if (i < dh || a[i] == 0) continue;
    uint64_t c = a[i];
    a[i] = 0;
    for (size_t j = 0; j < dh; ++j) {
      if (h[j] == 0) continue;
      unsigned __int128 t = (unsigned __int128)(p - c % p) * h[j] + a[i - dh + j];
      a[i - dh + j] = (uint64_t)(t % p);
    }
  }
}

Vu pmulmod(const Vu& a, const Vu& b, const Vu& h, uint64_t p) {
  Vu c = pmul(a, b, p);
  pred(c, h, p);
  c.resize(plen(h) - 1, 0);
  return c;
}

Vu ppow(Vu base, const mpz_class& e, const Vu& h, uint64_t p) {
  size_t f = plen(h) - 1;
  Vu r(f, 0);
  r[0] = 1;
  if (e == 0) return r;
  size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
  for (size_t i = bits; i-- > 0;) {
    r = pmulmod(r, r, h, p);
    if (mpz_tstbit(e.get_mpz_t(), i)) r = pmulmod(r, base, h, p);
  }
  return r;
}

Vu psub(const Vu& a, const Vu& b, uint64_t p) {
  Vu c(std::max(a.size(), b.size()), 0);
  for (size_t i = 0; i < c.size(); ++i) {
    uint64_t x = i < a.size() ? a[i] : 0;
    uint64_t y = i < b.size() ? b[i] : 0;
    c[i] = (x + p - y) % p;
  }
  return c;
}

Vu pgcd(Vu a, Vu b, uint64_t p) {
  while (plen(b) > 0) {
    /* make b monic, then reduce a by it */
    size_t lb = plen(b);
    uint64_t lead = b[lb - 1];
    if (lead != 1) {
      uint64_t li = util::powmod(lead, p - 2, p);
      for (size_t i = 0; i < lb; ++i)
        b[i] = (uint64_t)((unsigned __int128)b[i] * li % p);
    }
    b.resize(lb);
    pred(a, b, p);
    a.resize(plen(a));
    std::swap(a, b);
  }
  a.resize(plen(a));
  return a;
}

bool pis_irreducible(const Vu& h, uint64_t p, unsigned f) {
  /* cheap part: no roots in F_p */
  for (uint64_t a = 0; a < p; ++a) {
    uint64_t acc = 0;
    for (size_t i = h.size(); i-- > 0;)
      acc = (uint64_t)(((unsigned __int128)acc * a + h[i]) % p);
    if (acc == 0) return false;
  }
  if (f == 1) return true;
  Vu x{0, 1};
  for (auto [q, e] : util::factor(f)) {
    (void)e;
    mpz_class pr;
    mpz_ui_pow_ui(pr.get_mpz_t(), p, f / (unsigned)q);
    Vu t = ppow(x, pr, h, p);
    Vu g = pgcd(psub(t, x, p), h, p);
    if (plen(g) > 1) return false;
  }
  mpz_class pf;
  mpz_ui_pow_ui(pf.get_mpz_t(), p, f);
  Vu t = ppow(x, pf, h, p);
  t.resize(plen(t));
  Vu xr = x;
  xr.resize(plen(xr));
  return t == xr;
}

/* smallest monic irreducible of degree f, coefficient vector read base p */
const Vu& find_h(uint64_t p, unsigned f) {
  static std::mutex mx;
  static std::map<std::pair<uint64_t, unsigned>, Vu> cache;
  std::lock_guard<std::mutex> lk(mx);
  auto key = std::make_pair(p, f);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  Vu h;
  if (f == 1) {
    h = Vu{0, 1};
  } else {
    Vu c(f, 0);
    for (uint64_t tries = 0;; ++tries) {
      if (tries > 50000000ULL)
        fail(errc::not_convergent, "ran out of candidates for a defining polynomial");
      /* next coefficient vector in base-p counting order */
      size_t i = 0;
      while (i < f && ++c[i] == p) c[i++] = 0;
      if (i == f) fail(errc::not_convergent, "defining polynomial search exhausted");
      if (c[0] == 0) continue;
      h.assign(c.begin(), c.end());
      h.push_back(1);
      if (pis_irreducible(h, p, f)) break;
    }
  }
  return cache.emplace(key, std::move(h)).first->second;
}

Vu int_to_vec(uint64_t t, uint64_t p, unsigned f) {
  Vu v(f, 0);
  for (unsigned i = 0; i < f && t; ++i) {
    v[i] = t % p;
    t /= p;
  }
  return v;
}

mpz_class vec_encode(const Vu& v, uint64_t p) {
  mpz_class acc = 0;
  for (size_t i = v.size(); i-- > 0;) {
    acc *= (unsigned long)p;
    acc += (unsigned long)v[i];
  }
  return acc;
}

std::mutex ctx_mx;
std::map<std::tuple<uint64_t, unsigned, unsigned>, std::unique_ptr<PadicCtx>>&
ctx_map() {
  static std::map<std::tuple<uint64_t, unsigned, unsigned>,
                  std::unique_ptr<PadicCtx>> m;
  return m;
}

}  // namespace

const PadicCtx& padic_ctx(uint64_t p, unsigned f, unsigned prec) {
  if (p < 3 || p % 2 == 0 || !util::is_prime(p))
    fail(errc::bad_input, "p-adic contexts need an odd prime");
  if (f == 0 || prec == 0) fail(errc::bad_input, "bad p-adic context parameters");
  std::lock_guard<std::mutex> lk(ctx_mx);
  auto key = std::make_tuple(p, f, prec);
  auto& cm = ctx_map();
  auto it = cm.find(key);
  if (it != cm.end()) return *it->second;

  auto c = std::make_unique<PadicCtx>();
  c->p = p;
  c->f = f;
  c->prec = prec;
  mpz_ui_pow_ui(c->pM.get_mpz_t(), p, prec);
  const Vu& hu = find_h(p, f);
  c->H.resize(f + 1);
  for (unsigned i = 0; i <= f; ++i) c->H[i] = (unsigned long)hu[i];

  if (f >= 2) {
    std::vector<mpz_class> row(f);
    for (unsigned i = 0; i < f; ++i)
      row[i] = (c->pM - c->H[i]) % c->pM;
    c->red.push_back(row);
    for (unsigned e = f + 1; e <= 2 * f - 2; ++e) {
      std::vector<mpz_class> nxt(f);
      mpz_class top = row[f - 1];
      for (unsigned i = f - 1; i >= 1; --i) nxt[i] = row[i - 1];
      if (top != 0)
        for (unsigned i = 0; i < f; ++i)
          nxt[i] = (nxt[i] + top * c->red[0][i]) % c->pM;
      row = std::move(nxt);
      c->red.push_back(row);
    }
  }
  const PadicCtx* out = c.get();
  cm.emplace(key, std::move(c));
  return *out;
}

/* ---- element machinery ---- */

Padic Padic::make(const PadicCtx& c, std::vector<mpz_class> u, long shift,
                  long known_abs) {
  Padic z;
  z.ctx_ = &c;
  u.resize(c.f, mpz_class(0));
  long vmin = (long)c.prec;
  for (auto& x : u) {
    mpz_fdiv_r(x.get_mpz_t(), x.get_mpz_t(), c.pM.get_mpz_t());
    if (x != 0) vmin = std::min(vmin, util::valuation(x, c.p));
  }
  if (vmin >= (long)c.prec) {
    /* nothing visible below the working modulus */
    long abs = std::min(known_abs, shift + (long)c.prec);
    if (abs >= kInfVal / 2) {
      z.val_ = kInfVal;
      z.rel_ = 0;
      return z;
    }
    z.val_ = abs;
    z.rel_ = 0;
    return z;
  }
  if (vmin > 0) {
    mpz_class pv;
    mpz_ui_pow_ui(pv.get_mpz_t(), c.p, (unsigned long)vmin);
    for (auto& x : u) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), pv.get_mpz_t());
  }
  long val = shift + vmin;
  long rel = std::min(known_abs - val, (long)c.prec - vmin);
  if (rel <= 0) {
    z.val_ = known_abs;
    z.rel_ = 0;
    return z;
  }
  z.val_ = val;
  z.rel_ = (unsigned)rel;
  z.u_ = std::move(u);
  return z;
}

Padic Padic::zero(const PadicCtx& c) {
  Padic z;
  z.ctx_ = &c;
  z.val_ = kInfVal;
  z.rel_ = 0;
  return z;
}

Padic Padic::unknown_zero(const PadicCtx& c, long absprec) {
  Padic z;
  z.ctx_ = &c;
  z.val_ = absprec;
  z.rel_ = 0;
  return z;
}

Padic Padic::from_rational(const PadicCtx& c, const mpq_class& q) {
  if (q == 0) return zero(c);
  long t = util::valuation(q, c.p);
  mpz_class num = q.get_num(), den = q.get_den();
  mpz_class pv;
  if (t > 0) {
    mpz_ui_pow_ui(pv.get_mpz_t(), c.p, (unsigned long)t);
    mpz_divexact(num.get_mpz_t(), num.get_mpz_t(), pv.get_mpz_t());
  } else if (t < 0) {
    mpz_ui_pow_ui(pv.get_mpz_t(), c.p, (unsigned long)(-t));
    mpz_divexact(den.get_mpz_t(), den.get_mpz_t(), pv.get_mpz_t());
  }
  mpz_class di = util::invmod(den % c.pM, c.pM);
  std::vector<mpz_class> u(c.f);
  u[0] = (num % c.pM) * di;
  return make(c, std::move(u), t, kInfVal);
}

Padic Padic::from_vec(const PadicCtx& c, std::vector<mpz_class> u, long shift) {
  return make(c, std::move(u), shift, kInfVal);
}

const PadicCtx& Padic::ctx() const {
  if (!ctx_) fail(errc::bad_input, "uninitialised p-adic element");
  return *ctx_;
}

bool Padic::is_exact_zero() const { return rel_ == 0 && val_ >= kInfVal / 2; }

long Padic::val() const {
  if (rel_ == 0) fail(errc::bad_input, "valuation of a zero element");
  return val_;
}

long Padic::absprec() const {
  if (!ctx_) fail(errc::bad_input, "uninitialised p-adic element");
  return rel_ == 0 ? val_ : val_ + (long)rel_;
}

namespace {
const PadicCtx& common_ctx(const Padic& a, const Padic& b) {
  const PadicCtx& c = a.ctx();
  if (&c != &b.ctx()) fail(errc::bad_input, "mixed p-adic contexts");
  return c;
}
}  // namespace

Padic Padic::add(const Padic& o) const {
  const PadicCtx& c = common_ctx(*this, o);
  if (is_exact_zero()) return o;
  if (o.is_exact_zero()) return *this;
  if (rel_ == 0 || o.rel_ == 0) {
    long cap = std::min(absprec(), o.absprec());
    const Padic& live = rel_ == 0 ? o : *this;
    if (live.rel_ == 0) return unknown_zero(c, cap);
    return make(c, live.u_, live.val_, cap);
  }
  long v = std::min(val_, o.val_);
  std::vector<mpz_class> u(c.f);
  mpz_class pa, pb;
  mpz_ui_pow_ui(pa.get_mpz_t(), c.p, (unsigned long)(val_ - v));
  mpz_ui_pow_ui(pb.get_mpz_t(), c.p, (unsigned long)(o.val_ - v));
  for (unsigned i = 0; i < c.f; ++i) u[i] = u_[i] * pa + o.u_[i] * pb;
  long known = std::min({absprec(), o.absprec(), v + (long)c.prec});
  return make(c, std::move(u), v, known);
}

Padic Padic::sub(const Padic& o) const { return add(o.neg()); }

Padic Padic::neg() const {
  if (rel_ == 0) return *this;
  Padic z = *this;
  for (auto& x : z.u_) x = (ctx_->pM - x) % ctx_->pM;
  return z;
}

Padic Padic::mul(const Padic& o) const {
  const PadicCtx& c = common_ctx(*this, o);
  if (is_exact_zero() || o.is_exact_zero()) return zero(c);
  /* for a zero-ish factor val_ already holds its absolute precision */
  if (rel_ == 0 || o.rel_ == 0) return unknown_zero(c, val_ + o.val_);
  std::vector<mpz_class> raw(2 * c.f - 1);
  for (unsigned i = 0; i < c.f; ++i) {
    if (u_[i] == 0) continue;
    for (unsigned j = 0; j < c.f; ++j)
      if (o.u_[j] != 0) raw[i + j] += u_[i] * o.u_[j];
  }
  std::vector<mpz_class> u(raw.begin(), raw.begin() + c.f);
  for (unsigned e = c.f; e < raw.size(); ++e) {
    if (raw[e] == 0) continue;
    mpz_class t = raw[e] % c.pM;
    const auto& row = c.red[e - c.f];
    for (unsigned i = 0; i < c.f; ++i)
      if (row[i] != 0) u[i] += t * row[i];
  }
  long val = val_ + o.val_;
  long rel = std::min(rel_, o.rel_);
  return make(c, std::move(u), val, val + rel);
}

Padic Padic::mul_q(const mpq_class& q) const {
  const PadicCtx& c = ctx();
  if (q == 0) return zero(c);
  if (is_exact_zero()) return *this;
  long t = util::valuation(q, c.p);
  if (rel_ == 0) return unknown_zero(c, val_ + t);
  mpq_class qu = q / util::pow_q(c.p, t);
  mpz_class num = qu.get_num() % c.pM;
  mpz_class di = util::invmod(qu.get_den() % c.pM, c.pM);
  mpz_class s = (num * di) % c.pM;
  std::vector<mpz_class> u(c.f);
  for (unsigned i = 0; i < c.f; ++i) u[i] = u_[i] * s;
  return make(c, std::move(u), val_ + t, val_ + t + (long)rel_);
}

Padic Padic::inv() const {
  const PadicCtx& c = ctx();
  if (rel_ == 0) fail(errc::division_by_zero, "inverse of a p-adic zero");
  std::vector<mpz_class> y(c.f);
  if (c.f == 1) {
    y[0] = util::invmod(u_[0], c.pM);
    return make(c, std::move(y), -val_, -val_ + (long)rel_);
  }
  /* residue inverse by Fermat in F_{p^f}, then Newton doubling */
  Vu a(c.f);
  for (unsigned i = 0; i < c.f; ++i)
    a[i] = mpz_fdiv_ui(u_[i].get_mpz_t(), c.p);
  Vu h(c.f + 1);
  for (unsigned i = 0; i <= c.f; ++i) h[i] = mpz_get_ui(c.H[i].get_mpz_t());
  mpz_class e;
  mpz_ui_pow_ui(e.get_mpz_t(), c.p, c.f);
  e -= 2;
  Vu y0 = ppow(a, e, h, c.p);
  if (plen(y0) == 0) fail(errc::division_by_zero, "unit has no residue inverse");
  for (unsigned i = 0; i < c.f; ++i) y[i] = (unsigned long)y0[i];
  Padic yi = make(c, std::move(y), 0, kInfVal);
  Padic uu = make(c, u_, 0, kInfVal);
  Padic two = from_long(c, 2);
  for (unsigned got = 1; got < c.prec; got *= 2)
    yi = yi.mul(two.sub(uu.mul(yi)));
  return make(c, yi.u_, -val_, -val_ + (long)rel_);
}

Padic Padic::pow(long e) const {
  const PadicCtx& c = ctx();
  if (e == 0) return from_long(c, 1);
  if (e < 0) return inv().pow(-e);
  if (rel_ == 0) {
    if (is_exact_zero()) return *this;
    return unknown_zero(c, val_ * e);
  }
  Padic acc = from_long(c, 1);
  Padic base = *this;
  unsigned long u = (unsigned long)e;
  while (u) {
    if (u & 1) acc = acc.mul(base);
    u >>= 1;
    if (u) base = base.mul(base);
  }
  return acc;
}

namespace {
Padic pow_mpz(const Padic& b, const mpz_class& e) {
  Padic acc = Padic::from_long(b.ctx(), 1);
  size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
  if (e == 0) return acc;
  for (size_t i = bits; i-- > 0;) {
    acc = acc.mul(acc);
    if (mpz_tstbit(e.get_mpz_t(), i)) acc = acc.mul(b);
  }
  return acc;
}
}  // namespace

Padic Padic::teichmuller() const {
  const PadicCtx& c = ctx();
  if (rel_ == 0 || val_ != 0)
    fail(errc::bad_input, "teichmuller lift needs a unit");
  mpz_class pf;
  mpz_ui_pow_ui(pf.get_mpz_t(), c.p, c.f);
  Padic z = make(c, u_, 0, kInfVal);
  for (unsigned k = 0; k <= c.prec; ++k) {
    Padic nz = pow_mpz(z, pf);
    if (nz.u_ == z.u_) break;
    z = std::move(nz);
  }
  return z;
}

Padic Padic::log1() const {
  const PadicCtx& c = ctx();
  Padic x = sub(from_long(c, 1));
  if (x.is_zero()) return unknown_zero(c, x.absprec());
  long v = x.val();
  if (v < 1) fail(errc::bad_input, "log needs a one-unit");
  /* term n has valuation n v - v_p(n) >= n v - log_p(n); running to
   * (target + margin)/v with a margin swamping log_p(n) is enough */
  long target = std::min(absprec(), v + (long)c.prec);
  long nmax = (target + 16) / v + 16;
  Padic acc = zero(c);
  Padic xn = from_long(c, 1);
  for (long n = 1; n <= nmax; ++n) {
    xn = xn.mul(x);
    mpq_class coef(1, n);
    if (n % 2 == 0) coef = -coef;
    acc = acc.add(xn.mul_q(coef));
  }
  return acc;
}

Padic Padic::exp1() const {
  const PadicCtx& c = ctx();
  if (is_zero()) return from_long(c, 1);
  long v = val_;
  if (v < 1) fail(errc::bad_input, "exp needs positive valuation");
  /* v_p(n!) <= (n-1)/(p-1), so term n has valuation at least
   * n(v - 1/(p-1)), positive slope for odd p and v >= 1 */
  long target = std::min(absprec(), v + (long)c.prec);
  double slope = (double)v - 1.0 / (double)(c.p - 1);
  long nmax = (long)((double)(target + 8) / slope) + 8;
  Padic acc = from_long(c, 1);
  Padic term = from_long(c, 1);
  for (long n = 1; n <= nmax; ++n) {
    term = term.mul(*this).mul_q(mpq_class(1, n));
    acc = acc.add(term);
  }
  return acc;
}

bool Padic::eq_mod(const Padic& o, long k) const {
  Padic d = sub(o);
  if (d.is_exact_zero()) return true;
  if (d.absprec() < k)
    fail(errc::bad_input, "p-adic comparison beyond known precision");
  if (d.rel_ == 0) return true;
  return d.val_ >= k;
}

mpz_class Padic::lift_int(long k) const {
  const PadicCtx& c = ctx();
  if (c.f != 1) fail(errc::bad_input, "integer lift needs a scalar context");
  if (k < 1 || absprec() < k)
    fail(errc::bad_input, "integer lift beyond known precision");
  mpz_class pk;
  mpz_ui_pow_ui(pk.get_mpz_t(), c.p, (unsigned long)k);
  if (rel_ == 0) return 0;
  if (val_ < 0) fail(errc::bad_input, "integer lift of a non-integral value");
  mpz_class pv;
  mpz_ui_pow_ui(pv.get_mpz_t(), c.p, (unsigned long)val_);
  mpz_class r = (u_[0] * pv) % pk;
  if (r < 0) r += pk;
  return r;
}

std::vector<uint64_t> Padic::digits(long k) const {
  mpz_class r = lift_int(k);
  std::vector<uint64_t> d((size_t)k);
  for (long i = 0; i < k; ++i) {
    d[(size_t)i] = mpz_fdiv_ui(r.get_mpz_t(), ctx_->p);
    r /= (unsigned long)ctx_->p;
  }
  return d;
}

std::vector<uint64_t> Padic::residue() const {
  const PadicCtx& c = ctx();
  std::vector<uint64_t> r(c.f, 0);
  if (rel_ == 0 || val_ > 0) return r;
  if (val_ < 0) fail(errc::bad_input, "residue of a non-integral value");
  for (unsigned i = 0; i < c.f; ++i) r[i] = mpz_fdiv_ui(u_[i].get_mpz_t(), c.p);
  return r;
}

Padic Padic::scalar_to(const PadicCtx& c2) const {
  const PadicCtx& c1 = ctx();
  if (c1.f != 1) fail(errc::bad_input, "scalar_to wants a scalar source");
  if (c2.p != c1.p) fail(errc::bad_input, "scalar_to across different primes");
  if (is_exact_zero()) return zero(c2);
  if (rel_ == 0) return unknown_zero(c2, val_);
  std::vector<mpz_class> u(c2.f, mpz_class(0));
  u[0] = u_[0];
  return make(c2, std::move(u), val_, absprec());
}

std::string Padic::str() const {
  const PadicCtx& c = ctx();
  std::ostringstream os;
  if (rel_ == 0) {
    if (is_exact_zero()) return "0";
    os << "O(" << c.p << "^" << val_ << ")";
    return os.str();
  }
  os << c.p << "^" << val_ << "*(";
  for (unsigned i = 0; i < c.f; ++i) {
    if (i) os << ",";
    os << u_[i].get_str();
  }
  os << ") + O(" << c.p << "^" << absprec() << ")";
  return os.str();
}

Padic padic_root_of_unity(const PadicCtx& c, uint64_t n) {
  if (n == 0 || util::gcd_u64(n, c.p) != 1)
    fail(errc::bad_input, "root of unity order must be prime to p");
  if (n == 1) return Padic::from_long(c, 1);

  mpz_class g;
  mpz_ui_pow_ui(g.get_mpz_t(), c.p, c.f);
  g -= 1;
  if (!mpz_divisible_ui_p(g.get_mpz_t(), n))
    fail(errc::bad_input, "field has no root of unity of this order");

  Vu h(c.f + 1);
  for (unsigned i = 0; i <= c.f; ++i)
    h[i] = mpz_get_ui(c.H[i].get_mpz_t()) % c.p;

  /* residue root, one prime power at a time */
  Vu root(c.f, 0);
  root[0] = 1;
  for (auto [q, a] : util::factor(n)) {
    uint64_t qa = 1;
    for (unsigned i = 0; i < a; ++i) qa *= q;
    unsigned cq = 0;
    mpz_class gg = g;
    while (mpz_divisible_ui_p(gg.get_mpz_t(), q)) {
      mpz_divexact_ui(gg.get_mpz_t(), gg.get_mpz_t(), q);
      ++cq;
    }
    mpz_class cof = g;
    mpz_class qcq;
    mpz_ui_pow_ui(qcq.get_mpz_t(), q, cq);
    mpz_divexact(cof.get_mpz_t(), cof.get_mpz_t(), qcq.get_mpz_t());

    /* deterministic scan for an element of maximal q-power order */
    Vu w;
    bool found = false;
    for (uint64_t t = 1; t < 2000000; ++t) {
      Vu y = int_to_vec(t, c.p, c.f);
      if (plen(y) == 0) continue;
      w = ppow(y, cof, h, c.p);
      mpz_class chk;
      mpz_ui_pow_ui(chk.get_mpz_t(), q, cq - 1);
      Vu ww = ppow(w, chk, h, c.p);
      if (!(plen(ww) == 1 && ww[0] == 1)) {
        found = true;
        break;
      }
    }
    if (!found) fail(errc::not_convergent, "no generator found for root of unity");
    mpz_class down;
    mpz_ui_pow_ui(down.get_mpz_t(), q, cq - a);
    Vu z0 = ppow(w, down, h, c.p);

    /* exact order q^a; choose the conjugate with smallest encoding */
    Vu best = z0, cur = z0;
    mpz_class bestenc = vec_encode(z0, c.p);
    for (uint64_t j = 2; j < qa; ++j) {
      cur = pmulmod(cur, z0, h, c.p);
      if (j % q == 0) continue;
      mpz_class e = vec_encode(cur, c.p);
      if (e < bestenc) {
        bestenc = e;
        best = cur;
      }
    }
    uint64_t eq = util::invmod(n / qa % qa, qa);
    root = pmulmod(root, ppow(best, mpz_class((unsigned long)eq), h, c.p), h, c.p);
  }

  /* Hensel: X^n - 1 is separable at this root since p does not divide n */
  std::vector<mpz_class> rv(c.f);
  for (unsigned i = 0; i < c.f; ++i) rv[i] = (unsigned long)root[i];
  Padic z = Padic::from_vec(c, std::move(rv), 0);
  Padic one = Padic::from_long(c, 1);
  for (unsigned it = 0;; ++it) {
    if (it > 2 * c.prec + 16)
      fail(errc::not_convergent, "root of unity lift did not converge");
    Padic zn1 = z.pow((long)n - 1);
    Padic F = zn1.mul(z).sub(one);
    if (F.is_zero() || F.val() >= (long)c.prec) break;
    Padic d = zn1.mul_q(mpq_class((unsigned long)n));
    z = z.sub(F.div(d));
  }
  if (!z.pow((long)n).eq_mod(one, (long)c.prec))
    fail(errc::not_convergent, "lifted root fails its defining equation");
  return z;
}

mpz_class teichmuller_int(uint64_t r, uint64_t p, unsigned prec) {
  if (r % p == 0) fail(errc::bad_input, "teichmuller lift needs a unit residue");
  const PadicCtx& c = padic_ctx(p, 1, prec);
  return Padic::from_rational(c, mpq_class((unsigned long)r)).teichmuller()
      .lift_int((long)prec);
}

}  // namespace symsq::padic
