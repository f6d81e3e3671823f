#include "symsq/cyclotomic.hh"

#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <utility>

namespace symsq::exactnum {

namespace {

std::mutex tables_mx;
std::map<unsigned, std::unique_ptr<CycloTables>>& table_map() {
  static std::map<unsigned, std::unique_ptr<CycloTables>> m;
  return m;
}

/* exact long division by a monic divisor, ascending coefficients */
std::vector<mpz_class> poly_div_exact(std::vector<mpz_class> num,
                                      const std::vector<mpz_class>& den) {
  const size_t d = den.size() - 1;
  if (num.size() <= d) fail(errc::bad_input, "polynomial division underflow");
  std::vector<mpz_class> quo(num.size() - d);
  for (size_t i = quo.size(); i-- > 0;) {
    quo[i] = num[i + d];
    if (quo[i] != 0)
      for (size_t j = 0; j < d; ++j) num[i + j] -= quo[i] * den[j];
  }
  return quo;
}

const CycloTables* build_nolock(unsigned m) {
  auto& tm = table_map();
  auto it = tm.find(m);
  if (it != tm.end()) return it->second.get();

  /* Phi_m = (x^m - 1) / prod_{d | m, d < m} Phi_d */
  std::vector<mpz_class> num(m + 1);
  num[0] = -1;
  num[m] = 1;
  for (unsigned d = 1; d < m; ++d)
    if (m % d == 0) num = poly_div_exact(std::move(num), build_nolock(d)->minpoly);

  auto t = std::make_unique<CycloTables>();
  t->m = m;
  t->minpoly = std::move(num);
  t->phi = static_cast<unsigned>(t->minpoly.size() - 1);

  const unsigned phi = t->phi;
  const unsigned emax = std::max(m - 1, 2 * phi >= 2 ? 2 * phi - 2 : 0);
  if (emax >= phi) {
    t->red.reserve(emax - phi + 1);
    std::vector<mpz_class> row(phi);
    for (unsigned i = 0; i < phi; ++i) row[i] = -t->minpoly[i];
    t->red.push_back(row);
    for (unsigned e = phi + 1; e <= emax; ++e) {
      std::vector<mpz_class> nxt(phi);
      mpz_class top = row[phi - 1];
      for (unsigned i = phi - 1; i >= 1; --i) nxt[i] = row[i - 1];
      if (top != 0)
        for (unsigned i = 0; i < phi; ++i) nxt[i] += top * t->red[0][i];
      row = std::move(nxt);
      t->red.push_back(row);
    }
  }

  const CycloTables* out = t.get();
  tm.emplace(m, std::move(t));
  return out;
}

}  // namespace

const CycloTables& cyclo_tables(unsigned m) {
  if (m == 0) fail(errc::bad_input, "cyclotomic order must be positive");
  std::lock_guard<std::mutex> lk(tables_mx);
  return *build_nolock(m);
}

Cyclo Cyclo::zero(unsigned m) { return Cyclo(m); }

Cyclo Cyclo::one(unsigned m) { return rational(mpq_class(1), m); }

Cyclo Cyclo::rational(const mpq_class& q, unsigned m) {
  Cyclo z(m);
  z.c_[0] = q;
  return z;
}

Cyclo Cyclo::root(unsigned m, long k) {
  const CycloTables& t = cyclo_tables(m);
  long e = k % static_cast<long>(m);
  if (e < 0) e += m;
  Cyclo z(m);
  if (static_cast<unsigned>(e) < t.phi) {
    z.c_[static_cast<unsigned>(e)] = 1;
  } else {
    const auto& row = t.red[static_cast<unsigned>(e) - t.phi];
    for (unsigned i = 0; i < t.phi; ++i) z.c_[i] = mpq_class(row[i]);
  }
  return z;
}

Cyclo Cyclo::reduce(unsigned m, std::vector<mpq_class> raw) {
  const CycloTables& t = cyclo_tables(m);
  if (raw.size() > t.phi + t.red.size())
    fail(errc::bad_input, "reduction table too short for requested power");
  Cyclo z(m);
  const size_t cut = std::min<size_t>(raw.size(), t.phi);
  for (size_t i = 0; i < cut; ++i) z.c_[i] = std::move(raw[i]);
  for (size_t e = t.phi; e < raw.size(); ++e) {
    if (raw[e] == 0) continue;
    const auto& row = t.red[e - t.phi];
    for (unsigned i = 0; i < t.phi; ++i)
      if (row[i] != 0) z.c_[i] += raw[e] * row[i];
  }
  return z;
}

bool Cyclo::is_zero() const {
  for (const auto& q : c_)
    if (q != 0) return false;
  return true;
}

bool Cyclo::is_rational() const {
  for (size_t i = 1; i < c_.size(); ++i)
    if (c_[i] != 0) return false;
  return true;
}

mpq_class Cyclo::to_rational() const {
  if (!is_rational()) fail(errc::not_rational, "element has a nonzero root-of-unity part");
  return c_[0];
}

Cyclo Cyclo::lift(unsigned M) const {
  if (M == m_) return *this;
  if (M % m_ != 0) fail(errc::bad_input, "cyclotomic lift needs a multiple order");
  const unsigned q = M / m_;
  std::vector<mpq_class> raw(static_cast<size_t>(c_.size() - 1) * q + 1);
  for (size_t i = 0; i < c_.size(); ++i) raw[i * q] = c_[i];
  return reduce(M, std::move(raw));
}

Cyclo Cyclo::add(const Cyclo& o) const {
  if (m_ != o.m_) {
    unsigned M = static_cast<unsigned>(util::lcm_u64(m_, o.m_));
    return lift(M).add(o.lift(M));
  }
  Cyclo z(m_);
  for (size_t i = 0; i < c_.size(); ++i) z.c_[i] = c_[i] + o.c_[i];
  return z;
}

Cyclo Cyclo::sub(const Cyclo& o) const { return add(o.neg()); }

Cyclo Cyclo::neg() const {
  Cyclo z(m_);
  for (size_t i = 0; i < c_.size(); ++i) z.c_[i] = -c_[i];
  return z;
}

Cyclo Cyclo::mul_q(const mpq_class& q) const {
  Cyclo z(m_);
  if (q != 0)
    for (size_t i = 0; i < c_.size(); ++i) z.c_[i] = c_[i] * q;
  return z;
}

Cyclo Cyclo::mul(const Cyclo& o) const {
  if (o.is_rational()) return mul_q(o.c_[0]);
  if (is_rational()) return o.mul_q(c_[0]);
  if (m_ != o.m_) {
    unsigned M = static_cast<unsigned>(util::lcm_u64(m_, o.m_));
    return lift(M).mul(o.lift(M));
  }
  std::vector<mpq_class> raw(2 * c_.size() - 1);
  for (size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    for (size_t j = 0; j < o.c_.size(); ++j)
      if (o.c_[j] != 0) raw[i + j] += c_[i] * o.c_[j];
  }
  return reduce(m_, std::move(raw));
}

Cyclo Cyclo::galois(long j) const {
  long jm = j % static_cast<long>(m_);
  if (jm < 0) jm += m_;
  if (util::gcd_u64(static_cast<uint64_t>(jm), m_) != 1)
    fail(errc::bad_input, "galois exponent not coprime to the order");
  std::vector<mpq_class> raw(m_);
  for (size_t i = 0; i < c_.size(); ++i)
    if (c_[i] != 0) raw[(i * static_cast<size_t>(jm)) % m_] += c_[i];
  return reduce(m_, std::move(raw));
}

Cyclo Cyclo::inv() const {
  if (is_zero()) fail(errc::division_by_zero, "inverse of zero");
  const unsigned phi = static_cast<unsigned>(c_.size());

  /* monomial fast path: q * zeta^e inverts to (1/q) * zeta^{-e} */
  {
    long e = -1;
    for (unsigned i = 0; i < phi; ++i)
      if (c_[i] != 0) {
        if (e >= 0) { e = -2; break; }
        e = i;
      }
    if (e >= 0)
      return root(m_, -e).mul_q(mpq_class(1) / c_[static_cast<unsigned>(e)]);
  }

  /* solve A x = e_0 where column j of A holds this * zeta^j */
  std::vector<std::vector<mpq_class>> a(phi, std::vector<mpq_class>(phi + 1));
  std::vector<mpq_class> col = c_;
  const CycloTables& t = cyclo_tables(m_);
  for (unsigned j = 0; j < phi; ++j) {
    for (unsigned r = 0; r < phi; ++r) a[r][j] = col[r];
    if (j + 1 < phi) {
      mpq_class top = col[phi - 1];
      for (unsigned r = phi - 1; r >= 1; --r) col[r] = col[r - 1];
      col[0] = 0;
      if (top != 0)
        for (unsigned r = 0; r < phi; ++r)
          if (t.red[0][r] != 0) col[r] += top * t.red[0][r];
    }
  }
  a[0][phi] = 1;

  for (unsigned k = 0; k < phi; ++k) {
    unsigned piv = k;
    while (piv < phi && a[piv][k] == 0) ++piv;
    if (piv == phi) fail(errc::division_by_zero, "singular multiplication matrix");
    if (piv != k) std::swap(a[piv], a[k]);
    mpq_class d = a[k][k];
    for (unsigned cc = k; cc <= phi; ++cc) a[k][cc] /= d;
    for (unsigned r = 0; r < phi; ++r) {
      if (r == k || a[r][k] == 0) continue;
      mpq_class f = a[r][k];
      for (unsigned cc = k; cc <= phi; ++cc) a[r][cc] -= f * a[k][cc];
    }
  }
  Cyclo z(m_);
  for (unsigned r = 0; r < phi; ++r) z.c_[r] = a[r][phi];
  return z;
}

Cyclo Cyclo::pow(long e) const {
  if (e < 0) return inv().pow(-e);
  Cyclo acc = one(m_);
  Cyclo base = *this;
  unsigned long u = static_cast<unsigned long>(e);
  while (u) {
    if (u & 1) acc = acc.mul(base);
    u >>= 1;
    if (u) base = base.mul(base);
  }
  return acc;
}

bool Cyclo::eq(const Cyclo& o) const {
  if (m_ == o.m_) return c_ == o.c_;
  unsigned M = static_cast<unsigned>(util::lcm_u64(m_, o.m_));
  return lift(M).c_ == o.lift(M).c_;
}

std::string Cyclo::str() const {
  std::ostringstream os;
  bool first = true;
  for (size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    if (!first) os << " + ";
    os << c_[i].get_str();
    if (i > 0) os << "*z" << m_ << "^" << i;
    first = false;
  }
  if (first) os << "0";
  return os.str();
}

std::string Cyclo::key() const {
  std::ostringstream os;
  os << "C" << m_ << ":";
  for (size_t i = 0; i < c_.size(); ++i) {
    if (i) os << ",";
    os << c_[i].get_str();
  }
  return os.str();
}

Ball embed_complex(const Cyclo& z, unsigned prec) {
  static std::mutex mx;
  static std::map<std::pair<unsigned, unsigned>, std::vector<Ball>> cache;
  std::lock_guard<std::mutex> lk(mx);
  auto key = std::make_pair(z.order(), prec);
  auto it = cache.find(key);
  if (it == cache.end()) {
    const unsigned m = z.order();
    std::vector<Ball> pw;
    pw.reserve(z.coeffs().size());
    for (size_t i = 0; i < z.coeffs().size(); ++i) {
      mpq_class frac(2 * static_cast<long>(i), static_cast<long>(m));
      frac.canonicalize();
      Ball ang = Ball::pi(prec).mul_q(frac);
      pw.push_back(Ball::i_unit(prec).mul(ang).exp());
    }
    it = cache.emplace(key, std::move(pw)).first;
  }
  Ball acc = Ball::zero(prec);
  const auto& pw = it->second;
  for (size_t i = 0; i < z.coeffs().size(); ++i)
    if (z.coeffs()[i] != 0) acc = acc.add(pw[i].mul_q(z.coeffs()[i]));
  return acc;
}

}  // namespace symsq::exactnum
