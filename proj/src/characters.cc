#include "symsq/characters.hh"

#include <algorithm>
#include <numeric>

#include "symsq/padic.hh"

namespace symsq::chars {

namespace {

struct GenEntry {
  uint64_t comp;              /* the prime power q^a this generator lives in */
  uint64_t ord;               /* order of the generator */
  std::vector<long> dlog;     /* index table mod comp, -1 at non-units */
};

/* fixed generator list of (Z/N)^*, ascending prime powers */
std::vector<GenEntry> unit_group_gens(uint64_t N) {
  std::vector<GenEntry> gens;
  for (auto [q, a] : util::factor(N)) {
    uint64_t qa = 1;
    for (unsigned i = 0; i < a; ++i) qa *= q;
    if (q == 2) {
      if (a == 1) continue; /* trivial group */
      if (a == 2) {
        GenEntry g;
        g.comp = 4;
        g.ord = 2;
        g.dlog.assign(4, -1);
        g.dlog[1] = 0;
        g.dlog[3] = 1;
        gens.push_back(std::move(g));
        continue;
      }
      GenEntry gs, gf;
      gs.comp = gf.comp = qa;
      gs.ord = 2;
      gf.ord = qa / 4;
      gs.dlog.assign(qa, -1);
      gf.dlog.assign(qa, -1);
      for (uint64_t s = 0; s < 2; ++s) {
        uint64_t base = s ? qa - 1 : 1;
        uint64_t r = base;
        for (uint64_t k = 0; k < gf.ord; ++k) {
          gs.dlog[r] = (long)s;
          gf.dlog[r] = (long)k;
          r = r * 5 % qa;
        }
      }
      gens.push_back(std::move(gs));
      gens.push_back(std::move(gf));
      continue;
    }
    GenEntry g;
    g.comp = qa;
    g.ord = util::euler_phi(qa);
    g.dlog.assign(qa, -1);
    uint64_t gen = util::primitive_root(q, a);
    uint64_t r = 1;
    for (uint64_t k = 0; k < g.ord; ++k) {
      g.dlog[r] = (long)k;
      r = r * gen % qa;
    }
    gens.push_back(std::move(g));
  }
  return gens;
}

}  // namespace

DirichletChar DirichletChar::trivial(uint64_t N) {
  if (N == 0) fail(errc::bad_input, "character modulus must be positive");
  std::vector<long> expo(N, -1);
  for (uint64_t r = 0; r < N; ++r)
    if (util::gcd_u64(r, N) == 1) expo[r] = 0;
  DirichletChar chi;
  chi.N_ = N;
  chi.ord_ = 1;
  chi.expo_ = std::move(expo);
  return chi;
}

DirichletChar DirichletChar::from_table(uint64_t N, unsigned order,
                                        std::vector<long> expo) {
  if (N == 0 || order == 0 || expo.size() != N)
    fail(errc::bad_input, "malformed character table");
  for (uint64_t r = 0; r < N; ++r) {
    bool unit = util::gcd_u64(r, N) == 1;
    if (unit && (expo[r] < 0 || expo[r] >= (long)order))
      fail(errc::bad_input, "character exponent out of range");
    if (!unit && expo[r] != -1)
      fail(errc::bad_input, "character nonzero at a non-unit");
  }
  if (N <= 10000) {
    for (uint64_t r = 1; r < N; ++r) {
      if (expo[r] < 0) continue;
      for (uint64_t s = r; s < N; ++s) {
        if (expo[s] < 0) continue;
        long lhs = expo[r * s % N];
        if (lhs != (expo[r] + expo[s]) % (long)order)
          fail(errc::bad_input, "character table is not multiplicative");
      }
    }
  }
  /* normalise to the exact order */
  uint64_t g = order;
  for (uint64_t r = 0; r < N; ++r)
    if (expo[r] > 0) g = util::gcd_u64(g, (uint64_t)expo[r]);
  unsigned d = (unsigned)(order / g);
  if (g > 1)
    for (uint64_t r = 0; r < N; ++r)
      if (expo[r] > 0) expo[r] /= (long)g;
  DirichletChar chi;
  chi.N_ = N;
  chi.ord_ = d;
  chi.expo_ = std::move(expo);
  return chi;
}

unsigned DirichletChar::parity_exponent() const {
  if (N_ <= 2) return 0;
  long e = expo_[N_ - 1];
  if (e == 0) return 0;
  if (2 * (unsigned long)e == ord_) return 1;
  fail(errc::bad_input, "character value at -1 is not a sign");
}

Cyclo DirichletChar::operator()(uint64_t r) const {
  long e = expo_[r % N_];
  if (e < 0) return Cyclo::zero(1);
  return Cyclo::root(ord_, e);
}

uint64_t DirichletChar::conductor() const {
  for (uint64_t F = 1; F <= N_; ++F) {
    if (N_ % F != 0) continue;
    bool ok = true;
    for (uint64_t r = 1 % N_; r < N_ && ok; r += F)
      if (expo_[r] > 0) ok = false;
    if (ok) return F;
  }
  return N_;
}

DirichletChar DirichletChar::primitive_part() const {
  uint64_t F = conductor();
  if (F == N_) return *this;
  std::vector<long> expo(F, -1);
  for (uint64_t r = 0; r < F; ++r) {
    if (util::gcd_u64(r, F) != 1) continue;
    uint64_t s = r;
    while (util::gcd_u64(s, N_) != 1) s += F;
    expo[r] = expo_[s % N_];
  }
  DirichletChar chi;
  chi.N_ = F;
  chi.ord_ = ord_;
  chi.expo_ = std::move(expo);
  return chi;
}

DirichletChar DirichletChar::lift_to(uint64_t M) const {
  if (M % N_ != 0) fail(errc::bad_input, "character lift needs a multiple modulus");
  if (M == N_) return *this;
  std::vector<long> expo(M, -1);
  for (uint64_t r = 0; r < M; ++r)
    if (util::gcd_u64(r, M) == 1) expo[r] = expo_[r % N_];
  DirichletChar chi;
  chi.N_ = M;
  chi.ord_ = ord_;
  chi.expo_ = std::move(expo);
  return chi;
}

DirichletChar DirichletChar::inverse() const {
  DirichletChar chi = *this;
  for (auto& e : chi.expo_)
    if (e > 0) e = (long)ord_ - e;
  return chi;
}

DirichletChar DirichletChar::power(long k) const {
  long km = k % (long)ord_;
  if (km < 0) km += ord_;
  std::vector<long> expo = expo_;
  for (auto& e : expo)
    if (e >= 0) e = (e * km) % (long)ord_;
  return from_table(N_, ord_, std::move(expo));
}

DirichletChar DirichletChar::mul(const DirichletChar& o) const {
  uint64_t M = util::lcm_u64(N_, o.N_);
  DirichletChar a = lift_to(M), b = o.lift_to(M);
  unsigned L = (unsigned)util::lcm_u64(a.ord_, b.ord_);
  std::vector<long> expo(M, -1);
  for (uint64_t r = 0; r < M; ++r) {
    if (a.expo_[r] < 0) continue;
    long e = a.expo_[r] * (long)(L / a.ord_) + b.expo_[r] * (long)(L / b.ord_);
    expo[r] = e % (long)L;
  }
  return from_table(M, L, std::move(expo));
}

std::string DirichletChar::key() const {
  std::string s = "chi" + std::to_string(N_) + "o" + std::to_string(ord_) + ":";
  for (uint64_t r = 0; r < N_; ++r) {
    if (expo_[r] <= 0) continue;
    s += std::to_string(r) + "^" + std::to_string(expo_[r]) + ";";
  }
  return s;
}

std::vector<DirichletChar> all_characters(uint64_t N) {
  if (N == 0) fail(errc::bad_input, "character modulus must be positive");
  auto gens = unit_group_gens(N);
  std::vector<DirichletChar> out;
  uint64_t count = 1;
  for (const auto& g : gens) count *= g.ord;
  out.reserve(count);

  uint64_t L = 1;
  for (const auto& g : gens) L = util::lcm_u64(L, g.ord);

  std::vector<uint64_t> tuple(gens.size(), 0);
  for (uint64_t idx = 0; idx < count; ++idx) {
    std::vector<long> expo(N, -1);
    for (uint64_t r = 0; r < N; ++r) {
      if (util::gcd_u64(r, N) != 1) continue;
      uint64_t e = 0;
      for (size_t i = 0; i < gens.size(); ++i) {
        long d = gens[i].dlog[r % gens[i].comp];
        e = (e + tuple[i] * (uint64_t)d % L * (L / gens[i].ord)) % L;
      }
      expo[r] = (long)e;
    }
    out.push_back(DirichletChar::from_table(N, (unsigned)L, std::move(expo)));
    /* advance the tuple, last position fastest */
    for (size_t i = gens.size(); i-- > 0;) {
      if (++tuple[i] < gens[i].ord) break;
      tuple[i] = 0;
    }
  }
  return out;
}

std::vector<DirichletChar> primitive_characters(uint64_t N) {
  std::vector<DirichletChar> out;
  for (auto& chi : all_characters(N))
    if (chi.is_primitive()) out.push_back(std::move(chi));
  return out;
}

Cyclo gauss_sum(const DirichletChar& chi) {
  DirichletChar chi0 = chi.primitive_part();
  uint64_t F = chi0.modulus();
  Cyclo acc = Cyclo::zero(1);
  for (uint64_t a = 1; a < std::max<uint64_t>(F, 2); ++a) {
    if (chi0.exponent_at(a) < 0) continue;
    acc = acc.add(chi0(a).mul(Cyclo::root((unsigned)F, (long)a)));
  }
  if (F == 1) acc = Cyclo::one(1);
  return acc;
}

DirichletChar teichmuller_char(uint64_t p) {
  const auto& ctx = padic::padic_ctx(p, 1, 2);
  uint64_t z = padic::padic_root_of_unity(ctx, p - 1).residue()[0];
  std::vector<long> expo(p, -1);
  uint64_t r = 1;
  for (uint64_t k = 0; k < p - 1; ++k) {
    expo[r] = (long)k;
    r = r * z % p;
  }
  return DirichletChar::from_table(p, (unsigned)(p - 1), std::move(expo));
}

}  // namespace symsq::chars
