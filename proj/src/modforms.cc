#include "symsq/modforms.hh"

#include <cmath>
#include <sstream>

#include "symsq/embed.hh"
#include "symsq/json_io.hh"

namespace symsq::forms {

using exactnum::Ball;
using exactnum::Cyclo;
using exactnum::embed_complex;

const Cyclo& NewformData::ap(uint64_t l) const {
  auto it = a_prime.find(l);
  if (it == a_prime.end())
    fail(errc::missing_prime, "eigenvalue a_" + std::to_string(l) + " not supplied");
  return it->second;
}

Cyclo NewformData::psi_at(uint64_t r) const { return psi(r); }

Cyclo NewformData::prime_power(uint64_t l, unsigned j) const {
  if (j == 0) return Cyclo::one();
  const Cyclo& al = ap(l);
  if (N % l == 0) return al.pow(j); /* (a_l, 0) convention at bad primes */
  Cyclo norm = psi(l).mul_q(util::pow_q(l, static_cast<long>(k) + 1));
  Cyclo prev = Cyclo::one();
  Cyclo cur = al;
  for (unsigned i = 1; i < j; ++i) {
    Cyclo next = al.mul(cur).sub(norm.mul(prev));
    prev = cur;
    cur = next;
  }
  return cur;
}

Cyclo NewformData::a_n(uint64_t n) const {
  if (n == 0) fail(errc::bad_input, "a_0 is not part of the eigenvalue system");
  Cyclo out = Cyclo::one();
  for (const auto& [l, e] : util::factor(n)) out = out.mul(prime_power(l, e));
  return out;
}

std::vector<Cyclo> NewformData::expand(uint64_t B) const {
  HeckeTable t(*this);
  std::vector<Cyclo> out(B + 1, Cyclo::zero());
  for (uint64_t n = 1; n <= B; ++n) out[n] = t.at(n);
  return out;
}

std::optional<Ball> NewformData::petersson(unsigned prec) const {
  if (!petersson_str) return std::nullopt;
  const auto& s = *petersson_str;
  return io::ball_from_strings(s[0], s[1], s[2], prec);
}

void NewformData::validate() {
  if ((k % 2 == 0) != psi.is_even())
    fail(errc::parity_violation,
         "nebentypus parity disagrees with the weight: psi(-1) must be (-1)^k");
  if (N < 5)
    warnings.push_back("level " + std::to_string(N) +
                       " is below 5; the interpolation theory assumes N >= 5");
  uint64_t Npsi = psi.conductor();
  chars::DirichletChar psibar = psi.primitive_part().inverse();
  for (const auto& [l, al] : a_prime) {
    if (!util::is_prime(l))
      fail(errc::bad_input, "eigenvalue map key " + std::to_string(l) +
                                " is not prime");
    if (util::gcd_u64(l, Npsi) == 1) {
      if (!al.conj().eq(psibar(l).mul(al)))
        fail(errc::conjugation_violation,
             "conj(a_n) != psi^{-1}(n) a_n at n = " + std::to_string(l));
    }
    if (!al.is_zero()) {
      double bound = 2.0 * std::pow(static_cast<double>(l), (k + 1) / 2.0);
      if (embed_complex(al, 96).abs_lower() > bound * (1 + 1e-12))
        warnings.push_back("a_" + std::to_string(l) +
                           " violates the Ramanujan bound numerically");
    }
  }
}

const Cyclo& HeckeTable::prime_power(uint64_t l, unsigned j) {
  auto& v = pw_[l];
  if (v.empty()) v.push_back(Cyclo::one());
  while (v.size() <= j) {
    unsigned i = static_cast<unsigned>(v.size());
    v.push_back(f_.prime_power(l, i));
  }
  return v[j];
}

Cyclo HeckeTable::at(uint64_t n) {
  if (n == 0) fail(errc::bad_input, "a_0 is not part of the eigenvalue system");
  Cyclo out = Cyclo::one();
  for (const auto& [l, e] : util::factor(n)) out = out.mul(prime_power(l, e));
  return out;
}

Cyclo HeckeTable::at_square(uint64_t n) {
  if (n == 0) fail(errc::bad_input, "a_0 is not part of the eigenvalue system");
  Cyclo out = Cyclo::one();
  for (const auto& [l, e] : util::factor(n))
    out = out.mul(prime_power(l, 2 * e));
  return out;
}

static std::string json_number_or_string(const io::json& e) {
  if (e.is_string()) return e.get<std::string>();
  return e.dump();
}

NewformData load_newform_text(const std::string& json_text) {
  io::json j = io::json::parse(json_text);
  NewformData f;
  f.N = j.at("level").get<uint64_t>();
  unsigned w = j.at("weight").get<unsigned>();
  if (w < 2) fail(errc::bad_input, "weight must be at least 2");
  f.k = w - 2;
  f.psi = io::decode_character(j.at("character"));
  if (f.psi.modulus() != f.N)
    fail(errc::bad_input, "nebentypus modulus differs from the level");

  std::vector<std::pair<uint64_t, Cyclo>> composites;
  for (const auto& e : j.at("an")) {
    uint64_t n = e.at(0).get<uint64_t>();
    Cyclo v = io::decode_value(e.at(1));
    if (n == 0) fail(errc::bad_input, "a_0 is not part of the eigenvalue system");
    if (util::is_prime(n))
      f.a_prime.emplace(n, std::move(v));
    else if (n > 1)
      composites.emplace_back(n, std::move(v));
    /* n = 1 must carry a_1 = 1; checked below via the recursion */
    else
      composites.emplace_back(1, std::move(v));
  }
  if (j.contains("petersson_norm")) {
    const auto& pn = j.at("petersson_norm");
    if (!pn.is_array() || pn.size() != 3)
      fail(errc::io_error, "petersson_norm must be [re, im, radius]");
    f.petersson_str = {json_number_or_string(pn.at(0)),
                       json_number_or_string(pn.at(1)),
                       json_number_or_string(pn.at(2))};
  }
  if (j.contains("aN_star")) f.aN_star = io::decode_value(j.at("aN_star"));
  if (j.contains("has_CM")) f.has_CM = j.at("has_CM").get<bool>();
  if (j.contains("is_newform")) f.is_newform = j.at("is_newform").get<bool>();
  f.provenance = "loaded from JSON";

  f.validate();
  /* composite entries are derived data; they must agree with the recursion */
  for (const auto& [n, v] : composites) {
    if (!f.a_n(n).eq(v))
      fail(errc::bad_input, "composite eigenvalue a_" + std::to_string(n) +
                                " disagrees with the Hecke recursion");
  }
  return f;
}

NewformData load_newform_file(const std::string& path) {
  return load_newform_text(io::read_file(path));
}

std::string serialize_newform(const NewformData& f) {
  io::json j;
  j["level"] = f.N;
  j["weight"] = f.k + 2;
  j["character"] = io::encode_character(f.psi);
  io::json an = io::json::array();
  for (const auto& [l, v] : f.a_prime)
    an.push_back(io::json::array({l, io::encode_value(v)}));
  j["an"] = std::move(an);
  if (f.petersson_str) {
    const auto& s = *f.petersson_str;
    j["petersson_norm"] = io::json::array({s[0], s[1], s[2]});
  }
  if (f.aN_star) j["aN_star"] = io::encode_value(*f.aN_star);
  if (f.has_CM) j["has_CM"] = true;
  if (f.is_newform) j["is_newform"] = true;
  return j.dump(2) + "\n";
}

NewformData synth_hecke_system(uint64_t N, unsigned k,
                               const chars::DirichletChar& psi,
                               const std::map<uint64_t, Cyclo>& seeds) {
  NewformData f;
  f.N = N;
  f.k = k;
  f.psi = psi;
  f.a_prime = seeds;
  f.provenance = "synthetic Hecke system";
  f.validate();
  return f;
}

NewformData conjugate_form(const NewformData& f) {
  NewformData g;
  g.N = f.N;
  g.k = f.k;
  g.psi = f.psi.inverse();
  for (const auto& [l, a] : f.a_prime) g.a_prime.emplace(l, a.conj());
  g.petersson_str = f.petersson_str; /* <f*,f*> = <f,f> */
  g.is_newform = f.is_newform;
  g.has_CM = f.has_CM;
  /* a_N(g*) = a_N(f); computable whenever the level's primes are stored */
  try {
    g.aN_star = f.a_n(f.N);
  } catch (const Error&) {
    g.aN_star = std::nullopt;
  }
  g.provenance = f.provenance +
                 "; conjugated (level recorded as N, true level divides N Npsi^2)";
  g.validate();
  g.warnings.clear(); /* diagnostics already delivered on f */
  return g;
}

mpq_class cyclo_valuation(const Cyclo& z, uint64_t p) {
  if (z.is_zero()) fail(errc::division_by_zero, "valuation of zero");
  if (z.is_rational()) return mpq_class(util::valuation(z.to_rational(), p));
  Cyclo t = padic::descend_to_tame(z, p);
  if (t.is_rational()) return mpq_class(util::valuation(t.to_rational(), p));
  for (unsigned prec : {48u, 96u, 192u, 384u}) {
    padic::Embedding emb(p, t.order(), prec);
    padic::Padic v = emb(t);
    if (!v.is_zero()) return mpq_class(v.val());
  }
  fail(errc::bad_input, "p-adic valuation not certified at 384 digits");
}

SatakeParams satake(const NewformData& f, uint64_t l) {
  if (!util::is_prime(l)) fail(errc::bad_input, "Satake parameters need a prime");
  if (f.N % l == 0)
    fail(errc::bad_prime, "Satake parameters are only defined away from the level");
  SatakeParams s;
  s.l = l;
  s.trace = f.ap(l);
  s.norm = f.psi(l).mul_q(util::pow_q(l, static_cast<long>(f.k) + 1));
  s.disc = s.trace.mul(s.trace).sub(s.norm.mul_q(mpq_class(4)));
  s.equal_roots = s.disc.is_zero();

  mpq_class kp1(static_cast<long>(f.k) + 1);
  if (s.trace.is_zero()) {
    s.val_alpha = s.val_beta = kp1 / 2;
  } else {
    mpq_class vt = cyclo_valuation(s.trace, l);
    if (2 * vt <= kp1) {
      s.val_alpha = vt;
      s.val_beta = kp1 - vt;
    } else {
      s.val_alpha = s.val_beta = kp1 / 2;
    }
  }

  /* purity diagnostic: |alpha| = |beta| = l^{(k+1)/2}, numeric only */
  unsigned prec = 128;
  Ball tr = embed_complex(s.trace, prec);
  Ball dm = embed_complex(s.disc, prec);
  double target = std::pow(static_cast<double>(l), (f.k + 1) / 2.0);
  if (s.equal_roots) {
    Ball root = tr.mul_q(mpq_class(1, 2));
    if (root.abs_lower() > target * (1 + 1e-10) ||
        root.abs_upper() < target * (1 - 1e-10))
      s.notes.push_back("purity check failed numerically (equal roots)");
  } else if (dm.contains_zero()) {
    s.notes.push_back("purity check inconclusive: discriminant ball met zero");
  } else {
    Ball sq = dm.sqrt_principal();
    Ball half = Ball::from_rational(mpq_class(1, 2), mpq_class(0), prec);
    for (int sign : {+1, -1}) {
      Ball root = (sign > 0 ? tr.add(sq) : tr.sub(sq)).mul(half);
      if (root.abs_lower() > target * (1 + 1e-10) ||
          root.abs_upper() < target * (1 - 1e-10)) {
        s.notes.push_back("purity check failed numerically");
        break;
      }
    }
  }
  return s;
}

StabilisationData stabilise(const NewformData& f, uint64_t p, char which) {
  if (which != 'a' && which != 'b')
    fail(errc::bad_input, "stabilisation root must be 'a' or 'b'");
  SatakeParams s = satake(f, p);
  StabilisationData out;
  out.p = p;
  out.which = which;
  out.slope = which == 'a' ? s.val_alpha : s.val_beta;
  out.ordinary = out.slope == 0;
  out.level_tag = "Gamma1(" + std::to_string(f.N) + ") cap Gamma0(" +
                  std::to_string(p) + ")";
  return out;
}

Classification classify(const NewformData& f, uint64_t p, bool cm_split) {
  SatakeParams s = satake(f, p);
  Classification c;
  c.ap_zero = s.trace.is_zero();
  if (!c.ap_zero) c.slope_ap = cyclo_valuation(s.trace, p);
  c.ordinary = !c.ap_zero && c.slope_ap == 0;
  c.supersingular = c.ap_zero || c.slope_ap > 0;
  c.slope_alpha = s.val_alpha;
  c.slope_beta = s.val_beta;
  c.p_regular = !s.equal_roots;

  /* critical slope is k+1; the only excluded case at that slope is CM with
   * p split, which is input data */
  mpq_class crit(static_cast<long>(f.k) + 1);
  bool cm_crit = f.has_CM && cm_split;
  c.noble_alpha = c.p_regular && !(c.slope_alpha == crit && cm_crit);
  c.noble_beta = c.p_regular && !(c.slope_beta == crit && cm_crit);
  c.nobility_note = "nobility: assumed under stated flags";
  return c;
}

}  // namespace symsq::forms
