#include "symsq/json_io.hh"

#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <mpfr.h>

#include "symsq/util.hh"

namespace symsq::io {

using exactnum::Ball;
using exactnum::Cyclo;
using chars::DirichletChar;

std::string rational_str(const mpq_class& q) {
  return q.get_str();
}

mpq_class parse_rational(const std::string& s) {
  mpq_class q;
  if (q.set_str(s, 10) != 0) fail(errc::io_error, "bad rational: " + s);
  q.canonicalize();
  return q;
}

json encode_value(const Cyclo& z) {
  if (z.is_rational()) {
    mpq_class q = z.to_rational();
    if (q.get_den() == 1 && q.get_num().fits_slong_p())
      return json(q.get_num().get_si());
    return json(rational_str(q));
  }
  json coeffs = json::array();
  for (const auto& c : z.coeffs()) coeffs.push_back(rational_str(c));
  json j;
  j["zeta"] = z.order();
  j["coeffs"] = std::move(coeffs);
  return j;
}

Cyclo decode_value(const json& j) {
  if (j.is_number_integer())
    return Cyclo::rational(mpq_class(static_cast<long>(j.get<int64_t>())));
  if (j.is_string())
    return Cyclo::rational(parse_rational(j.get<std::string>()));
  if (j.is_object() && j.contains("zeta") && j.contains("coeffs")) {
    unsigned m = j.at("zeta").get<unsigned>();
    std::vector<mpq_class> c;
    for (const auto& e : j.at("coeffs"))
      c.push_back(parse_rational(e.get<std::string>()));
    unsigned phi = static_cast<unsigned>(util::euler_phi(m));
    if (c.size() > phi) fail(errc::io_error, "too many cyclotomic coeffs");
    c.resize(phi, mpq_class(0));
    Cyclo z = Cyclo::zero(m);
    for (unsigned i = 0; i < phi; ++i)
      z = z.add(Cyclo::root(m, i).mul_q(c[i]));
    return z;
  }
  fail(errc::io_error, "unrecognized value encoding");
}

json encode_character(const DirichletChar& chi) {
  json values = json::array();
  uint64_t N = chi.modulus();
  for (uint64_t r = 1; r <= N; ++r) {
    if (util::gcd_u64(r, N) != 1 && N != 1) continue;
    values.push_back(json::array({r, encode_value(chi(r))}));
    if (N == 1) break;
  }
  json j;
  j["modulus"] = N;
  j["values"] = std::move(values);
  return j;
}

DirichletChar decode_character(const json& j) {
  if (!j.is_object() || !j.contains("modulus"))
    fail(errc::io_error, "character descriptor needs a modulus");
  uint64_t N = j.at("modulus").get<uint64_t>();
  if (j.contains("index")) {
    auto all = chars::all_characters(N);
    size_t idx = j.at("index").get<size_t>();
    if (idx >= all.size()) fail(errc::io_error, "character index out of range");
    return all[idx];
  }
  if (!j.contains("values"))
    fail(errc::io_error, "character descriptor needs values or an index");

  std::map<uint64_t, Cyclo> table;
  for (const auto& e : j.at("values")) {
    uint64_t r = e.at(0).get<uint64_t>() % N;
    table.emplace(r == 0 ? N : r, decode_value(e.at(1)));
  }
  /* order = lcm of the value orders; then match each value against the
   * powers of zeta_order to rebuild the exponent table */
  uint64_t ord = 1;
  for (const auto& [r, v] : table) {
    (void)r;
    ord = util::lcm_u64(ord, v.order());
    if (v.is_rational()) {
      mpq_class q = v.to_rational();
      if (q == -1) ord = util::lcm_u64(ord, 2);
      else if (q != 1) fail(errc::io_error, "character value is not a root of unity");
    }
  }
  unsigned order = static_cast<unsigned>(ord);
  std::vector<long> expo(N == 0 ? 1 : N, -1);
  for (uint64_t r = 1; r <= N; ++r) {
    if (N != 1 && util::gcd_u64(r, N) != 1) continue;
    uint64_t rr = r % N == 0 ? N : r % N;
    auto it = table.find(N == 1 ? 1 : rr);
    if (it == table.end())
      fail(errc::io_error, "character table misses residue " + std::to_string(r));
    bool found = false;
    for (unsigned e = 0; e < order; ++e) {
      if (it->second.eq(Cyclo::root(order, e))) {
        expo[r % N] = static_cast<long>(e);
        found = true;
        break;
      }
    }
    if (!found) fail(errc::io_error, "character value is not a root of unity");
    if (N == 1) break;
  }
  return DirichletChar::from_table(N, order, expo);
}

static std::string real_to_str(mpfr_srcptr x, unsigned digits) {
  char* s = nullptr;
  if (mpfr_asprintf(&s, "%.*Rg", static_cast<int>(digits), x) < 0)
    fail(errc::io_error, "mpfr formatting failed");
  std::string out(s);
  mpfr_free_str(s);
  return out;
}

json encode_ball(const Ball& b, unsigned digits) {
  char rad[64];
  std::snprintf(rad, sizeof rad, "%.6g", b.rad());
  return json::array({real_to_str(b.re(), digits), real_to_str(b.im(), digits),
                      std::string(rad)});
}

Ball ball_from_strings(const std::string& re, const std::string& im,
                       const std::string& rad, unsigned prec) {
  double r = std::strtod(rad.c_str(), nullptr);
  if (r < 0) fail(errc::io_error, "negative ball radius");
  return Ball::from_strings(re, im, r, prec);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(errc::io_error, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::string& path, const std::string& payload) {
  std::string tmp = path + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(errc::io_error, "cannot write " + tmp);
    out << payload;
    out.flush();
    if (!out) fail(errc::io_error, "short write to " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    fail(errc::io_error, "rename into " + path + " failed");
  }
}

std::string cache_dir() {
  if (const char* env = std::getenv("SYMSQ_CACHE_DIR"); env && *env)
    return env;
  return ".symsq-cache";
}

static std::string cache_path(const std::string& key) {
  char name[32];
  std::snprintf(name, sizeof name, "%016llx.json",
                static_cast<unsigned long long>(util::fnv1a64(key)));
  return cache_dir() + "/" + name;
}

std::optional<std::string> cache_get(const std::string& key) {
  std::ifstream in(cache_path(key), std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  std::string blob = ss.str();
  /* the full key is stored with the payload; a hash collision (or a stale
   * format) reads as a miss, never as wrong data */
  json j = json::parse(blob, nullptr, false);
  if (j.is_discarded() || !j.is_object() || !j.contains("key") ||
      j.at("key").get<std::string>() != key || !j.contains("payload"))
    return std::nullopt;
  return j.at("payload").get<std::string>();
}

void cache_put(const std::string& key, const std::string& payload) {
  std::error_code ec;
  std::filesystem::create_directories(cache_dir(), ec);
  if (ec) return; /* caching is best-effort */
  json j;
  j["key"] = key;
  j["payload"] = payload;
  try {
    write_file_atomic(cache_path(key), j.dump());
  } catch (const Error&) {
    /* best-effort again: a failed cache write must not fail the run */
  }
}

}  // namespace symsq::io
