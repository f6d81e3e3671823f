#ifndef SYMSQ_JSON_IO_HH
#define SYMSQ_JSON_IO_HH

/*
 * JSON codecs for the value types that cross the CLI boundary, plus the
 * on-disk cache.  All emission goes through ordered_json so key order is
 * exactly insertion order and repeated runs produce byte-identical output.
 *
 * Value encoding: a rational is an integer (when it fits and has unit
 * denominator) or a "p/q" string; a cyclotomic number is
 * { "zeta": m, "coeffs": ["p/q", ...] } on the power basis of zeta_m.
 * Complex balls serialize as [re, im, radius] decimal strings.
 *
 * The cache stores payloads keyed by a content-hash of the request string;
 * writes go to a temp file first and are renamed into place, so a crashed
 * run never leaves a truncated entry.  Entries are never rewritten.
 */

#include <optional>
#include <string>

#include <gmpxx.h>

#include "json.hpp"

#include "symsq/ball.hh"
#include "symsq/characters.hh"
#include "symsq/cyclotomic.hh"

namespace symsq::io {

using json = nlohmann::ordered_json;

std::string rational_str(const mpq_class& q);
mpq_class parse_rational(const std::string& s);

json encode_value(const exactnum::Cyclo& z);
exactnum::Cyclo decode_value(const json& j);

json encode_character(const chars::DirichletChar& chi);
chars::DirichletChar decode_character(const json& j);

/* [re, im, radius] decimal strings; parsing honors the requested precision */
json encode_ball(const exactnum::Ball& b, unsigned digits = 30);
exactnum::Ball ball_from_strings(const std::string& re, const std::string& im,
                                 const std::string& rad, unsigned prec);

std::string read_file(const std::string& path);
void write_file_atomic(const std::string& path, const std::string& payload);

/* cache directory resolution order: explicit override via
 * SYMSQ_CACHE_DIR, else ".symsq-cache" under the working directory.
 * cache_get returns nothing when the dir does not exist or on any read
 * problem (a cold cache is never an error). */
std::string cache_dir();
std::optional<std::string> cache_get(const std::string& key);
void cache_put(const std::string& key, const std::string& payload);

}  // namespace symsq::io

#endif
