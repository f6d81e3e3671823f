#ifndef SYMSQ_CHARACTERS_HH
#define SYMSQ_CHARACTERS_HH

/*
 * Dirichlet characters with exact cyclotomic values.
 *
 * A character mod N is stored as an exponent table: expo[r] = e means
 * chi(r) = zeta_d^e where d is the exact order of the character, and
 * expo[r] = -1 marks the non-units (value 0).  Tables are always
 * normalised to the exact order, so equality is modulus plus table
 * comparison and nothing else.
 *
 * Enumeration runs over CRT exponent tuples against the fixed generator
 * list of (Z/N)^* (ascending prime powers; for 2^a >= 8 the -1 generator
 * comes before 5), tuples in lexicographic order with the last position
 * moving fastest.  That order is part of the output contract of the
 * listing commands, so do not reorder.
 */

#include <cstdint>
#include <string>
#include <vector>

#include "symsq/cyclotomic.hh"

namespace symsq::chars {

using exactnum::Cyclo;

class DirichletChar {
public:
  DirichletChar() : N_(1), ord_(1), expo_(1, 0) {}

  static DirichletChar trivial(uint64_t N);
  /* normalises to the exact order; validates multiplicativity */
  static DirichletChar from_table(uint64_t N, unsigned order,
                                  std::vector<long> expo);

  uint64_t modulus() const { return N_; }
  unsigned order() const { return ord_; }
  bool is_trivial() const { return ord_ == 1; }
  bool is_even() const { return parity_exponent() == 0; }
  bool is_odd() const { return parity_exponent() == 1; }
  /* 0 for even, 1 for odd */
  unsigned parity_exponent() const;

  /* exponent e with chi(r) = zeta_order^e, or -1 when chi(r) = 0 */
  long exponent_at(uint64_t r) const { return expo_[r % N_]; }
  Cyclo operator()(uint64_t r) const;

  uint64_t conductor() const;
  bool is_primitive() const { return conductor() == N_; }
  DirichletChar primitive_part() const;
  DirichletChar lift_to(uint64_t M) const;

  DirichletChar inverse() const;
  DirichletChar power(long k) const;
  DirichletChar mul(const DirichletChar& o) const;

  bool operator==(const DirichletChar& o) const {
    return N_ == o.N_ && ord_ == o.ord_ && expo_ == o.expo_;
  }
  bool operator!=(const DirichletChar& o) const { return !(*this == o); }

  std::string key() const;

private:
  uint64_t N_;
  unsigned ord_;
  std::vector<long> expo_;
};

/* every character mod N, trivial first, CRT-tuple lex order */
std::vector<DirichletChar> all_characters(uint64_t N);
std::vector<DirichletChar> primitive_characters(uint64_t N);

/* Gauss sum of the primitive character inducing chi, over its conductor;
 * lives in Q(zeta_{lcm(order, conductor)}) */
Cyclo gauss_sum(const DirichletChar& chi);

/* the character mod p whose p-adic image under the fixed embedding is the
 * Teichmuller lift: omega(r) = zeta_{p-1}^{dlog(r)} against the residue of
 * the canonical (p-1)-st root of unity */
DirichletChar teichmuller_char(uint64_t p);

}  // namespace symsq::chars

#endif
