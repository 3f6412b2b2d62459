#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "arcloom/rational.hpp"

namespace arcloom {

// Coefficient ring Q[e]/(e^K).  nil_index == 1 is the plain rationals.
struct Ring {
  unsigned nil_index = 1;

  bool is_field() const { return nil_index == 1; }
  friend bool operator==(const Ring& a, const Ring& b) { return a.nil_index == b.nil_index; }
  friend bool operator!=(const Ring& a, const Ring& b) { return !(a == b); }

  std::string str() const {
    return nil_index == 1 ? "Q" : "Q[e]/e^" + std::to_string(nil_index);
  }
};

// Joining rule: the rationals embed into any Q[e]/(e^K); two distinct
// nilpotent indices > 1 do not embed into one another (padding is not a ring
// map), so mixing them is an error.
Ring join_ring(const Ring& a, const Ring& b);

// Element of Q[e]/(e^K), stored as c[0] + c[1]e + ... with no trailing zeros.
// The element does not carry its ring: multiplication takes the nil index.
struct RElem {
  std::vector<Rat> c;

  static RElem zero() { return RElem{}; }
  static RElem one() { return from_rat(Rat(1)); }
  static RElem from_rat(Rat r);
  static RElem eps(unsigned k = 1);  // e^k

  bool is_zero() const { return c.empty(); }
  // Unit in Q[e]/(e^K) for every K: nonzero rational part.
  bool is_unit() const { return !c.empty() && c[0] != 0; }
  const Rat& rat_part() const;
  void trim();

  friend bool operator==(const RElem& a, const RElem& b) { return a.c == b.c; }
  friend bool operator!=(const RElem& a, const RElem& b) { return !(a == b); }
};

RElem radd(const RElem& a, const RElem& b);
RElem rsub(const RElem& a, const RElem& b);
RElem rneg(const RElem& a);
RElem rmul(const RElem& a, const RElem& b, unsigned nil_index);
RElem rmul_rat(const RElem& a, const Rat& s);
// Inverse of a unit: geometric series in the nilpotent part.
RElem rinv(const RElem& a, unsigned nil_index);
RElem rpow(const RElem& a, unsigned long k, unsigned nil_index);

// Nilpotency depth: largest i with a in (e^i); by convention K for a == 0.
unsigned nil_depth(const RElem& a, unsigned nil_index);

// Rational part as an element (reduction mod the maximal nilpotent ideal).
RElem reduce_mod_nil(const RElem& a);

std::string relem_str(const RElem& a);

}  // namespace arcloom
