#pragma once

#include <gmpxx.h>

#include <string>

#include "arcloom/errors.hpp"

namespace arcloom {

// Exact rational arithmetic everywhere; no floating point enters any result.
using Rat = mpq_class;

inline Rat rat(long num, long den = 1) {
  Rat r(num, den);
  r.canonicalize();
  return r;
}

Rat parse_rat(const std::string& text);  // "p", "p/q", optional sign
std::string rat_str(const Rat& r);

// Rational extended with +infinity.  Used for validity bookkeeping: a series
// with infinite validity is known exactly (a polynomial, typically).
class ExtRat {
public:
  ExtRat() : finite_(true), v_(0) {}
  explicit ExtRat(Rat v) : finite_(true), v_(std::move(v)) {}
  static ExtRat infinity() {
    ExtRat e;
    e.finite_ = false;
    return e;
  }

  bool finite() const { return finite_; }
  const Rat& value() const {
    require_internal(finite_, "ExtRat::value on infinity");
    return v_;
  }

  friend bool operator==(const ExtRat& a, const ExtRat& b) {
    if (a.finite_ != b.finite_) return false;
    return !a.finite_ || a.v_ == b.v_;
  }
  friend bool operator!=(const ExtRat& a, const ExtRat& b) { return !(a == b); }
  friend bool operator<(const ExtRat& a, const ExtRat& b) {
    if (!a.finite_) return false;
    if (!b.finite_) return true;
    return a.v_ < b.v_;
  }
  friend bool operator<=(const ExtRat& a, const ExtRat& b) { return a < b || a == b; }
  friend bool operator>(const ExtRat& a, const ExtRat& b) { return b < a; }
  friend bool operator>=(const ExtRat& a, const ExtRat& b) { return b <= a; }

  // Saturating arithmetic: infinity absorbs.
  friend ExtRat operator+(const ExtRat& a, const ExtRat& b) {
    if (!a.finite_ || !b.finite_) return infinity();
    return ExtRat(a.v_ + b.v_);
  }
  friend ExtRat operator+(const ExtRat& a, const Rat& b) {
    if (!a.finite_) return infinity();
    return ExtRat(a.v_ + b);
  }
  friend ExtRat operator-(const ExtRat& a, const Rat& b) {
    if (!a.finite_) return infinity();
    return ExtRat(a.v_ - b);
  }
  // Scale by a nonnegative rational; infinity stays infinite.
  friend ExtRat operator*(const ExtRat& a, const Rat& s) {
    if (!a.finite_) return infinity();
    return ExtRat(a.v_ * s);
  }

  static ExtRat min(const ExtRat& a, const ExtRat& b) { return a < b ? a : b; }
  static ExtRat max(const ExtRat& a, const ExtRat& b) { return a < b ? b : a; }

  std::string str() const;

private:
  bool finite_;
  Rat v_;
};

ExtRat parse_extrat(const std::string& text);  // "inf" or a rational

// Order of a series as far as its validity can certify it.  `exact == true`
// means the order is exactly `bound` (a finite value witnessed by a nonzero
// term).  `exact == false` means no nonzero term exists at weights < bound;
// the true order, if the series is nonzero at all, is >= bound.
struct OrderVal {
  bool exact = false;
  ExtRat bound = ExtRat::infinity();

  static OrderVal exactly(Rat w) { return OrderVal{true, ExtRat(std::move(w))}; }
  static OrderVal at_least(ExtRat b) { return OrderVal{false, std::move(b)}; }

  // Usable lower bound either way.
  const ExtRat& lower_bound() const { return bound; }

  friend bool operator==(const OrderVal& a, const OrderVal& b) {
    return a.exact == b.exact && a.bound == b.bound;
  }

  std::string str() const { return exact ? bound.str() : ">=" + bound.str(); }
};

// Smallest integer >= r, as a plain long (used for iteration budgets).
long ceil_to_long(const Rat& r);

}  // namespace arcloom
