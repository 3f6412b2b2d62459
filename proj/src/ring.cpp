#include "arcloom/ring.hpp"

#include <algorithm>

#include "arcloom/errors.hpp"

namespace arcloom {

Ring join_ring(const Ring& a, const Ring& b) {
  if (a.nil_index == b.nil_index) return a;
  if (a.nil_index == 1) return b;
  if (b.nil_index == 1) return a;
  fail(errc::unsupported,
       "cannot mix coefficient rings " + a.str() + " and " + b.str() +
           " (no embedding between distinct nilpotent indices)");
}

RElem RElem::from_rat(Rat r) {
  RElem e;
  if (r != 0) e.c.push_back(std::move(r));
  return e;
}

RElem RElem::eps(unsigned k) {
  RElem e;
  e.c.assign(k + 1, Rat(0));
  e.c[k] = 1;
  return e;
}

const Rat& RElem::rat_part() const {
  static const Rat zero(0);
  return c.empty() ? zero : c[0];
}

void RElem::trim() {
  while (!c.empty() && c.back() == 0) c.pop_back();
}

RElem radd(const RElem& a, const RElem& b) {
  RElem r;
  r.c.resize(std::max(a.c.size(), b.c.size()), Rat(0));
  for (std::size_t i = 0; i < a.c.size(); ++i) r.c[i] += a.c[i];
  for (std::size_t i = 0; i < b.c.size(); ++i) r.c[i] += b.c[i];
  r.trim();
  return r;
}

RElem rsub(const RElem& a, const RElem& b) { return radd(a, rneg(b)); }

RElem rneg(const RElem& a) {
  RElem r = a;
  for (auto& x : r.c) x = -x;
  return r;
}

RElem rmul(const RElem& a, const RElem& b, unsigned nil_index) {
  RElem r;
  if (a.is_zero() || b.is_zero()) return r;
  std::size_t n = std::min<std::size_t>(a.c.size() + b.c.size() - 1, nil_index);
  r.c.assign(n, Rat(0));
  for (std::size_t i = 0; i < a.c.size() && i < n; ++i) {
    if (a.c[i] == 0) continue;
    for (std::size_t j = 0; j < b.c.size() && i + j < n; ++j) {
      if (b.c[j] == 0) continue;
      r.c[i + j] += a.c[i] * b.c[j];
    }
  }
  r.trim();
  return r;
}

RElem rmul_rat(const RElem& a, const Rat& s) {
  if (s == 0) return RElem::zero();
  RElem r = a;
  for (auto& x : r.c) x *= s;
  return r;
}

RElem rinv(const RElem& a, unsigned nil_index) {
  require_internal(a.is_unit(), "rinv on non-unit");
  // a = c0 (1 + n) with n nilpotent; a^-1 = c0^-1 sum (-n)^k.
  Rat c0inv = 1 / a.c[0];
  RElem n = rmul_rat(a, c0inv);
  n.c[0] = 0;
  n.trim();
  RElem acc = RElem::one();
  RElem pw = RElem::one();
  for (unsigned k = 1; k < nil_index; ++k) {
    pw = rmul(pw, rneg(n), nil_index);
    if (pw.is_zero()) break;
    acc = radd(acc, pw);
  }
  return rmul_rat(acc, c0inv);
}

RElem rpow(const RElem& a, unsigned long k, unsigned nil_index) {
  RElem r = RElem::one();
  for (unsigned long i = 0; i < k; ++i) {
    r = rmul(r, a, nil_index);
    if (r.is_zero()) break;
  }
  return r;
}

unsigned nil_depth(const RElem& a, unsigned nil_index) {
  if (a.is_zero()) return nil_index;
  for (std::size_t i = 0; i < a.c.size(); ++i)
    if (a.c[i] != 0) return static_cast<unsigned>(i);
  return nil_index;
}

RElem reduce_mod_nil(const RElem& a) { return RElem::from_rat(a.rat_part()); }

std::string relem_str(const RElem& a) {
  if (a.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (std::size_t i = 0; i < a.c.size(); ++i) {
    if (a.c[i] == 0) continue;
    Rat v = a.c[i];
    if (first) {
      if (v < 0) {
        out += "-";
        v = -v;
      }
    } else {
      out += v < 0 ? " - " : " + ";
      if (v < 0) v = -v;
    }
    std::string part;
    if (i == 0) {
      part = rat_str(v);
    } else {
      std::string ep = i == 1 ? "e" : "e^" + std::to_string(i);
      part = (v == 1) ? ep : rat_str(v) + "*" + ep;
    }
    out += part;
    first = false;
  }
  return out;
}

}  // namespace arcloom
