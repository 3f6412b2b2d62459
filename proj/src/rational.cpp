#include "arcloom/rational.hpp"

namespace arcloom {

Rat parse_rat(const std::string& text) {
  if (text.empty()) fail(errc::parse_error, "empty rational literal");
  // mpq_class accepts "p/q" directly but tolerates junk; validate first.
  std::size_t i = 0;
  if (text[i] == '+' || text[i] == '-') ++i;
  bool digits = false, slash = false;
  for (; i < text.size(); ++i) {
    char ch = text[i];
    if (ch >= '0' && ch <= '9') {
      digits = true;
    } else if (ch == '/' && !slash && digits) {
      slash = true;
      digits = false;
    } else {
      fail(errc::parse_error, "bad rational literal '" + text + "'");
    }
  }
  if (!digits) fail(errc::parse_error, "bad rational literal '" + text + "'");
  Rat r(text);
  if (slash && r.get_den() == 0) fail(errc::parse_error, "zero denominator in '" + text + "'");
  r.canonicalize();
  return r;
}

std::string rat_str(const Rat& r) { return r.get_str(); }

std::string ExtRat::str() const { return finite_ ? rat_str(v_) : "inf"; }

ExtRat parse_extrat(const std::string& text) {
  if (text == "inf") return ExtRat::infinity();
  return ExtRat(parse_rat(text));
}

long ceil_to_long(const Rat& r) {
  mpz_class q;
  mpz_cdiv_q(q.get_mpz_t(), r.get_num().get_mpz_t(), r.get_den().get_mpz_t());
  require_internal(q.fits_slong_p(), "ceil_to_long overflow");
  return q.get_si();
}

}  // namespace arcloom
