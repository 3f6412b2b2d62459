#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "arcloom/errors.hpp"
#include "arcloom/rational.hpp"
#include "arcloom/ring.hpp"

namespace arcloom {

// Ambient data shared by every series of a computation: number of variables,
// a positive rational weight per variable, and the coefficient ring.
struct Context {
  unsigned nvars = 0;
  std::vector<Rat> L;  // size nvars, every entry > 0
  Ring ring;

  Rat min_weight() const;
  Rat max_weight() const;
  bool same_shape(const Context& o) const { return nvars == o.nvars && L == o.L; }
  friend bool operator==(const Context& a, const Context& b) {
    return a.same_shape(b) && a.ring == b.ring;
  }
};

using CtxPtr = std::shared_ptr<const Context>;

CtxPtr make_context(unsigned nvars, std::vector<Rat> L, Ring ring = {});
// All weights 1.
CtxPtr default_context(unsigned nvars, Ring ring = {});
// Shape must match; rings join per join_ring.  DOMAIN_MISMATCH on shape clash.
CtxPtr join_context(const CtxPtr& a, const CtxPtr& b);

using Exp = std::vector<unsigned>;

Rat exp_weight(const Context& ctx, const Exp& a);
unsigned exp_total(const Exp& a);
Exp exp_add(const Exp& a, const Exp& b);
// Componentwise a <= b, i.e. x^a divides x^b.
bool exp_divides(const Exp& a, const Exp& b);
Exp exp_sub(const Exp& b, const Exp& a);  // requires exp_divides(a, b)
std::string exp_str(const Exp& a);  // debugging/witness form, e.g. "(2,0,1)"

// Map key: exponent with its weight precomputed, ordered by (weight, lex).
struct WExp {
  friend bool operator==(const WExp& x, const WExp& y) {
    return x.w == y.w && x.a == y.a;
  }
  Rat w;
  Exp a;
};
struct WExpLess {
  bool operator()(const WExp& x, const WExp& y) const {
    int c = cmp(x.w, y.w);
    if (c != 0) return c < 0;
    return x.a < y.a;
  }
};
using CoeffMap = std::map<WExp, RElem, WExpLess>;

// A series with validity tracking: the coefficient map is exact at every
// weight <= validity and says nothing beyond.  Invariants: no zero
// coefficients stored, no stored weight exceeds the validity.
class Series {
public:
  Series() = default;
  Series(CtxPtr ctx, ExtRat validity) : ctx(std::move(ctx)), validity(std::move(validity)) {}

  CtxPtr ctx;
  CoeffMap c;
  ExtRat validity = ExtRat::infinity();

  bool is_polynomial() const { return !validity.finite() ; }
  // No nonzero term within validity.  (Says nothing about the tail.)
  bool zero_within_validity() const { return c.empty(); }

  // Adds v at exponent a; drops the term if the weight exceeds the validity.
  void add_coeff(const Exp& a, const RElem& v);
  void add_coeff_w(Rat w, const Exp& a, const RElem& v);
  void set_coeff(const Exp& a, const RElem& v);

  // Coefficient at a; the weight must not exceed the validity.
  const RElem& coeff(const Exp& a) const;
  RElem coeff_or_zero(const Exp& a) const;  // zero when beyond validity is *not* allowed either
};

Series series_zero(CtxPtr ctx, ExtRat validity = ExtRat::infinity());
Series series_const(CtxPtr ctx, RElem v);
Series series_const(CtxPtr ctx, Rat v);
Series series_monomial(CtxPtr ctx, const Exp& a, RElem v);
Series series_variable(CtxPtr ctx, unsigned i);

// L-order within validity.
OrderVal order(const Series& s);
ExtRat order_lb(const Series& s);

// Order refined by nilpotency depth of the lowest coefficient; depth is the
// ring's nil index when the series vanishes within validity.
struct RefinedOrder {
  OrderVal w;
  unsigned depth;
  friend bool operator==(const RefinedOrder& a, const RefinedOrder& b) {
    return a.w == b.w && a.depth == b.depth;
  }
};
RefinedOrder refined_order(const Series& s);
// Strict refined-order comparison a > b in the lexicographic sense
// (w, then depth), treating inexact bounds conservatively: returns true only
// when the information available certifies strict increase.
bool refined_strictly_greater(const RefinedOrder& a, const RefinedOrder& b);

// Restrict validity to min(T, current) and drop the terms beyond.
Series truncate(const Series& s, const ExtRat& T);

Series add(const Series& a, const Series& b);
Series sub(const Series& a, const Series& b);
Series neg(const Series& a);
Series scale(const Series& a, const RElem& v);
Series scale(const Series& a, const Rat& v);
Series mul(const Series& a, const Series& b);
// s * v x^a without building a one-term series.
Series mul_monomial(const Series& s, const Exp& a, const RElem& v);
Series pow_nat(const Series& s, unsigned long k, const ExtRat& cap);

// Multiplicative inverse of a series with unit constant term, computed as a
// geometric series in the positive-order part, truncated at cap.  The cap
// must be finite unless the input is a constant.
Series invert_unit(const Series& s, const ExtRat& cap);

// Partial derivative with respect to variable i; validity drops by L_i.
Series derivative(const Series& s, unsigned i);

// Univariate operators (nvars == 1): d/dt and its right inverse with zero
// constant term.  Validity moves by the variable weight accordingly.
Series d_univar(const Series& s);
Series integrate_univar(const Series& s);

// Substitute vals for the *last* ctx_g.nvars - keep variables of g; the first
// `keep` variables of g embed as the first `keep` variables of the output
// context (their weights must agree).  Every substituted value must have zero
// constant term (ORDER_ZERO_INPUT otherwise).
Series substitute(const Series& g, const std::vector<Series>& vals, unsigned keep = 0);

// Evaluate a polynomial (infinite validity) at arbitrary series values,
// including values with nonzero constant term.  Result validity is the
// minimum validity of the values.
Series eval_poly_at(const Series& g, const std::vector<Series>& vals);

// Evaluate a polynomial over Q at ring elements (used for coefficientwise
// recursions on arcs).
RElem eval_poly_at_relems(const Series& g, const std::vector<RElem>& vals, const Ring& ring);

// Tuple of series sharing one context.
struct SeriesVec {
  std::vector<Series> v;

  SeriesVec() = default;
  explicit SeriesVec(std::vector<Series> comps) : v(std::move(comps)) {}

  std::size_t size() const { return v.size(); }
  Series& operator[](std::size_t i) { return v[i]; }
  const Series& operator[](std::size_t i) const { return v[i]; }

  CtxPtr ctx() const;
  ExtRat validity() const;  // min over components; infinity for empty
  bool zero_within_validity() const;
};

SeriesVec vec_zero(CtxPtr ctx, std::size_t n, ExtRat validity = ExtRat::infinity());
SeriesVec vec_add(const SeriesVec& a, const SeriesVec& b);
SeriesVec vec_sub(const SeriesVec& a, const SeriesVec& b);
SeriesVec vec_neg(const SeriesVec& a);
SeriesVec vec_truncate(const SeriesVec& a, const ExtRat& T);
ExtRat vec_order_lb(const SeriesVec& a);  // min over components

// Componentwise substitution/evaluation.
SeriesVec substitute_vec(const SeriesVec& g, const std::vector<Series>& vals, unsigned keep = 0);
SeriesVec eval_poly_at_vec(const SeriesVec& g, const std::vector<Series>& vals);

// True when a and b agree at every weight <= upto.  Both validities must
// reach upto; otherwise the comparison would be vacuous and this throws an
// internal error (callers decide the window from the validities they hold).
bool agree(const Series& a, const Series& b, const ExtRat& upto);
bool agree_vec(const SeriesVec& a, const SeriesVec& b, const ExtRat& upto);
bool is_zero_upto(const Series& s, const ExtRat& upto);
bool is_zero_upto_vec(const SeriesVec& s, const ExtRat& upto);

// First exponent (by the (weight, lex) order) where a and b differ, looking
// no further than upto; nullopt when they agree.
std::optional<WExp> first_difference(const Series& a, const Series& b, const ExtRat& upto);

// Module exponent (exponent, component) ordered by (weight, lex, component).
struct ModExp {
  Rat w;
  Exp a;
  unsigned comp = 0;
};
bool modexp_less(const ModExp& x, const ModExp& y);
std::string modexp_str(const ModExp& m);
// Least module exponent of a tuple within validity.
std::optional<ModExp> vec_leading_exp(const SeriesVec& f);

// Taylor data of a polynomial tuple F over (x, y) with `keep` leading x
// variables: the map nu -> (1/nu!) d^nu_y F(x, at), i.e. the coefficients of
// F(x, at + z) in powers of z, for |nu| <= max_deg (and at most the y-degree
// of F).  Zero coefficients are omitted.  With keep == 0 the expansion point
// may have unit components; otherwise it must have positive order.
std::map<Exp, SeriesVec> taylor_expand(const std::vector<Series>& F, const SeriesVec& at,
                                       unsigned keep = 0, unsigned max_deg = ~0u);

// All weights w = L.alpha <= bound, each listed once in increasing order.
std::vector<Rat> weights_up_to(const Context& ctx, const Rat& bound);

std::string series_str(const Series& s, const std::vector<std::string>& names);
std::vector<std::string> default_names(const Context& ctx);

}  // namespace arcloom
