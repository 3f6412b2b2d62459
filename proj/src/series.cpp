#include "arcloom/series.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

namespace arcloom {

Rat Context::min_weight() const {
  require_internal(nvars > 0, "min_weight of empty context");
  Rat m = L[0];
  for (const Rat& w : L) m = std::min(m, w);
  return m;
}

Rat Context::max_weight() const {
  require_internal(nvars > 0, "max_weight of empty context");
  Rat m = L[0];
  for (const Rat& w : L) m = std::max(m, w);
  return m;
}

CtxPtr make_context(unsigned nvars, std::vector<Rat> L, Ring ring) {
  if (L.size() != nvars) fail(errc::domain_mismatch, "weight vector size does not match nvars");
  for (const Rat& w : L)
    if (w <= 0) fail(errc::domain_mismatch, "weights must be positive");
  if (ring.nil_index == 0) fail(errc::domain_mismatch, "nil index must be >= 1");
  Context c;
  c.nvars = nvars;
  c.L = std::move(L);
  c.ring = ring;
  return std::make_shared<const Context>(std::move(c));
}

CtxPtr default_context(unsigned nvars, Ring ring) {
  return make_context(nvars, std::vector<Rat>(nvars, Rat(1)), ring);
}

CtxPtr join_context(const CtxPtr& a, const CtxPtr& b) {
  require_internal(a && b, "join_context on null context");
  if (a == b) return a;
  if (!a->same_shape(*b))
    fail(errc::domain_mismatch, "contexts differ in variables or weights");
  Ring joined = join_ring(a->ring, b->ring);
  if (joined == a->ring) return a;
  if (joined == b->ring) return b;
  return make_context(a->nvars, a->L, joined);
}

Rat exp_weight(const Context& ctx, const Exp& a) {
  require_internal(a.size() == ctx.nvars, "exponent arity mismatch");
  Rat w(0);
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != 0) w += Rat(static_cast<long>(a[i])) * ctx.L[i];
  return w;
}

unsigned exp_total(const Exp& a) {
  unsigned t = 0;
  for (unsigned e : a) t += e;
  return t;
}

Exp exp_add(const Exp& a, const Exp& b) {
  require_internal(a.size() == b.size(), "exponent arity mismatch in add");
  Exp r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

bool exp_divides(const Exp& a, const Exp& b) {
  require_internal(a.size() == b.size(), "exponent arity mismatch in divides");
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

Exp exp_sub(const Exp& b, const Exp& a) {
  require_internal(exp_divides(a, b), "exponent subtraction would go negative");
  Exp r(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) r[i] = b[i] - a[i];
  return r;
}

std::string exp_str(const Exp& a) {
  std::string s = "(";
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(a[i]);
  }
  return s + ")";
}

void Series::add_coeff(const Exp& a, const RElem& v) {
  add_coeff_w(exp_weight(*ctx, a), a, v);
}

void Series::add_coeff_w(Rat w, const Exp& a, const RElem& v) {
  if (v.is_zero()) return;
  if (ExtRat(w) > validity) return;
  WExp key{std::move(w), a};
  auto it = c.find(key);
  if (it == c.end()) {
    c.emplace(std::move(key), v);
  } else {
    it->second = radd(it->second, v);
    if (it->second.is_zero()) c.erase(it);
  }
}

void Series::set_coeff(const Exp& a, const RElem& v) {
  WExp key{exp_weight(*ctx, a), a};
  c.erase(key);
  if (!v.is_zero() && !(ExtRat(key.w) > validity)) c.emplace(std::move(key), v);
}

const RElem& Series::coeff(const Exp& a) const {
  static const RElem zero;
  WExp key{exp_weight(*ctx, a), a};
  require_internal(!(ExtRat(key.w) > validity), "coefficient requested beyond validity");
  auto it = c.find(key);
  return it == c.end() ? zero : it->second;
}

RElem Series::coeff_or_zero(const Exp& a) const { return coeff(a); }

Series series_zero(CtxPtr ctx, ExtRat validity) { return Series(std::move(ctx), std::move(validity)); }

Series series_const(CtxPtr ctx, RElem v) {
  Series s(ctx, ExtRat::infinity());
  s.add_coeff(Exp(ctx->nvars, 0), v);
  return s;
}

Series series_const(CtxPtr ctx, Rat v) { return series_const(std::move(ctx), RElem::from_rat(std::move(v))); }

Series series_monomial(CtxPtr ctx, const Exp& a, RElem v) {
  Series s(ctx, ExtRat::infinity());
  s.add_coeff(a, v);
  return s;
}

Series series_variable(CtxPtr ctx, unsigned i) {
  require_internal(i < ctx->nvars, "variable index out of range");
  Exp a(ctx->nvars, 0);
  a[i] = 1;
  return series_monomial(std::move(ctx), a, RElem::one());
}

OrderVal order(const Series& s) {
  if (!s.c.empty()) return OrderVal::exactly(s.c.begin()->first.w);
  if (!s.validity.finite()) return OrderVal::at_least(ExtRat::infinity());
  return OrderVal::at_least(s.validity + s.ctx->min_weight());
}

ExtRat order_lb(const Series& s) { return order(s).lower_bound(); }

RefinedOrder refined_order(const Series& s) {
  OrderVal w = order(s);
  if (!w.exact) return RefinedOrder{w, s.ctx->ring.nil_index};
  // Depth of the full coefficient *at the leading weight*: gather every term
  // of minimal weight and take the minimal nilpotency depth among them.
  const Rat& w0 = s.c.begin()->first.w;
  unsigned depth = s.ctx->ring.nil_index;
  for (const auto& [k, v] : s.c) {
    if (k.w != w0) break;
    depth = std::min(depth, nil_depth(v, s.ctx->ring.nil_index));
  }
  return RefinedOrder{w, depth};
}

bool refined_strictly_greater(const RefinedOrder& a, const RefinedOrder& b) {
  if (!b.w.exact) return false;  // cannot certify against an indeterminate base
  const ExtRat& bw = b.w.bound;
  if (a.w.lower_bound() > bw) return true;
  if (a.w.exact && a.w.bound == bw) return a.depth > b.depth;
  return false;
}

Series truncate(const Series& s, const ExtRat& T) {
  ExtRat v = ExtRat::min(s.validity, T);
  if (v == s.validity) return s;
  Series r(s.ctx, v);
  for (const auto& [k, val] : s.c) {
    if (ExtRat(k.w) > v) break;
    r.c.emplace(k, val);
  }
  return r;
}

Series add(const Series& a, const Series& b) {
  CtxPtr ctx = join_context(a.ctx, b.ctx);
  Series r(ctx, ExtRat::min(a.validity, b.validity));
  for (const auto& [k, v] : a.c) {
    if (ExtRat(k.w) > r.validity) break;
    r.c.emplace(k, v);
  }
  for (const auto& [k, v] : b.c) {
    if (ExtRat(k.w) > r.validity) break;
    r.add_coeff_w(k.w, k.a, v);
  }
  return r;
}

Series sub(const Series& a, const Series& b) { return add(a, neg(b)); }

Series neg(const Series& a) {
  Series r = a;
  for (auto& [k, v] : r.c) v = rneg(v);
  return r;
}

Series scale(const Series& a, const RElem& v) {
  if (v.is_zero()) return series_zero(a.ctx);
  Series r(a.ctx, a.validity);
  unsigned K = a.ctx->ring.nil_index;
  for (const auto& [k, w] : a.c) r.add_coeff_w(k.w, k.a, rmul(w, v, K));
  return r;
}

Series scale(const Series& a, const Rat& v) {
  if (v == 0) return series_zero(a.ctx);
  Series r(a.ctx, a.validity);
  for (const auto& [k, w] : a.c) r.c.emplace(k, rmul_rat(w, v));
  return r;
}

Series mul(const Series& a, const Series& b) {
  CtxPtr ctx = join_context(a.ctx, b.ctx);
  // Unknown tails enter the product at validity(a) + order(b) and
  // validity(b) + order(a); everything below both is exact.
  ExtRat V = ExtRat::min(a.validity + order_lb(b), b.validity + order_lb(a));
  Series r(ctx, V);
  if (a.c.empty() || b.c.empty()) return r;
  unsigned K = ctx->ring.nil_index;
  const Rat& b0 = b.c.begin()->first.w;
  for (const auto& [ka, ca] : a.c) {
    if (ExtRat(ka.w + b0) > V) break;
    for (const auto& [kb, cb] : b.c) {
      Rat w = ka.w + kb.w;
      if (ExtRat(w) > V) break;
      RElem p = rmul(ca, cb, K);
      if (p.is_zero()) continue;
      r.add_coeff_w(std::move(w), exp_add(ka.a, kb.a), p);
    }
  }
  return r;
}

Series mul_monomial(const Series& s, const Exp& a, const RElem& v) {
  if (v.is_zero()) return series_zero(s.ctx);
  Rat wa = exp_weight(*s.ctx, a);
  Series r(s.ctx, s.validity + wa);
  unsigned K = s.ctx->ring.nil_index;
  for (const auto& [k, c] : s.c) {
    RElem p = rmul(c, v, K);
    if (p.is_zero()) continue;
    r.c.emplace(WExp{k.w + wa, exp_add(k.a, a)}, std::move(p));
  }
  return r;
}

Series pow_nat(const Series& s, unsigned long k, const ExtRat& cap) {
  if (k == 0) return truncate(series_const(s.ctx, Rat(1)), cap);
  Series r = truncate(s, cap);
  for (unsigned long i = 1; i < k; ++i) {
    r = truncate(mul(r, s), cap);
    if (r.c.empty() && r.validity >= cap) break;
  }
  return r;
}

Series invert_unit(const Series& s, const ExtRat& cap) {
  const ExtRat V = ExtRat::min(s.validity, cap);
  if (s.validity < ExtRat(Rat(0)))
    fail(errc::singular_within_validity,
         "constant term is undetermined within the input's validity");
  Exp zero_exp(s.ctx->nvars, 0);
  RElem c0 = s.coeff_or_zero(zero_exp);
  if (!c0.is_unit())
    fail(errc::singular_within_validity,
         "cannot invert a series whose constant term is not a unit",
         relem_str(c0));
  RElem c0inv = rinv(c0, s.ctx->ring.nil_index);
  Series m = s;          // positive-order part
  m.set_coeff(zero_exp, RElem::zero());
  Series acc = series_const(s.ctx, Rat(1));
  acc = scale(acc, c0inv);
  acc.validity = V;
  if (m.c.empty()) return acc;
  if (!V.finite())
    fail(errc::unsupported,
         "inverting a non-constant series requires a finite truncation cap");
  // acc accumulates c0^{-1} * sum_k (-m c0^{-1})^k, term by term.
  Series step = scale(neg(m), c0inv);  // order >= omin > 0
  ExtRat omin_e = order_lb(step);
  require_internal(omin_e.finite() && omin_e.value() > 0,
                   "unit inversion step must have positive finite order");
  Rat omin = omin_e.value();
  Series powk = truncate(step, V);
  Series r = acc;
  Rat w = omin;
  while (ExtRat(w) <= V) {
    r = add(r, scale(powk, c0inv));
    powk = truncate(mul(powk, step), V);
    if (powk.c.empty()) break;
    w = w + omin;
  }
  r.validity = V;
  return r;
}

Series derivative(const Series& s, unsigned i) {
  require_internal(i < s.ctx->nvars, "derivative variable out of range");
  const Rat& Li = s.ctx->L[i];
  Series r(s.ctx, s.validity - Li);
  for (const auto& [k, v] : s.c) {
    if (k.a[i] == 0) continue;
    Exp a = k.a;
    a[i] -= 1;
    r.add_coeff_w(k.w - Li, std::move(a), rmul_rat(v, Rat(static_cast<long>(k.a[i]))));
  }
  return r;
}

Series d_univar(const Series& s) {
  require_internal(s.ctx->nvars == 1, "d_univar needs a univariate context");
  return derivative(s, 0);
}

Series integrate_univar(const Series& s) {
  require_internal(s.ctx->nvars == 1, "integrate_univar needs a univariate context");
  const Rat& L0 = s.ctx->L[0];
  Series r(s.ctx, s.validity + L0);
  for (const auto& [k, v] : s.c) {
    Exp a = k.a;
    a[0] += 1;
    r.add_coeff_w(k.w + L0, std::move(a), rmul_rat(v, Rat(1, static_cast<long>(a[0]))));
  }
  return r;
}

namespace {

// Shared core of substitute/eval_poly_at.  `keep` leading variables of g
// embed into the output context; the rest take `vals`.  When
// `require_positive_order` holds, substituted values must lie in the maximal
// ideal and the tail of g contributes beyond rho * validity(g); otherwise g
// must be a polynomial.
Series substitute_core(const Series& g, const std::vector<Series>& vals, unsigned keep,
                       bool require_positive_order) {
  const Context& cg = *g.ctx;
  require_internal(keep <= cg.nvars, "keep exceeds arity");
  unsigned m = cg.nvars - keep;
  require_internal(vals.size() == m, "value count does not match substituted arity");
  require_internal(m > 0, "substitution with nothing to substitute");

  CtxPtr out = vals[0].ctx;
  for (const Series& v : vals) out = join_context(out, v.ctx);
  if (out->nvars < keep) fail(errc::domain_mismatch, "output context too small for kept variables");
  for (unsigned i = 0; i < keep; ++i)
    if (out->L[i] != cg.L[i])
      fail(errc::domain_mismatch, "kept variable weights disagree with output context");
  Ring joined = join_ring(cg.ring, out->ring);
  if (!(joined == out->ring)) out = make_context(out->nvars, out->L, joined);

  ExtRat tv = ExtRat::infinity();
  ExtRat omin = ExtRat::infinity();
  for (const Series& v : vals) {
    tv = ExtRat::min(tv, v.validity);
    omin = ExtRat::min(omin, order_lb(v));
    if (require_positive_order && v.validity >= ExtRat(Rat(0))) {
      Exp zero(v.ctx->nvars, 0);
      if (!v.coeff(zero).is_zero())
        fail(errc::order_zero_input, "substituted value has a nonzero constant term");
    }
  }

  ExtRat V;
  if (require_positive_order) {
    Rat maxw_y = cg.L[keep];
    for (unsigned i = keep; i < cg.nvars; ++i) maxw_y = std::max(maxw_y, cg.L[i]);
    ExtRat rho = ExtRat::min(ExtRat(Rat(1)), omin * (Rat(1) / maxw_y));
    ExtRat tail = g.validity;
    if (tail.finite()) tail = ExtRat(tail.value() * rho.value());
    V = ExtRat::min(tail, tv);
  } else {
    require_internal(!g.validity.finite(), "eval_poly_at needs a polynomial");
    V = tv;
  }

  Series acc(out, V);
  if (ExtRat(Rat(0)) > V) return acc;
  // Power cache: powers[i][k] = vals[i]^k truncated at V.
  std::vector<std::vector<Series>> powers(m);
  auto power = [&](unsigned i, unsigned k) -> const Series& {
    auto& col = powers[i];
    if (col.empty()) col.push_back(truncate(series_const(out, Rat(1)), V));
    while (col.size() <= k) col.push_back(truncate(mul(col.back(), vals[i]), V));
    return col[k];
  };

  for (const auto& [k, cv] : g.c) {
    if (ExtRat(k.w) > g.validity) break;
    // Product over substituted variables.
    Series term = truncate(series_const(out, Rat(1)), V);
    bool nonconst = false;
    for (unsigned i = 0; i < m; ++i) {
      unsigned e = k.a[keep + i];
      if (e == 0) continue;
      nonconst = true;
      term = truncate(mul(term, power(i, e)), V);
      if (term.c.empty()) break;
    }
    if (nonconst && term.c.empty()) {
      // Product vanished within the cap; nothing to add, but the validity
      // accounting is already pinned by V.
      continue;
    }
    // Kept part embeds as a monomial of the output context.
    Exp beta(out->nvars, 0);
    for (unsigned i = 0; i < keep; ++i) beta[i] = k.a[i];
    Series shifted = mul_monomial(term, beta, cv);
    acc = add(acc, truncate(shifted, V));
    acc.validity = V;  // additions of partial terms must not lower the cap
  }
  acc.validity = V;
  return acc;
}

}  // namespace

Series substitute(const Series& g, const std::vector<Series>& vals, unsigned keep) {
  return substitute_core(g, vals, keep, true);
}

Series eval_poly_at(const Series& g, const std::vector<Series>& vals) {
  return substitute_core(g, vals, 0, false);
}

RElem eval_poly_at_relems(const Series& g, const std::vector<RElem>& vals, const Ring& ring) {
  require_internal(!g.validity.finite(), "eval_poly_at_relems needs a polynomial");
  require_internal(vals.size() == g.ctx->nvars, "value count mismatch");
  RElem acc = RElem::zero();
  for (const auto& [k, cv] : g.c) {
    RElem term = cv;
    for (std::size_t i = 0; i < vals.size() && !term.is_zero(); ++i)
      if (k.a[i] != 0) term = rmul(term, rpow(vals[i], k.a[i], ring.nil_index), ring.nil_index);
    acc = radd(acc, term);
  }
  return acc;
}

CtxPtr SeriesVec::ctx() const {
  require_internal(!v.empty(), "ctx of empty tuple");
  return v[0].ctx;
}

ExtRat SeriesVec::validity() const {
  ExtRat t = ExtRat::infinity();
  for (const Series& s : v) t = ExtRat::min(t, s.validity);
  return t;
}

bool SeriesVec::zero_within_validity() const {
  for (const Series& s : v)
    if (!s.zero_within_validity()) return false;
  return true;
}

SeriesVec vec_zero(CtxPtr ctx, std::size_t n, ExtRat validity) {
  SeriesVec r;
  r.v.assign(n, series_zero(ctx, validity));
  return r;
}

SeriesVec vec_add(const SeriesVec& a, const SeriesVec& b) {
  require_internal(a.size() == b.size(), "tuple size mismatch");
  SeriesVec r;
  r.v.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r.v.push_back(add(a[i], b[i]));
  return r;
}

SeriesVec vec_sub(const SeriesVec& a, const SeriesVec& b) {
  require_internal(a.size() == b.size(), "tuple size mismatch");
  SeriesVec r;
  r.v.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r.v.push_back(sub(a[i], b[i]));
  return r;
}

SeriesVec vec_neg(const SeriesVec& a) {
  SeriesVec r;
  r.v.reserve(a.size());
  for (const Series& s : a.v) r.v.push_back(neg(s));
  return r;
}

SeriesVec vec_truncate(const SeriesVec& a, const ExtRat& T) {
  SeriesVec r;
  r.v.reserve(a.size());
  for (const Series& s : a.v) r.v.push_back(truncate(s, T));
  return r;
}

ExtRat vec_order_lb(const SeriesVec& a) {
  ExtRat o = ExtRat::infinity();
  for (const Series& s : a.v) o = ExtRat::min(o, order_lb(s));
  return o;
}

SeriesVec substitute_vec(const SeriesVec& g, const std::vector<Series>& vals, unsigned keep) {
  SeriesVec r;
  r.v.reserve(g.size());
  for (const Series& s : g.v) r.v.push_back(substitute(s, vals, keep));
  return r;
}

SeriesVec eval_poly_at_vec(const SeriesVec& g, const std::vector<Series>& vals) {
  SeriesVec r;
  r.v.reserve(g.size());
  for (const Series& s : g.v) r.v.push_back(eval_poly_at(s, vals));
  return r;
}

bool is_zero_upto(const Series& s, const ExtRat& upto) {
  require_internal(s.validity >= upto, "zero test beyond validity");
  if (s.c.empty()) return true;
  return ExtRat(s.c.begin()->first.w) > upto;
}

bool is_zero_upto_vec(const SeriesVec& s, const ExtRat& upto) {
  for (const Series& x : s.v)
    if (!is_zero_upto(x, upto)) return false;
  return true;
}

bool agree(const Series& a, const Series& b, const ExtRat& upto) {
  return is_zero_upto(sub(a, b), upto);
}

bool agree_vec(const SeriesVec& a, const SeriesVec& b, const ExtRat& upto) {
  require_internal(a.size() == b.size(), "tuple size mismatch");
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!agree(a[i], b[i], upto)) return false;
  return true;
}

std::optional<WExp> first_difference(const Series& a, const Series& b, const ExtRat& upto) {
  Series d = sub(a, b);
  require_internal(d.validity >= upto, "difference test beyond validity");
  if (d.c.empty()) return std::nullopt;
  const WExp& k = d.c.begin()->first;
  if (ExtRat(k.w) > upto) return std::nullopt;
  return k;
}

bool modexp_less(const ModExp& x, const ModExp& y) {
  int c = cmp(x.w, y.w);
  if (c != 0) return c < 0;
  if (x.a != y.a) return x.a < y.a;
  return x.comp < y.comp;
}

std::string modexp_str(const ModExp& m) {
  return exp_str(m.a) + "@" + std::to_string(m.comp + 1);
}

std::optional<ModExp> vec_leading_exp(const SeriesVec& f) {
  std::optional<ModExp> best;
  for (unsigned i = 0; i < f.size(); ++i) {
    if (f[i].c.empty()) continue;
    const WExp& k = f[i].c.begin()->first;
    ModExp cand{k.w, k.a, i};
    if (!best || modexp_less(cand, *best)) best = std::move(cand);
  }
  return best;
}

namespace {

void enumerate_exps(unsigned nvars, unsigned budget, Exp& cur, unsigned i,
                    const std::function<void(const Exp&)>& visit) {
  if (i == nvars) {
    visit(cur);
    return;
  }
  for (unsigned k = 0; k <= budget; ++k) {
    cur[i] = k;
    enumerate_exps(nvars, budget - k, cur, i + 1, visit);
  }
  cur[i] = 0;
}

}  // namespace

std::map<Exp, SeriesVec> taylor_expand(const std::vector<Series>& F, const SeriesVec& at,
                                       unsigned keep, unsigned max_deg) {
  require_internal(!F.empty(), "taylor_expand of empty tuple");
  const CtxPtr cf = F[0].ctx;
  require_internal(keep < cf->nvars, "taylor_expand needs at least one expansion variable");
  unsigned p = cf->nvars - keep;
  require_internal(at.size() == p, "expansion point arity mismatch");
  unsigned maxdeg = 0;
  for (const Series& f : F) {
    require_internal(!f.validity.finite(), "taylor_expand needs polynomial data");
    require_internal(f.ctx->same_shape(*cf), "taylor_expand components over different contexts");
    for (const auto& [k, v] : f.c) {
      unsigned ydeg = 0;
      for (unsigned i = keep; i < cf->nvars; ++i) ydeg += k.a[i];
      maxdeg = std::max(maxdeg, ydeg);
    }
  }
  maxdeg = std::min(maxdeg, max_deg);

  std::map<Exp, SeriesVec> out;
  Exp nu(p, 0);
  std::function<void(const Exp&)> visit = [&](const Exp& e) {
    // (1/nu!) d^nu_y f for each component, then y := at with x kept.
    std::vector<Series> ders;
    ders.reserve(F.size());
    bool any = false;
    for (const Series& f : F) {
      Series d = f;
      for (unsigned i = 0; i < p; ++i)
        for (unsigned k = 0; k < e[i]; ++k)
          d = scale(derivative(d, keep + i), Rat(1, static_cast<long>(k + 1)));
      ders.push_back(std::move(d));
      if (!ders.back().c.empty()) any = true;
    }
    if (!any) return;
    SeriesVec val;
    val.v.reserve(F.size());
    bool nonzero = false;
    for (const Series& d : ders) {
      if (d.c.empty()) {
        val.v.push_back(series_zero(at.ctx()));
      } else if (keep == 0) {
        val.v.push_back(eval_poly_at(d, at.v));
      } else {
        val.v.push_back(substitute(d, at.v, keep));
      }
      if (!val.v.back().c.empty()) nonzero = true;
    }
    if (nonzero) out.emplace(e, std::move(val));
  };
  enumerate_exps(p, maxdeg, nu, 0, visit);
  return out;
}

std::vector<Rat> weights_up_to(const Context& ctx, const Rat& bound) {
  std::set<Rat> ws;
  std::function<void(unsigned, Rat)> rec = [&](unsigned i, Rat acc) {
    if (i == ctx.nvars) {
      ws.insert(acc);
      return;
    }
    for (Rat w = acc;; w += ctx.L[i]) {
      if (w > bound) break;
      rec(i + 1, w);
    }
  };
  rec(0, Rat(0));
  return std::vector<Rat>(ws.begin(), ws.end());
}

std::vector<std::string> default_names(const Context& ctx) {
  std::vector<std::string> names;
  if (ctx.nvars == 1) {
    names.push_back("t");
  } else {
    for (unsigned i = 0; i < ctx.nvars; ++i) names.push_back("x" + std::to_string(i + 1));
  }
  return names;
}

std::string series_str(const Series& s, const std::vector<std::string>& names) {
  require_internal(names.size() == s.ctx->nvars, "name table arity mismatch");
  if (s.c.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [k, v] : s.c) {
    std::string mono;
    for (unsigned i = 0; i < k.a.size(); ++i) {
      if (k.a[i] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += names[i];
      if (k.a[i] > 1) mono += "^" + std::to_string(k.a[i]);
    }
    // Coefficient rendering: pure rational coefficients inline with sign
    // handling; ring elements with nilpotent parts in parentheses.
    bool plain = v.c.size() <= 1;
    std::string cs;
    bool negative = false;
    if (plain) {
      Rat r = v.rat_part();
      negative = r < 0;
      Rat ar = negative ? Rat(-r) : r;
      if (mono.empty()) {
        cs = rat_str(ar);
      } else if (ar == 1) {
        cs = mono;
      } else {
        cs = rat_str(ar) + "*" + mono;
      }
    } else {
      cs = "(" + relem_str(v) + ")";
      if (!mono.empty()) cs += "*" + mono;
    }
    if (first) {
      out += negative ? "-" + cs : cs;
      first = false;
    } else {
      out += negative ? " - " + cs : " + " + cs;
    }
  }
  return out;
}

}  // namespace arcloom
