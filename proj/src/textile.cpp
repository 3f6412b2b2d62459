#include "arcloom/textile.hpp"

#include <string>
#include <utility>

#include "arcloom/sampler.hpp"

namespace arcloom {

namespace {

// Shared domain gate for evaluators: arity, context shape, and the certified
// order lower bound of every component.
void require_domain(const CtxPtr& shape, unsigned arity, const Rat& l, const SeriesVec& a,
                    const char* what) {
  if (a.size() != arity)
    fail(errc::domain_mismatch, std::string(what) + ": expected " + std::to_string(arity) +
                                    " input components, got " + std::to_string(a.size()));
  for (const Series& s : a.v) {
    if (!s.ctx->same_shape(*shape))
      fail(errc::domain_mismatch,
           std::string(what) + ": input context shape differs from the map's");
    if (order_lb(s) < ExtRat(l))
      fail(errc::domain_mismatch,
           std::string(what) + ": input component is not certified to have order >= " +
               rat_str(l),
           order_lb(s).str());
  }
}

// Copy with the validity forced to V.  Raising a validity is only sound when
// locality guarantees the coefficients in the gap cannot influence what the
// caller will read off; the tactile evaluator is the one place that holds
// such a guarantee.
Series with_validity(const Series& s, const ExtRat& V) {
  if (V <= s.validity) return truncate(s, V);
  Series r = s;
  r.validity = V;
  return r;
}

}  // namespace

CtxPtr tactile_context(const CtxPtr& base, unsigned m, const Rat& l) {
  require_internal(m > 0, "tactile context needs at least one slot");
  if (l <= 0) fail(errc::unsupported, "slot weight must be positive, got " + rat_str(l));
  std::vector<Rat> L = base->L;
  for (unsigned i = 0; i < m; ++i) L.push_back(l);
  return make_context(base->nvars + m, std::move(L), base->ring);
}

TextileMap tactile_from_poly(const std::vector<Series>& g, unsigned arity_in,
                             const Rat& domain_order) {
  if (g.empty()) fail(errc::unsupported, "a map needs at least one output component");
  if (arity_in == 0) fail(errc::unsupported, "a map needs at least one input slot");
  if (domain_order < 1)
    fail(errc::unsupported,
         "substitution maps need domain order >= 1, got " + rat_str(domain_order));
  CtxPtr full0 = g[0].ctx;
  for (const Series& gj : g) full0 = join_context(full0, gj.ctx);
  if (full0->nvars <= arity_in)
    fail(errc::unsupported, "the data must have at least one ambient variable besides the " +
                                std::to_string(arity_in) + " slots");
  const unsigned n = full0->nvars - arity_in;
  for (const Series& gj : g)
    if (!gj.is_polynomial())
      fail(errc::unsupported, "substitution maps need polynomial data; a component has "
                              "finite validity " +
                                  gj.validity.str());

  // Canonical context: ambient weights as given, every slot at weight l, so
  // that each term's weight is the least output weight it can produce.
  CtxPtr base = make_context(n, std::vector<Rat>(full0->L.begin(), full0->L.begin() + n),
                             full0->ring);
  CtxPtr full = tactile_context(base, arity_in, domain_order);
  std::vector<Series> comps;
  comps.reserve(g.size());
  for (const Series& gj : g) {
    Series r(full, ExtRat::infinity());
    for (const auto& [k, val] : gj.c) r.add_coeff(k.a, val);
    comps.push_back(std::move(r));
  }

  ExtRat kappa = ExtRat::infinity();
  ExtRat out_order = ExtRat::infinity();
  for (const Series& gj : comps)
    for (const auto& [k, val] : gj.c) {
      unsigned slot_total = 0;
      for (unsigned i = n; i < n + arity_in; ++i) slot_total += k.a[i];
      out_order = ExtRat::min(out_order, ExtRat(k.w));
      if (slot_total > 0) kappa = ExtRat::min(kappa, ExtRat(k.w - domain_order));
    }

  TextileMap map;
  map.arity_in = arity_in;
  map.arity_out = static_cast<unsigned>(g.size());
  map.ctx = base;
  map.domain_order = domain_order;
  map.kappa = kappa;
  map.out_order = out_order;
  map.kind = TextileMap::Kind::tactile;
  map.tactile_poly = comps;
  map.eval = [comps, base, arity_in, domain_order, n, kappa](const SeriesVec& a,
                                                             const ExtRat& T) {
    require_domain(base, arity_in, domain_order, a, "substitution map");
    // Locality lift: output coefficients at weight <= Tv + kappa depend only
    // on input coefficients at weight <= Tv, because every term moves an
    // input coefficient up by at least kappa.  So the substitution may run
    // with the validities raised to the claim.
    const ExtRat claim = ExtRat::min(T, a.validity() + kappa);
    std::vector<Series> vals;
    vals.reserve(arity_in);
    for (const Series& s : a.v) vals.push_back(with_validity(s, claim));
    SeriesVec out;
    out.v.reserve(comps.size());
    for (const Series& gj : comps) out.v.push_back(truncate(substitute(gj, vals, n), T));
    return out;
  };
  return map;
}

TextileMap linear_from_matrix(const std::vector<std::vector<Series>>& F,
                              const Rat& domain_order) {
  if (F.empty() || F[0].empty()) fail(errc::unsupported, "the coefficient matrix is empty");
  const unsigned p = static_cast<unsigned>(F.size());
  const unsigned m = static_cast<unsigned>(F[0].size());
  CtxPtr ctx = F[0][0].ctx;
  for (const auto& row : F) {
    if (row.size() != m) fail(errc::domain_mismatch, "ragged coefficient matrix");
    for (const Series& e : row) ctx = join_context(ctx, e.ctx);
  }

  ExtRat kappa = ExtRat::infinity();
  for (const auto& row : F)
    for (const Series& e : row) kappa = ExtRat::min(kappa, order_lb(e));

  TextileMap map;
  map.arity_in = m;
  map.arity_out = p;
  map.ctx = ctx;
  map.domain_order = domain_order;
  map.kappa = kappa;
  map.out_order = kappa + ExtRat(domain_order);
  map.kind = TextileMap::Kind::linear;
  map.linear_mat = F;
  map.eval = [F, ctx, m, p, domain_order](const SeriesVec& a, const ExtRat& T) {
    require_domain(ctx, m, domain_order, a, "linear map");
    SeriesVec out;
    out.v.reserve(p);
    for (unsigned i = 0; i < p; ++i) {
      Series acc = series_zero(a[0].ctx);
      for (unsigned j = 0; j < m; ++j) acc = add(acc, mul(F[i][j], a[j]));
      out.v.push_back(truncate(acc, T));
    }
    return out;
  };
  return map;
}

TextileMap textile_identity(const CtxPtr& ctx, unsigned arity, const Rat& domain_order) {
  std::vector<std::vector<Series>> F(arity, std::vector<Series>(arity, series_zero(ctx)));
  for (unsigned i = 0; i < arity; ++i) F[i][i] = series_const(ctx, Rat(1));
  return linear_from_matrix(F, domain_order);
}

static TextileMap from_evaluator(std::function<SeriesVec(const SeriesVec&, const ExtRat&)> eval,
                                 CtxPtr ctx, unsigned arity_in, unsigned arity_out, const Rat& l,
                                 const ExtRat& kappa, const ExtRat& out_order,
                                 TextileMap::Kind kind) {
  require_internal(static_cast<bool>(eval), "evaluator must not be null");
  require_internal(arity_in > 0 && arity_out > 0, "arities must be positive");
  TextileMap map;
  map.arity_in = arity_in;
  map.arity_out = arity_out;
  map.ctx = std::move(ctx);
  map.domain_order = l;
  map.kappa = kappa;
  map.out_order = out_order;
  map.kind = kind;
  map.eval = std::move(eval);
  return map;
}

TextileMap general_from_evaluator(std::function<SeriesVec(const SeriesVec&, const ExtRat&)> eval,
                                  CtxPtr ctx, unsigned arity_in, unsigned arity_out,
                                  const Rat& domain_order, const ExtRat& kappa,
                                  const ExtRat& out_order) {
  return from_evaluator(std::move(eval), std::move(ctx), arity_in, arity_out, domain_order,
                        kappa, out_order, TextileMap::Kind::general);
}

TextileMap linear_from_evaluator(std::function<SeriesVec(const SeriesVec&, const ExtRat&)> eval,
                                 CtxPtr ctx, unsigned arity_in, unsigned arity_out,
                                 const Rat& domain_order, const ExtRat& kappa,
                                 const ExtRat& out_order) {
  return from_evaluator(std::move(eval), std::move(ctx), arity_in, arity_out, domain_order,
                        kappa, out_order, TextileMap::Kind::linear);
}

TextileMap from_recursion(const Series& step, unsigned depth, const CtxPtr& arc) {
  if (depth == 0) fail(errc::unsupported, "recursion depth must be positive");
  if (arc->nvars != 1)
    fail(errc::unsupported, "coefficientwise recursions act on univariate arcs");
  if (step.ctx->nvars != depth)
    fail(errc::domain_mismatch, "the step template must use exactly " + std::to_string(depth) +
                                    " variables, got " + std::to_string(step.ctx->nvars));
  if (!step.is_polynomial())
    fail(errc::unsupported, "the step template must be a polynomial");
  if (!step.ctx->ring.is_field())
    fail(errc::unsupported, "the step template must have plain rational coefficients");

  TextileMap map;
  map.arity_in = 1;
  map.arity_out = 1;
  map.ctx = arc;
  map.domain_order = Rat(0);
  map.kappa = ExtRat(Rat(0));
  map.out_order = ExtRat(Rat(0));
  map.kind = TextileMap::Kind::general;
  map.eval = [step, depth, arc](const SeriesVec& a, const ExtRat& T) {
    require_domain(arc, 1, Rat(0), a, "recursion residual map");
    const Series& s = a[0];
    const ExtRat Tw = ExtRat::min(T, s.validity);
    if (!Tw.finite())
      fail(errc::unsupported, "coefficientwise recursion needs a finite target validity");
    const Rat& L = s.ctx->L[0];
    const long imax = -ceil_to_long(-(Tw.value() / L));  // floor
    Series b(s.ctx, Tw);
    for (long i = 0; i <= imax; ++i) {
      Exp e{static_cast<unsigned>(i)};
      RElem ai = s.coeff_or_zero(e);
      RElem out;
      if (i < static_cast<long>(depth)) {
        out = ai;
      } else {
        std::vector<RElem> prev(depth);
        for (unsigned j = 0; j < depth; ++j)
          prev[j] = s.coeff_or_zero(Exp{static_cast<unsigned>(i) - 1 - j});
        out = rsub(ai, eval_poly_at_relems(step, prev, s.ctx->ring));
      }
      if (!out.is_zero()) b.set_coeff(e, out);
    }
    std::vector<Series> one;
    one.push_back(std::move(b));
    return SeriesVec(std::move(one));
  };
  return map;
}

namespace {

// Nilpotent-lift tangent: evaluate at a + e*v over the index-2 extension and
// read off the e-part.  Only valid when the inputs' ring is a field.
SeriesVec tangent_eps(const TextileMap& f, const SeriesVec& a, const SeriesVec& v,
                      const ExtRat& T) {
  const CtxPtr base = a[0].ctx;
  const CtxPtr c2 = make_context(base->nvars, base->L, Ring{2});
  std::vector<Series> lifted;
  lifted.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    Series s(c2, ExtRat::min(a[i].validity, v[i].validity));
    for (const auto& [k, val] : a[i].c) s.add_coeff(k.a, val);
    for (const auto& [k, val] : v[i].c) s.add_coeff(k.a, rmul(RElem::eps(1), val, 2));
    lifted.push_back(std::move(s));
  }
  SeriesVec out2 = f.eval(SeriesVec(std::move(lifted)), T);
  SeriesVec r;
  r.v.reserve(out2.size());
  for (const Series& o : out2.v) {
    Series d(base, o.validity);
    for (const auto& [k, val] : o.c)
      if (val.c.size() > 1 && val.c[1] != 0) d.add_coeff(k.a, RElem::from_rat(val.c[1]));
    r.v.push_back(std::move(d));
  }
  return r;
}

// Symbolic tangent for substitution maps: sum_i dg/dy_i (a) * v_i.  Exact
// over any coefficient ring.
SeriesVec tangent_symbolic(const TextileMap& f, const SeriesVec& a, const SeriesVec& v,
                           const ExtRat& T) {
  const unsigned n = f.nvars();
  SeriesVec out;
  out.v.reserve(f.tactile_poly.size());
  for (const Series& gj : f.tactile_poly) {
    Series acc = series_zero(a[0].ctx);
    for (unsigned i = 0; i < f.arity_in; ++i) {
      Series dg = derivative(gj, n + i);
      if (dg.zero_within_validity()) continue;
      acc = add(acc, mul(substitute(dg, a.v, n), v[i]));
    }
    out.v.push_back(truncate(acc, T));
  }
  return out;
}

}  // namespace

SeriesVec tangent_apply(const TextileMap& f, const SeriesVec& a, const SeriesVec& v,
                        bool force_eps) {
  require_domain(f.ctx, f.arity_in, f.domain_order, a, "tangent base point");
  require_domain(f.ctx, f.arity_in, f.domain_order, v, "tangent direction");
  const Ring ring = join_ring(a[0].ctx->ring, v[0].ctx->ring);
  const ExtRat T = ExtRat::min(a.validity(), v.validity());

  if (f.kind == TextileMap::Kind::linear && !force_eps) return f.eval(v, v.validity() + f.kappa);

  if (ring.nil_index >= 2) {
    if (force_eps)
      fail(errc::ring_busy,
           "the coefficient ring already carries a nilpotent of index >= 2; the tangent lift "
           "needs a fresh one");
    if (f.kind == TextileMap::Kind::tactile) return tangent_symbolic(f, a, v, T);
    fail(errc::unsupported,
         "tangent of a general map over a ring with nilpotents: the lift slot is busy and no "
         "symbolic route exists for an opaque evaluator");
  }
  return tangent_eps(f, a, v, T);
}

TextileMap compose(const TextileMap& f, const TextileMap& g) {
  if (g.arity_out != f.arity_in)
    fail(errc::domain_mismatch,
         "composition arity clash: the inner map yields " + std::to_string(g.arity_out) +
             " components, the outer expects " + std::to_string(f.arity_in));
  if (!f.ctx->same_shape(*g.ctx))
    fail(errc::domain_mismatch, "composition context shapes differ");
  if (g.out_order < ExtRat(f.domain_order))
    fail(errc::domain_mismatch,
         "the inner map's image is not certified inside the outer domain: certified output "
         "order " +
             g.out_order.str() + " is below the required " + rat_str(f.domain_order));

  TextileMap r;
  r.arity_in = g.arity_in;
  r.arity_out = f.arity_out;
  r.ctx = make_context(f.ctx->nvars, f.ctx->L, join_ring(f.ctx->ring, g.ctx->ring));
  r.domain_order = g.domain_order;
  r.kappa = f.kappa + g.kappa;
  r.out_order = f.out_order;
  // A linear outer map is additive with f(0) = 0, so its offset certificate
  // also bounds plain orders: order(f(y)) >= order(y) + kappa(f).
  if (f.kind == TextileMap::Kind::linear)
    r.out_order = ExtRat::max(r.out_order, g.out_order + f.kappa);
  r.kind = (f.kind == TextileMap::Kind::linear && g.kind == TextileMap::Kind::linear)
               ? TextileMap::Kind::linear
               : TextileMap::Kind::general;
  const TextileMap fc = f;
  const TextileMap gc = g;
  r.eval = [fc, gc](const SeriesVec& a, const ExtRat& T) {
    // The outer map reads its input no deeper than T - kappa(outer); always
    // request at least the domain order so membership stays certifiable.
    ExtRat Tmid = fc.kappa.finite() ? T - fc.kappa.value() : ExtRat(fc.domain_order);
    Tmid = ExtRat::max(Tmid, ExtRat(fc.domain_order));
    SeriesVec mid = gc.eval(a, Tmid);
    return vec_truncate(fc.eval(mid, T), T);
  };
  return r;
}

namespace {

// Minimum order across components, reported only when certified exact: every
// inexact component's lower bound must sit at or above the witnessed minimum.
std::optional<Rat> vec_exact_order(const SeriesVec& s) {
  std::optional<Rat> best;
  ExtRat floor_inexact = ExtRat::infinity();
  for (const Series& comp : s.v) {
    OrderVal o = order(comp);
    if (o.exact) {
      if (!best || o.bound.value() < *best) best = o.bound.value();
    } else {
      floor_inexact = ExtRat::min(floor_inexact, o.bound);
    }
  }
  if (best && ExtRat(*best) <= floor_inexact) return best;
  return std::nullopt;
}

// Lexicographic (order, depth) minimum across components; exact only when no
// inexact component could undercut or tie the winner.
RefinedOrder vec_refined_order(const SeriesVec& s, unsigned nil_index) {
  std::optional<std::pair<Rat, unsigned>> best;
  ExtRat floor_inexact = ExtRat::infinity();
  for (const Series& comp : s.v) {
    RefinedOrder r = refined_order(comp);
    if (r.w.exact) {
      std::pair<Rat, unsigned> cand{r.w.bound.value(), r.depth};
      if (!best || cand < *best) best = cand;
    } else {
      floor_inexact = ExtRat::min(floor_inexact, r.w.bound);
    }
  }
  if (best && ExtRat(best->first) < floor_inexact)
    return RefinedOrder{OrderVal::exactly(best->first), best->second};
  ExtRat lb = floor_inexact;
  if (best) lb = ExtRat::min(ExtRat(best->first), lb);
  return RefinedOrder{OrderVal::at_least(lb), nil_index};
}

}  // namespace

ContractionAudit contraction_audit(const TextileMap& h, const Rat& kappa_claim, unsigned trials,
                                   unsigned long long seed) {
  ContractionAudit rep;
  rep.trials = trials;
  Sampler smp(seed);
  const Rat l = h.domain_order;
  const Rat kplus = kappa_claim > 0 ? kappa_claim : Rat(0);
  const Rat Twork = l + kplus + 6;
  const ExtRat Tout = ExtRat(Twork + kplus + 1);
  // The refined lattice only matters when the claim is a contraction claim:
  // for kappa_claim > 0 a passing weight inequality already implies strict
  // refined increase, and for negative claims (order-lowering maps) depth
  // bookkeeping proves nothing.  The informative case is kappa_claim == 0,
  // where nilpotency depth must strictly increase when the weight stalls.
  const bool refined = h.ctx->ring.nil_index >= 2 && kappa_claim >= 0;
  unsigned informative = 0;
  for (unsigned t = 0; t < trials; ++t) {
    SeriesVec a = smp.poly_vec(h.ctx, h.arity_in, l, Twork, 4);
    SeriesVec b;
    if (t % 2 == 0) {
      b = smp.poly_vec(h.ctx, h.arity_in, l, Twork, 4);
    } else {
      // Single-coefficient perturbation: the sharpest probe of the offset.
      b = a;
      const unsigned comp = static_cast<unsigned>(smp.uniform(0, h.arity_in - 1));
      b.v[comp] = add(b.v[comp], smp.poly(h.ctx, l, Twork, 1));
    }
    SeriesVec din = vec_sub(a, b);
    std::optional<Rat> win = vec_exact_order(din);
    if (!win) continue;
    SeriesVec dout = vec_sub(h.eval(a, Tout), h.eval(b, Tout));
    ++informative;
    std::optional<Rat> wout = vec_exact_order(dout);
    if (wout && *wout < *win + kappa_claim) {
      rep.passed = false;
      rep.note = "order shifted by " + rat_str(*wout - *win) + " on a pair differing at order " +
                 rat_str(*win) + "; the claim was " + rat_str(kappa_claim);
      rep.witness = std::make_pair(std::move(a), std::move(b));
      return rep;
    }
    if (refined) {
      RefinedOrder ri = vec_refined_order(din, h.ctx->ring.nil_index);
      RefinedOrder ro = vec_refined_order(dout, h.ctx->ring.nil_index);
      if (ri.w.exact && ro.w.exact && !refined_strictly_greater(ro, ri)) {
        rep.passed = false;
        rep.note = "refined order failed to increase strictly: (" + ri.w.str() + ", depth " +
                   std::to_string(ri.depth) + ") -> (" + ro.w.str() + ", depth " +
                   std::to_string(ro.depth) + ")";
        rep.witness = std::make_pair(std::move(a), std::move(b));
        return rep;
      }
    }
  }
  rep.note = "no violation in " + std::to_string(informative) + " informative trials of " +
             std::to_string(trials);
  return rep;
}

bool chain_rule_check(const TextileMap& f, const TextileMap& g, const SeriesVec& a,
                      const SeriesVec& v) {
  TextileMap fg = compose(f, g);
  SeriesVec lhs = tangent_apply(fg, a, v);
  const ExtRat Tbase = ExtRat::min(a.validity(), v.validity()) + g.kappa;
  SeriesVec base = g.eval(a, Tbase);
  SeriesVec dv = tangent_apply(g, a, v);
  SeriesVec rhs = tangent_apply(f, base, dv);
  const ExtRat window = ExtRat::min(lhs.validity(), rhs.validity());
  return agree_vec(lhs, rhs, window);
}

}  // namespace arcloom
