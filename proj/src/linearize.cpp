#include "arcloom/linearize.hpp"

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "arcloom/sampler.hpp"

namespace arcloom {

namespace {

// Same domain gate the textile evaluators use: arity, context shape, and the
// certified order lower bound of every component.
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
           std::string(what) + ": input component is not certified to have order >= " + rat_str(l),
           order_lb(s).str());
  }
}

// Coefficient projector onto weights >= l, componentwise; validity is kept.
// Terms below l are known-zero afterwards by construction.
SeriesVec project_to_order(const SeriesVec& s, const Rat& l) {
  SeriesVec out;
  out.v.reserve(s.size());
  for (const Series& comp : s.v) {
    Series r(comp.ctx, comp.validity);
    for (const auto& [k, v] : comp.c)
      if (k.w >= l) r.add_coeff_w(k.w, k.a, v);
    out.v.push_back(std::move(r));
  }
  return out;
}

// Least witnessed order across components; infinity when no component has an
// exact order.
ExtRat least_exact_order(const SeriesVec& s) {
  ExtRat best = ExtRat::infinity();
  for (const Series& comp : s.v) {
    OrderVal o = order(comp);
    if (o.exact) best = ExtRat::min(best, o.bound);
  }
  return best;
}

std::string diff_detail(const SeriesVec& a, const SeriesVec& b, const ExtRat& upto) {
  for (std::size_t c = 0; c < a.size(); ++c) {
    auto d = first_difference(a[c], b[c], upto);
    if (d)
      return "component " + std::to_string(c) + " first differs at " + exp_str(d->a) +
             " (weight " + rat_str(d->w) + ")";
  }
  return "no witness within the window";
}

ExtRat min3(const ExtRat& a, const ExtRat& b, const ExtRat& c) {
  return ExtRat::min(a, ExtRat::min(b, c));
}

}  // namespace

SeriesVec invert_id_plus_h(const TextileMap& h, const SeriesVec& b, const ExtRat& target,
                           bool audit) {
  if (h.arity_out != h.arity_in)
    fail(errc::domain_mismatch,
         "the perturbation must act within one space; arities " + std::to_string(h.arity_in) +
             " -> " + std::to_string(h.arity_out));
  const Rat l = h.domain_order;
  require_domain(h.ctx, h.arity_in, l, b, "fixed-point input");
  if (h.out_order < ExtRat(l))
    fail(errc::precondition_gap,
         "the perturbation is not certified to map the domain into itself: certified output "
         "order " +
             h.out_order.str() + " is below " + rat_str(l));

  const bool ring_mode = h.ctx->ring.nil_index >= 2;
  if (h.kappa.finite()) {
    if (!ring_mode && !(h.kappa > ExtRat(Rat(0))))
      fail(errc::not_contractive, "certified offset " + h.kappa.str() +
                                      " is not positive, so the order front cannot advance");
    if (ring_mode && h.kappa < ExtRat(Rat(0)))
      fail(errc::not_contractive, "certified offset " + h.kappa.str() +
                                      " is negative, so not even refined order can advance");
    if (audit) {
      ContractionAudit rep = contraction_audit(h, h.kappa.value(), 12, 0x1D2B5EEDULL);
      if (!rep.passed)
        fail(errc::not_contractive, "contraction audit rejected the certified offset: " + rep.note);
    }
  }

  const ExtRat N = ExtRat::min(target, b.validity());
  SeriesVec x;
  if (!h.kappa.finite()) {
    // Constant perturbation: one exact step, any target.
    x = vec_truncate(vec_sub(b, h.eval(b, N)), N);
  } else if (!N.finite()) {
    fail(errc::unsupported, "fixed-point inversion needs a finite target validity");
  } else if (!ring_mode) {
    // The error order starts at l (both the iterate and the fixed point lie
    // in the domain) and advances by at least kappa per step.
    const Rat& gain = h.kappa.value();
    long iters = ceil_to_long((N.value() - l + 1) / gain) + 1;
    if (iters < 1) iters = 1;
    x = vec_zero(b[0].ctx, h.arity_in);
    for (long j = 0; j < iters; ++j) x = vec_truncate(vec_sub(b, h.eval(x, N)), N);
  } else {
    // Refined-order regime: a stalled weight front must pay in nilpotency
    // depth, so (#weights in play) * (nil index) steps bound the settling
    // time; iterate to agreement within that budget.
    const unsigned long budget =
        weights_up_to(*h.ctx, N.value()).size() *
            static_cast<unsigned long>(h.ctx->ring.nil_index) +
        2;
    x = vec_zero(b[0].ctx, h.arity_in);
    bool settled = false;
    for (unsigned long j = 0; j < budget; ++j) {
      SeriesVec next = vec_truncate(vec_sub(b, h.eval(x, N)), N);
      if (agree_vec(next, x, min3(N, next.validity(), x.validity()))) {
        x = std::move(next);
        settled = true;
        break;
      }
      x = std::move(next);
    }
    if (!settled)
      fail(errc::budget_exceeded, "no fixed point within " + std::to_string(budget) +
                                      " refined iterations up to validity " + N.str());
  }

  // The certificate, not the caller, is on trial here: a wrong offset shows
  // up as a nonzero residual after the computed number of steps.
  SeriesVec res = vec_sub(vec_add(x, h.eval(x, N)), b);
  const ExtRat W = ExtRat::min(N, res.validity());
  if (!is_zero_upto_vec(res, W))
    fail(errc::not_contractive,
         "the iteration failed to converge: residual of order " + least_exact_order(res).str() +
             " remains within validity " + W.str());
  return x;
}

// ---------------------------------------------------------------------------
// Scission adapters.

TextileMap scission_textile(const Scission& s, const CtxPtr& ctx, const Rat& domain_order) {
  require_internal(static_cast<bool>(s.eval), "scission evaluator must not be null");
  const auto ev = s.eval;
  const CtxPtr shape = ctx;
  const unsigned ain = s.arity_in;
  const Rat l = domain_order;
  Rat oo = domain_order + s.kappa;
  if (oo < 0) oo = 0;
  return linear_from_evaluator(
      [ev, shape, ain, l](const SeriesVec& a, const ExtRat& T) {
        require_domain(shape, ain, l, a, "scission");
        return vec_truncate(ev(a, T), T);
      },
      ctx, s.arity_in, s.arity_out, domain_order, ExtRat(s.kappa), ExtRat(oo));
}

TextileMap monomial_quotient_scission(const CtxPtr& ctx, unsigned arity_in, unsigned arity_out,
                                      unsigned src, unsigned dst, const Exp& e) {
  if (e.size() != ctx->nvars)
    fail(errc::domain_mismatch, "the divisor exponent has " + std::to_string(e.size()) +
                                    " entries for " + std::to_string(ctx->nvars) + " variables");
  if (src >= arity_in || dst >= arity_out)
    fail(errc::domain_mismatch, "source or destination component out of range");
  const Rat w = exp_weight(*ctx, e);
  const CtxPtr shape = ctx;
  return linear_from_evaluator(
      [shape, arity_in, arity_out, src, dst, e, w](const SeriesVec& a, const ExtRat& T) {
        require_domain(shape, arity_in, Rat(0), a, "monomial quotient scission");
        const Series& s = a[src];
        // Output coefficients at weight v come from input weight v + w, so
        // the quotient is honest up to (input validity) - w.
        Series q(s.ctx, ExtRat::min(T, s.validity - w));
        for (const auto& [k, val] : s.c)
          if (exp_divides(e, k.a)) q.add_coeff_w(k.w - w, exp_sub(k.a, e), val);
        SeriesVec out;
        out.v.reserve(arity_out);
        for (unsigned i = 0; i < arity_out; ++i)
          out.v.push_back(i == dst ? q : series_zero(s.ctx, T));
        return out;
      },
      ctx, arity_in, arity_out, Rat(0), ExtRat(-w), ExtRat(Rat(0)));
}

TextileMap derivative_map(const CtxPtr& ctx, unsigned arity, const Rat& domain_order) {
  if (ctx->nvars != 1) fail(errc::unsupported, "the derivative map acts on univariate arcs");
  const Rat w = ctx->L[0];
  const CtxPtr shape = ctx;
  const Rat l = domain_order;
  Rat oo = domain_order - w;
  if (oo < 0) oo = 0;
  return linear_from_evaluator(
      [shape, arity, l](const SeriesVec& a, const ExtRat& T) {
        require_domain(shape, arity, l, a, "derivative map");
        SeriesVec out;
        out.v.reserve(a.size());
        for (const Series& s : a.v) out.v.push_back(truncate(d_univar(s), T));
        return out;
      },
      ctx, arity, arity, domain_order, ExtRat(-w), ExtRat(oo));
}

TextileMap integral_scission(const CtxPtr& ctx, unsigned arity) {
  if (ctx->nvars != 1) fail(errc::unsupported, "the integral scission acts on univariate arcs");
  const Rat w = ctx->L[0];
  const CtxPtr shape = ctx;
  return linear_from_evaluator(
      [shape, arity](const SeriesVec& a, const ExtRat& T) {
        require_domain(shape, arity, Rat(0), a, "integral scission");
        SeriesVec out;
        out.v.reserve(a.size());
        for (const Series& s : a.v) out.v.push_back(truncate(integrate_univar(s), T));
        return out;
      },
      ctx, arity, arity, Rat(0), ExtRat(w), ExtRat(w));
}

// ---------------------------------------------------------------------------
// Bundle construction.

namespace {

// Verify the factorization on sampled domain vectors plus the caller's extra
// probes: u_inv . u = id, v . f = ell . u, v_inv . v = id (both on and off
// the image of f).  Throws LINEARIZATION_PROBE_FAILED with a witness.
void probe_bundle(const LinearizationBundle& B, const TextileMap& f, const BundleOptions& opts) {
  Sampler smp(opts.seed ^ 0x9E3779B97F4A7C15ULL);
  const ExtRat T = opts.probe_validity;
  std::vector<SeriesVec> probes;
  for (unsigned t = 0; t < opts.probe_trials; ++t)
    probes.push_back(smp.poly_vec(f.ctx, f.arity_in, B.domain_order, B.domain_order + 3, 3));
  for (const SeriesVec& ex : opts.extra_probes) probes.push_back(ex);

  unsigned pi = 0;
  for (const SeriesVec& a : probes) {
    ++pi;
    require_domain(f.ctx, f.arity_in, B.domain_order, a, "bundle probe");
    SeriesVec y = B.u.eval(a, T);
    SeriesVec back = B.u_inv.eval(y, T);
    const ExtRat W1 = min3(T, back.validity(), a.validity());
    if (!agree_vec(back, a, W1)) {
      const std::string d = diff_detail(back, a, W1);
      fail(errc::linearization_probe_failed,
           "u_inv . u failed to return probe " + std::to_string(pi) + ": " + d, d);
    }
    SeriesVec fa = f.eval(a, T);
    SeriesVec lhs = B.v.eval(fa, T);
    SeriesVec rhs = B.ell.eval(y, T);
    const ExtRat W2 = min3(T, lhs.validity(), rhs.validity());
    if (!agree_vec(lhs, rhs, W2)) {
      const std::string d = diff_detail(lhs, rhs, W2);
      fail(errc::linearization_probe_failed,
           "v . f differs from ell . u on probe " + std::to_string(pi) + ": " + d, d);
    }
    SeriesVec round = B.v_inv.eval(lhs, T);
    const ExtRat W3 = min3(T, round.validity(), fa.validity());
    if (!agree_vec(round, fa, W3)) {
      const std::string d = diff_detail(round, fa, W3);
      fail(errc::linearization_probe_failed,
           "v_inv . v failed to return the image of probe " + std::to_string(pi) + ": " + d, d);
    }
  }

  // Codomain vectors away from the image: the two-sided inverse property of
  // v does not depend on the rank claim, so it must hold everywhere.
  for (unsigned t = 0; t < opts.probe_trials; ++t) {
    SeriesVec bp = smp.poly_vec(f.ctx, f.arity_out, B.v.domain_order, B.v.domain_order + 4, 3);
    SeriesVec vb = B.v.eval(bp, T);
    SeriesVec round = B.v_inv.eval(vb, T);
    const ExtRat W = min3(T, round.validity(), bp.validity());
    if (!agree_vec(round, bp, W)) {
      const std::string d = diff_detail(round, bp, W);
      fail(errc::linearization_probe_failed,
           "v_inv . v failed off the image on trial " + std::to_string(t + 1) + ": " + d, d);
    }
  }
}

}  // namespace

LinearizationBundle build_bundle_with_parts(const TextileMap& f, const TextileMap& ell,
                                            const TextileMap& h, const TextileMap& sigma,
                                            RankEvidence evidence, const BundleOptions& opts) {
  if (ell.kind != TextileMap::Kind::linear)
    fail(errc::precondition_gap, "the split linear part must be of linear kind");
  if (!f.ctx->same_shape(*ell.ctx) || !f.ctx->same_shape(*h.ctx) || !f.ctx->same_shape(*sigma.ctx))
    fail(errc::domain_mismatch, "all bundle parts must share the ambient context shape");
  if (ell.arity_in != f.arity_in || ell.arity_out != f.arity_out || h.arity_in != f.arity_in ||
      h.arity_out != f.arity_out)
    fail(errc::domain_mismatch, "the split parts must share the map's arities");
  if (sigma.arity_in != f.arity_out || sigma.arity_out != f.arity_in)
    fail(errc::domain_mismatch,
         "the scission must run opposite to the map: expected " + std::to_string(f.arity_out) +
             " -> " + std::to_string(f.arity_in) + ", got " + std::to_string(sigma.arity_in) +
             " -> " + std::to_string(sigma.arity_out));
  const Rat l = f.domain_order;
  if (ell.domain_order > l || h.domain_order > l)
    fail(errc::domain_mismatch, "the split parts must be defined on the map's domain");

  LinearizationBundle B;
  B.ell = ell;
  B.sigma = sigma;
  B.h = h;
  B.mode = f.ctx->ring.nil_index >= 2 ? BundleMode::test_ring : BundleMode::field;
  B.domain_order = l;
  B.evidence = evidence;

  // sigma . h, with the image certificate tightened through sigma's
  // linearity: order(sigma(y)) >= order(y) + kappa(sigma).
  TextileMap sh = compose(sigma, h);
  sh.out_order = ExtRat::max(sh.out_order, h.out_order + sigma.kappa);
  sh.domain_order = l;
  B.gamma = sh.kappa;

  if (B.mode == BundleMode::field) {
    if (!(B.gamma > ExtRat(Rat(0))))
      fail(errc::order_condition_failed,
           "kappa(sigma . h) = " + B.gamma.str() + " must be positive for the corrected "
           "identity to be invertible");
  } else if (B.gamma < ExtRat(Rat(0))) {
    fail(errc::order_condition_failed,
         "kappa(sigma . h) = " + B.gamma.str() + " must be nonnegative for refined-order "
         "contraction");
  }
  if (sh.out_order < ExtRat(l))
    fail(errc::order_condition_failed,
         "sigma . h is not certified back into the domain: certified output order " +
             sh.out_order.str() + " is below " + rat_str(l));
  if (B.gamma.finite() && opts.audit_trials > 0) {
    ContractionAudit rep = contraction_audit(sh, B.gamma.value(), opts.audit_trials, opts.seed);
    if (!rep.passed)
      fail(errc::order_condition_failed,
           "contraction audit rejected kappa(sigma . h): " + rep.note);
  }

  const TextileMap shc = sh;
  B.u = general_from_evaluator(
      [shc](const SeriesVec& a, const ExtRat& T) {
        return vec_truncate(vec_add(a, shc.eval(a, T)), T);
      },
      f.ctx, f.arity_in, f.arity_in, l, ExtRat(Rat(0)), ExtRat(l));
  B.u_inv = general_from_evaluator(
      [shc](const SeriesVec& y, const ExtRat& T) {
        return invert_id_plus_h(shc, y, T, /*audit=*/false);
      },
      f.ctx, f.arity_in, f.arity_in, l, ExtRat(Rat(0)), ExtRat(l));

  if (evidence == RankEvidence::quasi_submersion) {
    // The remainder lands inside the image of ell, so f . u_inv is already
    // ell (the probes check that) and the codomain needs no correction.
    B.v = textile_identity(f.ctx, f.arity_out, sigma.domain_order);
    B.v_inv = B.v;
  } else {
    TextileMap ftilde = compose(f, B.u_inv);
    const TextileMap sg = sigma;
    const TextileMap el = ell;
    const CtxPtr shape = f.ctx;
    const unsigned p = f.arity_out;
    const Rat vdom = sigma.domain_order;
    // E(b) = (id - ell.sigma)(f.u_inv(project(sigma.ell.sigma(b)))).  Both
    // v = id - E and v_inv = id + E are exact inverses of each other because
    // ell.sigma annihilates E and sigma.ell.sigma reproduces sigma.
    auto correction = [sg, el, ftilde, shape, p, vdom, l](const SeriesVec& b, const ExtRat& T) {
      require_domain(shape, p, vdom, b, "codomain correction");
      SeriesVec z = sg.eval(el.eval(sg.eval(b, T), T), T);
      z = project_to_order(z, l);
      if (vec_order_lb(z) < ExtRat(l))
        fail(errc::precondition_gap,
             "the target validity is too small to certify the corrected input back in the "
             "domain; raise it");
      SeriesVec w = ftilde.eval(z, T);
      return vec_truncate(vec_sub(w, el.eval(sg.eval(w, T), T)), T);
    };
    const ExtRat k_E =
        sg.kappa + el.kappa + sg.kappa + ftilde.kappa +
        ExtRat::min(ExtRat(Rat(0)), el.kappa + sg.kappa);
    const ExtRat k_v = ExtRat::min(ExtRat(Rat(0)), k_E);
    B.v = general_from_evaluator(
        [correction](const SeriesVec& b, const ExtRat& T) {
          return vec_truncate(vec_sub(b, correction(b, T)), T);
        },
        f.ctx, p, p, vdom, k_v, ExtRat(Rat(0)));
    B.v_inv = general_from_evaluator(
        [correction](const SeriesVec& b, const ExtRat& T) {
          return vec_truncate(vec_add(b, correction(b, T)), T);
        },
        f.ctx, p, p, vdom, k_v, ExtRat(Rat(0)));
  }

  probe_bundle(B, f, opts);
  return B;
}

LinearizationBundle build_bundle(const TextileMap& f, const TextileMap& sigma,
                                 RankEvidence evidence, const BundleOptions& opts) {
  if (f.kind == TextileMap::Kind::linear) {
    std::vector<std::vector<Series>> zeros(
        f.arity_out, std::vector<Series>(f.arity_in, series_zero(f.ctx)));
    return build_bundle_with_parts(f, f, linear_from_matrix(zeros, f.domain_order), sigma,
                                   evidence, opts);
  }
  if (f.kind != TextileMap::Kind::tactile)
    fail(errc::unsupported,
         "splitting a linear part needs a structured payload; supply the parts directly");

  const unsigned n = f.ctx->nvars;
  const unsigned m = f.arity_in;
  std::vector<std::vector<Series>> mat(f.arity_out,
                                       std::vector<Series>(m, series_zero(f.ctx)));
  std::vector<Series> hpoly;
  hpoly.reserve(f.tactile_poly.size());
  for (unsigned i = 0; i < f.arity_out; ++i) {
    const Series& gi = f.tactile_poly[i];
    Series hi(gi.ctx, ExtRat::infinity());
    for (const auto& [k, val] : gi.c) {
      unsigned slot_total = 0;
      unsigned slot_var = 0;
      for (unsigned j = n; j < n + m; ++j) {
        slot_total += k.a[j];
        if (k.a[j] > 0) slot_var = j;
      }
      if (slot_total == 0)
        fail(errc::precondition_gap, "the map does not fix the origin: payload component " +
                                         std::to_string(i) + " carries the slot-free term " +
                                         exp_str(k.a));
      if (slot_total == 1) {
        Exp amb(k.a.begin(), k.a.begin() + n);
        mat[i][slot_var - n] =
            add(mat[i][slot_var - n], series_monomial(f.ctx, amb, val));
      } else {
        hi.add_coeff(k.a, val);
      }
    }
    hpoly.push_back(std::move(hi));
  }
  return build_bundle_with_parts(f, linear_from_matrix(mat, f.domain_order),
                                 tactile_from_poly(hpoly, m, f.domain_order), sigma, evidence,
                                 opts);
}

// ---------------------------------------------------------------------------
// Solving.

LinearSolveResult solve_via_linearization(const LinearizationBundle& B, const SeriesVec& b,
                                          const ExtRat& target) {
  const Rat l = B.domain_order;
  const ExtRat N = ExtRat::min(target, b.validity());
  SeriesVec vb = B.v.eval(b, N);
  SeriesVec y = B.sigma.eval(vb, N);
  SeriesVec y_dom = project_to_order(y, l);

  LinearSolveResult res;

  // Kernel representatives of ell through the complement projector id -
  // sigma.ell, seeded with one monomial per (component, variable) at the
  // domain order plus two sampled vectors.
  {
    const CtxPtr ctx = B.ell.ctx;
    std::vector<SeriesVec> probes;
    for (unsigned i = 0; i < B.ell.arity_in; ++i)
      for (unsigned o = 0; o < ctx->nvars; ++o) {
        Exp e(ctx->nvars, 0);
        e[o] = static_cast<unsigned>(ceil_to_long(l / ctx->L[o]));
        SeriesVec p = vec_zero(ctx, B.ell.arity_in);
        p[i] = series_monomial(ctx, e, RElem::one());
        probes.push_back(std::move(p));
      }
    Sampler smp(0xF1BE25ULL);
    for (unsigned t = 0; t < 2; ++t)
      probes.push_back(smp.poly_vec(ctx, B.ell.arity_in, l, l + 3, 3));
    const ExtRat Tk = N.finite() ? N : ExtRat(l + 6);
    for (const SeriesVec& p : probes) {
      SeriesVec k = vec_truncate(
          vec_sub(p, B.sigma.eval(B.ell.eval(p, Tk), Tk)), Tk);
      if (!k.zero_within_validity() && !(vec_order_lb(k) < ExtRat(l)))
        res.kernel.push_back(std::move(k));
    }
  }

  // Coverage check: what ell reaches of v(b) from the domain-respecting part
  // of the scission candidate.  A nonzero difference is the obstruction.
  if (vec_order_lb(y_dom) < ExtRat(l))
    fail(errc::precondition_gap,
         "the target validity is too small to certify the candidate back in the domain; "
         "raise it");
  SeriesVec covered = B.ell.eval(y_dom, N);
  SeriesVec obst = vec_sub(vb, covered);
  const ExtRat W = ExtRat::min(N, obst.validity());
  if (!is_zero_upto_vec(obst, W)) {
    res.obstruction = vec_truncate(obst, W);
    res.obstruction_order = least_exact_order(obst);
    return res;
  }

  res.particular = B.u_inv.eval(y_dom, N);
  return res;
}

// ---------------------------------------------------------------------------
// Pointwise rank probing.

namespace {

struct ModExpLess {
  bool operator()(const ModExp& x, const ModExp& y) const { return modexp_less(x, y); }
};

using SparseRankRow = std::map<ModExp, Rat, ModExpLess>;

// Initial exponents (weight <= cutoff) of the module spanned by the given
// tuples over the ambient ring, by Gaussian elimination on all monomial
// shifts in increasing module order.  Coefficients must be plain rationals.
std::vector<ModExp> initial_exponents(const std::vector<SeriesVec>& gens, const CtxPtr& ctx,
                                      const Rat& cutoff) {
  // All shift exponents of weight <= cutoff.
  std::vector<Exp> shifts;
  Exp cur(ctx->nvars, 0);
  std::function<void(unsigned, Rat)> rec = [&](unsigned var, Rat left) {
    if (var == ctx->nvars) {
      shifts.push_back(cur);
      return;
    }
    for (unsigned k = 0;; ++k) {
      Rat used = ctx->L[var] * static_cast<long>(k);
      if (used > left) break;
      cur[var] = k;
      rec(var + 1, left - used);
    }
    cur[var] = 0;
  };
  rec(0, cutoff);
  if (shifts.size() > 50000)
    fail(errc::unsupported, "rank probe cutoff spans " + std::to_string(shifts.size()) +
                                " shift exponents; lower it");

  std::map<ModExp, SparseRankRow, ModExpLess> pivots;
  for (const SeriesVec& g : gens)
    for (const Exp& beta : shifts) {
      SparseRankRow row;
      for (unsigned c = 0; c < g.size(); ++c) {
        Series shifted = truncate(mul_monomial(g[c], beta, RElem::one()), ExtRat(cutoff));
        for (const auto& [k, v] : shifted.c)
          if (!v.is_zero()) row[ModExp{k.w, k.a, c}] = v.rat_part();
      }
      while (!row.empty()) {
        auto lead = row.begin();
        auto hit = pivots.find(lead->first);
        if (hit == pivots.end()) {
          const Rat inv = Rat(1) / lead->second;
          SparseRankRow norm;
          for (const auto& [k, v] : row) norm.emplace(k, v * inv);
          pivots.emplace(lead->first, std::move(norm));
          break;
        }
        const Rat c0 = lead->second;
        for (const auto& [k, v] : hit->second) {
          auto it = row.find(k);
          Rat nv = (it == row.end() ? Rat(0) : it->second) - c0 * v;
          if (nv == 0) {
            if (it != row.end()) row.erase(it);
          } else if (it == row.end()) {
            row.emplace(k, std::move(nv));
          } else {
            it->second = std::move(nv);
          }
        }
      }
    }

  std::vector<ModExp> out;
  out.reserve(pivots.size());
  for (const auto& [k, r] : pivots) out.push_back(k);
  return out;
}

bool same_initials(const std::vector<ModExp>& a, const std::vector<ModExp>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].w != b[i].w || a[i].a != b[i].a || a[i].comp != b[i].comp) return false;
  return true;
}

}  // namespace

RankProbeReport pointwise_rank_probe(const TextileMap& f, unsigned samples,
                                     unsigned long long seed, std::optional<Rat> cutoff,
                                     const std::vector<SeriesVec>& extra_points) {
  if (f.kind != TextileMap::Kind::tactile)
    fail(errc::unsupported, "rank probing needs the polynomial payload of a substitution map");
  if (f.ctx->ring.nil_index >= 2)
    fail(errc::unsupported, "rank probing runs over nilpotent-free coefficients");
  const unsigned n = f.ctx->nvars;
  const Rat l = f.domain_order;
  const Rat cut = cutoff ? *cutoff : l + 4;

  // Tangent generators at a point: for each slot, the tuple of payload
  // partials evaluated there.
  auto generators_at = [&](const SeriesVec& a) {
    std::vector<SeriesVec> gens;
    for (unsigned i = 0; i < f.arity_in; ++i) {
      SeriesVec g;
      bool nonzero = false;
      for (const Series& gj : f.tactile_poly) {
        Series d = derivative(gj, n + i);
        Series val =
            d.zero_within_validity() ? series_zero(f.ctx) : substitute(d, a.v, n);
        if (!val.zero_within_validity()) nonzero = true;
        g.v.push_back(truncate(val, ExtRat(cut)));
      }
      if (nonzero) gens.push_back(std::move(g));
    }
    return gens;
  };

  RankProbeReport rep;
  rep.cutoff = cut;
  rep.base_initials = initial_exponents(generators_at(vec_zero(f.ctx, f.arity_in)), f.ctx, cut);

  std::vector<SeriesVec> points;
  Sampler smp(seed);
  for (unsigned t = 0; t < samples; ++t)
    points.push_back(smp.poly_vec(f.ctx, f.arity_in, l, l + 2, 3));
  for (const SeriesVec& ex : extra_points) points.push_back(ex);

  for (const SeriesVec& a : points) {
    require_domain(f.ctx, f.arity_in, l, a, "rank probe point");
    if (a.validity() < ExtRat(cut))
      fail(errc::precondition_gap, "rank probe points must be exact up to the cutoff " +
                                       rat_str(cut) + "; got validity " + a.validity().str());
    RankProbeSample sm;
    sm.point = a;
    sm.initials = initial_exponents(generators_at(a), f.ctx, cut);
    sm.matches_base = same_initials(sm.initials, rep.base_initials);
    if (!sm.matches_base) rep.passed = false;
    rep.samples.push_back(std::move(sm));
  }
  return rep;
}

}  // namespace arcloom
