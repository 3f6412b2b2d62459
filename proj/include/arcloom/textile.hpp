#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "arcloom/series.hpp"

namespace arcloom {

// A coefficientwise polynomial map between spaces of series vectors, kept in
// operational form: an evaluator plus certified bookkeeping.
//
//   - arity_in / arity_out: input / output component counts;
//   - ctx: the ambient context the series live over;
//   - domain_order l: the domain is the set of vectors all of whose
//     components have order >= l;
//   - kappa: certified contraction offset.  For a, b in the domain,
//     order(F(a) - F(b)) >= order(a - b) + kappa.  Infinite exactly for
//     constant maps (the difference is identically zero).
//   - out_order: certified least order of any output component over the
//     whole domain (infinite for the zero map);
//   - kind: structural class, used to pick exact tangent and composition
//     rules.  `tactile` means "substitution of the inputs into a fixed
//     polynomial"; `linear` means additive and ring-linear; `general` is
//     anything operational.
//
// Locality: since an output coefficient of weight w is determined by input
// coefficients of weight <= w - kappa, an evaluator may honestly claim
// output validity min(T, input validity + kappa).  Evaluators must never
// demand more of the input than that.
struct TextileMap {
  enum class Kind { tactile, linear, general };

  unsigned arity_in = 1;
  unsigned arity_out = 1;
  CtxPtr ctx;
  Rat domain_order = Rat(0);
  ExtRat kappa;
  ExtRat out_order;
  Kind kind = Kind::general;

  // Evaluate at `a` up to requested validity T.
  std::function<SeriesVec(const SeriesVec&, const ExtRat&)> eval;

  // Structured payloads, retained when the map was built from them: the
  // polynomial components over ctx plus a slot block (tactile kind), or the
  // arity_out x arity_in coefficient matrix over ctx (linear kind).
  std::vector<Series> tactile_poly;
  std::vector<std::vector<Series>> linear_mat;

  unsigned nvars() const { return ctx->nvars; }
};

// Context holding the ambient variables of `base` followed by `m` input-slot
// variables, each of weight `l` (the domain order): with these weights the
// weight of a polynomial term equals the least output weight it can produce,
// which is what makes the kappa bookkeeping read off the term weights.
CtxPtr tactile_context(const CtxPtr& base, unsigned m, const Rat& l);

// Map a |-> g(x, a(x)) for a polynomial vector g over (ambient block, m input
// slots).  Requires l >= 1 and every component of g polynomial.  kappa is
// computed exactly from the terms: min over terms involving at least one slot
// variable of (term weight - l), with slot weights set to l; terms free of
// the slots contribute only to out_order.  UNSUPPORTED when g is not
// polynomial, has no ambient variable, or l < 1.
TextileMap tactile_from_poly(const std::vector<Series>& g, unsigned arity_in,
                             const Rat& domain_order);

// Linear map a |-> F * a for a coefficient matrix F (arity_out x arity_in)
// over the ambient context.  kappa = min over entries of their order lower
// bound; out_order = kappa + l.
TextileMap linear_from_matrix(const std::vector<std::vector<Series>>& F, const Rat& domain_order);

// The identity on m-vectors of order >= l.
TextileMap textile_identity(const CtxPtr& ctx, unsigned arity, const Rat& domain_order);

// Wrap a hand-written evaluator.  The caller certifies kappa and out_order;
// contraction_audit can probe the kappa claim afterwards.  `linear` marks the
// map as additive and ring-linear (trusted the same way).
TextileMap general_from_evaluator(std::function<SeriesVec(const SeriesVec&, const ExtRat&)> eval,
                                  CtxPtr ctx, unsigned arity_in, unsigned arity_out,
                                  const Rat& domain_order, const ExtRat& kappa,
                                  const ExtRat& out_order);
TextileMap linear_from_evaluator(std::function<SeriesVec(const SeriesVec&, const ExtRat&)> eval,
                                 CtxPtr ctx, unsigned arity_in, unsigned arity_out,
                                 const Rat& domain_order, const ExtRat& kappa,
                                 const ExtRat& out_order);

// Univariate coefficientwise recursion residual.  `step` is a polynomial
// template in `depth` variables standing for the previous terms
// (y_1 = a_{i-1}, ..., y_depth = a_{i-depth}); the map sends
//   a = sum a_i t^i  |->  (a_0, ..., a_{depth-1}, a_depth - step(...), ...),
// i.e. the first `depth` coefficients pass through and every later output
// coefficient is the recursion residual a_i - step(a_{i-1}, ..., a_{i-depth}).
// Zeros of the tail are exactly the solutions of the recursion.  kappa = 0.
// Evaluation needs a finite target validity (UNSUPPORTED at infinity).
TextileMap from_recursion(const Series& step, unsigned depth, const CtxPtr& arc);

// Derivative of f at a in direction v.  Route depends on the kind and the
// coefficient ring of the inputs:
//   - linear: the tangent is f(v) itself, over any ring;
//   - tactile: over a field the nilpotent-lift route (evaluate at a + e*v
//     over Q[e]/(e^2) and read off the e-part); over a ring that already
//     carries a nilpotent the symbolic route sum_i d g/d y_i (a) * v_i.
//     The two routes agree where both apply;
//   - general: the nilpotent-lift route over a field; over a ring with a
//     nilpotent of index >= 2 there is no free slot and no symbolic fallback,
//     so UNSUPPORTED.
// force_eps insists on the lift route; RING_BUSY when the base ring already
// uses a nilpotent of index >= 2 so the lift cannot be layered.
SeriesVec tangent_apply(const TextileMap& f, const SeriesVec& a, const SeriesVec& v,
                        bool force_eps = false);

// Composition f after g.  DOMAIN_MISMATCH unless arities chain, the ambient
// contexts share their shape, and g's certified out_order places its image
// inside f's domain.  kappa adds (saturating at infinity); the composite is
// linear when both factors are, general otherwise.
TextileMap compose(const TextileMap& f, const TextileMap& g);

// Result of a sampled contraction audit.
struct ContractionAudit {
  bool passed = true;
  unsigned trials = 0;
  std::string note;
  // Failing input pair, when one was found.
  std::optional<std::pair<SeriesVec, SeriesVec>> witness;
};

// Sample input pairs from the domain and test the claimed contraction offset:
// order(h(a) - h(b)) >= order(a - b) + kappa_claim on every pair where both
// sides are measurable.  Over a ring with nilpotents and a claim >= 0, the
// refined order (order, nilpotency depth) must additionally increase strictly
// in the lexicographic sense — the case that bites is a zero weight shift
// that must be paid for in depth.  A failed pair is returned as the witness.
// Deterministic for a fixed seed.
ContractionAudit contraction_audit(const TextileMap& h, const Rat& kappa_claim, unsigned trials,
                                   unsigned long long seed);

// Check tangent_apply(compose(f, g), a, v) against
// tangent_apply(f, g(a), tangent_apply(g, a, v)) on the window both sides
// certify.  Returns the agreement verdict.
bool chain_rule_check(const TextileMap& f, const TextileMap& g, const SeriesVec& a,
                      const SeriesVec& v);

}  // namespace arcloom
