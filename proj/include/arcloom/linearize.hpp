#pragma once

// Linearization of coefficientwise polynomial maps around their split linear
// part: factor f = v^{-1} . ell . u where u and v are coefficientwise
// isomorphisms built from a scission of ell, then solve f(a) = b and probe
// rank stability through the linear model.

#include <functional>
#include <optional>
#include <vector>

#include "arcloom/division.hpp"
#include "arcloom/textile.hpp"

namespace arcloom {

// Evidence offered for the rank condition (the nonlinear remainder lands
// inside the image of the linear part in a stable way).  The builder never
// decides the condition: it records the claim, routes construction through
// the strongest consequence the claim licenses, and probes the result.
//   - quasi_submersion: the image of the remainder h is contained in the
//     image of ell; then f . u^{-1} = ell exactly and v is the identity.
//   - injective_tangent: tangent maps are injective on the domain; v is
//     constructed from f . u^{-1} and probed.
//   - sampled_pointwise: a pointwise_rank_probe passed; same construction as
//     injective_tangent.
enum class RankEvidence { quasi_submersion, injective_tangent, sampled_pointwise };

// Coefficient-ring regime.  Over a field the fixed-point solver runs a
// precomputed number of iterations (the order front advances by at least
// gamma per step); over a ring with nilpotents it iterates to agreement in
// refined order, where a stalled weight front must pay in nilpotency depth.
enum class BundleMode { field, test_ring };

struct BundleOptions {
  ExtRat probe_validity = ExtRat(Rat(12));
  unsigned probe_trials = 3;
  unsigned long long seed = 20260816ULL;
  unsigned audit_trials = 16;
  // Extra probe points (domain vectors for f) checked after the sampled ones.
  std::vector<SeriesVec> extra_probes;
};

// The factorization record.  All maps share f's ambient context:
//   u     = id + sigma . h        on the domain side (arity_in components),
//   u_inv = fixed-point inverse of u, evaluated lazily per call,
//   v     = id - ((id - ell.sigma) . f . u_inv) . (sigma.ell.sigma)  on the
//           codomain side; the identity exactly under quasi-submersion
//           evidence,
//   v_inv = id + the same correction term (exact because ell.sigma kills it).
// sigma certifies ell.sigma.ell = ell and sigma.ell.sigma = sigma through its
// bookkeeping; v . f . u_inv = ell is verified on probes at construction.
struct LinearizationBundle {
  TextileMap ell;    // split linear part
  TextileMap sigma;  // scission of ell, certified kappa
  TextileMap h;      // f - ell, the nonlinear remainder
  TextileMap u;
  TextileMap u_inv;
  TextileMap v;
  TextileMap v_inv;
  BundleMode mode = BundleMode::field;
  Rat domain_order;  // l: the domain is {every component has order >= l}
  ExtRat gamma;      // kappa(sigma . h), the certified contraction gain
  RankEvidence evidence = RankEvidence::quasi_submersion;
};

// Solve (id + h)(a) = b for a, up to validity `target` (finite unless h is
// constant; UNSUPPORTED otherwise).  h must map its domain into itself and b
// must lie in the domain (PRECONDITION_GAP).  Over a field the iteration
// count is ceil((target - l + 1) / kappa(h)) + 1 with a positive kappa(h);
// over a ring with nilpotents the iteration runs to agreement within a budget
// of (#weights <= target) * nil_index + 2 steps.  `audit` additionally
// samples the contraction claim first.  Errors: NOT_CONTRACTIVE when the
// claim fails (by audit, or by a nonzero final residual), BUDGET_EXCEEDED
// when agreement never arrives within the budget.
SeriesVec invert_id_plus_h(const TextileMap& h, const SeriesVec& b, const ExtRat& target,
                           bool audit = true);

// Build the factorization for f around its split linear part.  f must carry a
// structured payload (tactile or linear kind; UNSUPPORTED for general maps —
// use build_bundle_with_parts).  The payload is split by slot degree: degree
// 0 must vanish (PRECONDITION_GAP), degree 1 becomes ell, degree >= 2 becomes
// h.  sigma consumes codomain vectors (arity f.arity_out -> f.arity_in).
// Requires gamma = kappa(sigma . h) > 0 over a field, >= 0 over a ring with
// nilpotents, and a passing contraction audit (ORDER_CONDITION_FAILED
// otherwise).  The constructed bundle is probed on sampled domain vectors
// plus opts.extra_probes: u_inv . u = id, v_inv . v = id, and v . f . u_inv
// = ell, all within opts.probe_validity; LINEARIZATION_PROBE_FAILED with a
// witness otherwise.
LinearizationBundle build_bundle(const TextileMap& f, const TextileMap& sigma,
                                 RankEvidence evidence, const BundleOptions& opts = {});

// Same contract, but the caller supplies the split f = ell + h directly (for
// maps without a structured payload).  ell must be linear kind; the split
// itself is trusted, everything downstream is still audited and probed.
LinearizationBundle build_bundle_with_parts(const TextileMap& f, const TextileMap& ell,
                                            const TextileMap& h, const TextileMap& sigma,
                                            RankEvidence evidence, const BundleOptions& opts = {});

// Outcome of solving f(a) = b through a bundle.  An obstruction is a result,
// not an error: it reports b - (best representable part) when b falls outside
// the image within the window, with the order where coverage fails.
struct LinearSolveResult {
  SeriesVec particular;           // empty when obstructed
  std::vector<SeriesVec> kernel;  // nonzero kernel representatives of ell, mapped back
  std::optional<SeriesVec> obstruction;
  ExtRat obstruction_order = ExtRat::infinity();
};

// Solve f(a) = b up to validity `target` through the factorization: pass to
// y = sigma(v(b)), keep the part of y inside the domain, and compare ell of
// it against v(b).  Zero difference within the window gives the particular
// solution u_inv(y); a nonzero difference is returned as the obstruction.
// The kernel list collects nonzero vectors (id - sigma.ell)(p) from monomial
// and sampled probes p, mapped through nothing further: adding ell-kernel
// vectors to y before u_inv enumerates solutions.
LinearSolveResult solve_via_linearization(const LinearizationBundle& B, const SeriesVec& b,
                                          const ExtRat& target);

// One probed point of the pointwise rank report.
struct RankProbeSample {
  SeriesVec point;
  std::vector<ModExp> initials;  // initial module exponents at the point
  bool matches_base = true;
};

// Report of a sampled comparison of initial modules of the tangent spaces:
// the initial exponents (weight <= cutoff) of the module spanned by the
// partial derivatives of the payload at 0 and at sampled domain points.
struct RankProbeReport {
  bool passed = true;
  std::vector<ModExp> base_initials;
  std::vector<RankProbeSample> samples;
  Rat cutoff;
};

// Probe pointwise rank stability of a tactile map over a field: at each of
// `samples` sampled domain points (plus the supplied extra points), compute
// the initial exponents of the tangent image module up to `cutoff` (default
// domain_order + 4) and compare with the exponents at 0.  Any mismatch sets
// passed = false and is kept in the report.  UNSUPPORTED unless f is tactile
// over a nilpotent-free ring.  Deterministic for a fixed seed.
RankProbeReport pointwise_rank_probe(const TextileMap& f, unsigned samples,
                                     unsigned long long seed,
                                     std::optional<Rat> cutoff = std::nullopt,
                                     const std::vector<SeriesVec>& extra_points = {});

// ---------------------------------------------------------------------------
// Scission adapters.

// Wrap a division-module scission as a linear textile map over ctx.
TextileMap scission_textile(const Scission& s, const CtxPtr& ctx, const Rat& domain_order = Rat(0));

// Scission of the monomial multiple ell(a) = x^e * a_src placed in output
// component dst (of arity_in many): consumes arity_out-of-ell = arity_in
// components, produces arity_out components, sending input component src to
// output component dst divided by x^e (terms not divisible by x^e are
// dropped), zero elsewhere.  kappa = -weight(e).
TextileMap monomial_quotient_scission(const CtxPtr& ctx, unsigned arity_in, unsigned arity_out,
                                      unsigned src, unsigned dst, const Exp& e);

// The per-component univariate derivative d/dt on vectors of order >= l
// (kappa = -weight(t)), and the per-component integral with zero constant
// term, its scission (kappa = +weight(t)).
TextileMap derivative_map(const CtxPtr& ctx, unsigned arity, const Rat& domain_order);
TextileMap integral_scission(const CtxPtr& ctx, unsigned arity);

}  // namespace arcloom
