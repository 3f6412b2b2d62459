#pragma once

// Division operators over weighted series: distinguished-variable division
// with remainder, module division against a monic standard basis, the
// scission evaluators both of them induce, and Smith normal form for
// matrices of univariate series.

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "arcloom/series.hpp"

namespace arcloom {

// ---------------------------------------------------------------------------
// Distinguished-variable division.

struct WeierstrassResult {
  Series quotient;
  Series remainder;  // every term has x_var-degree < the divisor's order
};

// Divide g by p along variable `var`.  Requires p to be x_var-regular: with b
// the least total degree in p's support, the coefficient of the pure power
// x_var^b must be a unit (NOT_REGULAR otherwise).  The identity
// g = quotient*p + remainder holds within the returned validities, and the
// remainder's x_var-degree stays below b.  `target` caps the working
// precision; when every input is exact (infinite validity) and no finite
// target is given, the computation must stabilize after finitely many steps
// or it fails with UNSUPPORTED rather than guessing.
// Contexts with more than one variable must have equal weights.
WeierstrassResult weierstrass_divide(const Series& g, const Series& p, unsigned var,
                                     const ExtRat& target = ExtRat::infinity());

// ---------------------------------------------------------------------------
// Generic linear coordinate change.

// The substitution x_i -> x_i + c_i * x_n for i < n-1 (x_n fixed), recorded
// by its off-diagonal column.  Identity when every c_i is zero.
struct LinearChange {
  unsigned nvars = 1;
  std::vector<Rat> coeffs;  // size nvars - 1

  bool is_identity() const;
  Series apply(const Series& s) const;          // s composed with the change
  Series apply_inverse(const Series& s) const;  // s composed with its inverse
  std::string str() const;
};

// Find a linear change making h x_n-regular of order w(h): after the change,
// the pure power of the last variable at h's order carries a unit
// coefficient.  Searches a deterministic sequence (identity first, then
// single shared constants over variable subsets, then general integer
// tuples by increasing total size), so reruns reproduce the same change.
// Errors: ZERO_SERIES when h vanishes within validity; NOT_REGULAR when the
// lowest-order part of h has no unit part to expose (its rational reduction
// is zero); UNSUPPORTED for multivariate contexts with unequal weights.
LinearChange generic_linear_change(const Series& h);

// ---------------------------------------------------------------------------
// Module division against a monic standard basis.

struct DivisionContext {
  CtxPtr ctx;
  unsigned p = 1;                 // number of tuple components
  std::vector<SeriesVec> basis;   // m monic members of the module
  std::vector<ModExp> leading;    // leading exponent of each member
  Rat max_order;                  // max over members of the leading weight
};

// Validate and package a division basis.  Every member must be nonzero within
// validity (ZERO_SERIES) and monic: the coefficient at its leading module
// exponent equals 1 (NOT_MONIC).  Standard-basis-ness itself is asserted by
// the caller; division never verifies completeness of the basis.
DivisionContext make_division_context(std::vector<SeriesVec> basis);

// Deterministic partition rule: a module exponent reachable by division is
// assigned to the smallest index i whose leading exponent divides it (same
// component, componentwise exponent divisibility); nullopt when none does.
std::optional<unsigned> partition_assign(const DivisionContext& dc, const ModExp& e);

struct GhResult {
  std::vector<Series> quotients;  // one scalar series per basis member
  SeriesVec remainder;            // support disjoint from every assigned cone
};

// Divide f by the basis: f = sum_i quotients[i] * basis[i] + remainder,
// exact up to min(target, f's validity).  Terms are eliminated in increasing
// module order, so each quotient's support lies in the cone assigned to its
// member, shifted by the leading exponent.  A target is required to be
// finite unless f itself has finite validity (UNSUPPORTED otherwise);
// PARTITION_VIOLATION reports a defect of the partition rule on a visited
// exponent (defensive; the smallest-index rule cannot overlap).
GhResult gh_divide(const SeriesVec& f, const DivisionContext& dc, const ExtRat& target);

// ---------------------------------------------------------------------------
// Scission evaluators.

// One-sided inverse data for a linear map ell between tuple spaces: eval
// computes sigma(b) to the requested validity, and kappa certifies the order
// shift: w(sigma(b)) >= w(b) + kappa for all inputs.
struct Scission {
  unsigned arity_in = 0;   // components sigma consumes
  unsigned arity_out = 0;  // components sigma produces
  Rat kappa;               // certified lower bound on the order shift
  std::function<SeriesVec(const SeriesVec&, const ExtRat&)> eval;
};

// Scission induced by module division: sigma(b) returns the quotient tuple of
// b against the basis, discarding the remainder.  kappa = -max_order, and
// ell . sigma . ell = ell holds for the map ell(g) = sum g_i * basis[i].
Scission gh_scission(const DivisionContext& dc);

// Scission for a square matrix A with determinant nonzero (and not nilpotent)
// within validity: sigma(z) takes componentwise distinguished-variable
// quotients of A_adj * z by det A, sharing one generic linear change chosen
// for the determinant.  kappa >= -w(det A) + (least order among adjugate
// entries).  Errors: SINGULAR_WITHIN_VALIDITY.
Scission adjugate_scission(const std::vector<std::vector<Series>>& A);

// ---------------------------------------------------------------------------
// Matrix helpers over series entries.

using SeriesMat = std::vector<std::vector<Series>>;

SeriesMat mat_identity(CtxPtr ctx, std::size_t n);
SeriesMat mat_mul(const SeriesMat& A, const SeriesMat& B);
SeriesVec mat_apply(const SeriesMat& A, const SeriesVec& z);
Series det_series(const SeriesMat& A);
SeriesMat adjugate_matrix(const SeriesMat& A);

// ---------------------------------------------------------------------------
// Smith normal form over univariate series.

struct SmithResult {
  SeriesMat P;             // rows x rows, unit determinant
  SeriesMat Q;             // cols x cols, unit determinant
  SeriesMat smith;         // P * A * Q, diagonal t^{eps_i} * units[i]
  std::vector<Rat> eps;    // nondecreasing pivot orders
  std::vector<Series> units;  // unit series, constant term 1
  unsigned rank = 0;
};

// Diagonalize a matrix of univariate series by invertible row and column
// operations, pivoting on the entry of least order (ties row-major).  The
// pivot orders eps are nondecreasing and satisfy: for each k <= rank,
// eps_1 + ... + eps_k equals the least order among k x k minors of A.
// `work` caps the precision of unit inversions during clearing; when the
// entries are exact and a non-constant unit must be inverted, a finite work
// bound is required (UNSUPPORTED otherwise).  Errors:
// RANK_DEFICIENT_WITHIN_VALIDITY when fewer than rank_target pivots exist
// within validity; NON_UNIT_PIVOT when the least-order candidate entries all
// carry nilpotent leading coefficients.
SmithResult smith_form(const SeriesMat& A, unsigned rank_target,
                       const ExtRat& work = ExtRat::infinity());

}  // namespace arcloom
