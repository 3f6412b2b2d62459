#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "arcloom/series.hpp"
#include "arcloom/textile.hpp"

namespace arcloom {

// ---------------------------------------------------------------------------
// Row-finite matrices indexed by naturals in both directions.
//
// A row-finite matrix acts on coefficient sequences (a_0, a_1, ...) by
// (M a)_i = sum_j M_ij a_j, each row holding finitely many entries so every
// output coefficient is a finite sum.  Sequences are identified with
// univariate arcs sum a_i t^i over a weight-1 parameter, which makes these
// matrices exactly the linear coefficientwise maps on arcs.
//
// Representation: an explicit sparse prefix (rows 0 .. rows.size()-1) plus an
// optional banded tail rule generating row i for i >= tail_start as
//   M_{i, i+tail_offset+k} = stencil[k],   k = 0..stencil.size()-1.
// Where the explicit prefix and the tail overlap (tail_start < rows.size())
// the two must agree entry for entry; builders and the parser enforce this
// along with column nonnegativity of the band.

using SparseRow = std::map<unsigned, RElem>;

struct RowFiniteMatrix {
  Ring ring;
  std::vector<SparseRow> rows;  // explicit prefix; no zero entries stored

  bool has_tail = false;
  unsigned tail_start = 0;     // first row the band rule generates
  long tail_offset = 0;        // column of stencil[0] in row i is i + tail_offset
  std::vector<RElem> stencil;  // finite band profile; may contain interior zeros
};

// Builders; both strip zero entries and check the representation invariants
// (REPRESENTATION_INVALID on violation).
RowFiniteMatrix from_rows(const Ring& ring, std::vector<SparseRow> rows);
RowFiniteMatrix banded(const Ring& ring, long offset, std::vector<RElem> stencil,
                       std::vector<SparseRow> prefix = {});

// The operator a |-> (sum_j h_j a_{i+j} + a_{i+d})_i for h = (h_0..h_{d-1}):
// a pure band with stencil (h_0, ..., h_{d-1}, 1) on the diagonal.
RowFiniteMatrix difference_matrix(const std::vector<RElem>& h, const Ring& ring);

// Row i as a sparse map, explicit or generated from the band rule.
SparseRow materialize_row(const RowFiniteMatrix& m, unsigned i);

// Apply to a finite coefficient vector (zero-extended), producing out_len
// output coefficients.  Exact: finite vectors are genuine sequences.
std::vector<RElem> apply_matrix(const RowFiniteMatrix& m, const std::vector<RElem>& x,
                                unsigned out_len);

// Text format, one item per line:
//   row <i>: <j>=<coeff>, <j>=<coeff>, ...     (empty entry list = zero row)
//   band offset=<k> stencil=<c0,...,cw>        (tail from the row after the
//                                               last explicit one; at most one)
// Coefficients use the constant-expression grammar (rationals and e).
// '#' starts a comment; blank lines are ignored.
RowFiniteMatrix parse_row_finite(std::istream& is, const Ring& ring);
RowFiniteMatrix parse_row_finite(const std::string& text, const Ring& ring);
std::string row_finite_str(const RowFiniteMatrix& m);

// The matrix as a linear map on univariate arcs.  The locality offset is the
// certified minimum of (row index - largest column the row reads); a banded
// matrix contributes -(tail_offset + last nonzero stencil position).  The
// zero matrix gives the zero map.
TextileMap matrix_textile(const RowFiniteMatrix& m);

// ---------------------------------------------------------------------------
// Canonical form.
//
// Every row-finite matrix reduces, by invertible row and column operations,
// to a form with at most one nonzero entry in every row and every column.
// Rows are processed in order: row i pivots at its largest-column nonzero
// entry N_i, the pivot is scaled to 1 (recorded as a row scaling), the pivot
// column is cleared below by row additions (recorded on the left), and the
// pivot row is cleared to its left by column additions (recorded on the
// right).  All factors are exactly invertible: the scalings are units and the
// shears are unipotent.
//
// The computation works on a finite materialization of the matrix.  The
// result is certified on a window: rows 0..window of canon are final, and
// every column <= window is either a pivot column of a recorded pivot or
// carries no entry in any remaining materialized row (permanently zero as far
// as the working bound can see).  When the working bound is too small to
// classify the window -- in particular when band rows beyond it still reach
// columns <= window -- canonical_form reports WINDOW_INSUFFICIENT and the
// caller retries with a larger bound.  A pivot entry that is not a unit of
// the coefficient ring stops the reduction with NON_UNIT_PIVOT.

// One recorded left factor: scale row `row` by the unit `scale`, then
// subtract multiples of it from rows below (target, coefficient).
struct PFactor {
  unsigned row = 0;
  RElem scale = RElem::one();
  std::vector<std::pair<unsigned, RElem>> adds;
};

// One recorded right factor, acting on domain vectors: the component at
// `col` (the pivot column) receives minus the listed combination of lower
// components: y_col -= sum c_j * y_j over (j, c_j) in take.
struct QFactor {
  unsigned col = 0;
  std::vector<std::pair<unsigned, RElem>> take;
};

struct CanonicalFormResult {
  std::vector<PFactor> P;  // left factors in application order
  std::vector<QFactor> Q;  // recorded order; as an operator, apply reversed
  RowFiniteMatrix canon;   // processed rows, each zero or a single unit pivot
  std::vector<std::pair<unsigned, unsigned>> pivots;  // (row, column)
  unsigned window = 0;     // certified window
  unsigned processed = 0;  // rows examined; canon.rows.size() == processed
};

// Reduce m on the given window.  work_bound, when nonzero, caps how many band
// rows are materialized; the default is 4 * (window + band width) and always
// covers the explicit prefix.
CanonicalFormResult canonical_form(const RowFiniteMatrix& m, unsigned window,
                                   unsigned work_bound = 0);

// Apply the accumulated factors (or their exact inverses) to a finite
// coefficient vector.  Vectors are zero-extended to every index the factors
// touch, so round-trips are exact.
std::vector<RElem> apply_P(const CanonicalFormResult& r, std::vector<RElem> x);
std::vector<RElem> apply_P_inverse(const CanonicalFormResult& r, std::vector<RElem> x);
std::vector<RElem> apply_Q(const CanonicalFormResult& r, std::vector<RElem> x);
std::vector<RElem> apply_Q_inverse(const CanonicalFormResult& r, std::vector<RElem> x);

// ---------------------------------------------------------------------------
// Scissions.
//
// A scission of M is a linear map S with M S M = M; it inverts M on its image
// and kills a complement.  From a canonical form P M Q = C one takes
// S = Q S_C P where S_C inverts each pivot (output component N_i reads input
// component i) and zeroes the non-pivot components.
//
// The returned map is certified on the canonical window: evaluation caps the
// output validity at min(requested, input validity + offset, window), where
// the offset is the least (pivot column - pivot row).  MSM = M and the
// idempotence of MS hold on that window.  Errors propagate from
// canonical_form.
TextileMap scission_from_canonical(const RowFiniteMatrix& m, unsigned window,
                                   unsigned work_bound = 0);

// ---------------------------------------------------------------------------
// Difference equations.
//
// For D a = sum_j h_j a_{i+j} + a_{i+d} (monic, constant coefficients), every
// right-hand side is attainable and the solution set is an affine space of
// dimension d: a particular solution via the scission (its components at the
// non-pivot columns 0..d-1 vanish) plus the kernel spanned by the images of
// the first d unit vectors under the right factors.
struct DifferenceSolution {
  Series particular;           // D particular = b on the window
  std::vector<Series> kernel;  // d independent solutions of D a = 0
  unsigned window = 0;         // the equation is certified for indices 0..window
};

// Solve D a = b through coefficient index `window`.  Requires b valid to
// window + d (PRECONDITION_GAP otherwise) and a univariate weight-1 arc
// context (DOMAIN_MISMATCH).  The returned series are valid to window + d.
DifferenceSolution difference_solve(const std::vector<RElem>& h, const Series& b,
                                    unsigned window);

}  // namespace arcloom
