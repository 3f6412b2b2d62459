#include "arcloom/nmatrix.hpp"

#include <algorithm>
#include <istream>
#include <memory>
#include <set>
#include <sstream>

#include "arcloom/errors.hpp"
#include "arcloom/io.hpp"

namespace arcloom {

namespace {

void strip_zeros(SparseRow& row) {
  for (auto it = row.begin(); it != row.end();) {
    if (it->second.is_zero())
      it = row.erase(it);
    else
      ++it;
  }
}

// Largest stencil index with a nonzero entry, or -1 for an all-zero stencil.
long stencil_reach(const std::vector<RElem>& stencil) {
  for (std::size_t k = stencil.size(); k-- > 0;)
    if (!stencil[k].is_zero()) return static_cast<long>(k);
  return -1;
}

SparseRow band_row(const RowFiniteMatrix& m, unsigned i) {
  SparseRow row;
  for (std::size_t k = 0; k < m.stencil.size(); ++k) {
    if (m.stencil[k].is_zero()) continue;
    long col = static_cast<long>(i) + m.tail_offset + static_cast<long>(k);
    require_internal(col >= 0, "band row reaches a negative column");
    row[static_cast<unsigned>(col)] = m.stencil[k];
  }
  return row;
}

void check_fits_ring(const RElem& v, const Ring& ring, const char* where) {
  if (v.c.size() > ring.nil_index)
    fail(errc::representation_invalid,
         std::string(where) + " entry " + relem_str(v) + " uses the nilpotent beyond " +
             ring.str());
}

void validate(const RowFiniteMatrix& m) {
  for (const SparseRow& row : m.rows)
    for (const auto& [j, v] : row) {
      check_fits_ring(v, m.ring, "matrix");
      (void)j;
    }
  for (const RElem& v : m.stencil) check_fits_ring(v, m.ring, "stencil");
  if (!m.has_tail) return;
  if (m.tail_start > m.rows.size())
    fail(errc::representation_invalid,
         "band rule starts at row " + std::to_string(m.tail_start) + " but explicit rows end at " +
             std::to_string(m.rows.size()) + "; the gap rows are undefined");
  if (static_cast<long>(m.tail_start) + m.tail_offset < 0)
    fail(errc::representation_invalid, "band rule reaches negative columns at row " +
                                           std::to_string(m.tail_start));
  for (unsigned i = m.tail_start; i < m.rows.size(); ++i)
    if (m.rows[i] != band_row(m, i))
      fail(errc::representation_invalid,
           "explicit row " + std::to_string(i) + " disagrees with the band rule it overlaps");
}

// In-place row update target -= c * source over the working ring.
void row_subtract(SparseRow& target, const RElem& c, const SparseRow& source, unsigned nil) {
  for (const auto& [j, v] : source) {
    RElem delta = rmul(c, v, nil);
    if (delta.is_zero()) continue;
    auto it = target.find(j);
    if (it == target.end()) {
      target[j] = rneg(delta);
    } else {
      it->second = rsub(it->second, delta);
      if (it->second.is_zero()) target.erase(it);
    }
  }
}

void ensure_size(std::vector<RElem>& x, std::size_t n) {
  if (x.size() < n) x.resize(n, RElem::zero());
}

// Light domain check for the arc-map evaluators: one univariate weight-1
// component of order >= 0 (any arc qualifies).
const Series& arc_input(const SeriesVec& a, const char* what) {
  if (a.size() != 1) fail(errc::domain_mismatch, std::string(what) + " expects one arc component");
  const Series& s = a[0];
  if (!s.ctx || s.ctx->nvars != 1 || s.ctx->L[0] != 1)
    fail(errc::domain_mismatch,
         std::string(what) + " acts on univariate weight-1 arcs; got a different shape");
  return s;
}

long floor_to_long(const Rat& r) { return -ceil_to_long(-r); }

Series arc_from_coeffs(const CtxPtr& ctx, const std::vector<RElem>& x, const ExtRat& validity) {
  Series s(ctx, validity);
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!x[i].is_zero()) s.add_coeff(Exp{static_cast<unsigned>(i)}, x[i]);
  return s;
}

}  // namespace

RowFiniteMatrix from_rows(const Ring& ring, std::vector<SparseRow> rows) {
  RowFiniteMatrix m;
  m.ring = ring;
  m.rows = std::move(rows);
  for (SparseRow& r : m.rows) strip_zeros(r);
  validate(m);
  return m;
}

RowFiniteMatrix banded(const Ring& ring, long offset, std::vector<RElem> stencil,
                       std::vector<SparseRow> prefix) {
  RowFiniteMatrix m;
  m.ring = ring;
  m.rows = std::move(prefix);
  for (SparseRow& r : m.rows) strip_zeros(r);
  m.has_tail = true;
  m.tail_start = static_cast<unsigned>(m.rows.size());
  m.tail_offset = offset;
  m.stencil = std::move(stencil);
  if (m.stencil.empty())
    fail(errc::representation_invalid, "band rule needs a nonempty stencil");
  validate(m);
  return m;
}

RowFiniteMatrix difference_matrix(const std::vector<RElem>& h, const Ring& ring) {
  std::vector<RElem> stencil = h;
  stencil.push_back(RElem::one());
  return banded(ring, 0, std::move(stencil));
}

SparseRow materialize_row(const RowFiniteMatrix& m, unsigned i) {
  if (i < m.rows.size()) return m.rows[i];
  if (m.has_tail && i >= m.tail_start) return band_row(m, i);
  return {};
}

std::vector<RElem> apply_matrix(const RowFiniteMatrix& m, const std::vector<RElem>& x,
                                unsigned out_len) {
  const unsigned nil = m.ring.nil_index;
  std::vector<RElem> out(out_len, RElem::zero());
  for (unsigned i = 0; i < out_len; ++i) {
    RElem acc = RElem::zero();
    for (const auto& [j, v] : materialize_row(m, i))
      if (j < x.size()) acc = radd(acc, rmul(v, x[j], nil));
    out[i] = acc;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Text format.

RowFiniteMatrix parse_row_finite(std::istream& is, const Ring& ring) {
  std::map<unsigned, SparseRow> explicit_rows;
  bool has_band = false;
  long offset = 0;
  std::vector<RElem> stencil;

  for (const std::string& line : read_content_lines(is)) {
    if (line.rfind("row", 0) == 0) {
      std::size_t colon = line.find(':');
      if (colon == std::string::npos)
        fail(errc::parse_error, "row line without ':' separator: '" + line + "'");
      Rat idx = parse_rat(strip(line.substr(3, colon - 3)));
      if (idx.get_den() != 1 || idx < 0) fail(errc::parse_error, "bad row index in '" + line + "'");
      unsigned i = static_cast<unsigned>(idx.get_num().get_ui());
      if (explicit_rows.count(i))
        fail(errc::parse_error, "row " + std::to_string(i) + " given twice");
      SparseRow row;
      std::string rest = strip(line.substr(colon + 1));
      if (!rest.empty()) {
        for (const std::string& part : split(rest, ',')) {
          std::size_t eq = part.find('=');
          if (eq == std::string::npos)
            fail(errc::parse_error, "matrix entry without '=': '" + part + "'");
          Rat col = parse_rat(strip(part.substr(0, eq)));
          if (col.get_den() != 1 || col < 0)
            fail(errc::parse_error, "bad column index in '" + part + "'");
          unsigned j = static_cast<unsigned>(col.get_num().get_ui());
          if (row.count(j))
            fail(errc::parse_error,
                 "column " + std::to_string(j) + " given twice in row " + std::to_string(i));
          row[j] = parse_const_relem(strip(part.substr(eq + 1)), ring);
        }
      }
      explicit_rows[i] = std::move(row);
    } else if (line.rfind("band", 0) == 0) {
      if (has_band) fail(errc::parse_error, "more than one band line");
      has_band = true;
      // Coefficients may contain spaces, so locate the two markers instead of
      // tokenizing on whitespace.
      std::string rest = strip(line.substr(4));
      std::size_t st = rest.find("stencil=");
      if (rest.rfind("offset=", 0) != 0 || st == std::string::npos)
        fail(errc::parse_error, "band line needs offset=<k> and stencil=<c0,...,cw>");
      Rat o = parse_rat(strip(rest.substr(7, st - 7)));
      if (o.get_den() != 1) fail(errc::parse_error, "band offset must be an integer");
      offset = static_cast<long>(o.get_num().get_si());
      for (const std::string& part : split(rest.substr(st + 8), ','))
        stencil.push_back(parse_const_relem(strip(part), ring));
    } else {
      fail(errc::parse_error, "unrecognized matrix line: '" + line + "'");
    }
  }

  std::vector<SparseRow> rows;
  if (!explicit_rows.empty()) rows.resize(explicit_rows.rbegin()->first + 1);
  for (auto& [i, row] : explicit_rows) rows[i] = std::move(row);
  if (has_band) return banded(ring, offset, std::move(stencil), std::move(rows));
  return from_rows(ring, std::move(rows));
}

RowFiniteMatrix parse_row_finite(const std::string& text, const Ring& ring) {
  std::istringstream is(text);
  return parse_row_finite(is, ring);
}

std::string row_finite_str(const RowFiniteMatrix& m) {
  std::string out;
  // Under a band rule every row before tail_start is written out, zero rows
  // included, so the reparsed tail starts at the same row.
  std::size_t upto = m.has_tail ? m.tail_start : m.rows.size();
  for (std::size_t i = 0; i < upto; ++i) {
    const SparseRow row = materialize_row(m, static_cast<unsigned>(i));
    if (row.empty() && !m.has_tail) continue;
    out += "row " + std::to_string(i) + ":";
    bool first = true;
    for (const auto& [j, v] : row) {
      out += first ? " " : ", ";
      out += std::to_string(j) + "=" + relem_str(v);
      first = false;
    }
    out += "\n";
  }
  if (m.has_tail) {
    out += "band offset=" + std::to_string(m.tail_offset) + " stencil=";
    for (std::size_t k = 0; k < m.stencil.size(); ++k) {
      if (k) out += ",";
      out += relem_str(m.stencil[k]);
    }
    out += "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// The matrix as a linear arc map.

TextileMap matrix_textile(const RowFiniteMatrix& m) {
  validate(m);
  CtxPtr ctx = make_context(1, {Rat(1)}, m.ring);

  // Locality offset: min over nonzero rows of (row index - largest column),
  // and the first nonzero row as the certified output order.
  bool any = false;
  Rat shift(0);
  Rat first_row(0);
  for (std::size_t i = 0; i < m.rows.size(); ++i) {
    if (m.rows[i].empty()) continue;
    Rat s = Rat(static_cast<long>(i)) - Rat(static_cast<long>(m.rows[i].rbegin()->first));
    if (!any || s < shift) shift = s;
    if (!any) first_row = Rat(static_cast<long>(i));
    any = true;
  }
  long reach = m.has_tail ? stencil_reach(m.stencil) : -1;
  if (reach >= 0) {
    Rat s = Rat(-(m.tail_offset + reach));
    if (!any || s < shift) shift = s;
    Rat fr = Rat(static_cast<long>(m.tail_start));
    if (!any || fr < first_row) first_row = fr;
    any = true;
  }

  if (!any) {
    // Zero matrix: the zero map on arcs.
    auto eval = [ctx](const SeriesVec& a, const ExtRat& T) {
      const Series& s = arc_input(a, "matrix map");
      return SeriesVec({series_zero(join_context(ctx, s.ctx), T)});
    };
    return linear_from_evaluator(eval, ctx, 1, 1, Rat(0), ExtRat::infinity(),
                                 ExtRat::infinity());
  }

  const ExtRat kappa = ExtRat(shift);
  RowFiniteMatrix mat = m;
  auto eval = [mat, ctx, kappa](const SeriesVec& a, const ExtRat& T) {
    const Series& s = arc_input(a, "matrix map");
    CtxPtr out_ctx = join_context(ctx, s.ctx);
    const unsigned work_nil = out_ctx->ring.nil_index;
    ExtRat claim = ExtRat::min(T, s.validity + kappa);
    Series out(out_ctx, claim);
    if (claim.finite() && claim.value() < 0) return SeriesVec({std::move(out)});
    long imax;
    if (claim.finite()) {
      imax = floor_to_long(claim.value());
    } else {
      // Polynomial input under an unlimited request: only the rows whose
      // support meets the input's support can produce anything.
      long cmax = -1;
      for (const auto& [key, v] : s.c) {
        cmax = std::max(cmax, static_cast<long>(key.a[0]));
        (void)v;
      }
      imax = static_cast<long>(mat.rows.size()) - 1;
      long reach = mat.has_tail ? stencil_reach(mat.stencil) : -1;
      if (cmax < 0) {
        imax = -1;
      } else if (reach >= 0) {
        long k0 = 0;
        while (mat.stencil[k0].is_zero()) ++k0;
        imax = std::max(imax, cmax - mat.tail_offset - k0);
      }
    }
    for (long i = 0; i <= imax; ++i) {
      RElem acc = RElem::zero();
      for (const auto& [j, v] : materialize_row(mat, static_cast<unsigned>(i)))
        acc = radd(acc, rmul(v, s.coeff_or_zero(Exp{j}), work_nil));
      if (!acc.is_zero()) out.add_coeff(Exp{static_cast<unsigned>(i)}, acc);
    }
    return SeriesVec({std::move(out)});
  };
  return linear_from_evaluator(eval, ctx, 1, 1, Rat(0), kappa, ExtRat(first_row));
}

// ---------------------------------------------------------------------------
// Canonical form.

CanonicalFormResult canonical_form(const RowFiniteMatrix& m, unsigned window,
                                   unsigned work_bound) {
  validate(m);
  const unsigned nil = m.ring.nil_index;

  // Working bound: how many rows are materialized and eligible for
  // processing.  The default covers the window four times over plus the band
  // width; the explicit prefix is always included.
  unsigned band_width = m.has_tail ? static_cast<unsigned>(m.stencil.size()) : 0;
  unsigned R = work_bound ? work_bound : 4 * (window + band_width) + 4;
  R = std::max(R, window + 1);
  R = std::max<unsigned>(R, static_cast<unsigned>(m.rows.size()));

  // Rows beyond the materialization must not reach columns <= window, or the
  // window cannot be classified.
  if (m.has_tail) {
    long reach = stencil_reach(m.stencil);
    if (reach >= 0) {
      long first_beyond = std::max<long>(R, m.tail_start);
      if (first_beyond + m.tail_offset <= static_cast<long>(window))
        fail(errc::window_insufficient,
             "working bound " + std::to_string(R) + " leaves band rows touching column " +
                 std::to_string(first_beyond + m.tail_offset) +
                 " inside the window; enlarge the bound",
             std::to_string(first_beyond + m.tail_offset));
    }
  }

  std::vector<SparseRow> work(R);
  for (unsigned i = 0; i < R; ++i) work[i] = materialize_row(m, i);

  CanonicalFormResult res;
  res.window = window;
  std::set<unsigned> covered;

  // True when rows 0..i are examined and every column <= window is a pivot
  // column or absent from all remaining materialized rows.
  auto classified = [&](unsigned i) {
    if (i + 1 <= window) return false;
    for (unsigned l = i + 1; l < R; ++l)
      for (const auto& entry : work[l]) {
        if (entry.first > window) break;
        if (!covered.count(entry.first)) return false;
      }
    return true;
  };

  for (unsigned i = 0; i < R; ++i) {
    SparseRow& row = work[i];
    if (!row.empty()) {
      const unsigned piv = row.rbegin()->first;
      const RElem u = row.rbegin()->second;
      if (!u.is_unit())
        fail(errc::non_unit_pivot,
             "row " + std::to_string(i) + " pivots at column " + std::to_string(piv) +
                 " with non-unit entry " + relem_str(u),
             std::to_string(i) + "," + std::to_string(piv));

      PFactor pf;
      pf.row = i;
      pf.scale = rinv(u, nil);
      if (pf.scale != RElem::one())
        for (auto& [j, v] : row) v = rmul(v, pf.scale, nil);

      for (unsigned l = i + 1; l < R; ++l) {
        auto it = work[l].find(piv);
        if (it == work[l].end()) continue;
        RElem c = it->second;
        row_subtract(work[l], c, row, nil);
        pf.adds.push_back({l, std::move(c)});
      }
      if (pf.scale != RElem::one() || !pf.adds.empty()) res.P.push_back(std::move(pf));

      QFactor qf;
      qf.col = piv;
      for (const auto& [j, v] : row)
        if (j != piv) qf.take.push_back({j, v});
      if (!qf.take.empty()) res.Q.push_back(std::move(qf));

      row.clear();
      row[piv] = RElem::one();
      res.pivots.push_back({i, piv});
      covered.insert(piv);
    }
    res.processed = i + 1;
    if (classified(i)) break;
  }

  // The loop either classified the window or exhausted the materialization;
  // in the latter case every materialized row was examined, so any remaining
  // open column would have been caught by the band-reach check above.
  for (unsigned j = 0; j <= window; ++j) {
    if (covered.count(j)) continue;
    for (unsigned l = res.processed; l < R; ++l)
      if (work[l].count(j))
        fail(errc::window_insufficient,
             "column " + std::to_string(j) + " is still live at row " + std::to_string(l) +
                 " when the working bound ends; enlarge the bound",
             std::to_string(j));
  }

  res.canon.ring = m.ring;
  res.canon.rows.assign(work.begin(), work.begin() + res.processed);
  return res;
}

std::vector<RElem> apply_P(const CanonicalFormResult& r, std::vector<RElem> x) {
  const unsigned nil = r.canon.ring.nil_index;
  for (const PFactor& f : r.P) {
    ensure_size(x, f.row + 1);
    if (f.scale != RElem::one()) x[f.row] = rmul(x[f.row], f.scale, nil);
    for (const auto& [t, c] : f.adds) {
      ensure_size(x, t + 1);
      x[t] = rsub(x[t], rmul(c, x[f.row], nil));
    }
  }
  return x;
}

std::vector<RElem> apply_P_inverse(const CanonicalFormResult& r, std::vector<RElem> x) {
  const unsigned nil = r.canon.ring.nil_index;
  for (auto fit = r.P.rbegin(); fit != r.P.rend(); ++fit) {
    ensure_size(x, fit->row + 1);
    for (auto ait = fit->adds.rbegin(); ait != fit->adds.rend(); ++ait) {
      ensure_size(x, ait->first + 1);
      x[ait->first] = radd(x[ait->first], rmul(ait->second, x[fit->row], nil));
    }
    if (fit->scale != RElem::one()) x[fit->row] = rmul(x[fit->row], rinv(fit->scale, nil), nil);
  }
  return x;
}

std::vector<RElem> apply_Q(const CanonicalFormResult& r, std::vector<RElem> x) {
  const unsigned nil = r.canon.ring.nil_index;
  for (auto fit = r.Q.rbegin(); fit != r.Q.rend(); ++fit) {
    ensure_size(x, fit->col + 1);
    RElem acc = x[fit->col];
    for (const auto& [j, c] : fit->take) {
      ensure_size(x, j + 1);
      acc = rsub(acc, rmul(c, x[j], nil));
    }
    x[fit->col] = std::move(acc);
  }
  return x;
}

std::vector<RElem> apply_Q_inverse(const CanonicalFormResult& r, std::vector<RElem> x) {
  const unsigned nil = r.canon.ring.nil_index;
  for (const QFactor& f : r.Q) {
    ensure_size(x, f.col + 1);
    RElem acc = x[f.col];
    for (const auto& [j, c] : f.take) {
      ensure_size(x, j + 1);
      acc = radd(acc, rmul(c, x[j], nil));
    }
    x[f.col] = std::move(acc);
  }
  return x;
}

// ---------------------------------------------------------------------------
// Scissions.

namespace {

// Build the scission map from a completed reduction.  Shared by the public
// entry point and difference_solve, which also needs the factors themselves.
TextileMap scission_from_result(const RowFiniteMatrix& m, CanonicalFormResult res) {
  CtxPtr ctx = make_context(1, {Rat(1)}, m.ring);

  if (res.pivots.empty()) {
    auto eval = [ctx](const SeriesVec& a, const ExtRat& T) {
      const Series& s = arc_input(a, "scission");
      return SeriesVec({series_zero(join_context(ctx, s.ctx), T)});
    };
    return linear_from_evaluator(eval, ctx, 1, 1, Rat(0), ExtRat::infinity(),
                                 ExtRat::infinity());
  }

  long shift = 0;
  bool first = true;
  for (const auto& [r, c] : res.pivots) {
    long s = static_cast<long>(c) - static_cast<long>(r);
    if (first || s < shift) shift = s;
    first = false;
  }
  const ExtRat kappa = ExtRat(Rat(shift));
  const ExtRat window_cap = ExtRat(Rat(static_cast<long>(res.window)));

  auto result = std::make_shared<CanonicalFormResult>(std::move(res));
  auto eval = [ctx, kappa, window_cap, result](const SeriesVec& a, const ExtRat& T) {
    const Series& b = arc_input(a, "scission");
    CtxPtr out_ctx = join_context(ctx, b.ctx);
    const unsigned work_nil = out_ctx->ring.nil_index;
    // The reduction certifies the window only; cap the claim there.
    ExtRat claim = ExtRat::min(ExtRat::min(T, b.validity + kappa), window_cap);
    Series out(out_ctx, claim);
    if (claim.value() < 0) return SeriesVec({std::move(out)});
    long ylen = floor_to_long(claim.value()) + 1;

    // Materialize the readable prefix of b and push it through the left
    // factors; rows beyond the input validity stay untouched and the offset
    // bound keeps their pivots outside the claim.
    long xlen = static_cast<long>(result->processed);
    if (b.validity.finite()) xlen = std::min(xlen, floor_to_long(b.validity.value()) + 1);
    std::vector<RElem> x(static_cast<std::size_t>(std::max<long>(xlen, 0)), RElem::zero());
    for (long j = 0; j < xlen; ++j) x[j] = b.coeff_or_zero(Exp{static_cast<unsigned>(j)});
    for (const PFactor& f : result->P) {
      if (static_cast<long>(f.row) >= xlen) continue;
      if (f.scale != RElem::one()) x[f.row] = rmul(x[f.row], f.scale, work_nil);
      for (const auto& [t, c] : f.adds) {
        if (static_cast<long>(t) >= xlen) continue;
        x[t] = rsub(x[t], rmul(c, x[f.row], work_nil));
      }
    }

    // Invert the pivots, zero the complement, and undo the right factors.
    std::vector<RElem> y(static_cast<std::size_t>(ylen), RElem::zero());
    for (const auto& [r, c] : result->pivots)
      if (static_cast<long>(c) < ylen && static_cast<long>(r) < xlen) y[c] = x[r];
    for (auto fit = result->Q.rbegin(); fit != result->Q.rend(); ++fit) {
      if (static_cast<long>(fit->col) >= ylen) continue;
      RElem acc = y[fit->col];
      for (const auto& [j, c] : fit->take) acc = rsub(acc, rmul(c, y[j], work_nil));
      y[fit->col] = std::move(acc);
    }
    for (long k = 0; k < ylen; ++k)
      if (!y[k].is_zero()) out.add_coeff(Exp{static_cast<unsigned>(k)}, y[k]);
    return SeriesVec({std::move(out)});
  };

  ExtRat out_order = ExtRat(shift > 0 ? Rat(shift) : Rat(0));
  return linear_from_evaluator(eval, ctx, 1, 1, Rat(0), kappa, out_order);
}

}  // namespace

TextileMap scission_from_canonical(const RowFiniteMatrix& m, unsigned window,
                                   unsigned work_bound) {
  return scission_from_result(m, canonical_form(m, window, work_bound));
}

// ---------------------------------------------------------------------------
// Difference equations.

DifferenceSolution difference_solve(const std::vector<RElem>& h, const Series& b,
                                    unsigned window) {
  if (!b.ctx || b.ctx->nvars != 1 || b.ctx->L[0] != 1)
    fail(errc::domain_mismatch, "difference equations act on univariate weight-1 arcs");
  const unsigned d = static_cast<unsigned>(h.size());
  const unsigned full = window + d;
  if (b.validity < ExtRat(Rat(full)))
    fail(errc::precondition_gap, "right-hand side is valid to " + b.validity.str() +
                                     " but the window needs " + std::to_string(full));

  const Ring ring = b.ctx->ring;
  RowFiniteMatrix D = difference_matrix(h, ring);
  CanonicalFormResult res = canonical_form(D, full);

  // Free columns of the window: the kernel directions.  For a monic operator
  // these are exactly 0..d-1.
  std::set<unsigned> covered;
  for (const auto& [r, c] : res.pivots) covered.insert(c);
  std::vector<unsigned> free_cols;
  for (unsigned j = 0; j <= full; ++j)
    if (!covered.count(j)) free_cols.push_back(j);
  require_internal(free_cols.size() == d, "a monic difference operator has d free columns");

  DifferenceSolution sol;
  sol.window = window;
  const ExtRat out_validity = ExtRat(Rat(full));
  for (unsigned j : free_cols) {
    std::vector<RElem> e(full + 1, RElem::zero());
    e[j] = RElem::one();
    sol.kernel.push_back(arc_from_coeffs(b.ctx, apply_Q(res, std::move(e)), out_validity));
  }

  TextileMap sigma = scission_from_result(D, std::move(res));
  sol.particular = sigma.eval(SeriesVec({truncate(b, out_validity)}), out_validity)[0];
  return sol;
}

}  // namespace arcloom
