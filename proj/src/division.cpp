#include "arcloom/division.hpp"

#include <algorithm>
#include <string>

#include "arcloom/errors.hpp"

namespace arcloom {

namespace {

// Terms of s whose x_var-degree is below b.
Series var_low_part(const Series& s, unsigned var, unsigned b) {
  Series r(s.ctx, s.validity);
  for (const auto& [k, v] : s.c)
    if (k.a[var] < b) r.c.emplace(k, v);
  return r;
}

// Terms of s whose x_var-degree is at least b, with x_var^b divided out.
Series var_shift_down(const Series& s, unsigned var, unsigned b) {
  const Rat drop = Rat(b) * s.ctx->L[var];
  Series r(s.ctx, s.validity - drop);
  for (const auto& [k, v] : s.c) {
    if (k.a[var] < b) continue;
    Exp a = k.a;
    a[var] -= b;
    r.c.emplace(WExp{k.w - drop, std::move(a)}, v);
  }
  return r;
}

void require_equal_weights(const CtxPtr& ctx, const char* op) {
  for (unsigned i = 1; i < ctx->nvars; ++i)
    if (ctx->L[i] != ctx->L[0])
      fail(errc::unsupported,
           std::string(op) + " over several variables requires equal variable weights",
           "weights " + rat_str(ctx->L[0]) + " and " + rat_str(ctx->L[i]) + " differ");
}

// Least total degree over the support; the support must be nonempty.
unsigned min_total_degree(const Series& s) {
  require_internal(!s.c.empty(), "min_total_degree of an empty support");
  unsigned best = exp_total(s.c.begin()->first.a);
  for (const auto& [k, v] : s.c) best = std::min(best, exp_total(k.a));
  return best;
}

}  // namespace

// ---------------------------------------------------------------------------
// Distinguished-variable division.

WeierstrassResult weierstrass_divide(const Series& g, const Series& p, unsigned var,
                                     const ExtRat& target) {
  CtxPtr ctx = join_context(g.ctx, p.ctx);
  require_internal(var < ctx->nvars, "division variable out of range");
  if (ctx->nvars > 1) require_equal_weights(ctx, "distinguished-variable division");

  if (p.zero_within_validity())
    fail(errc::not_regular, "divisor vanishes within validity");
  const unsigned b = min_total_degree(p);
  Exp pure(ctx->nvars, 0);
  pure[var] = b;
  const RElem lead = p.coeff_or_zero(pure);
  if (!lead.is_unit())
    fail(errc::not_regular,
         "divisor is not regular in the distinguished variable at its order",
         "coefficient of " + exp_str(pure) + " is " + relem_str(lead));

  const Rat shift = Rat(b) * ctx->L[var];
  const Series p_low = var_low_part(p, var, b);
  const Series p_high = var_shift_down(p, var, b);

  // Working precision for g and p; the quotient is exact to W - shift.
  const ExtRat W = ExtRat::min(ExtRat::min(g.validity, p.validity), target);
  const ExtRat Wq = W - shift;

  const Series ph_inv = invert_unit(p_high, Wq);

  Series q(ctx, Wq);
  if (!p_low.c.empty()) {
    // Fixed-point iteration; every pass gains at least the least weight
    // carried by the non-distinguished part of a low term.
    Rat gain;
    bool have_gain = false;
    for (const auto& [k, v] : p_low.c) {
      Rat heavy = k.w - Rat(k.a[var]) * ctx->L[var];
      require_internal(heavy > 0, "low part of a regular divisor must carry other variables");
      if (!have_gain || heavy < gain) {
        gain = heavy;
        have_gain = true;
      }
    }
    unsigned long limit = 1024;
    if (Wq.finite()) {
      // After k passes the correction lies in the k-th power of the ideal of
      // the other variables, so its weight is at least k * gain; once that
      // passes the precision the iteration is stable.
      Rat steps = Wq.value() / gain;
      long s = steps > 0 ? ceil_to_long(steps) : 0;
      limit = static_cast<unsigned long>(s) + 2;
    }
    for (unsigned long it = 0;; ++it) {
      if (it > limit)
        fail(errc::unsupported,
             "quotient does not stabilize; supply a finite target validity");
      Series next =
          truncate(mul(var_shift_down(sub(g, mul(q, p_low)), var, b), ph_inv), Wq);
      if (next.c == q.c) {
        q = std::move(next);
        break;
      }
      q = std::move(next);
    }
  } else {
    q = truncate(mul(var_shift_down(g, var, b), ph_inv), Wq);
  }
  q.validity = Wq;

  Series r = truncate(sub(g, mul(q, p)), W);
  r.validity = W;
  for (const auto& [k, v] : r.c)
    require_internal(k.a[var] < b, "remainder escaped the distinguished-degree bound");
  return {std::move(q), std::move(r)};
}

// ---------------------------------------------------------------------------
// Generic linear coordinate change.

bool LinearChange::is_identity() const {
  for (const Rat& c : coeffs)
    if (c != 0) return false;
  return true;
}

namespace {

Series apply_change(const Series& s, const std::vector<Rat>& coeffs, int sign) {
  const unsigned n = s.ctx->nvars;
  if (n == 1) return s;
  std::vector<Series> vals;
  vals.reserve(n);
  for (unsigned i = 0; i + 1 < n; ++i) {
    Series v = series_variable(s.ctx, i);
    if (coeffs[i] != 0)
      v = add(v, scale(series_variable(s.ctx, n - 1), Rat(sign) * coeffs[i]));
    vals.push_back(std::move(v));
  }
  vals.push_back(series_variable(s.ctx, n - 1));
  return substitute(s, vals);
}

}  // namespace

Series LinearChange::apply(const Series& s) const {
  require_internal(s.ctx->nvars == nvars, "coordinate change arity mismatch");
  if (is_identity()) return s;
  return apply_change(s, coeffs, +1);
}

Series LinearChange::apply_inverse(const Series& s) const {
  require_internal(s.ctx->nvars == nvars, "coordinate change arity mismatch");
  if (is_identity()) return s;
  return apply_change(s, coeffs, -1);
}

std::string LinearChange::str() const {
  if (is_identity()) return "identity";
  std::string out;
  for (unsigned i = 0; i + 1 < nvars; ++i) {
    if (coeffs[i] == 0) continue;
    if (!out.empty()) out += ", ";
    out += "x" + std::to_string(i + 1) + " -> x" + std::to_string(i + 1);
    out += " + " + rat_str(coeffs[i]) + "*x" + std::to_string(nvars);
  }
  return out;
}

LinearChange generic_linear_change(const Series& h) {
  const CtxPtr& ctx = h.ctx;
  const unsigned n = ctx->nvars;
  if (h.zero_within_validity())
    fail(errc::zero_series, "cannot make the zero series regular");
  if (n > 1) require_equal_weights(ctx, "generic linear change");

  // Rational reduction of the lowest-weight part of h.
  const Rat w0 = h.c.begin()->first.w;
  const unsigned btot = exp_total(h.c.begin()->first.a);
  std::vector<std::pair<Exp, Rat>> form;
  for (const auto& [k, v] : h.c) {
    if (k.w != w0) break;  // keys are weight-sorted
    Rat r = v.rat_part();
    if (r != 0) form.emplace_back(k.a, std::move(r));
  }
  if (form.empty())
    fail(errc::not_regular,
         "the lowest-order part has no unit coefficient to expose");

  if (n == 1) {
    // Every univariate term is a pure power; regularity is the unit check.
    Exp pure(1, 0);
    pure[0] = btot;
    if (!h.coeff_or_zero(pure).is_unit())
      fail(errc::not_regular,
           "leading univariate coefficient is not a unit");
    return LinearChange{1, {}};
  }

  // The pure-x_n coefficient of the changed series equals the lowest-weight
  // form evaluated at (c_1, .., c_{n-1}, 1).
  auto regular_at = [&](const std::vector<Rat>& c) {
    Rat total = 0;
    for (const auto& [a, coef] : form) {
      Rat term = coef;
      for (unsigned i = 0; i + 1 < n; ++i)
        for (unsigned e = 0; e < a[i]; ++e) term *= c[i];
      total += term;
    }
    return total != 0;
  };

  std::vector<Rat> c(n - 1, Rat(0));
  if (regular_at(c)) return LinearChange{n, c};  // already regular

  // Single shared constant over variable subsets, smallest constant first.
  if (n - 1 < 20) {
    const unsigned long cap = 2UL * btot + 2;
    const unsigned long masks = (1UL << (n - 1));
    for (unsigned long v = 1; v <= cap; ++v) {
      for (unsigned long mask = 1; mask < masks; ++mask) {
        for (unsigned i = 0; i + 1 < n; ++i)
          c[i] = (mask >> i) & 1 ? Rat(static_cast<long>(v)) : Rat(0);
        if (regular_at(c)) return LinearChange{n, c};
      }
    }
  }

  // General integer tuples by increasing total sum.  A nonzero lowest form
  // cannot vanish on all of them, so this terminates.
  for (unsigned long sum = 1; sum <= 4096; ++sum) {
    std::vector<unsigned long> t(n - 1, 0);
    t[0] = sum;
    for (;;) {
      for (unsigned i = 0; i + 1 < n; ++i) c[i] = Rat(static_cast<long>(t[i]));
      if (regular_at(c)) return LinearChange{n, c};
      // next composition of `sum` into n-1 ordered parts
      unsigned j = 0;
      while (j + 1 < t.size() && t[j] == 0) ++j;
      if (j + 1 >= t.size()) break;
      unsigned long head = t[j];
      t[j] = 0;
      t[0] = head - 1;
      t[j + 1] += 1;
    }
  }
  require_internal(false, "generic linear change search exhausted its budget");
  return LinearChange{n, c};
}

// ---------------------------------------------------------------------------
// Module division.

DivisionContext make_division_context(std::vector<SeriesVec> basis) {
  if (basis.empty()) fail(errc::unsupported, "division basis must be nonempty");
  DivisionContext dc;
  dc.p = static_cast<unsigned>(basis[0].size());
  dc.ctx = basis[0].ctx();
  for (std::size_t i = 1; i < basis.size(); ++i) {
    if (basis[i].size() != dc.p)
      fail(errc::domain_mismatch, "division basis members have different component counts");
    dc.ctx = join_context(dc.ctx, basis[i].ctx());
  }
  for (std::size_t i = 0; i < basis.size(); ++i) {
    auto le = vec_leading_exp(basis[i]);
    if (!le)
      fail(errc::zero_series, "division basis member vanishes within validity",
           "member " + std::to_string(i + 1));
    const RElem& c = basis[i][le->comp].coeff(le->a);
    if (!(c == RElem::one()))
      fail(errc::not_monic,
           "division basis member must have coefficient 1 at its leading exponent",
           "member " + std::to_string(i + 1) + " leads with " + relem_str(c) +
               " at " + modexp_str(*le));
    dc.leading.push_back(*le);
    dc.max_order = i == 0 ? le->w : std::max(dc.max_order, le->w);
  }
  dc.basis = std::move(basis);
  return dc;
}

std::optional<unsigned> partition_assign(const DivisionContext& dc, const ModExp& e) {
  for (unsigned i = 0; i < dc.basis.size(); ++i)
    if (dc.leading[i].comp == e.comp && exp_divides(dc.leading[i].a, e.a))
      return i;
  return std::nullopt;
}

GhResult gh_divide(const SeriesVec& f, const DivisionContext& dc, const ExtRat& target) {
  if (f.size() != dc.p)
    fail(errc::domain_mismatch, "input tuple size does not match the division basis",
         std::to_string(f.size()) + " components against " + std::to_string(dc.p));
  CtxPtr ctx = join_context(f.ctx(), dc.ctx);
  const ExtRat T = ExtRat::min(target, f.validity());
  if (!T.finite())
    fail(errc::unsupported,
         "module division needs a finite target when the input is exact");

  SeriesVec r = vec_truncate(f, T);
  const unsigned m = static_cast<unsigned>(dc.basis.size());
  std::vector<Series> quot;
  for (unsigned i = 0; i < m; ++i) quot.emplace_back(ctx, T - dc.leading[i].w);
  SeriesVec rem = vec_zero(ctx, dc.p, T);

  while (auto le = vec_leading_exp(r)) {
    require_internal(ExtRat(le->w) <= T, "division visited a term beyond its target");
    if (auto idx = partition_assign(dc, *le)) {
      const unsigned i = *idx;
      if (dc.leading[i].comp != le->comp || !exp_divides(dc.leading[i].a, le->a))
        fail(errc::partition_violation,
             "partition rule assigned an exponent outside its cone",
             modexp_str(*le) + " to member " + std::to_string(i + 1));
      const RElem c = r[le->comp].coeff(le->a);
      const Exp gamma = exp_sub(le->a, dc.leading[i].a);
      quot[i].add_coeff_w(le->w - dc.leading[i].w, gamma, c);
      for (unsigned j = 0; j < dc.p; ++j)
        r[j] = sub(r[j], mul_monomial(dc.basis[i][j], gamma, c));
    } else {
      rem[le->comp].add_coeff_w(le->w, le->a, r[le->comp].coeff(le->a));
      r[le->comp].set_coeff(le->a, RElem::zero());
    }
  }

  // Basis members of finite validity can lower the provable window; the
  // returned validities state what the elimination actually certified.
  const ExtRat Vend = r.validity();
  for (unsigned i = 0; i < m; ++i)
    quot[i] = truncate(quot[i], Vend - dc.leading[i].w);
  for (unsigned j = 0; j < dc.p; ++j) rem[j] = truncate(rem[j], Vend);
  return {std::move(quot), std::move(rem)};
}

// ---------------------------------------------------------------------------
// Scissions.

Scission gh_scission(const DivisionContext& dc) {
  Scission s;
  s.arity_in = dc.p;
  s.arity_out = static_cast<unsigned>(dc.basis.size());
  s.kappa = -dc.max_order;
  s.eval = [dc](const SeriesVec& b, const ExtRat& T) {
    const ExtRat tgt = ExtRat::min(T + dc.max_order, b.validity());
    GhResult res = gh_divide(b, dc, tgt);
    return SeriesVec(std::move(res.quotients));
  };
  return s;
}

Scission adjugate_scission(const SeriesMat& A) {
  require_internal(!A.empty(), "adjugate scission needs a nonempty matrix");
  const std::size_t n = A.size();
  CtxPtr ctx = A[0][0].ctx;
  for (const auto& row : A) {
    require_internal(row.size() == n, "adjugate scission needs a square matrix");
    for (const Series& e : row) ctx = join_context(ctx, e.ctx);
  }

  Series det = det_series(A);
  if (det.zero_within_validity())
    fail(errc::singular_within_validity, "determinant vanishes within validity");
  bool has_unit_part = false;
  for (const auto& [k, v] : det.c)
    if (v.rat_part() != 0) {
      has_unit_part = true;
      break;
    }
  if (!has_unit_part)
    fail(errc::singular_within_validity, "determinant is nilpotent within validity");

  LinearChange phi;
  try {
    phi = generic_linear_change(det);
  } catch (const error& e) {
    if (e.code == errc::not_regular)
      fail(errc::singular_within_validity,
           "determinant cannot be made regular within validity", e.witness);
    throw;
  }
  const Series det_phi = phi.apply(det);
  const OrderVal odet = order(det);
  require_internal(odet.exact, "nonzero determinant must have an exact order");
  const Rat wdet = odet.bound.value();

  SeriesMat adj = adjugate_matrix(A);
  bool have_shift = false;
  Rat adj_min;
  for (const auto& row : adj)
    for (const Series& e : row) {
      OrderVal o = order(e);
      if (!o.exact) continue;  // entry vanishes within validity
      if (!have_shift || o.bound.value() < adj_min) {
        adj_min = o.bound.value();
        have_shift = true;
      }
    }
  require_internal(have_shift, "adjugate of a nonsingular matrix cannot vanish");

  Scission s;
  s.arity_in = static_cast<unsigned>(n);
  s.arity_out = static_cast<unsigned>(n);
  s.kappa = -wdet + adj_min;
  const unsigned var = ctx->nvars - 1;
  s.eval = [adj, det_phi, phi, var, wdet, n](const SeriesVec& z, const ExtRat& T) {
    if (z.size() != n)
      fail(errc::domain_mismatch, "scission input arity mismatch",
           std::to_string(z.size()) + " components against " + std::to_string(n));
    SeriesVec y = mat_apply(adj, z);
    std::vector<Series> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      WeierstrassResult d =
          weierstrass_divide(phi.apply(y[i]), det_phi, var, T + wdet);
      out.push_back(phi.apply_inverse(d.quotient));
    }
    return SeriesVec(std::move(out));
  };
  return s;
}

// ---------------------------------------------------------------------------
// Matrix helpers.

SeriesMat mat_identity(CtxPtr ctx, std::size_t n) {
  SeriesMat M(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      M[i].push_back(i == j ? series_const(ctx, Rat(1)) : series_zero(ctx));
  return M;
}

SeriesMat mat_mul(const SeriesMat& A, const SeriesMat& B) {
  require_internal(!A.empty() && !B.empty() && A[0].size() == B.size(),
                   "matrix product shape mismatch");
  SeriesMat C(A.size());
  for (std::size_t i = 0; i < A.size(); ++i)
    for (std::size_t j = 0; j < B[0].size(); ++j) {
      Series acc = mul(A[i][0], B[0][j]);
      for (std::size_t k = 1; k < B.size(); ++k)
        acc = add(acc, mul(A[i][k], B[k][j]));
      C[i].push_back(std::move(acc));
    }
  return C;
}

SeriesVec mat_apply(const SeriesMat& A, const SeriesVec& z) {
  require_internal(!A.empty() && A[0].size() == z.size(),
                   "matrix application shape mismatch");
  std::vector<Series> out;
  out.reserve(A.size());
  for (const auto& row : A) {
    Series acc = mul(row[0], z[0]);
    for (std::size_t k = 1; k < row.size(); ++k)
      acc = add(acc, mul(row[k], z[k]));
    out.push_back(std::move(acc));
  }
  return SeriesVec(std::move(out));
}

namespace {

SeriesMat erase_row_col(const SeriesMat& A, std::size_t i, std::size_t j) {
  SeriesMat M;
  for (std::size_t r = 0; r < A.size(); ++r) {
    if (r == i) continue;
    std::vector<Series> row;
    for (std::size_t c = 0; c < A[r].size(); ++c)
      if (c != j) row.push_back(A[r][c]);
    M.push_back(std::move(row));
  }
  return M;
}

}  // namespace

Series det_series(const SeriesMat& A) {
  require_internal(!A.empty() && A.size() == A[0].size(),
                   "determinant needs a square matrix");
  const std::size_t n = A.size();
  if (n == 1) return A[0][0];
  Series acc = series_zero(A[0][0].ctx);
  for (std::size_t j = 0; j < n; ++j) {
    Series term = mul(A[0][j], det_series(erase_row_col(A, 0, j)));
    acc = j % 2 == 0 ? add(acc, term) : sub(acc, term);
  }
  return acc;
}

SeriesMat adjugate_matrix(const SeriesMat& A) {
  require_internal(!A.empty() && A.size() == A[0].size(),
                   "adjugate needs a square matrix");
  const std::size_t n = A.size();
  if (n == 1) {
    ExtRat v = A[0][0].validity;
    Series one = series_const(A[0][0].ctx, Rat(1));
    one.validity = v;
    return {{std::move(one)}};
  }
  SeriesMat adj(n);
  for (std::size_t j = 0; j < n; ++j) adj[j].resize(n, series_zero(A[0][0].ctx));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Series cof = det_series(erase_row_col(A, i, j));
      if ((i + j) % 2 == 1) cof = neg(cof);
      adj[j][i] = std::move(cof);  // transpose of the cofactor matrix
    }
  return adj;
}

// ---------------------------------------------------------------------------
// Smith normal form.

namespace {

Series t_shift_down(const Series& s, unsigned deg) {
  Series r(s.ctx, s.validity - Rat(deg) * s.ctx->L[0]);
  for (const auto& [k, v] : s.c) {
    require_internal(k.a[0] >= deg, "entry order fell below the pivot order");
    Exp a{k.a[0] - deg};
    r.c.emplace(WExp{k.w - Rat(deg) * s.ctx->L[0], std::move(a)}, v);
  }
  return r;
}

void swap_rows(SeriesMat& M, std::size_t a, std::size_t b) {
  if (a != b) std::swap(M[a], M[b]);
}

void swap_cols(SeriesMat& M, std::size_t a, std::size_t b) {
  if (a == b) return;
  for (auto& row : M) std::swap(row[a], row[b]);
}

}  // namespace

SmithResult smith_form(const SeriesMat& A, unsigned rank_target, const ExtRat& work) {
  require_internal(!A.empty() && !A[0].empty(), "empty matrix has no Smith form");
  const std::size_t N = A.size(), n = A[0].size();
  CtxPtr ctx = A[0][0].ctx;
  ExtRat V = work;
  for (const auto& row : A) {
    require_internal(row.size() == n, "ragged matrix has no Smith form");
    for (const Series& e : row) {
      ctx = join_context(ctx, e.ctx);
      V = ExtRat::min(V, e.validity);
    }
  }
  if (ctx->nvars != 1)
    fail(errc::unsupported, "Smith form is defined over univariate series only");

  SeriesMat D(N);
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < n; ++j) D[i].push_back(truncate(A[i][j], V));
  SeriesMat P = mat_identity(ctx, N);
  SeriesMat Q = mat_identity(ctx, n);

  SmithResult res;
  const std::size_t kmax = std::min(N, n);
  for (std::size_t k = 0; k < kmax; ++k) {
    // Least-order pivot among the remaining block, ties row-major; the
    // leading coefficient must be a unit to divide the entries it clears.
    bool found_any = false, found_unit = false;
    Rat best_any, best_unit;
    std::size_t pi = k, pj = k;
    for (std::size_t i = k; i < N; ++i)
      for (std::size_t j = k; j < n; ++j) {
        if (D[i][j].zero_within_validity()) continue;
        const auto& lead = *D[i][j].c.begin();
        if (!found_any || lead.first.w < best_any) {
          found_any = true;
          best_any = lead.first.w;
        }
        if (lead.second.is_unit() && (!found_unit || lead.first.w < best_unit)) {
          found_unit = true;
          best_unit = lead.first.w;
          pi = i;
          pj = j;
        }
      }
    if (!found_any) break;
    if (!found_unit || best_any < best_unit)
      fail(errc::non_unit_pivot,
           "least-order entries all carry nilpotent leading coefficients",
           "at elimination step " + std::to_string(k + 1));

    swap_rows(D, k, pi);
    swap_rows(P, k, pi);
    swap_cols(D, k, pj);
    swap_cols(Q, k, pj);

    const unsigned deg = D[k][k].c.begin()->first.a[0];
    const Rat epsk = D[k][k].c.begin()->first.w;
    const RElem cinv = rinv(D[k][k].c.begin()->second, ctx->ring.nil_index);
    for (std::size_t j = 0; j < n; ++j) D[k][j] = scale(D[k][j], cinv);
    for (std::size_t j = 0; j < N; ++j) P[k][j] = scale(P[k][j], cinv);

    const Series unit = t_shift_down(D[k][k], deg);
    // Inverted only when an entry actually needs clearing, so exact diagonal
    // inputs never demand a finite work bound.
    std::optional<Series> unit_inv;
    auto pivot_inv = [&]() -> const Series& {
      if (!unit_inv) unit_inv = invert_unit(unit, V - epsk);
      return *unit_inv;
    };

    for (std::size_t i = k + 1; i < N; ++i) {
      if (D[i][k].zero_within_validity()) continue;
      require_internal(D[i][k].c.begin()->first.w >= epsk,
                       "pivot was not minimal in its column");
      const Series factor = mul(t_shift_down(D[i][k], deg), pivot_inv());
      for (std::size_t j = 0; j < n; ++j) D[i][j] = sub(D[i][j], mul(factor, D[k][j]));
      for (std::size_t j = 0; j < N; ++j) P[i][j] = sub(P[i][j], mul(factor, P[k][j]));
      require_internal(D[i][k].zero_within_validity(),
                       "column clearing left a residual entry");
    }
    for (std::size_t j = k + 1; j < n; ++j) {
      if (D[k][j].zero_within_validity()) continue;
      require_internal(D[k][j].c.begin()->first.w >= epsk,
                       "pivot was not minimal in its row");
      const Series factor = mul(t_shift_down(D[k][j], deg), pivot_inv());
      for (std::size_t i = 0; i < N; ++i) D[i][j] = sub(D[i][j], mul(factor, D[i][k]));
      for (std::size_t i = 0; i < n; ++i) Q[i][j] = sub(Q[i][j], mul(factor, Q[i][k]));
      require_internal(D[k][j].zero_within_validity(),
                       "row clearing left a residual entry");
    }

    require_internal(res.eps.empty() || res.eps.back() <= epsk,
                     "pivot orders must be nondecreasing");
    res.eps.push_back(epsk);
    res.units.push_back(unit);
  }

  res.rank = static_cast<unsigned>(res.eps.size());
  if (res.rank < rank_target)
    fail(errc::rank_deficient_within_validity,
         "matrix rank within validity is below the requested rank",
         "found " + std::to_string(res.rank) + ", requested " +
             std::to_string(rank_target));
  res.P = std::move(P);
  res.Q = std::move(Q);
  res.smith = std::move(D);
  return res;
}

}  // namespace arcloom
