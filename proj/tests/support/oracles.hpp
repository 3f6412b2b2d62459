#pragma once

// Independent reference implementations used to derive expected values in
// tests.  Each oracle recomputes a result by a different route than the
// library (dense arrays instead of sparse maps, direct recursions instead of
// fixed-point solvers) so that agreement is evidence, not tautology.

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "arcloom/series.hpp"

namespace arcloom::oracles {

// Dense convolution product of univariate coefficient lists, truncated at
// degree cap (inclusive).  Index = exponent of t.
inline std::vector<Rat> conv_univar(const std::vector<Rat>& a, const std::vector<Rat>& b,
                                    std::size_t cap) {
  std::vector<Rat> r(cap + 1, Rat(0));
  for (std::size_t i = 0; i < a.size() && i <= cap; ++i)
    for (std::size_t j = 0; j < b.size() && i + j <= cap; ++j) r[i + j] += a[i] * b[j];
  return r;
}

// Dense multivariate convolution over exponent boxes: coefficients are keyed
// by the exponent vector directly, no weights or orders involved.
using DenseMap = std::map<Exp, Rat>;

inline DenseMap to_dense(const Series& s) {
  DenseMap d;
  for (const auto& [k, v] : s.c) {
    if (v.c.size() > 1) throw std::runtime_error("dense oracle is rational-only");
    if (!v.is_zero()) d[k.a] = v.rat_part();
  }
  return d;
}

inline DenseMap conv_dense(const DenseMap& a, const DenseMap& b, unsigned total_cap) {
  DenseMap r;
  for (const auto& [ea, va] : a)
    for (const auto& [eb, vb] : b) {
      Exp e = exp_add(ea, eb);
      if (exp_total(e) > total_cap) continue;
      r[e] += va * vb;
    }
  for (auto it = r.begin(); it != r.end();)
    it = it->second == 0 ? r.erase(it) : std::next(it);
  return r;
}

// Termwise derivative of a univariate coefficient list (d/dt).
inline std::vector<Rat> diff_univar(const std::vector<Rat>& a) {
  std::vector<Rat> r;
  for (std::size_t i = 1; i < a.size(); ++i) r.push_back(a[i] * Rat(static_cast<long>(i)));
  return r;
}

// Symbolic expansion oracle for one polynomial F over (x-block, y) with a
// single expansion variable y: the coefficients of F(x, a + z) in powers of
// z, computed by literal substitution y := a + z over an extended context
// with a fresh last variable z, then collecting z-degrees.  The point a lives
// over the output context (whose first `keep` weights match F's x-block).
inline std::vector<Series> expand_shift_single_y(const Series& F, unsigned keep, const Series& a) {
  const CtxPtr cf = F.ctx;
  require_internal(cf->nvars == keep + 1, "oracle expects one expansion variable");
  const CtxPtr cpt = a.ctx;
  std::vector<Rat> Lz = cpt->L;
  Lz.push_back(cf->L[keep]);
  CtxPtr cz = make_context(cpt->nvars + 1, Lz, join_ring(cf->ring, cpt->ring));
  Series a_lift = series_zero(cz, a.validity);
  for (const auto& [k, v] : a.c) {
    Exp e = k.a;
    e.push_back(0);
    a_lift.add_coeff(e, v);
  }
  Series val = add(a_lift, series_variable(cz, cpt->nvars));
  Series g = substitute(F, {val}, keep);
  unsigned maxd = 0;
  for (const auto& [k, v] : g.c) maxd = std::max(maxd, k.a[cpt->nvars]);
  std::vector<Series> out(maxd + 1, series_zero(cpt, g.validity));
  for (const auto& [k, v] : g.c) {
    Exp e(k.a.begin(), k.a.begin() + cpt->nvars);
    out[k.a[cpt->nvars]].add_coeff(e, v);
  }
  return out;
}

// Factorial-series coefficients 1/i! up to degree n.
inline std::vector<Rat> exp_coeffs(std::size_t n) {
  std::vector<Rat> r(n + 1, Rat(1));
  for (std::size_t i = 1; i <= n; ++i) r[i] = r[i - 1] / Rat(static_cast<long>(i));
  return r;
}

// ---------------------------------------------------------------------------
// Division oracles.

// Classical polynomial long division in one distinguished variable, working
// from the *highest* degree down (the opposite direction from the library's
// lowest-order fixed point).  Both inputs must be polynomials over Q and the
// divisor's top coefficient in the distinguished variable must be a nonzero
// rational constant.  Returns dense layers so no library arithmetic is
// involved beyond exponent bookkeeping.
inline std::pair<DenseMap, DenseMap> poly_long_divide(const Series& g, const Series& p,
                                                      unsigned var) {
  auto layer_split = [var](const DenseMap& d) {
    std::map<unsigned, DenseMap> layers;
    for (const auto& [e, v] : d) {
      Exp rest = e;
      unsigned deg = rest[var];
      rest[var] = 0;
      layers[deg][rest] = v;
    }
    return layers;
  };
  DenseMap gd = to_dense(g), pd = to_dense(p);
  auto pl = layer_split(pd);
  if (pl.empty()) throw std::runtime_error("long-division oracle: zero divisor");
  const unsigned dp = pl.rbegin()->first;
  const DenseMap& top = pl.rbegin()->second;
  if (top.size() != 1 || exp_total(top.begin()->first) != 0)
    throw std::runtime_error("long-division oracle: top coefficient must be constant");
  const Rat lead = top.begin()->second;

  DenseMap q;
  DenseMap r = gd;
  for (;;) {
    auto rl = layer_split(r);
    if (rl.empty() || rl.rbegin()->first < dp) break;
    const unsigned dr = rl.rbegin()->first;
    for (const auto& [rest, v] : rl.rbegin()->second) {
      Exp qe = rest;
      qe[var] = dr - dp;
      q[qe] += v / lead;
      // r -= (v/lead) * x^qe * p
      for (const auto& [pe, pv] : pd) {
        Exp e = exp_add(qe, pe);
        r[e] -= (v / lead) * pv;
      }
    }
    for (auto it = r.begin(); it != r.end();)
      it = it->second == 0 ? r.erase(it) : std::next(it);
  }
  for (auto it = q.begin(); it != q.end();)
    it = it->second == 0 ? q.erase(it) : std::next(it);
  return {std::move(q), std::move(r)};
}

// Dense univariate coefficient list of a polynomial series over Q.
inline std::vector<Rat> uni_dense(const Series& s) {
  std::vector<Rat> out;
  for (const auto& [k, v] : s.c) {
    if (v.c.size() > 1) throw std::runtime_error("dense oracle is rational-only");
    const unsigned d = k.a[0];
    if (out.size() <= d) out.resize(d + 1, Rat(0));
    out[d] = v.rat_part();
  }
  return out;
}

// Determinant of a square matrix of dense univariate polynomials by the
// permutation-sum definition (no elimination involved).
inline std::vector<Rat> perm_det(const std::vector<std::vector<std::vector<Rat>>>& M,
                                 std::size_t cap) {
  const std::size_t n = M.size();
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  std::vector<Rat> det(cap + 1, Rat(0));
  do {
    // parity by counting inversions
    unsigned inv = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (perm[i] > perm[j]) ++inv;
    std::vector<Rat> term{Rat(1)};
    for (std::size_t i = 0; i < n; ++i) term = conv_univar(term, M[i][perm[i]], cap);
    for (std::size_t d = 0; d < term.size() && d <= cap; ++d)
      det[d] += inv % 2 == 0 ? term[d] : -term[d];
  } while (std::next_permutation(perm.begin(), perm.end()));
  return det;
}

// Least t-order among the k x k minors of a matrix of dense univariate
// polynomials; nullopt when every minor vanishes.  This is the order of the
// gcd of the minors, since gcds in one variable are powers of t times units.
inline std::optional<unsigned> min_minor_order(
    const std::vector<std::vector<std::vector<Rat>>>& M, std::size_t k, std::size_t cap) {
  const std::size_t N = M.size(), n = M[0].size();
  std::vector<std::size_t> rows(k), cols(k);
  std::optional<unsigned> best;
  auto scan_order = [&](const std::vector<Rat>& d) {
    for (std::size_t i = 0; i < d.size(); ++i)
      if (d[i] != 0) {
        if (!best || i < *best) best = static_cast<unsigned>(i);
        return;
      }
  };
  // enumerate k-subsets of rows and columns
  std::vector<std::size_t> rsel(k), csel(k);
  std::function<void(std::size_t, std::size_t)> pick_cols = [&](std::size_t ci,
                                                                std::size_t cstart) {
    if (ci == k) {
      std::vector<std::vector<std::vector<Rat>>> sub(k);
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) sub[i].push_back(M[rsel[i]][csel[j]]);
      scan_order(perm_det(sub, cap));
      return;
    }
    for (std::size_t c = cstart; c < n; ++c) {
      csel[ci] = c;
      pick_cols(ci + 1, c + 1);
    }
  };
  std::function<void(std::size_t, std::size_t)> pick_rows = [&](std::size_t ri,
                                                                std::size_t rstart) {
    if (ri == k) {
      pick_cols(0, 0);
      return;
    }
    for (std::size_t r = rstart; r < N; ++r) {
      rsel[ri] = r;
      pick_rows(ri + 1, r + 1);
    }
  };
  pick_rows(0, 0);
  return best;
}

// ---------------------------------------------------------------------------
// Coefficientwise-map oracles.

// Dense univariate polynomial composition f(g(y)) by Horner's rule on plain
// coefficient lists.  Index = exponent of y.
inline std::vector<Rat> compose_dense(const std::vector<Rat>& f, const std::vector<Rat>& g,
                                      std::size_t cap) {
  std::vector<Rat> r(1, Rat(0));
  for (std::size_t i = f.size(); i-- > 0;) {
    r = conv_univar(r, g, cap);
    if (r.empty()) r.assign(1, Rat(0));
    r[0] += f[i];
  }
  return r;
}

// Run a linear recursion a_i = sum_j coeffs[j] * a_{i-1-j} directly on plain
// rationals, starting from the given initial segment.  Returns `count` terms.
inline std::vector<Rat> run_linear_recursion(const std::vector<Rat>& init,
                                             const std::vector<Rat>& coeffs, std::size_t count) {
  std::vector<Rat> a = init;
  while (a.size() < count) {
    Rat next(0);
    std::size_t i = a.size();
    for (std::size_t j = 0; j < coeffs.size(); ++j) {
      if (i < j + 1) throw std::runtime_error("recursion oracle: not enough initial terms");
      next += coeffs[j] * a[i - 1 - j];
    }
    a.push_back(next);
  }
  a.resize(count);
  return a;
}

// ---------------------------------------------------------------------------
// Sequence-operator oracles.

// Telescoping sums: the unique a with a_{i+1} - a_i = b_i and a_0 = 0, i.e.
// a_i = b_0 + ... + b_{i-1}.  Returns count terms.
inline std::vector<Rat> prefix_sums(const std::vector<Rat>& b, std::size_t count) {
  std::vector<Rat> a(count, Rat(0));
  for (std::size_t i = 1; i < count; ++i)
    a[i] = a[i - 1] + (i - 1 < b.size() ? b[i - 1] : Rat(0));
  return a;
}

// Forward recursion for a constant-coefficient difference equation
//   a_{i+d} + h_{d-1} a_{i+d-1} + ... + h_0 a_i = b_i
// from the initial segment a_0..a_{d-1}.  Entries of b beyond its length are
// treated as zero.  Returns count terms.
inline std::vector<Rat> run_difference_forward(const std::vector<Rat>& h,
                                               const std::vector<Rat>& init,
                                               const std::vector<Rat>& b, std::size_t count) {
  const std::size_t d = h.size();
  if (init.size() < d) throw std::runtime_error("difference oracle: need d initial terms");
  std::vector<Rat> a(init.begin(), init.begin() + d);
  while (a.size() < count) {
    std::size_t i = a.size() - d;
    Rat next = i < b.size() ? b[i] : Rat(0);
    for (std::size_t j = 0; j < d; ++j) next -= h[j] * a[i + j];
    a.push_back(next);
  }
  a.resize(count);
  return a;
}

// Apply a constant-coefficient difference operator to a plain sequence:
//   (D a)_i = h_0 a_i + ... + h_{d-1} a_{i+d-1} + a_{i+d}.
// Produces as many terms as the input length supports.
inline std::vector<Rat> apply_difference(const std::vector<Rat>& h, const std::vector<Rat>& a) {
  const std::size_t d = h.size();
  if (a.size() < d + 1) return {};
  std::vector<Rat> out(a.size() - d, Rat(0));
  for (std::size_t i = 0; i + d < a.size(); ++i) {
    Rat v = a[i + d];
    for (std::size_t j = 0; j < d; ++j) v += h[j] * a[i + j];
    out[i] = v;
  }
  return out;
}

// Row/column elimination on a dense rational window, run with plain 2D
// arrays: for each row in order, take its last nonzero entry as the pivot,
// scale the row to make the pivot 1, clear the pivot's column below by row
// operations, then clear the pivot's row to the left by column operations.
// Returns the reduced window; rows whose elimination would reach outside the
// window are left as they stand once their pivot falls in the last column.
inline std::vector<std::vector<Rat>> dense_canonical_window(std::vector<std::vector<Rat>> m) {
  const std::size_t nrows = m.size();
  for (std::size_t i = 0; i < nrows; ++i) {
    const std::size_t ncols = m[i].size();
    std::size_t piv = ncols;
    for (std::size_t j = ncols; j-- > 0;)
      if (m[i][j] != 0) {
        piv = j;
        break;
      }
    if (piv == ncols) continue;  // zero row
    Rat u = m[i][piv];
    for (std::size_t j = 0; j < ncols; ++j) m[i][j] /= u;
    for (std::size_t l = i + 1; l < nrows; ++l) {
      Rat c = piv < m[l].size() ? m[l][piv] : Rat(0);
      if (c == 0) continue;
      for (std::size_t j = 0; j < ncols && j < m[l].size(); ++j) m[l][j] -= c * m[i][j];
    }
    for (std::size_t j = 0; j < piv; ++j) {
      Rat c = m[i][j];
      if (c == 0) continue;
      // Column operation col_j -= c * col_piv on the whole window.
      for (std::size_t l = 0; l < nrows; ++l)
        if (j < m[l].size() && piv < m[l].size()) m[l][j] -= c * m[l][piv];
    }
  }
  return m;
}

// ---------------------------------------------------------------------------
// Fixed-point-solver oracles.

// The unique solution of t*a + a^2 = b with a of t-order >= 2, computed by
// direct coefficient recursion on dense lists: comparing t-degrees k + 1 gives
//   a_k = b_{k+1} - sum_{i+j = k+1, i,j >= 2} a_i a_j,
// which only involves earlier a-coefficients since i, j <= k - 1.  Requires b
// of t-order >= 3 (the equation forces b_0 = b_1 = b_2 = 0 ... b_2 = a_1 = 0,
// and then a_2 = b_3 starts the recursion).  Index = exponent of t; returns
// `count` coefficients a_0..a_{count-1}.
inline std::vector<Rat> solve_shift_quadratic(const std::vector<Rat>& b, std::size_t count) {
  for (std::size_t i = 0; i < b.size() && i < 3; ++i)
    if (b[i] != 0) throw std::runtime_error("shift-quadratic oracle: b must have t-order >= 3");
  std::vector<Rat> a(count, Rat(0));
  for (std::size_t k = 2; k < count; ++k) {
    Rat v = k + 1 < b.size() ? b[k + 1] : Rat(0);
    for (std::size_t i = 2; i < k; ++i) v -= a[i] * a[k + 1 - i];
    a[k] = v;
  }
  return a;
}

// Coefficients of 1/(1 + d) for a univariate d with d_0 = 0, by the classical
// reciprocal recursion q_0 = 1, q_k = -sum_{i=1..k} d_i q_{k-i}.  Index =
// exponent of t; returns `count` coefficients.
inline std::vector<Rat> unit_reciprocal(const std::vector<Rat>& d, std::size_t count) {
  if (!d.empty() && d[0] != 0)
    throw std::runtime_error("reciprocal oracle: d must have zero constant term");
  std::vector<Rat> q(count, Rat(0));
  if (count > 0) q[0] = Rat(1);
  for (std::size_t k = 1; k < count; ++k) {
    Rat v(0);
    for (std::size_t i = 1; i <= k && i < d.size(); ++i) v -= d[i] * q[k - i];
    q[k] = v;
  }
  return q;
}

}  // namespace arcloom::oracles
