#pragma once

#include <random>

#include "arcloom/series.hpp"

namespace arcloom {

// Deterministic seeded sampling for audits, probes, and tests.  All draws go
// through the raw mt19937_64 stream with modulo reduction, so identical seeds
// give identical values on every platform.
class Sampler {
public:
  explicit Sampler(unsigned long long seed) : g_(seed) {}

  unsigned long long raw() { return g_(); }

  // Uniform integer in [lo, hi] (inclusive).
  long uniform(long lo, long hi) {
    require_internal(lo <= hi, "empty sampling range");
    unsigned long long span = static_cast<unsigned long long>(hi - lo) + 1;
    return lo + static_cast<long>(g_() % span);
  }

  // Small nonzero rational with numerator in [-num_range, num_range] and
  // denominator in [1, den_range].  Canonicalized: gmp requires reduced
  // form as an invariant of every mpq operation.
  Rat nonzero_rat(long num_range = 9, long den_range = 4) {
    long num = 0;
    while (num == 0) num = uniform(-num_range, num_range);
    Rat r(num, uniform(1, den_range));
    r.canonicalize();
    return r;
  }

  // Ring element; with_nil draws an extra nilpotent part when the ring has
  // one.  Never returns zero.
  RElem relem(const Ring& ring, bool with_nil = true) {
    RElem r = RElem::from_rat(nonzero_rat());
    if (with_nil && ring.nil_index > 1 && uniform(0, 1) == 1) {
      unsigned k = static_cast<unsigned>(uniform(1, ring.nil_index - 1));
      r = radd(r, rmul_rat(RElem::eps(k), nonzero_rat()));
    }
    return r;
  }

  // Random polynomial with `terms` attempted terms, each of weight in
  // [min_order, max_weight]; infinite validity.  May have fewer stored terms
  // when draws collide.  Guaranteed nonzero when terms > 0 and the weight
  // window is inhabited.
  Series poly(const CtxPtr& ctx, const Rat& min_order, const Rat& max_weight, int terms) {
    Series s = series_zero(ctx);
    int placed = 0;
    for (int attempt = 0; attempt < terms * 64 && placed < terms; ++attempt) {
      Exp a(ctx->nvars);
      for (unsigned i = 0; i < ctx->nvars; ++i) {
        long cap = ceil_to_long(max_weight / ctx->L[i]);
        a[i] = static_cast<unsigned>(uniform(0, cap));
      }
      Rat w = exp_weight(*ctx, a);
      if (w < min_order || w > max_weight) continue;
      s.set_coeff(a, relem(ctx->ring));
      ++placed;
    }
    return s;
  }

  SeriesVec poly_vec(const CtxPtr& ctx, std::size_t m, const Rat& min_order, const Rat& max_weight,
                     int terms) {
    SeriesVec r;
    r.v.reserve(m);
    for (std::size_t i = 0; i < m; ++i) r.v.push_back(poly(ctx, min_order, max_weight, terms));
    return r;
  }

private:
  std::mt19937_64 g_;
};

}  // namespace arcloom
