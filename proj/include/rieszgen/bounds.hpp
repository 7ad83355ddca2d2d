#pragma once

// Chernoff-type tail bounds through the T-generating function:
//
//   T P_{x>=ae} e <= g_x(s) / s^a   for s > 1,
//   T P_{x<=ae} e <= g_x(s) / s^a   for 0 < s < 1,
//
// the block-dependent version with u in R(T) (rhs s^{-u} g_x(s)), and the
// bound for sums of n Bernoulli elements with T P_j e = f:
//
//   T P_{(S_n - te)^+} e <= e^t (n ||f||_e / t)^t exp(-n f),  t > n ||f||_e.

#include <vector>

#include "rieszgen/conditional.hpp"
#include "rieszgen/distributions.hpp"
#include "rieszgen/genfun.hpp"

namespace rieszgen {

struct TailBoundReport {
  double alpha = 0.0;     // scalar threshold (NaN when a block-dependent u was used)
  double s = 0.0;         // NaN when s varies per block (optimized bounds)
  Element lhs;            // tail probability
  Element rhs;            // bound
  Element slack;          // rhs - lhs

  bool holds(double tol = 1e-12) const;
};

// Requires s > 1 (DomainError otherwise).
TailBoundReport chernoff_upper(const ConditionalTriple& triple, const GenFun& g, double alpha, double s,
                               const NaturalElement& x);
// Requires 0 < s < 1.
TailBoundReport chernoff_lower(const ConditionalTriple& triple, const GenFun& g, double alpha, double s,
                               const NaturalElement& x);

// u must lie in R(T) ("not_in_range" DomainError). For s > 1 bounds
// T P_{x>=u} e, for 0 < s < 1 bounds T P_{x<=u} e; rhs = s^{-u} g_x(s) in both.
TailBoundReport chernoff_general(const ConditionalTriple& triple, const GenFun& g, const Element& u,
                                 double s, const NaturalElement& x);

enum class TailMode { upper, lower };

struct OptimizedBound {
  std::vector<double> s_per_block;
  TailBoundReport report;
};

// Per-block minimization of g(s)/s^alpha: a coarse grid followed by
// golden-section refinement on log s, over (1, s_max] for the upper tail or
// [s_min, 1) for the lower tail. The result is never worse than any grid
// point tried.
OptimizedBound optimize_bound(const ConditionalTriple& triple, const GenFun& g, double alpha, TailMode mode,
                              const NaturalElement& x, double s_max = 64.0, double s_min = 1.0 / 64.0);

// inf{b : |f| <= b e}.
double e_norm(const Element& f);

// S_n must be the sum of n T-independent Bernoulli elements with
// T P_j e = f. lhs = T P_{S_n > te} e, rhs = e^t (n ||f||_e / t)^t exp(-n f).
// Throws DomainError unless t > n ||f||_e.
TailBoundReport bernoulli_sum_bound(const ConditionalTriple& triple, unsigned n, const Element& f, double t,
                                    const NaturalElement& sum);

// The rhs alone.
Element bernoulli_sum_rhs(unsigned n, const Element& f, double t);

}  // namespace rieszgen
