#pragma once

// Order convergence on finite prefixes, executable versions of the series
// limit theorems, convergence in T-distribution, and Poisson approximation.
//
// In R^d order convergence, uo-convergence and coordinatewise convergence of
// sequences coincide, so a tail-sup criterion in the sup norm is used
// throughout. A finite prefix is evidence, not proof: a sequence "converges"
// here when sup_{n<=m<=H} ||x_m - x|| is below tol at the horizon H.

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rieszgen/conditional.hpp"
#include "rieszgen/distributions.hpp"
#include "rieszgen/element.hpp"
#include "rieszgen/exp_series.hpp"
#include "rieszgen/genfun.hpp"

namespace rieszgen {

// Terms x_1, x_2, ...: an explicit prefix, optionally extended by a rule.
class ElementSequence {
 public:
  using Generator = std::function<Element(std::size_t n)>;

  explicit ElementSequence(std::vector<Element> terms);
  explicit ElementSequence(Generator generator, std::size_t capacity = static_cast<std::size_t>(-1));

  // 1-based term; throws std::out_of_range beyond the capacity.
  Element term(std::size_t n) const;
  std::size_t capacity() const noexcept;

 private:
  std::vector<Element> terms_;
  Generator generator_;
  std::size_t capacity_ = 0;
};

struct ConvergenceReport {
  Element limit;
  // tail_sup[n-1] = max_{n<=m<=H} ||x_m - limit||_sup, n = 1..H.
  std::vector<double> tail_sup;
  bool converged = false;
  // Order p of tail_sup(n) ~ C n^{-p}, fitted between H/2 and H.
  std::optional<double> rate_estimate;
};

ConvergenceReport order_converges(const ElementSequence& seq, const Element& limit, double tol,
                                  std::size_t horizon);

// x_{i,j} for i < rows, j < cols, plus a certified bound on the sup norm of
// the sum of all omitted terms (0 for a finite family).
struct DoubleFamily {
  std::function<Element(std::size_t i, std::size_t j)> term;
  std::size_t rows = 0;
  std::size_t cols = 0;
  double tail_bound = 0.0;
};

// Sum in diagonal order (i + j = 0, 1, ...). Throws DivergenceError when the
// tail bound is not finite or exceeds tol, PreconditionError on a negative
// term.
Element series_sum(const DoubleFamily& family, double tol = 1e-12);

struct FubiniReport {
  Element by_rows;
  Element by_columns;
  Element by_diagonals;
  bool agree = false;
};

FubiniReport fubini_check(const DoubleFamily& family, double tol = 1e-12);

// x_alpha(n) for alpha = 1..alphas, n = 0..terms-1.
struct NetFamily {
  std::function<Element(std::size_t alpha, std::size_t n)> term;
  std::function<Element(std::size_t n)> limit;  // pointwise limit in alpha
  std::size_t alphas = 0;
  std::size_t terms = 0;
};

struct LimitCheckReport {
  bool precondition_holds = true;
  std::string violation;  // set when precondition_holds is false
  // Sums sum_n x_alpha(n) against sum_n lim_alpha x_alpha(n).
  ConvergenceReport convergence;
  bool passes = false;
};

// Monotone convergence: requires 0 <= x_alpha(n) <= x_{alpha+1}(n).
LimitCheckReport monotone_limit_check(const NetFamily& family, double tol);

// Dominated convergence: requires |x_alpha(n)| <= y(n); dominator_tail bounds
// the omitted sum_{n>=terms} y(n) and is added to the tolerance.
LimitCheckReport dominated_limit_check(const NetFamily& family, const std::function<Element(std::size_t)>& dominator,
                                       double dominator_tail, double tol);

// (e + x_n / n)^n -> exp(x).
ConvergenceReport power_limit_check(const ElementSequence& seq, const Element& limit, std::size_t horizon,
                                    double tol);
// x_n -> 0 implies x_n^n -> 0 (for sequences with |x_n| < e eventually).
ConvergenceReport vanishing_power_check(const ElementSequence& seq, std::size_t horizon, double tol);

using MassSequence = std::function<MassFunction(std::size_t n)>;
using GenFunSequence = std::function<GenFun(std::size_t n)>;

struct TDistReport {
  std::vector<ConvergenceReport> per_k;  // k = 0..k_max
  bool converged = false;
};

TDistReport tdist_converges(const MassSequence& seq, const MassFunction& target, unsigned k_max,
                            std::size_t horizon, double tol);

struct EquivalenceReport {
  bool genfun_converges = false;  // pointwise on the s-grid
  bool tdist_converges = false;   // masses for k <= k_max
  bool consistent = false;        // both or neither
};

EquivalenceReport genfun_equivalence_check(const GenFunSequence& seq, const GenFun& target,
                                           const std::vector<double>& s_grid, unsigned k_max,
                                           std::size_t horizon, double tol);

struct PoissonApproxRow {
  unsigned n = 0;
  unsigned k = 0;
  std::size_t block = 0;
  double binomial_mass = 0.0;
  double poisson_mass = 0.0;
  double abs_err = 0.0;
};

struct PoissonApproxResult {
  std::vector<PoissonApproxRow> rows;  // sorted by (n, k, block)
  std::vector<unsigned> n_list;
  std::vector<double> err;             // max over k and blocks, per n
  std::vector<double> le_cam_threshold;  // (max g)^2 / n
  bool within_threshold = false;
  bool strictly_decreasing = false;
};

// Binomial(n, g/n) against Poisson(g) for k <= k_max. Requires g in R(T),
// g > 0 and g/n < e for every n (DomainError otherwise). Work is split over
// `workers` threads; results do not depend on the worker count.
PoissonApproxResult poisson_limit_experiment(const ConditionalTriple& triple, const Element& g,
                                             const std::vector<unsigned>& n_list, unsigned k_max,
                                             unsigned workers = 1);

struct CompoundPoissonReport {
  double max_abs_err = 0.0;  // compound masses vs Poisson(p g), k <= k_max
  bool matches = false;
};

CompoundPoissonReport compound_poisson_check(const ConditionalTriple& triple, const Element& g, const Element& p,
                                             unsigned k_max = 20, double tol = 1e-10);

}  // namespace rieszgen
