#pragma once

// T-generating functions g_x(s) = sum_n s^n T P_{x=ne} e and the
// generalized form g~_x(u) = sum_n T P_{x=ne} e . u^n, their derivatives and
// factorial moments, products for independent sums, and random-index sums.

#include <optional>
#include <variant>
#include <vector>

#include "rieszgen/conditional.hpp"
#include "rieszgen/distributions.hpp"
#include "rieszgen/element.hpp"

namespace rieszgen {

struct BernoulliForm {
  Element p;  // g(s) = s p + e - p
};
struct BinomialForm {
  unsigned n;
  Element p;  // g(s) = (s p + e - p)^n
};
struct PoissonForm {
  Element g;  // g(s) = exp((s - 1) g)
};
using ClosedForm = std::variant<BernoulliForm, BinomialForm, PoissonForm>;

// Absolute tolerance certified for series truncations inside this module.
inline constexpr double kSeriesTolerance = 1e-13;

class GenFun {
 public:
  explicit GenFun(MassFunction coefficients, std::optional<ClosedForm> closed_form = std::nullopt);

  // delta at 0: the generating function of x = 0.
  static GenFun unit(std::size_t dim);
  static GenFun from_family(const ConditionalTriple& triple, const Family& family);

  const MassFunction& coefficients() const noexcept { return coeffs_; }
  const std::optional<ClosedForm>& closed_form() const noexcept { return closed_; }
  std::size_t dim() const noexcept { return coeffs_.dim(); }

 private:
  MassFunction coeffs_;
  std::optional<ClosedForm> closed_;
};

// Tags realized Bernoulli elements (max value <= 1) with BernoulliForm.
GenFun gen_from_element(const ConditionalTriple& triple, const NaturalElement& x);

// Closed form when tagged or intrinsic (Poisson, compound), otherwise the
// coefficient series. Throws DomainError for s < 0.
Element eval(const GenFun& g, double s);
// Always the coefficient series, truncated with a certified tail bound; throws
// DivergenceError when the tail cannot be certified.
Element eval_series(const GenFun& g, double s);
Element eval_closed_form(const ClosedForm& form, double s);

// sum_n pi(n) u^n for u >= 0 (series path).
Element eval_generalized(const GenFun& g, const Element& u);
Element eval_generalized(const MassFunction& m, const Element& u);

// T s^x.
Element eval_via_power(const ConditionalTriple& triple, const NaturalElement& x, double s);

// k-th derivative for s in [0, 1).
Element derivative(const GenFun& g, unsigned k, double s);

// sum_{k>=n} k(k-1)...(k-n+1) pi(k), the n-th left derivative at 1.
Element factorial_moment(const GenFun& g, unsigned n);
Element mean(const GenFun& g);
Element second_moment(const GenFun& g);
Element variance(const GenFun& g);

// sum_{n>=1} T P_{x>=ne} e.
Element mean_via_tail(const ConditionalTriple& triple, const NaturalElement& x);

// Generating function of x + y for independent x, y: the f-algebra
// convolution of coefficients. Finite x finite and Poisson x Poisson only.
GenFun product(const GenFun& g1, const GenFun& g2);

// x_N = sum_{n>=1} P_{N=ne} x_n. xs[0] must be 0 and xs must cover every
// attained value of N (PreconditionError otherwise).
NaturalElement random_index_element(const ConditionalTriple& triple, const NaturalElement& N,
                                    const std::vector<NaturalElement>& xs);
// S_N = sum_{k>=1} P_{N>=ke} x_k.
NaturalElement random_index_sum(const ConditionalTriple& triple, const NaturalElement& N,
                                const std::vector<NaturalElement>& xs);

// g_{S_N} = g~_N o g_x for x_1, x_2, ... T-independent of N and distributed
// as gx (caller obligation, not checked). gx must have finite support.
GenFun compose(const GenFun& gN, const GenFun& gx);

// TS_N = TN . Tx
Element compound_mean(const GenFun& gN, const GenFun& gx);
// Var S_N = TN . Var x + Var N . (Tx)^2
Element compound_variance(const GenFun& gN, const GenFun& gx);

// g_{x_N}(s) = pi_N(0) + (e - pi_N(0)) g_x(s). gx must have finite support.
GenFun genfun_of_random_index(const GenFun& gN, const GenFun& gx);

}  // namespace rieszgen
