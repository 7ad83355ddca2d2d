#include "rieszgen/bounds.hpp"

#include <cmath>
#include <limits>

#include "rieszgen/calculus.hpp"
#include "rieszgen/error.hpp"
#include "rieszgen/exp_series.hpp"

namespace rieszgen {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

TailBoundReport make_report(double alpha, double s, Element lhs, Element rhs) {
  Element slack = rhs - lhs;
  return TailBoundReport{alpha, s, std::move(lhs), std::move(rhs), std::move(slack)};
}

Element upper_tail(const ConditionalTriple& triple, const NaturalElement& x, const Element& u) {
  return triple.expect(indicator(proj_geq(x.element(), u)));
}

Element lower_tail(const ConditionalTriple& triple, const NaturalElement& x, const Element& u) {
  return triple.expect(indicator(proj_leq(x.element(), u)));
}

// g(s) / s^alpha on one block.
double block_rhs(const GenFun& g, double alpha, double s, std::size_t coordinate) {
  return eval(g, s)[coordinate] / std::pow(s, alpha);
}

}  // namespace

bool TailBoundReport::holds(double tol) const {
  for (double v : slack.values()) {
    if (v < -tol) return false;
  }
  return true;
}

TailBoundReport chernoff_upper(const ConditionalTriple& triple, const GenFun& g, double alpha, double s,
                               const NaturalElement& x) {
  if (!(s > 1.0) || !std::isfinite(s)) throw DomainError("chernoff_upper requires s > 1");
  if (!(alpha >= 0.0)) throw DomainError("chernoff_upper requires alpha >= 0");
  const std::size_t d = triple.dim();
  Element lhs = upper_tail(triple, x, Element::constant(d, alpha));
  Element rhs = (1.0 / std::pow(s, alpha)) * eval(g, s);
  return make_report(alpha, s, std::move(lhs), std::move(rhs));
}

TailBoundReport chernoff_lower(const ConditionalTriple& triple, const GenFun& g, double alpha, double s,
                               const NaturalElement& x) {
  if (!(s > 0.0 && s < 1.0)) throw DomainError("chernoff_lower requires 0 < s < 1");
  if (!(alpha >= 0.0)) throw DomainError("chernoff_lower requires alpha >= 0");
  const std::size_t d = triple.dim();
  Element lhs = lower_tail(triple, x, Element::constant(d, alpha));
  Element rhs = (1.0 / std::pow(s, alpha)) * eval(g, s);
  return make_report(alpha, s, std::move(lhs), std::move(rhs));
}

TailBoundReport chernoff_general(const ConditionalTriple& triple, const GenFun& g, const Element& u,
                                 double s, const NaturalElement& x) {
  if (!triple.in_range(u)) throw DomainError("u must lie in R(T)", "not_in_range");
  if (!(s > 0.0) || s == 1.0 || !std::isfinite(s)) {
    throw DomainError("chernoff_general requires s > 1 or 0 < s < 1");
  }
  Element lhs = s > 1.0 ? upper_tail(triple, x, u) : lower_tail(triple, x, u);
  Element rhs = multiply(power_element(s, -u), eval(g, s));
  return make_report(kNaN, s, std::move(lhs), std::move(rhs));
}

OptimizedBound optimize_bound(const ConditionalTriple& triple, const GenFun& g, double alpha, TailMode mode,
                              const NaturalElement& x, double s_max, double s_min) {
  const bool upper = mode == TailMode::upper;
  if (upper && !(s_max > 1.0)) throw DomainError("optimize_bound requires s_max > 1");
  if (!upper && !(s_min > 0.0 && s_min < 1.0)) throw DomainError("optimize_bound requires 0 < s_min < 1");

  // Search in t = log s over (0, log s_max] or [log s_min, 0).
  const double lo = upper ? 0.0 : std::log(s_min);
  const double hi = upper ? std::log(s_max) : 0.0;
  constexpr int kGrid = 32;
  constexpr int kGoldenIterations = 80;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;

  std::vector<double> best_s(triple.block_count());
  ElementBuilder rhs(triple.dim());
  for (std::size_t b = 0; b < triple.block_count(); ++b) {
    const std::size_t at = triple.partition()[b].front();
    auto f = [&](double t) { return block_rhs(g, alpha, std::exp(t), at); };

    // Grid excludes the open endpoint s = 1.
    double best_t = 0.0;
    double best_v = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= kGrid; ++k) {
      const double t = upper ? lo + (hi - lo) * k / kGrid : lo + (hi - lo) * (k - 1) / kGrid;
      const double v = f(t);
      if (v < best_v) {
        best_v = v;
        best_t = t;
      }
    }
    // log g(e^t) - alpha t is convex in t, so the minimum is bracketed by the
    // grid neighbours of the best grid point.
    const double step = (hi - lo) / kGrid;
    double a = std::max(lo + (upper ? step * 1e-9 : 0.0), best_t - step);
    double c = std::min(hi - (upper ? 0.0 : step * 1e-9), best_t + step);
    double x1 = c - inv_phi * (c - a);
    double x2 = a + inv_phi * (c - a);
    double f1 = f(x1);
    double f2 = f(x2);
    for (int it = 0; it < kGoldenIterations; ++it) {
      if (f1 < f2) {
        c = x2;
        x2 = x1;
        f2 = f1;
        x1 = c - inv_phi * (c - a);
        f1 = f(x1);
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + inv_phi * (c - a);
        f2 = f(x2);
      }
    }
    const double t_star = f1 < f2 ? x1 : x2;
    const double v_star = std::min(f1, f2);
    if (v_star < best_v && t_star != 0.0) {
      best_v = v_star;
      best_t = t_star;
    }
    best_s[b] = std::exp(best_t);
    for (std::size_t i : triple.partition()[b]) rhs[i] = best_v;
  }

  const std::size_t d = triple.dim();
  const Element threshold = Element::constant(d, alpha);
  Element lhs = upper ? upper_tail(triple, x, threshold) : lower_tail(triple, x, threshold);
  return OptimizedBound{std::move(best_s), make_report(alpha, kNaN, std::move(lhs), std::move(rhs).build())};
}

double e_norm(const Element& f) { return sup_norm(f); }

Element bernoulli_sum_rhs(unsigned n, const Element& f, double t) {
  const double norm = e_norm(f);
  if (!(t > n * norm)) throw DomainError("bernoulli_sum_bound requires t > n ||f||_e");
  const double scalar = exp_series(t) * std::pow(n * norm / t, t);
  return scalar * exp_element(-static_cast<double>(n) * f);
}

TailBoundReport bernoulli_sum_bound(const ConditionalTriple& triple, unsigned n, const Element& f, double t,
                                    const NaturalElement& sum) {
  require_same_dim(triple.dim(), f.dim(), "bernoulli_sum_bound");
  require_same_dim(triple.dim(), sum.dim(), "bernoulli_sum_bound");
  Element rhs = bernoulli_sum_rhs(n, f, t);
  // band of (S_n - te)^+ is P_{S_n > te}
  Element lhs = triple.expect(indicator(band_of(pos_part(sum.element() - Element::constant(triple.dim(), t)))));
  return make_report(t, kNaN, std::move(lhs), std::move(rhs));
}

}  // namespace rieszgen
