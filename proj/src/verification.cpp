#include "rieszgen/verification.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numeric>
#include <random>

#include "rieszgen/bounds.hpp"
#include "rieszgen/calculus.hpp"
#include "rieszgen/convergence.hpp"
#include "rieszgen/error.hpp"
#include "rieszgen/genfun.hpp"
#include "rieszgen/oracle.hpp"

namespace rieszgen::verify {

namespace {

using Rng = std::mt19937_64;
constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Outcome {
  bool passed = false;
  std::string detail;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

ConditionalTriple random_triple(Rng& rng, std::size_t dim, std::size_t blocks) {
  blocks = std::clamp<std::size_t>(blocks, 1, dim);
  std::vector<std::size_t> order(dim);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  Partition partition(blocks);
  for (std::size_t i = 0; i < dim; ++i) {
    partition[i < blocks ? i : pick(rng, 0, blocks - 1)].push_back(order[i]);
  }
  for (auto& b : partition) std::sort(b.begin(), b.end());
  std::vector<double> weights(dim);
  for (auto& w : weights) w = uniform(rng, 0.5, 2.0);
  return ConditionalTriple(std::move(weights), std::move(partition));
}

ConditionalTriple random_triple(Rng& rng, std::size_t max_dim, std::size_t max_blocks, std::size_t min_dim) {
  const std::size_t dim = pick(rng, min_dim, max_dim);
  return random_triple(rng, dim, pick(rng, 1, std::min(dim, max_blocks)));
}

Element random_block_constant(Rng& rng, const ConditionalTriple& t, double lo, double hi) {
  std::vector<double> v(t.block_count());
  for (auto& x : v) x = uniform(rng, lo, hi);
  return t.from_block_values(v);
}

NaturalElement random_natural(Rng& rng, std::size_t dim, unsigned max_value) {
  std::vector<double> v(dim);
  for (auto& x : v) x = static_cast<double>(pick(rng, 0, max_value));
  return NaturalElement(Element(std::move(v)));
}

oracle::RandomVariable rv(const Element& x) { return {x.values().begin(), x.values().end()}; }
oracle::RandomVariable rv(const NaturalElement& x) { return rv(x.element()); }

// max_i |a_i - b_i| / max(1, |b_i|)
double rel_error(const Element& a, const Element& b) {
  require_same_dim(a.dim(), b.dim(), "rel_error");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    worst = std::max(worst, std::fabs(a[i] - b[i]) / std::max(1.0, std::fabs(b[i])));
  }
  return worst;
}

double abs_error(const Element& a, const Element& b) { return sup_norm(a - b); }

NaturalElement sum_of(const std::vector<NaturalElement>& xs) {
  NaturalElement s = xs.front();
  for (std::size_t i = 1; i < xs.size(); ++i) s = s + xs[i];
  return s;
}

std::vector<double> tenths() {
  std::vector<double> grid;
  for (int k = 0; k <= 10; ++k) grid.push_back(k / 10.0);
  return grid;
}

// 1. Closed-form generating functions of realized Bernoulli / Binomial
//    elements and of Poisson mass functions.
Outcome closed_forms(Rng& rng) {
  double worst_finite = 0.0;
  double worst_poisson = 0.0;
  const auto grid = tenths();
  for (int inst = 0; inst < 50; ++inst) {
    const ConditionalTriple triple = random_triple(rng, 6, 3, 1);
    const Element p = random_block_constant(rng, triple, 0.05, 0.95);
    const unsigned n = static_cast<unsigned>(pick(rng, 1, 10));

    const BernoulliRealization br = realize_bernoulli(triple, p);
    const GenFun gb = gen_from_element(br.triple, br.x);
    const Element pb = br.base(p);
    const Element eb = Element::unit(br.triple.dim());

    const IidRealization iid = realize_iid(triple, Bernoulli{p}, n);
    const GenFun gs = gen_from_element(iid.triple, sum_of(iid.elements));
    const Element ps = iid.base(p);
    const Element es = Element::unit(iid.triple.dim());

    const Element g = random_block_constant(rng, triple, 0.1, 8.0);
    const GenFun gp = GenFun::from_family(triple, Poisson{g});

    for (double s : grid) {
      worst_finite = std::max(worst_finite, abs_error(eval_series(gb, s), s * pb + eb - pb));
      worst_finite = std::max(worst_finite, abs_error(eval_series(gs, s), integer_power(s * ps + es - ps, n)));
      std::vector<double> closed(triple.dim());
      for (std::size_t i = 0; i < closed.size(); ++i) closed[i] = std::exp((s - 1.0) * g[i]);
      worst_poisson = std::max(worst_poisson, abs_error(eval_series(gp, s), Element(closed)));
    }
  }
  return {worst_finite <= 1e-12 && worst_poisson <= 1e-10,
          fmt("bernoulli/binomial max err %.3g (tol 1e-12), poisson max err %.3g (tol 1e-10)", worst_finite,
              worst_poisson)};
}

// 2. g_x(s) = T s^x.
Outcome genfun_is_power(Rng& rng) {
  std::vector<double> grid = tenths();
  grid.insert(grid.end(), {1.5, 2.0, 3.0});
  double worst = 0.0;
  double worst_oracle = 0.0;
  for (int inst = 0; inst < 200; ++inst) {
    const ConditionalTriple triple = random_triple(rng, 64, 8, 1);
    const NaturalElement x = random_natural(rng, triple.dim(), static_cast<unsigned>(pick(rng, 0, 9)));
    const GenFun g = gen_from_element(triple, x);
    const auto space = oracle::from_triple(triple);
    for (double s : grid) {
      const Element a = eval(g, s);
      worst = std::max(worst, rel_error(a, eval_via_power(triple, x, s)));
      worst_oracle = std::max(worst_oracle, rel_error(a, oracle::genfun(space, rv(x), s)));
    }
  }
  return {worst <= 1e-12 && worst_oracle <= 1e-12,
          fmt("eval vs T s^x max rel err %.3g, vs oracle %.3g (tol 1e-12)", worst, worst_oracle)};
}

// 3. g_{x+y} = g_x g_y for independent x, y on product spaces.
Outcome product_rule(Rng& rng) {
  double worst = 0.0;
  double worst_oracle = 0.0;
  bool independent = true;
  for (int inst = 0; inst < 20; ++inst) {
    const ConditionalTriple t1 = random_triple(rng, 64, 4, 1);
    const ConditionalTriple t2 = random_triple(rng, 4096 / t1.dim(), 4, 1);
    const NaturalElement x = random_natural(rng, t1.dim(), static_cast<unsigned>(pick(rng, 0, 5)));
    const NaturalElement y = random_natural(rng, t2.dim(), static_cast<unsigned>(pick(rng, 0, 5)));
    const ProductSpace ps = product_space(t1, t2);
    const NaturalElement X(ps.lift1(x.element()));
    const NaturalElement Y(ps.lift2(y.element()));
    independent = independent && check_elements_independent(ps.triple, X.element(), Y.element());

    const NaturalElement S = X + Y;
    const GenFun direct = gen_from_element(ps.triple, S);
    const GenFun prod = product(gen_from_element(ps.triple, X), gen_from_element(ps.triple, Y));
    const unsigned count = S.max_value() + 1;
    const auto a = direct.coefficients().coefficients(count);
    const auto b = prod.coefficients().coefficients(count);
    const auto o = oracle::distribution(oracle::from_triple(ps.triple), rv(S));
    for (unsigned k = 0; k < count; ++k) {
      worst = std::max(worst, abs_error(a[k], b[k]));
      worst_oracle = std::max(worst_oracle, abs_error(b[k], o[k]));
    }
  }
  return {independent && worst <= 1e-12 && worst_oracle <= 1e-12,
          fmt("factors independent: %s, coefficient err %.3g, vs oracle %.3g (tol 1e-12)",
              independent ? "yes" : "no", worst, worst_oracle)};
}

// Block-constant finite law with dyadic masses a_k / denom.
MassFunction dyadic_law(Rng& rng, const ConditionalTriple& triple, unsigned support, unsigned denom) {
  std::vector<std::vector<double>> per_block(support, std::vector<double>(triple.block_count()));
  for (std::size_t b = 0; b < triple.block_count(); ++b) {
    std::vector<unsigned> cuts{0, denom};
    for (unsigned k = 1; k < support; ++k) cuts.push_back(static_cast<unsigned>(pick(rng, 0, denom)));
    std::sort(cuts.begin(), cuts.end());
    for (unsigned k = 0; k < support; ++k) per_block[k][b] = static_cast<double>(cuts[k + 1] - cuts[k]) / denom;
  }
  std::vector<Element> coeffs;
  for (const auto& v : per_block) coeffs.push_back(triple.from_block_values(v));
  return MassFunction::finite(std::move(coeffs));
}

// 4. Random-index sums S_N with N on {0..4} and i.i.d. summands.
Outcome compound_identities(Rng& rng) {
  const std::vector<ConditionalTriple> desks{
      ConditionalTriple::canonical(), ConditionalTriple::trivial(2), ConditionalTriple::discrete(2),
      ConditionalTriple({1, 1, 1, 1}, {{0, 1, 2, 3}}), ConditionalTriple({1, 1}, {{0}, {1}})};
  double worst_mass = 0.0;
  double worst_moment = 0.0;
  bool wald = true;
  for (int inst = 0; inst < 10; ++inst) {
    const ConditionalTriple& triple = desks[inst % desks.size()];
    const MassFunction n_law = dyadic_law(rng, triple, 5, 16);
    const MassFunction x_law = dyadic_law(rng, triple, 4, 8);
    IidRealization r = realize_iid(triple, n_law, 1);
    for (int i = 0; i < 4; ++i) r = adjoin(r, x_law);
    const NaturalElement& N = r.elements[0];
    std::vector<NaturalElement> xs{NaturalElement(Element::zero(r.triple.dim()))};
    std::vector<oracle::RandomVariable> oxs;
    for (int i = 1; i <= 4; ++i) {
      xs.push_back(r.elements[i]);
      oxs.push_back(rv(r.elements[i]));
    }
    const NaturalElement S = random_index_sum(r.triple, N, xs);

    const GenFun gN = gen_from_element(r.triple, N);
    const GenFun gx = gen_from_element(r.triple, r.elements[1]);
    const GenFun gS = compose(gN, gx);

    const auto space = oracle::from_triple(r.triple);
    const auto s_oracle = oracle::random_sum(rv(N), oxs);
    const auto dist = oracle::distribution(space, s_oracle);
    const auto coeffs = gS.coefficients().coefficients(static_cast<unsigned>(dist.size()) + 2);
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
      const Element want = k < dist.size() ? dist[k] : Element::zero(r.triple.dim());
      worst_mass = std::max(worst_mass, abs_error(coeffs[k], want));
    }
    worst_moment = std::max(worst_moment, rel_error(compound_mean(gN, gx), oracle::cond_expect(space, s_oracle)));
    worst_moment =
        std::max(worst_moment, rel_error(compound_variance(gN, gx), oracle::cond_variance(space, s_oracle)));
    // Dyadic weights and masses keep every sum exact.
    const Element lhs = r.triple.expect(S.element());
    const Element rhs = multiply(r.triple.expect(N.element()), r.triple.expect(r.elements[1].element()));
    wald = wald && lhs == rhs;
  }
  return {worst_mass <= 1e-10 && worst_moment <= 1e-10 && wald,
          fmt("compose masses err %.3g, mean/variance rel err %.3g (tol 1e-10), Wald exact: %s", worst_mass,
              worst_moment, wald ? "yes" : "no")};
}

// 5. Chernoff sweeps and the bound for Bernoulli sums.
Outcome chernoff_sweeps(Rng& rng) {
  const std::vector<double> uppers{1.25, 1.5, 2.0, 3.0, 5.0, 8.0};
  const std::vector<double> lowers{0.05, 0.25, 0.5, 0.75, 0.95};
  double worst_slack = 0.0;  // most negative slack seen
  double worst_lhs = 0.0;    // lhs vs oracle
  bool optimized_ok = true;
  std::size_t reports = 0;
  auto record = [&](const TailBoundReport& r) {
    for (double v : r.slack.values()) worst_slack = std::min(worst_slack, v);
    ++reports;
  };
  for (int inst = 0; inst < 100; ++inst) {
    const ConditionalTriple triple = random_triple(rng, 16, 4, 1);
    const NaturalElement x = random_natural(rng, triple.dim(), static_cast<unsigned>(pick(rng, 0, 6)));
    const GenFun g = gen_from_element(triple, x);
    const auto space = oracle::from_triple(triple);
    for (int a2 = 0; a2 <= 14; ++a2) {
      const double alpha = a2 / 2.0;
      const Element up_truth = oracle::cond_prob(space, oracle::geq_event(rv(x), alpha));
      const Element low_truth = oracle::cond_prob(space, oracle::leq_event(rv(x), alpha));
      for (double s : uppers) {
        const auto r = chernoff_upper(triple, g, alpha, s, x);
        record(r);
        worst_lhs = std::max(worst_lhs, abs_error(r.lhs, up_truth));
      }
      for (double s : lowers) {
        const auto r = chernoff_lower(triple, g, alpha, s, x);
        record(r);
        worst_lhs = std::max(worst_lhs, abs_error(r.lhs, low_truth));
      }
    }
    const Element u = triple.from_block_values([&] {
      std::vector<double> v(triple.block_count());
      for (auto& c : v) c = static_cast<double>(pick(rng, 0, 7));
      return v;
    }());
    record(chernoff_general(triple, g, u, 2.0, x));
    record(chernoff_general(triple, g, u, 0.5, x));
    const double alpha = static_cast<double>(pick(rng, 0, 6));
    const auto opt = optimize_bound(triple, g, alpha, TailMode::upper, x);
    record(opt.report);
    optimized_ok = optimized_ok && leq(opt.report.rhs, chernoff_upper(triple, g, alpha, 2.0, x).rhs);
  }

  for (unsigned n = 2; n <= 12; ++n) {
    for (double c : {0.2, 0.5}) {
      const ConditionalTriple base = ConditionalTriple::canonical();
      const Element f = Element::constant(base.dim(), c);
      const IidRealization iid = realize_iid(base, Bernoulli{f}, n);
      const NaturalElement S = sum_of(iid.elements);
      const Element lifted = iid.base(f);
      const auto space = oracle::from_triple(iid.triple);
      std::vector<double> ts;
      for (double m : {1.01, 1.25, 1.5, 2.0, 3.0}) ts.push_back(m * n * c);
      ts.push_back(n + 0.5);
      for (double t : ts) {
        const auto r = bernoulli_sum_bound(iid.triple, n, lifted, t, S);
        record(r);
        worst_lhs = std::max(worst_lhs, abs_error(r.lhs, oracle::cond_prob(space, oracle::gt_event(rv(S), t))));
      }
    }
  }
  return {worst_slack >= -1e-12 && worst_lhs <= 1e-12 && optimized_ok,
          fmt("%zu reports, min slack %.3g (tol -1e-12), lhs vs oracle %.3g, optimized <= s=2: %s", reports,
              worst_slack, worst_lhs, optimized_ok ? "yes" : "no")};
}

// 6. Factorial moments and the difference quotient at 1.
Outcome moments_and_derivatives(Rng& rng) {
  double worst = 0.0;
  bool monotone = true;
  double worst_gap = 0.0;  // excess of the final gap over its bound
  for (int inst = 0; inst < 50; ++inst) {
    const ConditionalTriple triple = random_triple(rng, 32, 6, 1);
    const NaturalElement x = random_natural(rng, triple.dim(), static_cast<unsigned>(pick(rng, 0, 6)));
    const GenFun g = gen_from_element(triple, x);
    const auto space = oracle::from_triple(triple);
    const std::size_t d = triple.dim();
    Element falling = Element::unit(d);
    for (unsigned n = 1; n <= 4; ++n) {
      falling = multiply(falling, x.element() - Element::constant(d, n - 1.0));
      const Element fm = factorial_moment(g, n);
      worst = std::max(worst, rel_error(fm, triple.expect(falling)));
      worst = std::max(worst, rel_error(fm, oracle::factorial_moment(space, rv(x), n)));
    }
    const Element m = mean(g);
    const Element fm2 = factorial_moment(g, 2);
    std::vector<double> prev(d, -std::numeric_limits<double>::infinity());
    double s = 0.0;
    Element q = Element::zero(d);
    for (int j = 1; j <= 20; ++j) {
      s = 1.0 - std::ldexp(1.0, -j);
      q = (1.0 / (1.0 - s)) * (Element::unit(d) - eval(g, s));
      const double slack = 4.0 * kEps / (1.0 - s);
      for (std::size_t i = 0; i < d; ++i) {
        if (q[i] < prev[i] - slack) monotone = false;
        prev[i] = q[i];
      }
    }
    const double slack = 4.0 * kEps / (1.0 - s);
    for (std::size_t i = 0; i < d; ++i) {
      const double gap = m[i] - q[i];
      const double bound = (1.0 - s) * fm2[i] / 2.0 + 1e-9;
      worst_gap = std::max({worst_gap, -gap - slack, gap - bound - slack});
    }
  }
  return {worst <= 1e-12 && monotone && worst_gap <= 0.0,
          fmt("factorial moments max rel err %.3g (tol 1e-12), quotient monotone: %s, limit gap excess %.3g",
              worst, monotone ? "yes" : "no", worst_gap)};
}

// 7. Binomial(n, g/n) against Poisson(g).
Outcome poisson_approximation(const Options& options) {
  std::string detail;
  bool ok = true;
  const ConditionalTriple triple = ConditionalTriple::canonical();
  for (double c : {0.5, 1.0, 2.0}) {
    const auto r = poisson_limit_experiment(triple, Element::constant(triple.dim(), c), {10, 50, 100, 500}, 20,
                                            options.workers);
    ok = ok && r.within_threshold && r.strictly_decreasing;
    detail += fmt("g=%g: err %.3g %.3g %.3g %.3g%s; ", c, r.err[0], r.err[1], r.err[2], r.err[3],
                  r.within_threshold && r.strictly_decreasing ? "" : " FAIL");
  }
  detail += "threshold (max g)^2/n";
  return {ok, detail};
}

// 8. Thinning a Poisson law by Bernoulli summands.
Outcome compound_poisson(Rng& rng) {
  double worst = 0.0;
  bool ok = true;
  for (int inst = 0; inst < 20; ++inst) {
    const ConditionalTriple triple = random_triple(rng, 8, 3, 1);
    const Element p = random_block_constant(rng, triple, 0.05, 0.95);
    const Element g = random_block_constant(rng, triple, 0.1, 6.0);
    const auto r = compound_poisson_check(triple, g, p, 20, 1e-10);
    ok = ok && r.matches;
    worst = std::max(worst, r.max_abs_err);
  }
  return {ok, fmt("max |compound - Poisson(pg)| %.3g over k <= 20 (tol 1e-10)", worst)};
}

MassFunction random_finite_law(Rng& rng, const ConditionalTriple& triple, unsigned support) {
  std::vector<std::vector<double>> per_block(support, std::vector<double>(triple.block_count()));
  for (std::size_t b = 0; b < triple.block_count(); ++b) {
    double total = 0.0;
    for (unsigned k = 0; k < support; ++k) total += per_block[k][b] = uniform(rng, 0.1, 1.0);
    for (unsigned k = 0; k < support; ++k) per_block[k][b] /= total;
  }
  // Renormalize the last coefficient so that the sum is e to rounding.
  for (std::size_t b = 0; b < triple.block_count(); ++b) {
    double head = 0.0;
    for (unsigned k = 0; k + 1 < support; ++k) head += per_block[k][b];
    per_block[support - 1][b] = 1.0 - head;
  }
  std::vector<Element> coeffs;
  for (const auto& v : per_block) coeffs.push_back(triple.from_block_values(v));
  return MassFunction::finite(std::move(coeffs));
}

MassFunction mixture(const MassFunction& a, const MassFunction& b, double w) {
  const unsigned count = std::max(*a.support_max(), *b.support_max()) + 1;
  const auto ca = a.coefficients(count);
  const auto cb = b.coefficients(count);
  std::vector<Element> out;
  for (unsigned k = 0; k < count; ++k) out.push_back((1.0 - w) * ca[k] + w * cb[k]);
  return MassFunction::finite(std::move(out));
}

MassFunction shifted(const MassFunction& a) {
  std::vector<Element> c{Element::zero(a.dim())};
  for (const auto& e : a.finite_coefficients()) c.push_back(e);
  return MassFunction::finite(std::move(c));
}

// 9. Generating-function convergence iff convergence in T-distribution.
Outcome equivalence(Rng& rng) {
  std::vector<double> grid;
  for (int k = 1; k <= 9; ++k) grid.push_back(k / 10.0);
  const unsigned k_max = 10;
  int good_convergent = 0;
  int good_divergent = 0;
  for (int fam = 0; fam < 20; ++fam) {
    const ConditionalTriple triple = random_triple(rng, 6, 3, 1);
    EquivalenceReport r;
    if (fam % 2 == 0) {
      const MassFunction target = random_finite_law(rng, triple, static_cast<unsigned>(pick(rng, 2, 6)));
      const MassFunction other = random_finite_law(rng, triple, static_cast<unsigned>(pick(rng, 2, 6)));
      r = genfun_equivalence_check(
          [&](std::size_t n) { return GenFun(mixture(target, other, std::ldexp(1.0, -static_cast<int>(n)))); },
          GenFun(target), grid, k_max, 60, 1e-8);
    } else {
      const Element g = random_block_constant(rng, triple, 0.2, 2.0);
      const double g_max = sup_norm(g);
      const std::size_t horizon = 32;
      // Le Cam: every distance at n >= horizon/2 is below 2 g^2 / (8 n).
      const double tol = 4.0 * g_max * g_max / (8.0 * (horizon / 2));
      r = genfun_equivalence_check(
          [&](std::size_t n) {
            const unsigned m = static_cast<unsigned>(8 * n);
            return GenFun::from_family(triple, Binomial{m, (1.0 / m) * g});
          },
          GenFun::from_family(triple, Poisson{g}), grid, k_max, horizon, tol);
    }
    if (r.genfun_converges && r.tdist_converges && r.consistent) ++good_convergent;
  }
  for (int fam = 0; fam < 10; ++fam) {
    const ConditionalTriple triple = random_triple(rng, 6, 3, 1);
    EquivalenceReport r;
    if (fam % 2 == 0) {
      const MassFunction a = random_finite_law(rng, triple, static_cast<unsigned>(pick(rng, 2, 6)));
      const MassFunction b = shifted(a);
      r = genfun_equivalence_check([&](std::size_t n) { return GenFun(n % 2 ? a : b); }, GenFun(a), grid, k_max,
                                   20, 1e-6);
    } else {
      const Element g = random_block_constant(rng, triple, 0.2, 2.0);
      const GenFun a = GenFun::from_family(triple, Poisson{g});
      const GenFun b = GenFun::from_family(triple, Poisson{2.0 * g});
      r = genfun_equivalence_check([&](std::size_t n) { return n % 2 ? a : b; }, a, grid, k_max, 20, 1e-6);
    }
    if (!r.genfun_converges && !r.tdist_converges && r.consistent) ++good_divergent;
  }
  return {good_convergent == 20 && good_divergent == 10,
          fmt("convergent families with both limits: %d/20, divergent with neither: %d/10", good_convergent,
              good_divergent)};
}

// 10. Every lattice-side quantity against classical conditioning.
Outcome oracle_equivalence(Rng& rng) {
  double worst = 0.0;
  std::size_t comparisons = 0;
  std::size_t disagreements = 0;
  auto cmp = [&](const Element& a, const Element& b) {
    worst = std::max(worst, rel_error(a, b));
    ++comparisons;
  };
  for (int inst = 0; inst < 500; ++inst) {
    ConditionalTriple triple = random_triple(rng, 64, 8, 1);
    std::optional<ProductSpace> ps;
    if (inst % 10 == 0) {
      ps = product_space(random_triple(rng, 8, 2, 1), random_triple(rng, 8, 2, 1));
      triple = ps->triple;
    }
    const std::size_t d = triple.dim();
    const auto space = oracle::from_triple(triple);
    const unsigned top = static_cast<unsigned>(pick(rng, 0, 8));
    const NaturalElement x =
        ps ? NaturalElement(ps->lift1(random_natural(rng, ps->lift1.source_dim, top).element()))
           : random_natural(rng, d, top);
    const NaturalElement y =
        ps ? NaturalElement(ps->lift2(random_natural(rng, ps->lift2.source_dim, top).element()))
           : random_natural(rng, d, top);
    const auto ox = rv(x);

    cmp(triple.expect(x.element()), oracle::cond_expect(space, ox));
    const auto dist = oracle::distribution(space, ox);
    for (unsigned n = 0; n < dist.size(); ++n) cmp(mass(triple, x, n), dist[n]);
    for (double t : {-0.5, 0.0, 1.5, static_cast<double>(top)}) {
      cmp(cdf(triple, x.element(), t), oracle::cond_prob(space, oracle::leq_event(ox, t)));
    }
    const GenFun g = gen_from_element(triple, x);
    for (double s : {0.0, 0.3, 0.7, 1.0, 2.0}) cmp(eval(g, s), oracle::genfun(space, ox, s));
    for (unsigned n = 1; n <= 3; ++n) cmp(factorial_moment(g, n), oracle::factorial_moment(space, ox, n));
    cmp(mean_via_tail(triple, x), oracle::cond_expect(space, ox));
    cmp(variance(g), oracle::cond_variance(space, ox));
    cmp(chernoff_upper(triple, g, 1.0, 2.0, x).lhs, oracle::cond_prob(space, oracle::geq_event(ox, 1.0)));
    cmp(chernoff_lower(triple, g, 1.0, 0.5, x).lhs, oracle::cond_prob(space, oracle::leq_event(ox, 1.0)));

    const Element u = random_block_constant(rng, triple, -2.0, 2.0);
    std::vector<double> xu(d);
    for (std::size_t i = 0; i < d; ++i) xu[i] = ox[i] * u[i];
    cmp(triple.expect(multiply(x.element(), u)), oracle::cond_expect(space, xu));
    if (!check_multiplicativity(triple, x.element(), u).holds) ++disagreements;

    const BandProjection px = proj_geq(x.element(), Element::unit(d));
    const BandProjection py = proj_geq(y.element(), Element::unit(d));
    auto event_of = [&](const BandProjection& p) {
      oracle::Event ev(d);
      for (std::size_t i = 0; i < d; ++i) ev[i] = p.contains(i);
      return ev;
    };
    const bool lattice = check_projections_independent(triple, {px, py});
    const bool classical = oracle::independent(space, {event_of(px), event_of(py)}, 1e-12);
    if (lattice != classical) ++disagreements;
    if (ps && !lattice) ++disagreements;
  }
  return {worst <= 1e-12 && disagreements == 0,
          fmt("%zu comparisons, max rel err %.3g (tol 1e-12), boolean disagreements %zu", comparisons, worst,
              disagreements)};
}

struct Criterion {
  const char* name;
  std::optional<double> limit;
  std::function<Outcome(Rng&, const Options&)> run;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all{
      {"closed-form generating functions", 5.0, [](Rng& r, const Options&) { return closed_forms(r); }},
      {"generating function is T s^x", 5.0, [](Rng& r, const Options&) { return genfun_is_power(r); }},
      {"product rule for independent sums", 10.0, [](Rng& r, const Options&) { return product_rule(r); }},
      {"compound sum identities", std::nullopt, [](Rng& r, const Options&) { return compound_identities(r); }},
      {"Chernoff sweeps", 20.0, [](Rng& r, const Options&) { return chernoff_sweeps(r); }},
      {"factorial moments and derivative at 1", std::nullopt,
       [](Rng& r, const Options&) { return moments_and_derivatives(r); }},
      {"Poisson approximation", 10.0, [](Rng&, const Options& o) { return poisson_approximation(o); }},
      {"compound Poisson thinning", std::nullopt, [](Rng& r, const Options&) { return compound_poisson(r); }},
      {"generating function / T-distribution equivalence", std::nullopt,
       [](Rng& r, const Options&) { return equivalence(r); }},
      {"oracle equivalence", kTotalTimeLimit, [](Rng& r, const Options&) { return oracle_equivalence(r); }},
  };
  return all;
}

}  // namespace

CriterionResult run_criterion(int id, const Options& options) {
  if (id < 1 || id > kCriterionCount) throw std::out_of_range("criterion id out of range");
  const Criterion& c = criteria()[id - 1];
  CriterionResult result;
  result.id = id;
  result.name = c.name;
  result.time_limit = c.limit;
  // Each criterion draws from its own stream.
  Rng rng(oracle::splitmix64(options.seed * 16 + static_cast<std::uint64_t>(id)));
  const auto start = std::chrono::steady_clock::now();
  try {
    Outcome o = c.run(rng, options);
    result.passed = o.passed;
    result.detail = std::move(o.detail);
  } catch (const std::exception& e) {
    result.passed = false;
    result.detail = std::string("error: ") + e.what();
  }
  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (c.limit && result.seconds >= *c.limit) {
    result.passed = false;
    result.detail += fmt("; runtime %.2fs exceeds %.0fs", result.seconds, *c.limit);
  }
  return result;
}

std::vector<CriterionResult> run_acceptance(const Options& options) {
  std::vector<CriterionResult> out;
  double total = 0.0;
  for (int id = 1; id <= kCriterionCount; ++id) {
    out.push_back(run_criterion(id, options));
    total += out.back().seconds;
  }
  auto& last = out.back();
  if (total >= kTotalTimeLimit) {
    last.passed = false;
    last.detail += fmt("; whole run %.2fs exceeds %.0fs", total, kTotalTimeLimit);
  }
  return out;
}

std::vector<CheckResult> verify_instance(const ConditionalTriple& triple, const NaturalElement& x, double tol) {
  require_same_dim(triple.dim(), x.dim(), "verify_instance");
  const std::size_t d = triple.dim();
  const auto space = oracle::from_triple(triple);
  const auto ox = rv(x);
  const GenFun g = gen_from_element(triple, x);
  std::vector<CheckResult> out;
  auto add = [&](const char* name, double err) { out.push_back({name, err <= tol, err}); };

  const auto masses = g.coefficients().coefficients(x.max_value() + 1);
  ElementBuilder total(d);
  for (const auto& m : masses) {
    for (std::size_t i = 0; i < d; ++i) total[i] += m[i];
  }
  add("mass_sums_to_e", abs_error(std::move(total).build(), Element::unit(d)));

  const auto dist = oracle::distribution(space, ox);
  double err = 0.0;
  for (std::size_t n = 0; n < dist.size(); ++n) err = std::max(err, abs_error(masses[n], dist[n]));
  add("mass_vs_oracle", err);

  double power_err = 0.0;
  double oracle_err = 0.0;
  for (double s : {0.0, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0}) {
    const Element v = eval(g, s);
    power_err = std::max(power_err, rel_error(v, eval_via_power(triple, x, s)));
    oracle_err = std::max(oracle_err, rel_error(v, oracle::genfun(space, ox, s)));
  }
  add("genfun_vs_power", power_err);
  add("genfun_vs_oracle", oracle_err);

  const Element truth_mean = oracle::cond_expect(space, ox);
  add("mean_vs_oracle", rel_error(mean(g), truth_mean));
  add("mean_via_tail", rel_error(mean_via_tail(triple, x), truth_mean));
  add("variance_vs_oracle", rel_error(variance(g), oracle::cond_variance(space, ox)));

  err = 0.0;
  for (unsigned n = 1; n <= 4; ++n) {
    err = std::max(err, rel_error(factorial_moment(g, n), oracle::factorial_moment(space, ox, n)));
  }
  add("factorial_moments_vs_oracle", err);

  double upper = 0.0;
  double lower = 0.0;
  for (unsigned a = 0; a <= x.max_value() + 1; ++a) {
    for (double s : {1.5, 2.0, 4.0}) {
      const auto r = chernoff_upper(triple, g, a, s, x);
      for (double v : r.slack.values()) upper = std::max(upper, -v);
    }
    for (double s : {0.25, 0.5, 0.75}) {
      const auto r = chernoff_lower(triple, g, a, s, x);
      for (double v : r.slack.values()) lower = std::max(lower, -v);
    }
  }
  add("chernoff_upper_slack", upper);
  add("chernoff_lower_slack", lower);
  return out;
}

}  // namespace rieszgen::verify
