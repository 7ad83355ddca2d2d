#include <cmath>

#include "support.hpp"
#include "rieszgen/calculus.hpp"
#include "rieszgen/error.hpp"
#include "rieszgen/exp_series.hpp"
#include "rieszgen/genfun.hpp"

using namespace rieszgen;
using testing::Rng;

namespace {

const ConditionalTriple kCanon = ConditionalTriple::canonical();
const NaturalElement kX(Element{0, 1, 1, 2});

GenFun canonical_genfun() { return gen_from_element(kCanon, kX); }

const Element kP{0.25, 0.25, 0.6, 0.6};

}  // namespace

TEST_CASE("generating function from an element") {
  const auto g = canonical_genfun();
  const auto c = g.coefficients().coefficients(3);
  CHECK(c[0] == mass(kCanon, kX, 0));
  CHECK(c[1] == mass(kCanon, kX, 1));
  CHECK(c[2] == mass(kCanon, kX, 2));
  const auto zero = gen_from_element(kCanon, NaturalElement(Element::zero(4)));
  CHECK(zero.coefficients().finite_coefficients() == std::vector<Element>{Element::unit(4)});
  const auto r = realize_bernoulli(kCanon, kP);
  const auto gb = gen_from_element(r.triple, r.x);
  REQUIRE(gb.closed_form().has_value());
  REQUIRE(std::holds_alternative<BernoulliForm>(*gb.closed_form()));
  CHECK(testing::near(std::get<BernoulliForm>(*gb.closed_form()).p, r.base(kP)));
}

TEST_CASE("evaluation") {
  const auto g = canonical_genfun();
  CHECK(eval(g, 0.5) == Element{0.75, 0.75, 0.375, 0.375});
  CHECK(eval(g, 1) == Element::unit(4));
  CHECK(eval(g, 0) == mass(kCanon, kX, 0));
  CHECK(eval_via_power(kCanon, kX, 0.5) == Element{0.75, 0.75, 0.375, 0.375});
  CHECK(eval_via_power(kCanon, kX, 1) == Element::unit(4));
  CHECK(eval_via_power(kCanon, kX, 0) == mass(kCanon, kX, 0));
  const Element lambda{1, 1, 2, 2};
  const auto gp = GenFun::from_family(kCanon, Poisson{lambda});
  CHECK(testing::near(eval(gp, 0), exp_element(-lambda)));
  CHECK(testing::near(eval_series(gp, 0.4), eval(gp, 0.4), 1e-12));
  CHECK(testing::near(eval_series(gp, 3.0), exp_element(2.0 * lambda), 1e-12));
  CHECK_THROWS_AS(eval(g, -0.1), DomainError);
}

TEST_CASE("closed forms match their coefficient series") {
  const auto gb = GenFun::from_family(kCanon, Bernoulli{kP});
  const auto gn = GenFun::from_family(kCanon, Binomial{6, kP});
  for (double s : {0.0, 0.2, 0.5, 0.9, 1.0, 1.7, 3.0}) {
    CAPTURE(s);
    CHECK(testing::near(eval(gb, s), s * kP + Element::unit(4) - kP));
    CHECK(testing::near(eval(gb, s), eval_series(gb, s)));
    CHECK(testing::near(eval(gn, s), integer_power(s * kP + Element::unit(4) - kP, 6)));
    CHECK(testing::near(eval(gn, s), eval_series(gn, s), 1e-12));
  }
}

TEST_CASE("generalized evaluation") {
  const auto g = canonical_genfun();
  CHECK(eval_generalized(g, Element::unit(4)) == Element::unit(4));
  for (double s : {0.0, 0.3, 0.7, 1.0}) CHECK(testing::near(eval_generalized(g, Element::constant(4, s)), eval(g, s)));
  const Element u{0.5, 0.5, 0.25, 0.25};
  // pi0 + pi1 u + pi2 u^2 coordinatewise.
  CHECK(eval_generalized(g, u) == Element{0.75, 0.75, 0.125 + 0.5 * 0.0625, 0.125 + 0.5 * 0.0625});
  const auto space = oracle::from_triple(kCanon);
  // For block-constant u this is T(u^x).
  const Element ux{1, 0.5, 0.25, 0.0625};
  CHECK(testing::near(eval_generalized(g, u), oracle::cond_expect(space, testing::rv(ux))));
  CHECK_THROWS_AS(eval_generalized(g, Element{-1, 0, 0, 0}), DomainError);
}

TEST_CASE("derivatives") {
  const auto g = canonical_genfun();
  CHECK(derivative(g, 1, 0) == Element{0.5, 0.5, 0.5, 0.5});
  CHECK(derivative(g, 2, 0) == Element{0, 0, 1, 1});
  CHECK(derivative(g, 0, 0.3) == eval(g, 0.3));
  const auto gb = GenFun::from_family(kCanon, Bernoulli{kP});
  for (double s : {0.0, 0.4, 0.9}) CHECK(testing::near(derivative(gb, 1, s), kP));
  CHECK_THROWS_AS(derivative(g, 1, 1.0), DomainError);
  CHECK_THROWS_AS(derivative(g, 1, -0.5), DomainError);
}

TEST_CASE("factorial moments and variance") {
  const auto g = canonical_genfun();
  CHECK(factorial_moment(g, 1) == Element{0.5, 0.5, 1.5, 1.5});
  CHECK(factorial_moment(g, 2) == Element{0, 0, 1, 1});
  CHECK(factorial_moment(g, 3) == Element::zero(4));
  CHECK(mean(g) == Element{0.5, 0.5, 1.5, 1.5});
  CHECK(second_moment(g) == Element{0.5, 0.5, 2.5, 2.5});
  CHECK(variance(g) == Element{0.25, 0.25, 0.25, 0.25});
  const Element lambda{0.7, 0.7, 3, 3};
  const auto gp = GenFun::from_family(kCanon, Poisson{lambda});
  for (unsigned n = 1; n <= 4; ++n) CHECK(testing::near(factorial_moment(gp, n), integer_power(lambda, n), 1e-11));
  const auto gb = GenFun::from_family(kCanon, Bernoulli{kP});
  CHECK(testing::near(variance(gb), multiply(kP, Element::unit(4) - kP)));
  const auto constant = gen_from_element(kCanon, NaturalElement(Element::constant(4, 3)));
  CHECK(variance(constant) == Element::zero(4));
}

TEST_CASE("mean through the tail sum") {
  CHECK(mean_via_tail(kCanon, kX) == Element{0.5, 0.5, 1.5, 1.5});
  CHECK(mean_via_tail(kCanon, NaturalElement(Element::zero(4))) == Element::zero(4));
  CHECK(mean_via_tail(kCanon, NaturalElement(Element::unit(4))) == Element::unit(4));
  Rng rng(41);
  for (int i = 0; i < 50; ++i) {
    const auto t = testing::random_triple(rng, 20, 4);
    const auto x = testing::random_natural(rng, t.dim(), 7);
    CHECK(testing::near(mean_via_tail(t, x), mean(gen_from_element(t, x)), 1e-12));
  }
}

TEST_CASE("products of generating functions") {
  const auto gb = GenFun::from_family(kCanon, Bernoulli{kP});
  const auto sq = product(gb, gb);
  const auto e = Element::unit(4);
  const auto q = e - kP;
  const auto c = sq.coefficients().coefficients(3);
  CHECK(testing::near(c[0], multiply(q, q)));
  CHECK(testing::near(c[1], 2.0 * multiply(kP, q)));
  CHECK(testing::near(c[2], multiply(kP, kP)));
  const auto g = canonical_genfun();
  const auto with_unit = product(g, GenFun::unit(4));
  CHECK(with_unit.coefficients().coefficients(3) == g.coefficients().coefficients(3));

  const auto iid = realize_iid(ConditionalTriple::trivial(1), Bernoulli{Element{0.5}}, 2);
  const auto& t = iid.triple;
  const auto lhs = gen_from_element(t, iid.elements[0] + iid.elements[1]);
  const auto rhs = product(gen_from_element(t, iid.elements[0]), gen_from_element(t, iid.elements[1]));
  for (double s : {0.0, 0.25, 0.5, 1.0, 2.0}) CHECK(testing::near(eval(lhs, s), eval(rhs, s)));

  const auto p1 = GenFun::from_family(kCanon, Poisson{Element{1, 1, 2, 2}});
  const auto p2 = GenFun::from_family(kCanon, Poisson{Element{0.5, 0.5, 1, 1}});
  const auto pp = product(p1, p2);
  for (double s : {0.0, 0.5, 1.0}) CHECK(testing::near(eval(pp, s), multiply(eval(p1, s), eval(p2, s))));
  CHECK_THROWS_AS(product(p1, gb), DomainError);
}

TEST_CASE("random index elements and sums") {
  const auto t = ConditionalTriple::trivial(4);
  const NaturalElement zero(Element::zero(4));
  const NaturalElement a(Element{1, 0, 2, 1});
  const NaturalElement b(Element{0, 1, 1, 3});
  CHECK(random_index_sum(t, zero, {zero}).element() == Element::zero(4));
  const NaturalElement two(Element::constant(4, 2));
  CHECK(random_index_sum(t, two, {zero, a, b}).element() == (a + b).element());
  const NaturalElement n(Element{0, 1, 2, 1});
  CHECK(random_index_element(t, n, {zero, a, b}).element() == Element{0, 0, 1, 1});
  CHECK(random_index_sum(t, n, {zero, a, b}).element() == Element{0, 0, 3, 1});
  // On {N = n} the random sum agrees with the n-th partial sum.
  for (unsigned k = 0; k <= 2; ++k) {
    const auto band = level_band(n, k);
    Element partial = Element::zero(4);
    if (k >= 1) partial = partial + a.element();
    if (k >= 2) partial = partial + b.element();
    CHECK(apply(band, random_index_sum(t, n, {zero, a, b}).element()) == apply(band, partial));
  }
  CHECK_THROWS_AS(random_index_sum(t, n, {zero, a}), PreconditionError);
  CHECK_THROWS_AS(random_index_element(t, n, {a, a, b}), PreconditionError);
}

TEST_CASE("random sum with a uniform index over three coins") {
  // N uniform on {1, 2} and three fair coins; N independent of the coins.
  const auto coins = realize_iid(ConditionalTriple::trivial(1), Bernoulli{Element{0.5}}, 2);
  const auto idx = adjoin(coins, MassFunction::finite({Element{0}, Element{0.5}, Element{0.5}}));
  const auto& t = idx.triple;
  const auto N = idx.elements[2];
  const NaturalElement zero(Element::zero(t.dim()));
  const std::vector<NaturalElement> xs{zero, idx.elements[0], idx.elements[1]};
  const auto s = random_index_sum(t, N, xs);
  const auto space = oracle::from_triple(t);
  std::vector<oracle::RandomVariable> rxs{testing::rv(xs[1]), testing::rv(xs[2])};
  const auto truth = oracle::distribution(space, oracle::random_sum(testing::rv(N), rxs));
  for (unsigned k = 0; k < truth.size(); ++k) CHECK(testing::near(mass(t, s, k), truth[k]));
  const auto composed = compose(gen_from_element(t, N), gen_from_element(t, xs[1]));
  for (double u : {0.0, 0.3, 0.8, 1.0}) CHECK(testing::near(eval(composed, u), eval(gen_from_element(t, s), u)));
  CHECK(testing::near(compound_mean(gen_from_element(t, N), gen_from_element(t, xs[1])),
                      oracle::cond_expect(space, testing::rv(s)), 1e-10));
  CHECK(testing::near(compound_variance(gen_from_element(t, N), gen_from_element(t, xs[1])),
                      oracle::cond_variance(space, testing::rv(s)), 1e-10));
  const auto gi = genfun_of_random_index(gen_from_element(t, N), gen_from_element(t, xs[1]));
  const auto xn = random_index_element(t, N, xs);
  for (double u : {0.0, 0.5, 1.0}) CHECK(testing::near(eval(gi, u), eval(gen_from_element(t, xn), u)));
}

TEST_CASE("composition") {
  const Element g{1, 1, 3, 3};
  const auto gN = GenFun::from_family(kCanon, Poisson{g});
  const auto gx = GenFun::from_family(kCanon, Bernoulli{kP});
  const auto c = compose(gN, gx);
  REQUIRE(c.closed_form().has_value());
  REQUIRE(std::holds_alternative<PoissonForm>(*c.closed_form()));
  CHECK(testing::near(std::get<PoissonForm>(*c.closed_form()).g, multiply(kP, g)));
  const auto masses = c.coefficients().coefficients(15);
  for (unsigned k = 0; k < 15; ++k) {
    CHECK(testing::near(masses[k], family_mass(kCanon, Poisson{multiply(kP, g)}, k), 1e-12));
  }
  CHECK(testing::near(compound_mean(gN, gx), multiply(kP, g)));
  for (double s : {0.0, 0.5, 1.0}) CHECK(testing::near(eval(c, s), eval_generalized(gN, eval(gx, s)), 1e-12));

  const auto delta_one = GenFun(MassFunction::finite({Element::zero(4), Element::unit(4)}));
  const auto gn = canonical_genfun();
  const auto same = compose(gn, delta_one);
  for (double s : {0.0, 0.4, 1.0}) CHECK(testing::near(eval(same, s), eval(gn, s)));

  const auto m3 = gen_from_element(kCanon, NaturalElement(Element::constant(4, 3)));
  CHECK(testing::near(compound_variance(m3, gx), 3.0 * variance(gx)));
  CHECK_THROWS_AS(compose(gn, gN), DomainError);
}

TEST_CASE("generating function of a randomly indexed element") {
  const auto gx = canonical_genfun();
  const auto positive = GenFun(MassFunction::finite({Element::zero(4), Element::constant(4, 0.5), Element::constant(4, 0.5)}));
  const auto same = genfun_of_random_index(positive, gx);
  for (double s : {0.0, 0.5, 1.0}) CHECK(testing::near(eval(same, s), eval(gx, s)));
  const auto none = genfun_of_random_index(GenFun::unit(4), gx);
  for (double s : {0.0, 0.5, 1.0}) CHECK(testing::near(eval(none, s), Element::unit(4)));
}

TEST_CASE("shape of the generating function on [0, 1]") {
  Rng rng(42);
  for (int i = 0; i < 60; ++i) {
    const auto t = testing::random_triple(rng, 16, 4);
    const auto x = testing::random_natural(rng, t.dim(), 5);
    const auto g = gen_from_element(t, x);
    const auto e = Element::unit(t.dim());
    Element previous = eval(g, 0);
    for (int j = 1; j <= 20; ++j) {
      const double s = j / 20.0;
      const auto v = eval(g, s);
      CHECK(is_nonnegative(v));
      CHECK(leq(v, Element::constant(t.dim(), 1 + 1e-15)));
      CHECK(leq(previous, v));
      previous = v;
      const double a = (j - 1) / 20.0;
      const auto mid = eval(g, (a + s) / 2);
      const auto chord = 0.5 * (eval(g, a) + v);
      CHECK(leq(mid, chord + Element::constant(t.dim(), 1e-15)));
    }
    CHECK(testing::near(eval(g, 1), e));
    // Strict increase where there is mass above 0.
    const auto p0 = mass(t, x, 0);
    const auto lo = eval(g, 0.3);
    const auto hi = eval(g, 0.6);
    for (std::size_t k = 0; k < t.dim(); ++k) {
      if (p0[k] < 1) CHECK(lo[k] < hi[k]);
    }
    // Strict convexity where there is mass above 1.
    const auto F1 = cdf(t, x.element(), 1);
    const auto left = eval(g, 0.2);
    const auto right = eval(g, 0.8);
    const auto mid = eval(g, 0.5);
    for (std::size_t k = 0; k < t.dim(); ++k) {
      if (F1[k] < 1 - 1e-12) CHECK(mid[k] < 0.5 * (left[k] + right[k]));
    }
  }
}

TEST_CASE("derivatives match finite differences") {
  Rng rng(43);
  const double h = 1e-5;
  for (int i = 0; i < 30; ++i) {
    const auto t = testing::random_triple(rng, 10, 3);
    const auto g = gen_from_element(t, testing::random_natural(rng, t.dim(), 6));
    for (unsigned k = 1; k <= 3; ++k) {
      for (int j = 1; j <= 8; ++j) {
        const double s = j / 10.0;
        const auto fd = (1.0 / (2 * h)) * (derivative(g, k - 1, s + h) - derivative(g, k - 1, s - h));
        CHECK(testing::near(derivative(g, k, s), fd, 1e-6));
      }
    }
  }
}

TEST_CASE("Taylor expansion at zero") {
  Rng rng(44);
  for (int i = 0; i < 30; ++i) {
    const auto t = testing::random_triple(rng, 10, 3);
    const auto x = testing::random_natural(rng, t.dim(), 6);
    const auto g = gen_from_element(t, x);
    for (double s : {0.0, 0.3, 0.9, 1.5}) {
      Element sum = Element::zero(t.dim());
      double fact = 1;
      for (unsigned k = 0; k <= x.max_value(); ++k) {
        if (k > 0) fact *= k;
        sum = sum + (std::pow(s, k) / fact) * derivative(g, k, 0);
      }
      CHECK(testing::near(sum, eval(g, s), 1e-12));
    }
    CHECK(factorial_moment(g, x.max_value() + 1) == Element::zero(t.dim()));
  }
}

TEST_CASE("product is a homomorphism for evaluation") {
  Rng rng(45);
  for (int i = 0; i < 30; ++i) {
    const auto t = testing::random_triple(rng, 10, 3);
    const auto g1 = gen_from_element(t, testing::random_natural(rng, t.dim(), 4));
    const auto g2 = gen_from_element(t, testing::random_natural(rng, t.dim(), 4));
    const auto p = product(g1, g2);
    for (double s : {0.0, 0.25, 0.5, 1.0, 2.0}) CHECK(testing::near(eval(p, s), multiply(eval(g1, s), eval(g2, s)), 1e-12));
  }
}

TEST_CASE("difference quotient increases to the mean") {
  const auto g = canonical_genfun();
  const auto e = Element::unit(4);
  Element previous = Element::zero(4);
  for (int j = 1; j <= 20; ++j) {
    const double s = 1 - std::ldexp(1.0, -j);
    const auto q = (1 / (1 - s)) * (e - eval(g, s));
    CHECK(leq(previous, q + Element::constant(4, 1e-9)));
    CHECK(leq(q, mean(g) + Element::constant(4, 1e-9)));
    previous = q;
  }
  CHECK(testing::near(previous, mean(g), 1e-5));
}
