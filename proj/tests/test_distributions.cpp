#include <cmath>

#include "support.hpp"
#include "rieszgen/calculus.hpp"
#include "rieszgen/error.hpp"

using namespace rieszgen;
using testing::Rng;

namespace {

const ConditionalTriple kCanon = ConditionalTriple::canonical();
const NaturalElement kX(Element{0, 1, 1, 2});

template <class F>
std::string error_code(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return "";
}

Element sum_of(const std::vector<NaturalElement>& xs) {
  Element s = Element::zero(xs.front().dim());
  for (const auto& x : xs) s = s + x.element();
  return s;
}

}  // namespace

TEST_CASE("canonical masses and distribution function") {
  CHECK(mass(kCanon, kX, 0) == Element{0.5, 0.5, 0, 0});
  CHECK(mass(kCanon, kX, 1) == Element{0.5, 0.5, 0.5, 0.5});
  CHECK(mass(kCanon, kX, 2) == Element{0, 0, 0.5, 0.5});
  CHECK(mass(kCanon, kX, 3) == Element::zero(4));
  CHECK(cdf(kCanon, kX.element(), 1) == Element{1, 1, 0.5, 0.5});
  CHECK(cdf(kCanon, kX.element(), 2) == Element::unit(4));
  CHECK(cdf(kCanon, kX.element(), 7.5) == Element::unit(4));
  CHECK(cdf(kCanon, kX.element(), -1) == Element::zero(4));
  CHECK(cdf(kCanon, kX.element(), 1.5) == cdf(kCanon, kX.element(), 1));
  CHECK(cdf_left(kCanon, kX.element(), 1) == Element{0.5, 0.5, 0, 0});
  const NaturalElement zero(Element::zero(4));
  CHECK(mass(kCanon, zero, 0) == Element::unit(4));
  CHECK(mass(kCanon, zero, 1) == Element::zero(4));
}

TEST_CASE("natural elements") {
  CHECK(is_natural(Element{0, 1, 1, 2}));
  CHECK(is_natural(Element::unit(3)));
  CHECK_FALSE(is_natural(Element{0.5, 1, 1, 2}));
  CHECK_FALSE(is_natural(Element{-1, 1}));
  CHECK(error_code([] { NaturalElement(Element{0.5}); }) == "not_natural");
  CHECK(kX.max_value() == 2);
  CHECK(level_band(kX, 1) == BandProjection({0, 1, 1, 0}));
  CHECK((kX + kX).element() == Element{0, 2, 2, 4});
}

TEST_CASE("masses are block-constant, bounded and sum to e") {
  Rng rng(31);
  for (int i = 0; i < 100; ++i) {
    const auto t = testing::random_triple(rng, 30, 5);
    const auto x = testing::random_natural(rng, t.dim(), 6);
    Element total = Element::zero(t.dim());
    for (unsigned n = 0; n <= x.max_value(); ++n) {
      const auto m = mass(t, x, n);
      CHECK(t.in_range(m));
      CHECK(is_nonnegative(m));
      CHECK(leq(m, Element::constant(t.dim(), 1 + 1e-15)));
      CHECK(testing::near(m, cdf(t, x.element(), n) - cdf_left(t, x.element(), n), 1e-12));
      total = total + m;
    }
    CHECK(testing::near(total, Element::unit(t.dim())));
  }
}

TEST_CASE("named family masses") {
  const auto t = ConditionalTriple::canonical();
  const Element p{0.25, 0.25, 0.5, 0.5};
  CHECK(family_mass(t, Bernoulli{p}, 1) == p);
  CHECK(family_mass(t, Bernoulli{p}, 0) == Element::unit(4) - p);
  CHECK(family_mass(t, Bernoulli{p}, 2) == Element::zero(4));
  CHECK(testing::near(family_mass(t, Binomial{5, p}, 5), integer_power(p, 5)));
  CHECK(testing::near(family_mass(t, Binomial{5, p}, 2), Element{10 * 0.0625 * std::pow(0.75, 3),
                                                                  10 * 0.0625 * std::pow(0.75, 3), 10 * 0.25 * 0.125,
                                                                  10 * 0.25 * 0.125}));
  const Element g{1, 1, 2.5, 2.5};
  CHECK(testing::near(family_mass(t, Poisson{g}, 0), Element{std::exp(-1), std::exp(-1), std::exp(-2.5),
                                                             std::exp(-2.5)}));
  CHECK(testing::near(family_mass(t, Poisson{g}, 3), Element{std::exp(-1) / 6, std::exp(-1) / 6,
                                                             std::pow(2.5, 3) * std::exp(-2.5) / 6,
                                                             std::pow(2.5, 3) * std::exp(-2.5) / 6}));
}

TEST_CASE("family parameter checks") {
  const auto t = ConditionalTriple::canonical();
  CHECK(error_code([&] { validate_family(t, Bernoulli{Element{0.5, 0.5, 1, 1}}); }) == "bad_parameter");
  CHECK(error_code([&] { validate_family(t, Bernoulli{Element{0, 0, 0.5, 0.5}}); }) == "bad_parameter");
  CHECK(error_code([&] { validate_family(t, Binomial{3, Element{0.2, 0.3, 0.5, 0.5}}); }) == "bad_parameter");
  CHECK(error_code([&] { validate_family(t, Poisson{Element{0, 0, 1, 1}}); }) == "bad_parameter");
  CHECK(error_code([] { MassFunction::poisson(Element{-1.0}); }) == "bad_parameter");
  CHECK(error_code([] { MassFunction::finite({Element{0.5}, Element{0.6}}); }) == "bad_mass");
  CHECK(error_code([] { MassFunction::finite({Element{1.5}, Element{-0.5}}); }) == "bad_mass");
}

TEST_CASE("mass functions") {
  const auto m = mass_function(kCanon, kX);
  CHECK(m.kind() == MassFunction::Kind::finite);
  REQUIRE(m.support_max().has_value());
  CHECK(*m.support_max() == 2);
  CHECK(m.at(5) == Element::zero(4));
  CHECK(m.tail_bound(2, 3.0) == 0.0);
  const auto u = MassFunction::unit(3);
  CHECK(u.coefficients(2) == std::vector<Element>{Element::unit(3), Element::zero(3)});
  const auto finite_tail = MassFunction::finite({Element{0.5}, Element{0.25}, Element{0.25}, Element{0}});
  CHECK(*finite_tail.support_max() == 2);
}

TEST_CASE("Poisson tails are certified") {
  const auto m = MassFunction::poisson(Element{2.0, 3.0});
  CHECK_FALSE(m.support_max().has_value());
  for (unsigned moment : {0u, 1u, 2u}) {
    const unsigned K = certified_truncation(m, 1.0, moment, 1e-13);
    CAPTURE(moment);
    // The certified bound really dominates the omitted terms.
    const auto c = m.coefficients(K + 200);
    double tail = 0;
    for (unsigned k = K + 1; k < c.size(); ++k) tail = std::max(tail, std::pow(k, moment) * c[k][1]);
    CHECK(tail <= m.tail_bound(K, 1.0, moment));
    CHECK(m.tail_bound(K, 1.0, moment) <= 1e-13);
  }
  Element total = Element::zero(2);
  for (const auto& c : m.coefficients(certified_truncation(m, 1.0, 0, 1e-15) + 1)) total = total + c;
  CHECK(testing::near(total, Element::unit(2), 1e-14));
}

TEST_CASE("equality in distribution") {
  CHECK(equal_in_distribution(kCanon, kX, kX));
  const auto iid = realize_iid(ConditionalTriple::trivial(1), Bernoulli{Element{0.3}}, 2);
  CHECK(equal_in_distribution(iid.triple, iid.elements[0], iid.elements[1]));
  const auto b = realize_iid(ConditionalTriple::trivial(1), Bernoulli{Element{0.3}}, 1);
  const auto bin = realize_iid(ConditionalTriple::trivial(1), Binomial{2, Element{0.3}}, 1);
  // Lift both onto a common space before comparing.
  const auto common = product_space(b.triple, bin.triple);
  CHECK_FALSE(equal_in_distribution(common.triple, NaturalElement(common.lift1(b.elements[0].element())),
                                    NaturalElement(common.lift2(bin.elements[0].element()))));
}

TEST_CASE("realized Bernoulli elements") {
  const auto r = realize_bernoulli(ConditionalTriple::trivial(1), Element{0.5});
  CHECK(r.triple.dim() == 2);
  CHECK(r.triple.probabilities() == std::vector<double>{0.5, 0.5});
  CHECK(r.x.element() == Element{1, 0});
  CHECK(r.x.element() == indicator(r.band));
  CHECK(r.triple.expect(r.x.element()) == Element{0.5, 0.5});
  CHECK(mass(r.triple, r.x, 1) == Element{0.5, 0.5});
  CHECK(mass(r.triple, r.x, 0) == Element{0.5, 0.5});
}

TEST_CASE("Bernoulli characterization") {
  Rng rng(32);
  for (int i = 0; i < 50; ++i) {
    const auto t = testing::random_triple(rng, 6, 3);
    const auto p = testing::random_block_constant(rng, t, 0.05, 0.95);
    const auto r = realize_bernoulli(t, p);
    const auto lp = r.base(p);
    // x = Qe with TQe = p, and the masses are exactly the Bernoulli law.
    CHECK(r.x.element() == indicator(r.band));
    CHECK(testing::near(r.triple.expect(indicator(r.band)), lp));
    CHECK(testing::near(mass(r.triple, r.x, 1), lp));
    CHECK(testing::near(mass(r.triple, r.x, 0), Element::unit(lp.dim()) - lp));
    CHECK(r.x.max_value() <= 1);
    // Conversely any band projection Q yields a Bernoulli element with p = TQe.
    const auto y = testing::random_natural(rng, t.dim(), 1);
    const auto q = t.expect(y.element());
    CHECK(testing::near(mass(t, y, 1), q));
    CHECK(testing::near(mass(t, y, 0), Element::unit(t.dim()) - q));
  }
}

TEST_CASE("i.i.d. realizations") {
  const auto iid = realize_iid(ConditionalTriple::trivial(1), Bernoulli{Element{0.5}}, 3);
  CHECK(iid.triple.dim() == 8);
  REQUIRE(iid.elements.size() == 3);
  const NaturalElement s(sum_of(iid.elements));
  const double expected[] = {1.0 / 8, 3.0 / 8, 3.0 / 8, 1.0 / 8};
  for (unsigned k = 0; k < 4; ++k) CHECK(testing::near(mass(iid.triple, s, k), Element::constant(8, expected[k])));
  CHECK(check_elements_independent(iid.triple, iid.elements[0].element(), iid.elements[2].element()));
  std::vector<Element> family;
  for (const auto& x : iid.elements) family.push_back(x.element());
  CHECK(check_family_independent(iid.triple, family));
  const auto single = realize_iid(ConditionalTriple::trivial(1), Bernoulli{Element{0.5}}, 1);
  CHECK(single.elements.size() == 1);
  CHECK_THROWS_AS(realize_iid(ConditionalTriple::trivial(1), Bernoulli{Element{0.5}}, 21), ResourceError);
  CHECK_THROWS_AS(realize_iid(ConditionalTriple::trivial(1), Bernoulli{Element{0.5}}, 5, 16), ResourceError);
}

TEST_CASE("sums of realized Bernoulli elements are binomial") {
  Rng rng(33);
  const auto t = ConditionalTriple::canonical();
  for (unsigned n = 1; n <= 10; ++n) {
    const auto p = testing::random_block_constant(rng, t, 0.1, 0.9);
    const auto iid = realize_iid(t, Bernoulli{p}, n);
    const NaturalElement s(sum_of(iid.elements));
    for (unsigned k = 0; k <= n; ++k) {
      CHECK(testing::near(mass(iid.triple, s, k), iid.base(family_mass(t, Binomial{n, p}, k)), 1e-12));
    }
  }
}

TEST_CASE("adjoining a finite law") {
  const auto t = ConditionalTriple::discrete(2);
  const auto law = MassFunction::finite({Element{0.25, 0.5}, Element{0.75, 0.5}});
  const auto base = realize_iid(t, law, 1);
  const auto more = adjoin(base, MassFunction::finite({Element{0.5, 0.5}, Element{0, 0}, Element{0.5, 0.5}}));
  REQUIRE(more.elements.size() == 2);
  CHECK(mass(more.triple, more.elements[0], 0) == more.base(Element{0.25, 0.5}));
  CHECK(mass(more.triple, more.elements[1], 2) == more.base(Element{0.5, 0.5}));
  CHECK(check_elements_independent(more.triple, more.elements[0].element(), more.elements[1].element()));
}
