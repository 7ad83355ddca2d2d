#include <cmath>

#include "support.hpp"

using namespace rieszgen;
namespace o = rieszgen::oracle;

TEST_CASE("probability space of the canonical triple") {
  const auto space = o::from_triple(ConditionalTriple::canonical());
  CHECK(space.size() == 4);
  CHECK(space.outcomes.size() == 4);
  CHECK(space.probs == std::vector<double>(4, 0.25));
  CHECK(space.sigma_blocks.size() == 2);
  CHECK(o::cond_expect(space, {0, 1, 1, 2}) == Element{0.5, 0.5, 1.5, 1.5});
  CHECK(o::cond_expect(space, {3, 3, 3, 3}) == Element::constant(4, 3));
  CHECK(o::prob(space, {true, true, true, true}) == 1.0);
  CHECK(o::prob(space, {false, true, false, true}) == 0.5);
  CHECK(o::expect(space, {0, 1, 1, 2}) == 1.0);
  CHECK(o::cond_prob(space, {true, false, false, false}) == Element{0.5, 0.5, 0, 0});
}

TEST_CASE("extreme partitions") {
  const o::RandomVariable x{4, -1, 2};
  CHECK(o::cond_expect(o::from_triple(ConditionalTriple::discrete(3)), x) == Element{4, -1, 2});
  CHECK(testing::near(o::cond_expect(o::from_triple(ConditionalTriple::trivial(3)), x), Element::constant(3, 5.0 / 3)));
}

TEST_CASE("events, laws and moments") {
  const o::RandomVariable x{0, 1, 1, 2};
  CHECK(o::level_event(x, 1) == o::Event{false, true, true, false});
  CHECK(o::geq_event(x, 1) == o::Event{false, true, true, true});
  CHECK(o::leq_event(x, 1) == o::Event{true, true, true, false});
  CHECK(o::gt_event(x, 1) == o::Event{false, false, false, true});
  const auto space = o::from_triple(ConditionalTriple::canonical());
  const auto law = o::distribution(space, x);
  REQUIRE(law.size() == 3);
  CHECK(law[2] == Element{0, 0, 0.5, 0.5});
  CHECK(o::genfun(space, x, 0.5) == Element{0.75, 0.75, 0.375, 0.375});
  CHECK(o::factorial_moment(space, x, 2) == Element{0, 0, 1, 1});
  CHECK(o::cond_variance(space, x) == Element::constant(4, 0.25));
  CHECK(o::random_sum({0, 1, 2, 2}, {{5, 5, 5, 5}, {1, 2, 3, 4}}) == o::RandomVariable{0, 5, 8, 9});
}

TEST_CASE("classical independence") {
  const auto space = o::from_triple(ConditionalTriple::trivial(4));
  const o::Event a{true, true, false, false};
  const o::Event b{true, false, true, false};
  CHECK(o::independent(space, {a, b}, 1e-12));
  CHECK_FALSE(o::independent(space, {a, a}, 1e-12));
  CHECK_FALSE(o::independent(space, {a, b, {false, true, true, false}}, 1e-12));
}

TEST_CASE("scalar reference laws") {
  CHECK(o::binomial_pmf(4, 0.5, 2) == doctest::Approx(0.375).epsilon(1e-15));
  CHECK(o::binomial_pmf(3, 0.2, 0) == doctest::Approx(0.512).epsilon(1e-15));
  CHECK(o::binomial_pmf(3, 0.2, 4) == 0);
  CHECK(o::poisson_pmf(2, 0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-15));
  CHECK(o::poisson_pmf(2, 3) == doctest::Approx(8 * std::exp(-2.0) / 6).epsilon(1e-15));
}

TEST_CASE("simulation of a constant is exact") {
  const auto space = o::from_triple(ConditionalTriple::canonical());
  const auto r = o::simulate(space, {2, 2, 2, 2}, 5000, 1);
  CHECK(r.samples == 5000);
  for (std::size_t b = 0; b < 2; ++b) {
    CHECK(r.block_estimate[b] == 2.0);
    CHECK(r.block_stderr[b] == 0.0);
    CHECK_FALSE(r.excursion[b]);
  }
}

TEST_CASE("simulation of an indicator") {
  const auto space = o::from_triple(ConditionalTriple({1, 3, 2, 2}, {{0, 1}, {2, 3}}));
  const o::RandomVariable x{1, 0, 0, 1};
  const auto r = o::simulate(space, x, 1000000, 42);
  const auto exact = o::cond_expect(space, x);
  CHECK(r.block_samples[0] + r.block_samples[1] == 1000000);
  CHECK(std::fabs(r.block_estimate[0] - exact[0]) <= 4 * r.block_stderr[0]);
  CHECK(std::fabs(r.block_estimate[1] - exact[2]) <= 4 * r.block_stderr[1]);
  CHECK_FALSE(r.excursion[0]);
  CHECK_FALSE(r.excursion[1]);
}

TEST_CASE("simulation is reproducible") {
  const auto space = o::from_triple(ConditionalTriple::canonical());
  const o::RandomVariable x{0, 1, 1, 2};
  const auto a = o::simulate(space, x, 100000, 7, 1);
  const auto b = o::simulate(space, x, 100000, 7, 1);
  const auto c = o::simulate(space, x, 100000, 7, 5);
  const auto d = o::simulate(space, x, 100000, 8, 1);
  CHECK(a.block_estimate == b.block_estimate);
  CHECK(a.block_estimate == c.block_estimate);
  CHECK(a.block_stderr == c.block_stderr);
  CHECK(a.block_samples == c.block_samples);
  CHECK(a.block_estimate != d.block_estimate);
}

TEST_CASE("splitmix64 reference values") {
  // First outputs of the reference generator seeded with 0.
  CHECK(o::splitmix64(0) == 0xe220a8397b1dcdafULL);
  CHECK(o::splitmix64(0x9e3779b97f4a7c15ULL) == 0x6e789e6aa1b965f4ULL);
}
