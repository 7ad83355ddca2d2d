#include <cmath>
#include <cstdlib>
#include <limits>

#include "support.hpp"
#include "rieszgen/error.hpp"
#include "rieszgen/serialization.hpp"

using namespace rieszgen;
using rieszgen::json::json;

namespace {

template <class F>
std::string error_code(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return "";
}

}  // namespace

TEST_CASE("element and projection round trips") {
  const Element x{0.1, -2, 1e-300, 3.5e12};
  CHECK(json::element_from_json(json::to_json(x)) == x);
  CHECK(json::element_from_json(json::parse(json::to_json(x).dump())) == x);
  const BandProjection p({1, 0, 0, 1});
  CHECK(json::projection_from_json(json::to_json(p)) == p);
  CHECK(json::projection_from_json(json::parse("[true, false, 0, 1]")) == p);
}

TEST_CASE("step functions use null for infinite bounds") {
  constexpr double inf = std::numeric_limits<double>::infinity();
  const StepFunction f({{{-inf, 0}, 2.0}, {{1, inf}, -1.0}});
  const auto j = json::to_json(f);
  CHECK(j[0]["a"].is_null());
  CHECK(j[1]["b"].is_null());
  const auto back = json::step_function_from_json(json::parse(j.dump()));
  REQUIRE(back.pieces().size() == 2);
  CHECK(back.pieces()[0].interval.lower == -inf);
  CHECK(back.pieces()[1].interval.upper == inf);
  CHECK(back(0.5) == 0.0);
  CHECK(back(7) == -1.0);
}

TEST_CASE("triples") {
  const ConditionalTriple t({1, 2, 3}, {{0, 2}, {1}});
  CHECK(json::triple_from_json(json::parse(json::to_json(t).dump())) == t);
  const auto uniform = json::triple_from_json(json::parse(R"({"partition": [[0, 1], [2, 3]]})"));
  CHECK(uniform == ConditionalTriple::canonical());
  CHECK(json::triple_from_json(json::parse(R"({"dim": 3, "partition": [[0, 1, 2]]})")) ==
        ConditionalTriple::trivial(3));
}

TEST_CASE("mass functions and generating functions") {
  const auto finite = MassFunction::finite({Element{0.25, 1}, Element{0.75, 0}});
  const auto f2 = json::mass_function_from_json(json::parse(json::to_json(finite).dump()));
  CHECK(f2.finite_coefficients() == finite.finite_coefficients());
  const auto poisson = MassFunction::poisson(Element{1.5, 0.25});
  CHECK(json::mass_function_from_json(json::to_json(poisson)).poisson_parameter() == Element{1.5, 0.25});
  const auto compound = MassFunction::compound(poisson, MassFunction::finite({Element{0.5, 0.5}, Element{0.5, 0.5}}));
  const auto c2 = json::mass_function_from_json(json::to_json(compound));
  CHECK(c2.kind() == MassFunction::Kind::compound);
  CHECK(c2.coefficients(6) == compound.coefficients(6));

  const auto t = ConditionalTriple::canonical();
  for (const Family& fam : {Family{Bernoulli{Element{0.5, 0.5, 0.25, 0.25}}},
                            Family{Binomial{4, Element{0.5, 0.5, 0.25, 0.25}}}, Family{Poisson{Element::unit(4)}}}) {
    const auto g = GenFun::from_family(t, fam);
    const auto back = json::genfun_from_json(json::parse(json::to_json(g).dump()));
    REQUIRE(back.closed_form().has_value());
    CHECK(back.closed_form()->index() == g.closed_form()->index());
    for (double s : {0.0, 0.5, 1.0, 2.0}) CHECK(eval(back, s) == eval(g, s));
  }
  const auto plain = json::genfun_from_json(json::to_json(GenFun(finite)));
  CHECK_FALSE(plain.closed_form().has_value());
}

TEST_CASE("error codes") {
  CHECK(error_code([] { json::parse("{\"partition\": ["); }) == "bad_json");
  CHECK(error_code([] { json::element_from_json(json::parse("[1, \"x\"]")); }) == "bad_input");
  CHECK(error_code([] { json::element_from_json(json::parse("[]")); }) == "bad_input");
  CHECK(error_code([] { json::projection_from_json(json::parse("[2]")); }) == "bad_input");
  CHECK(error_code([] { json::triple_from_json(json::parse(R"({"partition": [[0, 1], [1, 2]]})")); }) ==
        "bad_partition");
  CHECK(error_code([] { json::triple_from_json(json::parse(R"({"partition": [[0, -1]]})")); }) == "bad_partition");
  CHECK(error_code([] { json::triple_from_json(json::parse(R"({"weights": [1, 1]})")); }) == "bad_partition");
  CHECK(error_code([] { json::triple_from_json(json::parse(R"({"weights": [1, 0], "partition": [[0, 1]]})")); }) ==
        "bad_weights");
  CHECK(error_code([] { json::triple_from_json(json::parse(R"({"weights": [1, "a"], "partition": [[0, 1]]})")); }) ==
        "bad_weights");
  CHECK(error_code([] { json::mass_function_from_json(json::parse(R"({"kind": "geometric"})")); }) == "bad_input");
  CHECK(error_code([] {
          json::mass_function_from_json(json::parse(R"({"kind": "finite", "coeffs": [[0.5], [0.6]]})"));
        }) == "bad_mass");
}

TEST_CASE("doubles survive printing") {
  for (double v : {0.1, 1.0 / 3, -2.5e-300, 6.02214076e23, 0.0}) {
    CHECK(std::strtod(json::format_double(v).c_str(), nullptr) == v);
  }
  CHECK(json::format_double(0.5) == "0.5");
}
