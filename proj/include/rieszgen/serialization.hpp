#pragma once

// JSON forms of the library values.
//
//   Element          [x0, x1, ...]
//   BandProjection   [0, 1, ...]
//   StepFunction     [{"a": a, "b": b, "value": v}, ...], null for -inf / +inf
//   ConditionalTriple {"dim": d, "weights": [...], "partition": [[...], ...]}
//   MassFunction     {"kind": "finite", "coeffs": [[...], ...]} or
//                    {"kind": "poisson", "g": [...]}
//   GenFun           the MassFunction object plus an optional "closed_form":
//                    {"family": "bernoulli"|"binomial"|"poisson", ...}
//
// Parsers throw Error with code "bad_input" on malformed documents, and let
// the constructors' own codes (bad_partition, bad_weights, bad_mass, ...)
// through.

#include <string>

#include <json.hpp>

#include "rieszgen/calculus.hpp"
#include "rieszgen/conditional.hpp"
#include "rieszgen/distributions.hpp"
#include "rieszgen/element.hpp"
#include "rieszgen/genfun.hpp"

namespace rieszgen::json {

using nlohmann::json;

json to_json(const Element& x);
json to_json(const BandProjection& p);
json to_json(const StepFunction& f);
json to_json(const ConditionalTriple& t);
json to_json(const MassFunction& m);
json to_json(const GenFun& g);

Element element_from_json(const json& j);
BandProjection projection_from_json(const json& j);
StepFunction step_function_from_json(const json& j);
// "weights" may be omitted (uniform) and "dim" may be omitted (taken from the
// weights or the partition).
ConditionalTriple triple_from_json(const json& j);
MassFunction mass_function_from_json(const json& j);
GenFun genfun_from_json(const json& j);

// Parses text, mapping syntax errors to code "bad_json".
json parse(const std::string& text);

// 17 significant digits, enough to read back the same double.
std::string format_double(double v);

}  // namespace rieszgen::json
