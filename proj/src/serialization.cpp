#include "rieszgen/serialization.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "rieszgen/error.hpp"

namespace rieszgen::json {

namespace {

[[noreturn]] void bad(const std::string& what, const char* code = "bad_input") { throw Error(code, what); }

const json& field(const json& j, const char* key, const char* code = "bad_input") {
  if (!j.is_object() || !j.contains(key)) bad(std::string("missing field \"") + key + "\"", code);
  return j.at(key);
}

double number(const json& j, const char* what) {
  if (!j.is_number()) bad(std::string(what) + " must be a number");
  return j.get<double>();
}

json bound_to_json(double v) { return std::isinf(v) ? json(nullptr) : json(v); }

double bound_from_json(const json& j, double infinity) { return j.is_null() ? infinity : number(j, "interval bound"); }

json closed_form_to_json(const ClosedForm& form) {
  return std::visit(
      [](const auto& f) -> json {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, BernoulliForm>) {
          return {{"family", "bernoulli"}, {"p", to_json(f.p)}};
        } else if constexpr (std::is_same_v<T, BinomialForm>) {
          return {{"family", "binomial"}, {"n", f.n}, {"p", to_json(f.p)}};
        } else {
          return {{"family", "poisson"}, {"g", to_json(f.g)}};
        }
      },
      form);
}

ClosedForm closed_form_from_json(const json& j) {
  const json& fam = field(j, "family");
  if (!fam.is_string()) bad("closed_form.family must be a string");
  const auto name = fam.get<std::string>();
  if (name == "bernoulli") return BernoulliForm{element_from_json(field(j, "p"))};
  if (name == "binomial") {
    const json& n = field(j, "n");
    if (!n.is_number_unsigned()) bad("closed_form.n must be a nonnegative integer");
    return BinomialForm{n.get<unsigned>(), element_from_json(field(j, "p"))};
  }
  if (name == "poisson") return PoissonForm{element_from_json(field(j, "g"))};
  bad("unknown closed form family \"" + name + "\"");
}

}  // namespace

json to_json(const Element& x) { return json(std::vector<double>(x.values().begin(), x.values().end())); }

json to_json(const BandProjection& p) {
  json out = json::array();
  for (auto b : p.mask()) out.push_back(b ? 1 : 0);
  return out;
}

json to_json(const StepFunction& f) {
  json out = json::array();
  for (const auto& piece : f.pieces()) {
    out.push_back({{"a", bound_to_json(piece.interval.lower)},
                   {"b", bound_to_json(piece.interval.upper)},
                   {"value", piece.value}});
  }
  return out;
}

json to_json(const ConditionalTriple& t) {
  return {{"dim", t.dim()}, {"weights", t.weights()}, {"partition", t.partition()}};
}

json to_json(const MassFunction& m) {
  switch (m.kind()) {
    case MassFunction::Kind::finite: {
      json coeffs = json::array();
      for (const auto& c : m.finite_coefficients()) coeffs.push_back(to_json(c));
      return {{"kind", "finite"}, {"coeffs", coeffs}};
    }
    case MassFunction::Kind::poisson:
      return {{"kind", "poisson"}, {"g", to_json(m.poisson_parameter())}};
    case MassFunction::Kind::compound:
      return {{"kind", "compound"}, {"outer", to_json(m.outer())}, {"inner", to_json(m.inner())}};
  }
  return {};
}

json to_json(const GenFun& g) {
  json out = to_json(g.coefficients());
  if (g.closed_form()) out["closed_form"] = closed_form_to_json(*g.closed_form());
  return out;
}

Element element_from_json(const json& j) {
  if (!j.is_array() || j.empty()) bad("element must be a nonempty array of numbers");
  std::vector<double> v;
  v.reserve(j.size());
  for (const auto& item : j) v.push_back(number(item, "element entry"));
  return Element(std::move(v));
}

BandProjection projection_from_json(const json& j) {
  if (!j.is_array() || j.empty()) bad("projection must be a nonempty array of 0/1");
  std::vector<std::uint8_t> mask;
  for (const auto& item : j) {
    if (item.is_boolean()) {
      mask.push_back(item.get<bool>() ? 1 : 0);
    } else if (item.is_number_integer() && (item.get<int>() == 0 || item.get<int>() == 1)) {
      mask.push_back(static_cast<std::uint8_t>(item.get<int>()));
    } else {
      bad("projection entries must be 0 or 1");
    }
  }
  return BandProjection(std::move(mask));
}

StepFunction step_function_from_json(const json& j) {
  if (!j.is_array()) bad("step function must be an array of pieces");
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<StepPiece> pieces;
  for (const auto& item : j) {
    pieces.push_back(StepPiece{HalfOpenInterval{bound_from_json(field(item, "a"), -inf),
                                                bound_from_json(field(item, "b"), inf)},
                               number(field(item, "value"), "value")});
  }
  return StepFunction(std::move(pieces));
}

ConditionalTriple triple_from_json(const json& j) {
  if (!j.is_object()) bad("triple must be an object", "bad_partition");
  const json& part = field(j, "partition", "bad_partition");
  if (!part.is_array()) bad("partition must be an array of index arrays", "bad_partition");
  Partition partition;
  std::size_t covered = 0;
  for (const auto& block : part) {
    if (!block.is_array()) bad("partition blocks must be arrays", "bad_partition");
    Block b;
    for (const auto& idx : block) {
      if (!idx.is_number_unsigned()) bad("partition indices must be nonnegative integers", "bad_partition");
      b.push_back(idx.get<std::size_t>());
    }
    covered += b.size();
    partition.push_back(std::move(b));
  }
  std::optional<std::size_t> dim;
  if (j.contains("dim")) {
    if (!j["dim"].is_number_unsigned() || j["dim"].get<std::size_t>() == 0) bad("dim must be a positive integer");
    dim = j["dim"].get<std::size_t>();
  }
  std::vector<double> weights;
  if (j.contains("weights")) {
    const json& w = j["weights"];
    if (!w.is_array()) bad("weights must be an array", "bad_weights");
    for (const auto& item : w) {
      if (!item.is_number()) bad("weights must be numbers", "bad_weights");
      weights.push_back(item.get<double>());
    }
    if (dim && *dim != weights.size()) bad("dim does not match the number of weights", "bad_weights");
  } else {
    weights.assign(dim.value_or(covered), 1.0);
  }
  return ConditionalTriple(std::move(weights), std::move(partition));
}

MassFunction mass_function_from_json(const json& j) {
  const json& kind = field(j, "kind");
  if (!kind.is_string()) bad("kind must be a string");
  const auto name = kind.get<std::string>();
  if (name == "finite") {
    const json& coeffs = field(j, "coeffs");
    if (!coeffs.is_array() || coeffs.empty()) bad("coeffs must be a nonempty array of elements");
    std::vector<Element> c;
    for (const auto& item : coeffs) c.push_back(element_from_json(item));
    return MassFunction::finite(std::move(c));
  }
  if (name == "poisson") return MassFunction::poisson(element_from_json(field(j, "g")));
  if (name == "compound") {
    return MassFunction::compound(mass_function_from_json(field(j, "outer")),
                                  mass_function_from_json(field(j, "inner")));
  }
  bad("unknown mass function kind \"" + name + "\"");
}

GenFun genfun_from_json(const json& j) {
  std::optional<ClosedForm> form;
  if (j.is_object() && j.contains("closed_form") && !j["closed_form"].is_null()) {
    form = closed_form_from_json(j["closed_form"]);
  }
  return GenFun(mass_function_from_json(j), std::move(form));
}

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    bad(e.what(), "bad_json");
  }
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace rieszgen::json
