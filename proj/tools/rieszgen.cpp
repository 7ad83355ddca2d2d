// rieszgen: batch front end for the conditional Riesz triple library.
//
// Exit status: 0 when every check of the selected command passes, 1 when a
// check fails, 2 on malformed input (with an error JSON on stderr).

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rieszgen/bounds.hpp"
#include "rieszgen/conditional.hpp"
#include "rieszgen/convergence.hpp"
#include "rieszgen/distributions.hpp"
#include "rieszgen/error.hpp"
#include "rieszgen/genfun.hpp"
#include "rieszgen/serialization.hpp"
#include "rieszgen/verification.hpp"

namespace {

using namespace rieszgen;
using rieszgen::json::json;
using rieszgen::json::format_double;

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kBadInput = 2;

// A check that ran and failed, reported with a code like an input error.
struct CheckFailure {
  std::string code;
  std::string message;
};

struct Common {
  std::string input;
  std::string out;
  double tol = 1e-10;
  std::uint64_t seed = 0;
  unsigned workers = 1;
};

void print_error(const std::string& code, const std::string& message) {
  std::cerr << json{{"error", {{"code", code}, {"message", message}}}}.dump() << '\n';
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("missing_input", "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Writes to stdout for an empty path, otherwise through a temporary file in
// the same directory followed by a rename.
void write_output(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  const std::filesystem::path target(path);
  std::filesystem::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("io_error", "cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw Error("io_error", "write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, target, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw Error("io_error", "cannot rename onto " + path + ": " + ec.message());
  }
}

std::vector<std::string> split(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw Error("bad_arguments", "not a number: \"" + s + "\"");
  return v;
}

std::vector<double> parse_reals(const std::string& text) {
  std::vector<double> out;
  for (const auto& item : split(text)) out.push_back(to_double(item));
  if (out.empty()) throw Error("bad_arguments", "empty list");
  return out;
}

std::vector<unsigned> parse_counts(const std::string& text) {
  std::vector<unsigned> out;
  for (double v : parse_reals(text)) {
    if (!(v >= 1.0) || v != std::floor(v) || v > 1e9) throw Error("bad_arguments", "--n expects positive integers");
    out.push_back(static_cast<unsigned>(v));
  }
  return out;
}

std::string join(const std::vector<std::string>& cells) {
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) line += ',';
    line += cells[i];
  }
  return line + '\n';
}

std::string block_header(const char* first, std::size_t blocks) {
  std::vector<std::string> cells{first};
  for (std::size_t b = 0; b < blocks; ++b) cells.push_back("block_" + std::to_string(b));
  return join(cells);
}

const char* kCanonicalInstance = R"({
  "triple": {"dim": 4, "weights": [1, 1, 1, 1], "partition": [[0, 1], [2, 3]]},
  "x": [0, 1, 1, 2]
})";

json load_document(const std::string& path) {
  return path.empty() ? json::parse(kCanonicalInstance) : rieszgen::json::parse(read_file(path));
}

ConditionalTriple triple_of(const json& doc) {
  if (doc.is_object() && doc.contains("triple")) return rieszgen::json::triple_from_json(doc["triple"]);
  return rieszgen::json::triple_from_json(doc);
}

const json& field_or_throw(const json& doc, const char* key) {
  if (!doc.is_object() || !doc.contains(key)) throw Error("bad_input", std::string("missing field \"") + key + "\"");
  return doc[key];
}

NaturalElement natural_field(const json& doc, const char* key) {
  return NaturalElement(rieszgen::json::element_from_json(field_or_throw(doc, key)));
}

// A scalar or a JSON array.
Element parameter(const std::string& text, const std::optional<ConditionalTriple>& triple, const char* flag) {
  const json j = rieszgen::json::parse(text);
  if (j.is_number()) return Element::constant(triple ? triple->dim() : 1, j.get<double>());
  if (j.is_array()) return rieszgen::json::element_from_json(j);
  throw Error("bad_arguments", std::string(flag) + " expects a number or a JSON array");
}

ConditionalTriple default_triple(const Element& g) {
  return g.dim() == 1 ? ConditionalTriple::trivial(1) : ConditionalTriple::discrete(g.dim());
}

// ---- verify ---------------------------------------------------------------

int run_verify(const Common& c, const std::string& suite) {
  json report{{"seed", c.seed}, {"tolerance", c.tol}};
  bool ok = true;
  if (suite == "all" || suite == "instance") {
    const json doc = load_document(c.input);
    const ConditionalTriple triple = triple_of(doc);
    const NaturalElement x = natural_field(doc, "x");
    json checks = json::array();
    for (const auto& r : verify::verify_instance(triple, x, c.tol)) {
      ok = ok && r.passed;
      checks.push_back({{"name", r.name}, {"passed", r.passed}, {"max_error", r.max_error}});
    }
    report["instance"] = {{"triple", rieszgen::json::to_json(triple)},
                          {"x", rieszgen::json::to_json(x.element())},
                          {"checks", checks}};
  }
  if (suite == "all" || suite == "acceptance") {
    json criteria = json::array();
    for (const auto& r : verify::run_acceptance({c.seed, c.workers})) {
      ok = ok && r.passed;
      // Timings go to stderr.
      std::fprintf(stderr, "[%s] %2d %s (%.2fs)\n", r.passed ? "PASS" : "FAIL", r.id, r.name.c_str(), r.seconds);
      criteria.push_back({{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
    }
    report["criteria"] = criteria;
  }
  report["passed"] = ok;
  write_output(c.out, report.dump(2) + '\n');
  return ok ? kOk : kCheckFailed;
}

// ---- genfun ---------------------------------------------------------------

int run_genfun(const Common& c, const std::string& s_grid, bool masses, std::optional<unsigned> k_max) {
  const json doc = load_document(c.input);
  const ConditionalTriple triple = triple_of(doc);
  std::optional<GenFun> g;
  if (doc.contains("law")) {
    g = rieszgen::json::genfun_from_json(doc["law"]);
  } else {
    g = gen_from_element(triple, natural_field(doc, "x"));
  }
  require_same_dim(triple.dim(), g->dim(), "genfun");
  std::string csv;
  if (masses) {
    const auto top = g->coefficients().support_max();
    const unsigned count = k_max ? *k_max + 1 : (top ? *top + 1 : 21u);
    csv = block_header("k", triple.block_count());
    const auto coeffs = g->coefficients().coefficients(count);
    for (unsigned k = 0; k < count; ++k) {
      std::vector<std::string> row{std::to_string(k)};
      for (double v : triple.block_values(coeffs[k])) row.push_back(format_double(v));
      csv += join(row);
    }
  } else {
    csv = block_header("s", triple.block_count());
    for (double s : parse_reals(s_grid)) {
      std::vector<std::string> row{format_double(s)};
      for (double v : triple.block_values(eval(*g, s))) row.push_back(format_double(v));
      csv += join(row);
    }
  }
  write_output(c.out, csv);
  return kOk;
}

// ---- chernoff-table -------------------------------------------------------

int run_chernoff(const Common& c, const std::string& alpha_list, const std::string& s_grid) {
  const json doc = load_document(c.input);
  const ConditionalTriple triple = triple_of(doc);
  const NaturalElement x = natural_field(doc, "x");
  const GenFun g = gen_from_element(triple, x);
  std::vector<double> alphas;
  if (alpha_list.empty()) {
    for (unsigned a = 0; a <= x.max_value() + 1; ++a) alphas.push_back(a);
  } else {
    alphas = parse_reals(alpha_list);
  }
  const std::vector<double> grid = parse_reals(s_grid);
  for (double s : grid) {
    if (!(s > 0.0) || s == 1.0) throw Error("bad_arguments", "--s-grid values must be in (0,1) or (1,inf)");
  }
  bool ok = true;
  std::string csv = "alpha,s,block,lhs,rhs,slack\n";
  for (double alpha : alphas) {
    for (double s : grid) {
      const TailBoundReport r =
          s > 1.0 ? chernoff_upper(triple, g, alpha, s, x) : chernoff_lower(triple, g, alpha, s, x);
      ok = ok && r.holds(c.tol);
      const auto lhs = triple.block_values(r.lhs);
      const auto rhs = triple.block_values(r.rhs);
      const auto slack = triple.block_values(r.slack);
      for (std::size_t b = 0; b < lhs.size(); ++b) {
        csv += join({format_double(alpha), format_double(s), std::to_string(b), format_double(lhs[b]),
                     format_double(rhs[b]), format_double(slack[b])});
      }
    }
  }
  write_output(c.out, csv);
  return ok ? kOk : kCheckFailed;
}

// ---- poisson-approx -------------------------------------------------------

int run_poisson(const Common& c, const std::string& g_text, const std::string& n_text, unsigned k_max) {
  std::optional<ConditionalTriple> triple;
  if (!c.input.empty()) triple = triple_of(rieszgen::json::parse(read_file(c.input)));
  const Element g = parameter(g_text, triple, "--g");
  if (!triple) triple = default_triple(g);
  const auto r = poisson_limit_experiment(*triple, g, parse_counts(n_text), k_max, c.workers);
  std::string csv = "n,k,block,binomial_mass,poisson_mass,abs_err\n";
  for (const auto& row : r.rows) {
    csv += join({std::to_string(row.n), std::to_string(row.k), std::to_string(row.block),
                 format_double(row.binomial_mass), format_double(row.poisson_mass), format_double(row.abs_err)});
  }
  write_output(c.out, csv);
  return r.within_threshold && r.strictly_decreasing ? kOk : kCheckFailed;
}

// ---- compound -------------------------------------------------------------

std::string compound_rows(const ConditionalTriple& triple, const std::vector<Element>& got,
                          const std::vector<Element>& want, double& worst) {
  std::string csv = "k,block,compose_mass,reference_mass,abs_err\n";
  for (std::size_t k = 0; k < got.size(); ++k) {
    const auto a = triple.block_values(got[k]);
    const auto b = triple.block_values(want[k]);
    for (std::size_t j = 0; j < a.size(); ++j) {
      const double err = std::fabs(a[j] - b[j]);
      worst = std::max(worst, err);
      csv += join({std::to_string(k), std::to_string(j), format_double(a[j]), format_double(b[j]),
                   format_double(err)});
    }
  }
  return csv;
}

int run_compound(const Common& c, const std::string& g_text, const std::string& p_text, unsigned k_max) {
  double worst = 0.0;
  std::string csv;
  if (c.input.empty()) {
    if (g_text.empty() || p_text.empty()) throw Error("bad_arguments", "compound needs --input or both --g and --p");
    const Element g = parameter(g_text, std::nullopt, "--g");
    const ConditionalTriple triple = default_triple(g);
    const Element p = parameter(p_text, triple, "--p");
    const GenFun gS = compose(GenFun::from_family(triple, Poisson{g}), GenFun::from_family(triple, Bernoulli{p}));
    const auto got = gS.coefficients().coefficients(k_max + 1);
    std::vector<Element> want;
    for (unsigned k = 0; k <= k_max; ++k) want.push_back(family_mass(triple, Poisson{multiply(p, g)}, k));
    csv = compound_rows(triple, got, want, worst);
  } else {
    const json doc = rieszgen::json::parse(read_file(c.input));
    ConditionalTriple triple = triple_of(doc);
    std::optional<NaturalElement> N;
    std::vector<NaturalElement> xs;
    if (doc.contains("N_law")) {
      const MassFunction n_law = rieszgen::json::mass_function_from_json(doc["N_law"]);
      const MassFunction x_law = rieszgen::json::mass_function_from_json(field_or_throw(doc, "x_law"));
      const auto top = n_law.support_max();
      if (!top) throw Error("bad_input", "N_law must have finite support");
      IidRealization r = realize_iid(triple, n_law, 1);
      for (unsigned i = 0; i < *top; ++i) r = adjoin(r, x_law);
      triple = r.triple;
      N = r.elements[0];
      xs.assign(r.elements.begin() + 1, r.elements.end());
    } else {
      N = natural_field(doc, "N");
      if (!doc.contains("x") || !doc["x"].is_array()) throw Error("bad_input", "\"x\" must be a list of elements");
      for (const auto& item : doc["x"]) xs.push_back(NaturalElement(rieszgen::json::element_from_json(item)));
    }
    if (xs.empty()) throw Error("bad_input", "at least one summand is required");
    // compose assumes these hypotheses; this path audits them first.
    std::vector<Element> family{N->element()};
    for (const auto& x : xs) family.push_back(x.element());
    if (!check_family_independent(triple, family)) {
      throw CheckFailure{"not_independent", "N, x_1, x_2, ... are not jointly T-independent"};
    }
    for (const auto& x : xs) {
      if (!equal_in_distribution(triple, x, xs.front())) {
        throw CheckFailure{"not_identically_distributed", "the summands x_i do not share one distribution"};
      }
    }
    std::vector<NaturalElement> indexed{NaturalElement(Element::zero(triple.dim()))};
    indexed.insert(indexed.end(), xs.begin(), xs.end());
    const NaturalElement S = random_index_sum(triple, *N, indexed);
    const GenFun gS = compose(gen_from_element(triple, *N), gen_from_element(triple, xs.front()));
    const unsigned count = std::max(S.max_value(), *gS.coefficients().support_max()) + 1;
    csv = compound_rows(triple, gS.coefficients().coefficients(count), mass_function(triple, S).coefficients(count),
                        worst);
  }
  write_output(c.out, csv);
  return worst <= c.tol ? kOk : kCheckFailed;
}

// ---- independence-check ---------------------------------------------------

int run_independence(const Common& c) {
  if (c.input.empty()) throw Error("bad_arguments", "independence-check needs --input");
  const json doc = rieszgen::json::parse(read_file(c.input));
  const ConditionalTriple triple = triple_of(doc);
  json report;
  bool independent = false;
  if (doc.contains("projections")) {
    std::vector<BandProjection> ps;
    for (const auto& item : doc["projections"]) ps.push_back(rieszgen::json::projection_from_json(item));
    for (const auto& p : ps) require_same_dim(triple.dim(), p.dim(), "independence-check");
    independent = check_projections_independent(triple, ps);
    report = {{"kind", "projections"}, {"count", ps.size()}};
  } else if (doc.contains("elements")) {
    std::vector<Element> xs;
    for (const auto& item : doc["elements"]) xs.push_back(rieszgen::json::element_from_json(item));
    independent = check_family_independent(triple, xs);
    report = {{"kind", "elements"}, {"count", xs.size()}};
  } else {
    throw Error("bad_input", "expected \"projections\" or \"elements\"");
  }
  report["independent"] = independent;
  write_output(c.out, report.dump(2) + '\n');
  return independent ? kOk : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generating functions, tail bounds and Poisson approximation on conditional Riesz triples"};
  app.require_subcommand(1);
  Common common;
  std::string s_grid = "0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1";
  std::string chernoff_grid = "0.25,0.5,0.75,1.5,2,4";
  std::string alpha_list;
  std::string g_text;
  std::string p_text;
  std::string n_text = "10,50,100,500";
  unsigned k_max = 20;
  std::optional<unsigned> genfun_k_max;
  std::string suite = "all";
  bool masses = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--input", common.input, "instance JSON");
    sub->add_option("--out", common.out, "output path (stdout when omitted)");
    sub->add_option("--tol", common.tol, "check tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--seed", common.seed, "random seed");
    sub->add_option("--workers", common.workers, "worker threads")->check(CLI::Range(1u, 256u));
  };

  auto* verify_cmd = app.add_subcommand("verify", "run the instance checks and the acceptance suite");
  add_common(verify_cmd);
  verify_cmd->add_option("--suite", suite, "all, instance or acceptance")
      ->check(CLI::IsMember({"all", "instance", "acceptance"}));

  auto* genfun_cmd = app.add_subcommand("genfun", "evaluate a generating function over an s-grid");
  add_common(genfun_cmd);
  genfun_cmd->add_option("--s-grid", s_grid, "comma-separated s values");
  genfun_cmd->add_flag("--masses", masses, "print the mass table instead");
  genfun_cmd->add_option("--kmax", genfun_k_max, "largest k in the mass table");

  auto* chernoff_cmd = app.add_subcommand("chernoff-table", "tail probabilities against Chernoff bounds");
  add_common(chernoff_cmd);
  chernoff_cmd->add_option("--s-grid", chernoff_grid, "s values; s > 1 upper tail, s < 1 lower tail");
  chernoff_cmd->add_option("--alpha", alpha_list, "comma-separated thresholds");

  auto* poisson_cmd = app.add_subcommand("poisson-approx", "Binomial(n, g/n) against Poisson(g)");
  add_common(poisson_cmd);
  poisson_cmd->add_option("--g", g_text, "scalar or JSON element")->required();
  poisson_cmd->add_option("--n", n_text, "comma-separated n values");
  poisson_cmd->add_option("--kmax", k_max, "largest k");

  auto* compound_cmd = app.add_subcommand("compound", "random sums: composition against direct masses");
  add_common(compound_cmd);
  compound_cmd->add_option("--g", g_text, "Poisson parameter (without --input)");
  compound_cmd->add_option("--p", p_text, "Bernoulli parameter (without --input)");
  compound_cmd->add_option("--kmax", k_max, "largest k (without --input)");

  auto* indep_cmd = app.add_subcommand("independence-check", "T-independence of projections or elements");
  add_common(indep_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    print_error("bad_arguments", e.what());
    return kBadInput;
  }

  try {
    if (*verify_cmd) return run_verify(common, suite);
    if (*genfun_cmd) return run_genfun(common, s_grid, masses, genfun_k_max);
    if (*chernoff_cmd) return run_chernoff(common, alpha_list, chernoff_grid);
    if (*poisson_cmd) return run_poisson(common, g_text, n_text, k_max);
    if (*compound_cmd) return run_compound(common, g_text, p_text, k_max);
    if (*indep_cmd) return run_independence(common);
  } catch (const CheckFailure& f) {
    print_error(f.code, f.message);
    return kCheckFailed;
  } catch (const rieszgen::Error& e) {
    print_error(e.code(), e.what());
    return kBadInput;
  } catch (const nlohmann::json::exception& e) {
    print_error("bad_input", e.what());
    return kBadInput;
  } catch (const std::exception& e) {
    print_error("internal_error", e.what());
    return kBadInput;
  }
  return kBadInput;
}
