#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>

namespace fs = std::filesystem;

namespace {

struct Run {
  int status = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("rieszgen-cli-" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

Run run(const std::string& args) {
  static int counter = 0;
  const auto out = scratch() / ("stdout." + std::to_string(counter));
  const auto err = scratch() / ("stderr." + std::to_string(counter++));
  const std::string cmd = std::string(RIESZGEN_CLI) + " " + args + " >" + out.string() + " 2>" + err.string();
  const int raw = std::system(cmd.c_str());
  Run r;
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

std::string data(const char* name) { return std::string(RIESZGEN_DATA) + "/" + name; }

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> v;
  std::stringstream ss(text);
  for (std::string line; std::getline(ss, line);) v.push_back(line);
  return v;
}

std::vector<std::string> fields(const std::string& line) {
  std::vector<std::string> v;
  std::stringstream ss(line);
  for (std::string f; std::getline(ss, f, ',');) v.push_back(f);
  return v;
}

}  // namespace

TEST_CASE("instance verification passes on the canonical data") {
  const auto r = run("verify --suite instance --input " + data("canonical.json"));
  CHECK(r.status == 0);
  CHECK(r.out.find("\"passed\": true") != std::string::npos);
}

TEST_CASE("Poisson approximation improves with n") {
  const auto r = run("poisson-approx --g 1.0 --n 10,100");
  REQUIRE(r.status == 0);
  const auto rows = lines(r.out);
  REQUIRE(rows.size() > 1);
  CHECK(rows[0] == "n,k,block,binomial_mass,poisson_mass,abs_err");
  double err10 = 0, err100 = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto f = fields(rows[i]);
    REQUIRE(f.size() == 6);
    const double e = std::strtod(f[5].c_str(), nullptr);
    (f[0] == "10" ? err10 : err100) = std::max(f[0] == "10" ? err10 : err100, e);
  }
  CHECK(err100 < err10);
}

TEST_CASE("malformed partitions exit with code 2") {
  const auto r = run("verify --suite instance --input " + data("bad_partition.json"));
  CHECK(r.status == 2);
  CHECK(r.err.find("\"bad_partition\"") != std::string::npos);
  CHECK(r.out.empty());
}

TEST_CASE("bad arguments exit with code 2") {
  CHECK(run("genfun --no-such-flag").status == 2);
  CHECK(run("").status == 2);
  const auto r = run("genfun --input " + (scratch() / "missing.json").string());
  CHECK(r.status == 2);
  CHECK(r.err.find("\"error\"") != std::string::npos);
}

TEST_CASE("outputs are byte-identical across runs") {
  for (const std::string args : {"genfun --input " + data("canonical.json"),
                                 "chernoff-table --input " + data("canonical.json"),
                                 std::string("poisson-approx --g 2 --n 10,50 --workers 3"),
                                 "compound --input " + data("compound_desk.json")}) {
    CAPTURE(args);
    const auto a = run(args);
    const auto b = run(args);
    CHECK(a.status == 0);
    CHECK(a.out == b.out);
    CHECK_FALSE(a.out.empty());
  }
  const auto w1 = run("poisson-approx --g 2 --n 10,50 --workers 1");
  const auto w4 = run("poisson-approx --g 2 --n 10,50 --workers 4");
  CHECK(w1.out == w4.out);
}

TEST_CASE("file output is written atomically") {
  const auto target = scratch() / "table.csv";
  const auto r = run("genfun --input " + data("canonical.json") + " --out " + target.string());
  REQUIRE(r.status == 0);
  CHECK(r.out.empty());
  CHECK(fs::exists(target));
  CHECK(slurp(target) == run("genfun --input " + data("canonical.json")).out);
  for (const auto& entry : fs::directory_iterator(scratch())) {
    CHECK(entry.path().filename().string().find(".tmp") == std::string::npos);
  }
}

TEST_CASE("generating function table") {
  const auto r = run("genfun --input " + data("canonical.json") + " --s-grid 0,0.5,1");
  REQUIRE(r.status == 0);
  const auto rows = lines(r.out);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0] == "s,block_0,block_1");
  CHECK(rows[2] == "0.5,0.75,0.375");
  CHECK(rows[3] == "1,1,1");
  const auto m = run("genfun --input " + data("canonical.json") + " --masses --kmax 2");
  REQUIRE(m.status == 0);
  CHECK(lines(m.out).size() == 4);
}

TEST_CASE("compound and independence commands") {
  CHECK(run("compound --input " + data("compound_desk.json")).status == 0);
  CHECK(run("compound --g 1 --p 0.5").status == 0);
  CHECK(run("compound --g 1 --p 1.5").status == 2);
  const auto ind = run("independence-check --input " + data("independence.json"));
  CHECK(ind.status == 0);
  CHECK(ind.out.find("\"independent\": true") != std::string::npos);
  const auto dep = scratch() / "dependent.json";
  std::ofstream(dep) << R"({"triple": {"partition": [[0, 1, 2, 3]]}, "projections": [[1, 1, 0, 0], [1, 1, 0, 0]]})";
  const auto d = run("independence-check --input " + dep.string());
  CHECK(d.status == 1);
  CHECK(d.out.find("\"independent\": false") != std::string::npos);
}

TEST_CASE("Chernoff table") {
  const auto r = run("chernoff-table --input " + data("canonical.json") + " --alpha 1 --s-grid 2");
  REQUIRE(r.status == 0);
  const auto rows = lines(r.out);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] == "alpha,s,block,lhs,rhs,slack");
  CHECK(rows[1] == "1,2,0,0.5,0.75,0.25");
  CHECK(rows[2] == "1,2,1,1,1.5,0.5");
  CHECK(run("chernoff-table --input " + data("canonical.json") + " --s-grid 1").status == 2);
}
