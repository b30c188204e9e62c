#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <doctest.h>
#include <json.hpp>

#include "interdesign/io.hpp"

using namespace interdesign;
using nlohmann::json;

namespace {

std::string temp_path(const std::string& name) {
  return std::string("/tmp/interdesign_test_") + name;
}

int run_cli(const std::string& args, const std::string& out_file) {
  const std::string cmd = std::string(INTERDESIGN_CLI_PATH) + " " + args +
                          " > " + out_file + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

InstanceFile sample_file() {
  InstanceFile f;
  f.inst.d = 2;
  f.inst.k = 3;
  f.inst.vectors.resize(3, 2);
  f.inst.vectors << 1.0, 0.25, -0.5, 1.0, 0.125, 0.75;
  f.x = std::vector<double>{1.0, 1.0, 1.0};
  f.kind = ObjectiveKind::Ratio(1, 2);
  return f;
}

}  // namespace

TEST_CASE("CounterRng is deterministic and seed-sensitive") {
  CounterRng a(5), b(5), c(6);
  for (int i = 0; i < 100; ++i) {
    const double u = a.uniform();
    CHECK(u == b.uniform());
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
  bool differs = false;
  CounterRng a2(5);
  for (int i = 0; i < 10; ++i) differs = differs || (a2.uniform() != c.uniform());
  CHECK(differs);
}

TEST_CASE("gaussian generator has sane moments") {
  CounterRng rng(9);
  double sum = 0.0, sq = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double g = rng.gaussian();
    sum += g;
    sq += g * g;
  }
  CHECK(std::abs(sum / n) < 0.05);
  CHECK(sq / n == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("instance JSON round trip") {
  const InstanceFile f = sample_file();
  const std::string path = temp_path("roundtrip.json");
  write_instance(path, f);
  const InstanceFile g = read_instance(path);
  CHECK(g.inst.d == f.inst.d);
  CHECK(g.inst.k == f.inst.k);
  CHECK((g.inst.vectors - f.inst.vectors).cwiseAbs().maxCoeff() == 0.0);
  REQUIRE(g.x.has_value());
  CHECK(*g.x == *f.x);
  REQUIRE(g.kind.has_value());
  CHECK(g.kind->is_ratio());
  CHECK(g.kind->l_prime == 1);
  CHECK(g.kind->l == 2);
  CHECK(instance_digest(f) == instance_digest(g));
}

TEST_CASE("instance parsing errors") {
  CHECK_THROWS_AS((void)parse_instance(json{{"schema", 2}}), ParseError);
  json bad = {{"schema", 1}, {"d", 2}, {"k", 1},
              {"vectors", {{1.0, 0.0}, {0.0, 1.0}}}};
  CHECK_THROWS_AS((void)parse_instance(bad), ParseError);  // k < d
  json ragged = {{"schema", 1}, {"d", 2}, {"k", 2}, {"vectors", {{1.0}}}};
  CHECK_THROWS_AS((void)parse_instance(ragged), ParseError);
  CHECK_THROWS_AS((void)parse_objective("Q", 0, 0), ParseError);
}

TEST_CASE("generators") {
  const Instance g = make_gaussian(3, 4, 7, 2);
  CHECK(g.count() == 7);
  CHECK(g.vectors.cols() == 3);
  const Instance g2 = make_gaussian(3, 4, 7, 2);
  CHECK((g.vectors - g2.vectors).cwiseAbs().maxCoeff() == 0.0);

  const Instance b = make_basis_copies(2, 2, 5);
  CHECK(b.vectors.row(0)(0) == 1.0);
  CHECK(b.vectors.row(2)(0) == 1.0);
  CHECK(b.vectors.row(3)(1) == 1.0);

  const Instance c = make_clustered(3, 5, 9, 4);
  CHECK(c.count() == 9);
}

TEST_CASE("cli solve and round produce valid reports") {
  const std::string inst_path = temp_path("cli_inst.json");
  write_instance(inst_path, sample_file());
  const std::string out = temp_path("cli_out.json");

  SUBCASE("solve") {
    CHECK(run_cli("solve " + inst_path + " --objective D", out) == 0);
    const json j = json::parse(slurp(out));
    CHECK(j.at("schema") == 1);
    CHECK(j.at("objective") == "D");
    CHECK(j.at("fractional").at("x").size() == 3);
    CHECK(j.at("fractional").at("certified") == true);
  }
  SUBCASE("round with the stored objective") {
    CHECK(run_cli("round " + inst_path, out) == 0);
    const json j = json::parse(slurp(out));
    CHECK(j.at("objective") == "ratio");
    CHECK(j.at("selection").size() == 3);
    for (const auto& s : j.at("selection")) {
      CHECK(s.get<int>() >= 1);
      CHECK(s.get<int>() <= 3);
    }
    CHECK(j.at("certified_ratio").get<double>() <=
          j.at("theorem_bound").get<double>() * (1.0 + 1e-6));
  }
  SUBCASE("round with --input-x") {
    CHECK(run_cli("round " + inst_path + " --objective A --input-x", out) == 0);
    const json j = json::parse(slurp(out));
    CHECK(j.at("objective") == "A");
  }
  SUBCASE("reports are identical across runs modulo timings") {
    REQUIRE(run_cli("round " + inst_path + " --objective D", out) == 0);
    json a = json::parse(slurp(out));
    REQUIRE(run_cli("round " + inst_path + " --objective D", out) == 0);
    json b = json::parse(slurp(out));
    a.erase("timings");
    b.erase("timings");
    CHECK(a == b);
  }
}

TEST_CASE("cli exit codes") {
  const std::string out = temp_path("cli_err.txt");
  SUBCASE("parse failure is exit 2") {
    const std::string bad = temp_path("bad.json");
    std::ofstream(bad) << "{\"schema\":1,\"d\":2,\"k\":1,\"vectors\":[[1,0],[0,1]]}";
    CHECK(run_cli("solve " + bad + " --objective D", out) == 2);
  }
  SUBCASE("missing file is exit 2") {
    CHECK(run_cli("solve /tmp/interdesign_no_such_file.json", out) == 2);
  }
  SUBCASE("infeasible instance is exit 3") {
    const std::string path = temp_path("flat.json");
    std::ofstream(path) << "{\"schema\":1,\"d\":2,\"k\":2,\"vectors\":[[1,0],[2,0]]}";
    CHECK(run_cli("solve " + path + " --objective D", out) == 3);
  }
  SUBCASE("verify passes on a tiny instance") {
    const std::string path = temp_path("tiny.json");
    std::ofstream(path) << "{\"schema\":1,\"d\":1,\"k\":2,\"vectors\":[[1],[2]]}";
    CHECK(run_cli("verify " + path, out) == 0);
    CHECK(slurp(out).find("[FAIL]") == std::string::npos);
  }
  SUBCASE("verify respects the leaf budget") {
    const std::string path = temp_path("tiny2.json");
    std::ofstream(path) << "{\"schema\":1,\"d\":1,\"k\":2,\"vectors\":[[1],[2]]}";
    CHECK(run_cli("verify " + path + " --max-leaves 2", out) == 2);
  }
}

TEST_CASE("cli bench emits a table") {
  const std::string out = temp_path("bench.json");
  const std::string txt = temp_path("bench.txt");
  CHECK(run_cli("bench --generator basis-copies --sizes 2:2:4 --seed 3 --out " + out,
                txt) == 0);
  const json j = json::parse(slurp(out));
  CHECK(j.at("rows").size() == 3);
  for (const auto& row : j.at("rows")) {
    CHECK(row.at("certified_ratio").get<double>() <=
          row.at("theorem_bound").get<double>() * (1.0 + 1e-6));
  }
}
