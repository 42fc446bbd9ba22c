#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "common.hpp"

using namespace qt;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* cli_path() { return std::getenv("QMS_CLI"); }
const char* data_dir() { return std::getenv("QMS_DATA"); }

int run_cli(const std::string& args) {
  std::string cmd = std::string(cli_path()) + " " + args;
  return std::system(cmd.c_str()) / 256;
}

}  // namespace

TEST_CASE("matrix JSON round trip is exact") {
  Rng rng(3);
  Matrix m = random_gaussian(3, 3, rng);
  Json j = matrix_to_json(m);
  std::string text = dump_json(j);
  Matrix back = matrix_from_json(parse_json(text), "roundtrip");
  CHECK((back - m).norm() == 0.0);
}

TEST_CASE("channel, state, lindblad and tensor JSON round trips") {
  Rng rng(5);
  CPMap map = random_unital_channel(2, 3, rng);
  CPMap map2 = channel_from_json(parse_json(dump_json(channel_to_json(map))));
  REQUIRE(map2.kraus.size() == map.kraus.size());
  for (std::size_t i = 0; i < map.kraus.size(); ++i)
    CHECK((map2.kraus[i] - map.kraus[i]).norm() == 0.0);

  DensityState st = random_density(3, rng);
  DensityState st2 = state_from_json(parse_json(dump_json(state_to_json(st))));
  CHECK((st2.rho - st.rho).norm() == 0.0);

  LindbladGenerator gen = random_lindblad(2, 2, rng);
  LindbladGenerator gen2 = lindblad_from_json(parse_json(dump_json(lindblad_to_json(gen))));
  CHECK((gen2.hamiltonian - gen.hamiltonian).norm() == 0.0);
  REQUIRE(gen2.jumps.size() == gen.jumps.size());

  PopescuTensor t = random_tensor(2, 2, rng);
  PopescuTensor t2 = tensor_from_json(parse_json(dump_json(tensor_to_json(t))));
  for (std::size_t i = 0; i < t.ops.size(); ++i)
    CHECK((t2.ops[i] - t.ops[i]).norm() == 0.0);
}

TEST_CASE("malformed JSON is rejected with a field pointer") {
  CHECK_THROWS_AS(matrix_from_json(parse_json("{\"dim\": 2}"), "m"), ValidationError);
  CHECK_THROWS_AS(matrix_from_json(parse_json("{\"dim\": 2, \"entries\": [[0]]}"), "m"),
                  ValidationError);
  try {
    matrix_from_json(parse_json("{\"dim\": 1, \"entries\": [[[0]]]}"), "m");
    CHECK(false);
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("entries[0][0]") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_json("{nope"), ValidationError);
  CHECK_THROWS_AS(channel_from_json(parse_json("{\"dim\": 2, \"kraus\": []}")),
                  ValidationError);
}

TEST_CASE("dump_json emits floats that reparse to the same double") {
  Json j;
  j["x"] = 0.1 + 0.2;
  j["y"] = 1.0 / 3.0;
  j["z"] = 123456789.123456789;
  Json back = parse_json(dump_json(j));
  CHECK(back["x"].get<double>() == j["x"].get<double>());
  CHECK(back["y"].get<double>() == j["y"].get<double>());
  CHECK(back["z"].get<double>() == j["z"].get<double>());
}

TEST_CASE("CLI: repeated runs with the same seed are byte-identical") {
  if (!cli_path() || !data_dir()) {
    MESSAGE("QMS_CLI / QMS_DATA not set; skipping CLI checks");
    return;
  }
  std::string ch = std::string(data_dir()) + "/depolarizing.json";
  REQUIRE(run_cli("analyze --channel " + ch + " --seed 7 --out /tmp/qms_a1.json") == 0);
  REQUIRE(run_cli("analyze --channel " + ch + " --seed 7 --out /tmp/qms_a2.json") == 0);
  CHECK(read_file("/tmp/qms_a1.json") == read_file("/tmp/qms_a2.json"));

  REQUIRE(run_cli("sweep --kind lindblad --count 3 --dim 2 --seed 9 --out /tmp/qms_s1.json") ==
          0);
  REQUIRE(run_cli("sweep --kind lindblad --count 3 --dim 2 --seed 9 --out /tmp/qms_s2.json") ==
          0);
  CHECK(read_file("/tmp/qms_s1.json") == read_file("/tmp/qms_s2.json"));
}

TEST_CASE("CLI: exit codes distinguish input errors from check failures") {
  if (!cli_path() || !data_dir()) return;
  CHECK(run_cli("analyze --channel /nonexistent.json --out /dev/null 2>/dev/null") == 2);
  std::string bad = "/tmp/qms_bad_channel.json";
  {
    std::ofstream f(bad);
    f << "{\"dim\": 2, \"kraus\": [{\"dim\": 2, \"entries\": [[[1,0],[0,0]],[[0,0],[0,0]]]}]}";
  }
  // not unital: parse-level validation, exit 2
  CHECK(run_cli("analyze --channel " + bad + " --out /dev/null 2>/dev/null") == 2);
  CHECK(run_cli("analyze --no-such-flag 2>/dev/null") == 2);
}

TEST_CASE("CLI: emitted dual channel re-parses and verifies") {
  if (!cli_path() || !data_dir()) return;
  std::string ch = std::string(data_dir()) + "/dephase_flip.json";
  REQUIRE(run_cli("dual --channel " + ch + " --out /tmp/qms_dual.json") == 0);
  Json rep = parse_json(read_file("/tmp/qms_dual.json"));
  CPMap dual = channel_from_json(rep["dual_channel"]);
  CHECK(dual.unitality_defect().norm() < 1e-10);
  for (const auto& r : rep["residuals"]) CHECK(r["pass"].get<bool>());
}
