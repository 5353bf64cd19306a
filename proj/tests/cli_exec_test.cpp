// End-to-end checks of the command-line tool: exit codes are a stable
// contract (0 fit/verified, 1 no-fit/refuted, 2 error) and generated files
// re-parse losslessly.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "exactfit/json_io.hpp"
#include "exactfit/nets.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

namespace {

namespace fs = std::filesystem;

const char* kCli = EXACTFIT_CLI_PATH;
const char* kDataDir = EXACTFIT_DATA_DIR;

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / fs::path("exactfit_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

int run(const std::string& args) {
  const std::string command = std::string(kCli) + " " + args + " > /dev/null 2>&1";
  int status = std::system(command.c_str());
  REQUIRE(status != -1);
  return WEXITSTATUS(status);
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

}  // namespace

TEST_CASE("formula pipeline: generate, witness, verify, tamper") {
  TempDir dir;
  const std::string formula = std::string(kDataDir) + "/fig4_formula.json";
  REQUIRE(fs::exists(formula));

  CHECK(run("gen-poits " + formula + " --activation relu --out " + dir.file("inst.json")) == 0);
  write_file(dir.file("t13.json"), R"({"T": [1, 3]})");
  CHECK(run("witness " + formula + " " + dir.file("t13.json") + " --out " + dir.file("net.json")) ==
        0);
  CHECK(run("verify " + dir.file("inst.json") + " " + dir.file("net.json")) == 0);

  // Perturbing one bias must flip the verdict to refuted.
  auto net_json = exactfit::io::load_json_file(dir.file("net.json"));
  auto net = std::get<exactfit::nets::ReluNetwork>(exactfit::io::network_from_json(net_json));
  net.units[0].b += 1;
  exactfit::io::save_json_file(dir.file("tampered.json"), exactfit::io::to_json(net));
  CHECK(run("verify " + dir.file("inst.json") + " " + dir.file("tampered.json")) == 1);

  // Non-witness assignments are an error for the witness builder.
  write_file(dir.file("tall.json"), R"({"T": [1, 2, 3, 4, 5]})");
  CHECK(run("witness " + formula + " " + dir.file("tall.json") + " --out " + dir.file("x.json")) ==
        2);

  // The threshold variant verifies, too.
  CHECK(run("gen-poits " + formula + " --activation lt --out " + dir.file("lt.json")) == 0);
  CHECK(run("witness " + formula + " " + dir.file("t13.json") + " --activation lt --out " +
            dir.file("lt_net.json")) == 0);
  CHECK(run("verify " + dir.file("lt.json") + " " + dir.file("lt_net.json")) == 0);

  // Degenerate formula and mismatched network dimension are errors.
  write_file(dir.file("empty.json"), R"({"n": 3, "clauses": []})");
  CHECK(run("gen-poits " + dir.file("empty.json") + " --out " + dir.file("e.json")) == 2);
  write_file(dir.file("net1d.json"),
             R"({"dim": 1, "activation": "relu", "units": [{"w": ["1"], "b": "0", "a": "1"}]})");
  CHECK(run("verify " + dir.file("inst.json") + " " + dir.file("net1d.json")) == 2);
}

TEST_CASE("solver exit codes") {
  TempDir dir;
  write_file(dir.file("v.json"),
             R"({"dim": 1, "k": 2, "gamma": "0", "activation": "relu",
                 "points": [{"x": ["0"], "y": "1"}, {"x": ["1"], "y": "0"}, {"x": ["2"], "y": "1"}]})");
  CHECK(run("solve " + dir.file("v.json") + " --method convex --out " + dir.file("w.json") +
            " --log " + dir.file("log.json")) == 0);
  CHECK(run("solve " + dir.file("v.json") + " --method brute --convex-only") == 0);
  CHECK(run("verify " + dir.file("v.json") + " " + dir.file("w.json")) == 0);
  CHECK(fs::exists(dir.file("log.json")));

  write_file(dir.file("v1.json"),
             R"({"dim": 1, "k": 1, "gamma": "0", "activation": "relu",
                 "points": [{"x": ["0"], "y": "1"}, {"x": ["1"], "y": "0"}, {"x": ["2"], "y": "1"}]})");
  CHECK(run("solve " + dir.file("v1.json") + " --method convex") == 1);
  CHECK(run("solve " + dir.file("v1.json") + " --method brute --convex-only") == 1);

  write_file(dir.file("lt.json"),
             R"({"dim": 1, "k": 1, "gamma": "0", "activation": "lt",
                 "points": [{"x": ["0"], "y": "0"}, {"x": ["1"], "y": "7"}]})");
  CHECK(run("solve " + dir.file("lt.json") + " --method convex") == 2);
  CHECK(run("solve " + dir.file("lt.json") + " --method brute") == 0);

  CHECK(run("solve " + dir.file("missing.json") + " --method convex") == 2);
  write_file(dir.file("garbage.json"), "{not json");
  CHECK(run("solve " + dir.file("garbage.json") + " --method convex") == 2);
}

TEST_CASE("separation pipeline from the shipped instance") {
  TempDir dir;
  const std::string golden = std::string(kDataDir) + "/golden_hsep.json";
  REQUIRE(fs::exists(golden));
  CHECK(run("gen-hsep " + golden + " --out " + dir.file("inst.json")) == 0);
  CHECK(run("witness " + golden + " --out " + dir.file("net.json")) == 0);
  CHECK(run("verify " + dir.file("inst.json") + " " + dir.file("net.json")) == 0);
}

TEST_CASE("demo and random generation") {
  TempDir dir;
  CHECK(run("demo fig4 --outdir " + dir.file("demo")) == 0);
  CHECK(fs::exists(dir.file("demo") + "/fig4_instance.json"));

  CHECK(run("gen-random --seed 42 --d 2 --n 4 --k 2 --out " + dir.file("r.json")) == 0);
  // Same seed, same file.
  CHECK(run("gen-random --seed 42 --d 2 --n 4 --k 2 --out " + dir.file("r2.json")) == 0);
  auto a = exactfit::io::load_json_file(dir.file("r.json"));
  auto b = exactfit::io::load_json_file(dir.file("r2.json"));
  CHECK(a == b);

  CHECK(run("demo nosuch") == 2);
}
