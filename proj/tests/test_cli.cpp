#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"
#include "sqap/instance.hpp"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = sqap::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("sqap_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

std::size_t count_lines(const std::string& s) { return std::count(s.begin(), s.end(), '\n'); }

}  // namespace

TEST_CASE("generate is reproducible") {
  TempDir dir;
  REQUIRE(cli({"generate", "--n", "4", "--seed", "9", "--out", dir / "a.json"}).code == 0);
  REQUIRE(cli({"generate", "--n", "4", "--seed", "9", "--out", dir / "b.json"}).code == 0);
  CHECK(slurp(dir / "a.json") == slurp(dir / "b.json"));
  auto inst = sqap::load_instance(dir / "a.json");
  CHECK(inst == sqap::generate_instance(4, 9));

  auto piped = cli({"generate", "--n", "4", "--seed", "9"});
  CHECK(piped.code == 0);
  CHECK(sqap::instance_from_json(nlohmann::json::parse(piped.out)) == inst);
}

TEST_CASE("usage errors") {
  CHECK(cli({}).code == sqap::cli::kUsage);
  CHECK(cli({"generate", "--n", "0"}).code == sqap::cli::kUsage);
  CHECK(cli({"generate"}).code == sqap::cli::kUsage);
  CHECK(cli({"frobnicate"}).code == sqap::cli::kUsage);
  TempDir dir;
  cli({"generate", "--n", "3", "--out", dir / "i.json"});
  auto bad = cli({"solve", dir / "i.json", "--method", "annealing"});
  CHECK(bad.code == sqap::cli::kUsage);
  CHECK(bad.err.find("error") != std::string::npos);
  CHECK(cli({"solve", dir / "i.json", "--num-reads", "0"}).code == sqap::cli::kUsage);
  CHECK(cli({"solve", dir / "i.json", "--decay", "2"}).code == sqap::cli::kUsage);
  CHECK(cli({"--help"}).code == sqap::cli::kOk);
}

TEST_CASE("missing or malformed input is an I/O error") {
  TempDir dir;
  CHECK(cli({"solve", dir / "nope.json"}).code == sqap::cli::kIo);
  CHECK(cli({"violations", dir / "nope.json"}).code == sqap::cli::kIo);
  std::ofstream(dir / "junk.json") << "{ not json";
  CHECK(cli({"solve", dir / "junk.json"}).code == sqap::cli::kIo);
  std::ofstream(dir / "shape.json") << "{\"n\": 2}";
  CHECK(cli({"solve", dir / "shape.json"}).code == sqap::cli::kUsage);
}

TEST_CASE("exact refuses large instances") {
  TempDir dir;
  cli({"generate", "--n", "11", "--out", dir / "big.json"});
  auto r = cli({"solve", dir / "big.json", "--method", "exact"});
  CHECK(r.code == sqap::cli::kSizeGuard);
  CHECK(r.out.empty());
}

TEST_CASE("all methods agree on a single item") {
  TempDir dir;
  cli({"generate", "--n", "1", "--seed", "4", "--out", dir / "one.json"});
  double expected = -sqap::load_instance(dir / "one.json").s(0, 0);
  for (std::string method : {"ohzeki-bfha", "qubo-direct", "exact"}) {
    auto r = cli({"solve", dir / "one.json", "--method", method, "--num-reads", "20"});
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["method"] == method);
    CHECK(j["feasible"] == true);
    CHECK(j["score"].get<double>() == expected);
    CHECK(j["solution"]["q"] == nlohmann::json::array({nlohmann::json::array({1})}));
  }
}

TEST_CASE("solve output is byte-stable without timing") {
  TempDir dir;
  cli({"generate", "--n", "4", "--seed", "2", "--out", dir / "i.json"});
  std::vector<std::string> args = {"solve", dir / "i.json", "--num-reads", "30", "--sweeps", "10",
                                   "--max-iters", "3", "--seed", "5", "--no-timing"};
  auto a = cli(args);
  auto b = cli(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  auto j = nlohmann::json::parse(a.out);
  CHECK(j["time_s"] == 0);
  CHECK(j["iterations"] == 3);
  auto inst = sqap::load_instance(dir / "i.json");
  auto sol = sqap::assignment_from_json(j["solution"]);
  CHECK(sqap::is_feasible(sol));
  CHECK(j["score"].get<double>() == doctest::Approx(sqap::objective(inst, sol)));
}

TEST_CASE("trace file has one line per iteration") {
  TempDir dir;
  cli({"generate", "--n", "3", "--out", dir / "i.json"});
  auto r = cli({"solve", dir / "i.json", "--num-reads", "20", "--sweeps", "5", "--max-iters", "4",
                "--trace", dir / "t.jsonl", "--out", dir / "r.json"});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  CHECK(count_lines(slurp(dir / "t.jsonl")) == 4);
  CHECK(nlohmann::json::parse(slurp(dir / "r.json"))["n"] == 3);
}

TEST_CASE("exact and qubo-direct report") {
  TempDir dir;
  cli({"generate", "--n", "5", "--seed", "1", "--out", dir / "i.json"});
  auto exact = nlohmann::json::parse(cli({"solve", dir / "i.json", "--method", "exact"}).out);
  CHECK(exact["enumerated"] == 120);
  auto direct = nlohmann::json::parse(
      cli({"solve", dir / "i.json", "--method", "qubo-direct", "--num-reads", "200", "--sweeps", "50"}).out);
  CHECK(direct.contains("lambda"));
  CHECK(direct.contains("feasible_samples"));
  if (direct["feasible"] == true) CHECK(direct["score"].get<double>() >= exact["score"].get<double>() - 1e-9);
}

TEST_CASE("bench-repair emits one row per size") {
  auto r = cli({"bench-repair", "--sizes", "3", "5", "--samples", "30", "--num-reads", "20", "--sweeps", "5",
                "--warmup", "1", "--timing-repeats", "1"});
  REQUIRE(r.code == 0);
  std::istringstream in(r.out);
  std::string header, line;
  std::getline(in, header);
  CHECK(header.rfind("size,", 0) == 0);
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    std::vector<std::string> cells;
    std::stringstream ls(line);
    for (std::string c; std::getline(ls, c, ',');) cells.push_back(c);
    REQUIRE(cells.size() == 6);
    CHECK(std::stod(cells[2]) <= std::stod(cells[1]));
    CHECK(std::stod(cells[3]) >= 0.0);
  }
  CHECK(rows == 2);
}

TEST_CASE("violations histogram covers every read") {
  TempDir dir;
  cli({"generate", "--n", "4", "--out", dir / "i.json"});
  auto r = cli({"violations", dir / "i.json", "--num-reads", "77", "--sweeps", "5", "--warmup", "0"});
  REQUIRE(r.code == 0);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  CHECK(line == "violations,count");
  std::size_t bins = 0, total = 0;
  while (std::getline(in, line)) {
    CHECK(std::stoul(line.substr(0, line.find(','))) == bins);
    total += std::stoul(line.substr(line.find(',') + 1));
    ++bins;
  }
  CHECK(bins == 9);
  CHECK(total == 77);
}

TEST_CASE("report rows") {
  auto r = cli({"report", "--sizes", "3", "--instances", "2", "--num-reads", "30", "--sweeps", "10",
                "--max-iters", "3", "--no-timing"});
  REQUIRE(r.code == 0);
  CHECK(count_lines(r.out) == 2);
  CHECK(r.out.find("size,runs,bitflip_score") == 0);
}

TEST_CASE("config file supplies options") {
  TempDir dir;
  std::ofstream(dir / "gen.toml") << "[generate]\nn = 3\nseed = 11\n";
  auto r = cli({"--config", dir / "gen.toml", "generate"});
  REQUIRE(r.code == 0);
  CHECK(sqap::instance_from_json(nlohmann::json::parse(r.out)) == sqap::generate_instance(3, 11));
}
