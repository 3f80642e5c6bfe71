#include <doctest.h>

#include <unistd.h>

#include <algorithm>
#include <filesystem>
#include <sstream>

#include "cli.hpp"
#include "symdyn/io.hpp"

using namespace symdyn;
using io::json;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("symdyn-cli-" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

json read(const std::string& path) { return json::parse(io::read_file(path)); }

}  // namespace

TEST_CASE("constants") {
  auto r = run({"lll", "check-constant"});
  CHECK(r.code == cli::kOk);
  CHECK(r.out == "17\n");
  CHECK(run({"lll", "check-constant", "--max", "10"}).code == cli::kVerificationFailed);
  CHECK(run({"lll", "alphabet-bound", "--s", "1"}).out == "524288\n");
  CHECK(run({"lll", "alphabet-bound", "--s", "2"}).out == "2097152\n");
}

TEST_CASE("usage errors are single JSON lines") {
  for (auto args : std::vector<std::vector<std::string>>{
           {}, {"frobnicate"}, {"lll"}, {"lll", "alphabet-bound"}, {"group", "ball", "--group", "z^2"},
           {"group", "ball", "--group", "q^2", "--radius", "1"}, {"color", "two", "--group", "z^2", "--radius", "x"},
           {"witness", "--group", "free:2", "--word", "aA"}, {"density", "verify", "--config", "/nonexistent.json"}}) {
    auto r = run(args);
    CAPTURE(r.err);
    CHECK(r.code == cli::kUsage);
    REQUIRE(!r.err.empty());
    CHECK(std::count(r.err.begin(), r.err.end(), '\n') == 1);
    auto j = json::parse(r.err);
    CHECK(j.contains("error"));
    CHECK(j.contains("reason"));
  }
  CHECK(run({"--help"}).code == cli::kOk);
}

TEST_CASE("resource errors") {
  auto r = run({"group", "ball", "--group", "free:2", "--radius", "9", "--ball-cap", "1000"});
  CHECK(r.code == cli::kResource);
  CHECK(json::parse(r.err)["error"] == "resource");
}

TEST_CASE("group commands") {
  auto r = run({"group", "ball", "--group", "free:2", "--radius", "2"});
  REQUIRE(r.code == 0);
  auto j = json::parse(r.out);
  CHECK(j["size"] == 17);
  CHECK(j["sphere_sizes"] == json::array({1, 4, 12}));
  auto c = run({"group", "canon", "--group", "heisenberg", "--word", "yx"});
  CHECK(json::parse(c.out)["length"] == 2);
}

TEST_CASE("distinct-neighborhood pipeline") {
  TempDir tmp;
  auto zero = WindowConfig::constant(Window::make(GroupModel::integer_lattice(2), 10), 2, 0);
  io::write_file(tmp / "allzero.json", io::to_json(zero).dump());
  auto bad = run({"verify", "distinct", "--config", tmp / "allzero.json", "--levels", "1"});
  CHECK(bad.code == cli::kVerificationFailed);
  auto summary = json::parse(bad.out);
  CHECK(summary["violations"].get<int>() > 0);
  CHECK(summary["violations"] == summary["pairs_checked"]);

  auto good = run({"color", "two", "--group", "z^2", "--radius", "14", "--levels", "2", "--seed", "3", "--out",
                   tmp / "cfg.json", "--instance-out", tmp / "inst.json", "--log", tmp / "log.json"});
  REQUIRE(good.code == cli::kOk);
  CHECK(json::parse(good.out)["violations"] == 0);
  CHECK(run({"verify", "distinct", "--config", tmp / "cfg.json", "--levels", "2"}).code == cli::kOk);
  auto v = run({"lll", "verify", "--instance", tmp / "inst.json"});
  CHECK(v.code == cli::kOk);
  CHECK(json::parse(v.out)["holds"] == true);
  CHECK(run({"lll", "resample", "--instance", tmp / "inst.json", "--seed", "3", "--out", tmp / "rs.json"}).code == 0);

  auto manifest = read(tmp / "cfg.json.manifest.json");
  CHECK(manifest["seed"] == 3);
  CHECK(manifest["group"] == "z^2");
  CHECK(manifest["artifacts"].size() == 3);
  CHECK(manifest["artifacts"][0]["sha256"] == cli::sha256_hex(io::read_file(tmp / "cfg.json")));

  auto csv = run({"color", "two", "--group", "z^2", "--radius", "5", "--levels", "1", "--format", "csv", "--out",
                  tmp / "cfg.csv"});
  CHECK(csv.code == 0);
  CHECK(io::read_file(tmp / "cfg.csv").size() > 0);
}

TEST_CASE("square-free and witness commands") {
  TempDir tmp;
  auto sq = run({"color", "squarefree", "--group", "free:2", "--radius", "2", "--alphabet", "2^21", "--maxlen", "2",
                 "--out", tmp / "sq.json"});
  CHECK(sq.code == 0);
  CHECK(json::parse(sq.out)["square_free"] == true);
  CHECK(read(tmp / "sq.json")["alphabet"] == 2097152);

  auto w = run({"witness", "--group", "free:2", "--word", "abA"});
  REQUIRE(w.code == 0);
  auto j = json::parse(w.out);
  CHECK(j["core"] == "b");
  CHECK(j["conjugator"] == "a");
  auto dot = run({"witness", "--group", "z^2", "--word", "xx", "--format", "dot"});
  CHECK(dot.out.rfind("graph witness", 0) == 0);
}

TEST_CASE("density pipeline") {
  TempDir tmp;
  auto fill = run({"density", "fill", "--group", "z^2", "--radius", "30", "--levels", "2", "--alpha", "377/610",
                   "--out", tmp / "fill.json"});
  REQUIRE(fill.code == 0);
  auto verify = run({"density", "verify", "--config", tmp / "fill.json", "--out", tmp / "c1.json"});
  CHECK(verify.code == 0);
  CHECK(json::parse(verify.out)["pass"] == true);
  CHECK(read(tmp / "c1.json")["interior_failures"] == 0);

  auto measure = run({"density", "measure", "--config", tmp / "fill.json", "--balls", "1..25", "--out",
                      tmp / "report.json"});
  CHECK(measure.code == 0);
  CHECK(read(tmp / "report.json")["samples"].size() == 25);

  auto forest = run({"density", "build-forest", "--group", "free:2", "--radius", "5", "--levels", "2", "--out",
                     tmp / "forest.json"});
  REQUIRE(forest.code == 0);
  auto from_forest = run({"density", "fill", "--forest", tmp / "forest.json", "--alpha", "1/3", "--out",
                          tmp / "fill2.json"});
  CHECK(from_forest.code == 0);
  CHECK(run({"density", "verify", "--config", tmp / "fill2.json", "--forest", tmp / "forest.json"}).code == 0);
  CHECK(run({"density", "build-forest", "--group", "z^2", "--radius", "6", "--levels", "1", "--format", "dot",
             "--out", tmp / "f.dot"})
            .code == 0);

  auto ones = WindowConfig::constant(Window::make(GroupModel::integer_lattice(2), 10), 2, 1);
  auto j = io::to_json(ones);
  j["alpha"] = "1/2";
  j["levels"] = 1;
  io::write_file(tmp / "ones.json", j.dump());
  CHECK(run({"density", "verify", "--config", tmp / "ones.json"}).code == cli::kVerificationFailed);
}

TEST_CASE("same seed, same artifacts") {
  TempDir tmp;
  for (const char* name : {"a.json", "b.json"}) {
    REQUIRE(run({"color", "two", "--group", "z^2", "--radius", "12", "--levels", "2", "--seed", "9", "--out",
                 tmp / name})
                .code == 0);
  }
  auto a = read(tmp / "a.json.manifest.json"), b = read(tmp / "b.json.manifest.json");
  CHECK(a["artifacts"][0]["sha256"] == b["artifacts"][0]["sha256"]);
  CHECK(io::read_file(tmp / "a.json") == io::read_file(tmp / "b.json"));
}
