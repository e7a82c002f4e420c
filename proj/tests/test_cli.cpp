#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "topopump/cli.hpp"
#include "topopump/config.hpp"
#include "topopump/errors.hpp"
#include "topopump/output.hpp"

using namespace topopump;
namespace fs = std::filesystem;

namespace {

int run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "topopump");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return cli::run(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("topopump_test_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("FNV-1a reference values") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("doubles round-trip through the table format") {
  for (double v : {0.1, 1.0 / 3.0, 2.339941440525e-05, -1e300, 5e-324}) CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
  CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
}

TEST_CASE("grid syntax") {
  CHECK(parse_grid("g", "1:0.5:3") == std::vector<double>{1.0, 1.5, 2.0, 2.5, 3.0});
  CHECK(parse_grid("g", "2, 4,8") == std::vector<double>{2, 4, 8});
  CHECK(parse_grid("g", "7") == std::vector<double>{7});
  CHECK_THROWS_AS(parse_grid("g", ""), ConfigError);
  CHECK_THROWS_AS(parse_grid("g", "1:0:3"), ConfigError);
  CHECK_THROWS_AS(parse_grid("g", "3,2"), ConfigError);
  CHECK_THROWS_AS(parse_grid("g", "1:x:3"), ConfigError);
}

TEST_CASE("config parse, validation and round trip") {
  const auto c = RunConfig::parse("# comment\ntopology = interface\ncells = 10  # trailing\nprotocol=cosine\n");
  CHECK(c.get("topology") == "interface");
  CHECK(c.integer("cells") == 10);
  CHECK_NOTHROW(c.validate());
  CHECK(c.chain().num_sites() == 21);
  CHECK(c.schedule().kind() == ProtocolKind::Cosine);
  const auto back = RunConfig::parse(c.serialize());
  CHECK(back.values() == c.values());
  CHECK(back.hash() == c.hash());
  RunConfig moved = c;
  moved.set("out", "elsewhere");
  CHECK(moved.hash() == c.hash());
  moved.set("alpha", "4");
  CHECK(moved.hash() != c.hash());
}

TEST_CASE("config errors name the field") {
  try {
    RunConfig{}.validate();
    FAIL("expected a config error");
  } catch (const ConfigError& e) {
    CHECK(e.field() == "topology");
  }
  try {
    RunConfig::parse("topology = interface\nbogus = 1\n", "run.cfg");
    FAIL("expected a config error");
  } catch (const ConfigError& e) {
    CHECK(e.field() == "bogus");
    CHECK(std::string(e.what()).find("run.cfg:2") != std::string::npos);
  }
  CHECK_THROWS_AS(RunConfig::parse("topology interface\n"), ConfigError);
  auto c = RunConfig::parse("topology = interface\ncells = 3\n");
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.set("cells", "10");
  c.set("alpha_grid", "");
  CHECK_THROWS_AS(c.grid("alpha_grid"), ConfigError);
  c.set("J0", "2");
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("result tables carry provenance and a fixed column count") {
  ResultTable t({{"x", "1"}, {"label", ""}});
  t.add_row({"1", "a,b"});
  CHECK_THROWS_AS(t.add_row({"1"}), std::invalid_argument);
  const std::string s = t.to_string({"9.9", "sweep", "00ff", 5});
  CHECK(s.find("# config_hash: fnv1a64:00ff") != std::string::npos);
  CHECK(s.find("# seed: 5") != std::string::npos);
  CHECK(s.find("x,label\r\n1,\"a,b\"\r\n") != std::string::npos);
}

TEST_CASE("exit codes") {
  const auto out = scratch("exit");
  CHECK(run_cli({"evolve", "--out", out.string()}) == cli::kExitConfig);
  CHECK(run_cli({"sweep", "--set", "topology=interface", "--set", "sweep=alpha", "--set", "t_grid=10", "--out",
                 out.string()}) == cli::kExitConfig);
  CHECK(run_cli({"evolve", "--set", "topology=interface", "--set", "dt=0.5", "--out", out.string()}) ==
        cli::kExitNumerical);
  CHECK(run_cli({"evolve", "--config", (out / "missing.cfg").string()}) == cli::kExitIo);
  CHECK(run_cli({"nonsense"}) == cli::kExitConfig);
  CHECK(run_cli({"winding", "--set", "topology=even", "--set", "J1_grid=0.2,0.6,1.4", "--out", out.string()}) ==
        cli::kExitOk);
  const std::string w = slurp(out / "winding.csv");
  CHECK(w.find("0.20000000000000001,0.59999999999999998,0,1,") != std::string::npos);
  CHECK(w.find("1.3999999999999999,0.59999999999999998,0,0,") != std::string::npos);
  CHECK(fs::exists(out / "manifest.json"));
}

TEST_CASE("sweep and ensemble tables are identical across reruns, resumes and parallelism") {
  const auto a = scratch("det_a");
  const auto b = scratch("det_b");
  const std::vector<std::string> sweep = {"sweep", "--set", "topology=interface", "--set", "cells=4", "--set",
                                          "t_grid=5:5:40"};
  auto with = [](std::vector<std::string> v, std::vector<std::string> extra) {
    v.insert(v.end(), extra.begin(), extra.end());
    return v;
  };
  REQUIRE(run_cli(with(sweep, {"--out", a.string(), "--jobs", "1"})) == 0);
  REQUIRE(run_cli(with(sweep, {"--out", b.string(), "--jobs", "3"})) == 0);
  CHECK(slurp(a / "fidelity.csv") == slurp(b / "fidelity.csv"));
  CHECK(slurp(a / "stabilization.csv") == slurp(b / "stabilization.csv"));

  // Resume: drop the table and half the markers, rerun.
  const std::string before = slurp(a / "fidelity.csv");
  fs::remove(a / "fidelity.csv");
  int removed = 0;
  for (const auto& d : fs::recursive_directory_iterator(a / ".points"))
    if (d.is_regular_file() && (removed++ % 2 == 0)) fs::remove(d.path());
  REQUIRE(run_cli(with(sweep, {"--out", a.string()})) == 0);
  CHECK(slurp(a / "fidelity.csv") == before);

  const std::vector<std::string> ens = {"ensemble", "--set", "topology=interface", "--set", "cells=4", "--set",
                                        "t_star=30", "--set", "samples=6", "--set", "strength_grid=0,0.3",
                                        "--seed", "11"};
  REQUIRE(run_cli(with(ens, {"--out", a.string(), "--jobs", "1"})) == 0);
  REQUIRE(run_cli(with(ens, {"--out", b.string(), "--jobs", "4"})) == 0);
  CHECK(slurp(a / "ensemble.csv") == slurp(b / "ensemble.csv"));
  CHECK(slurp(a / "ensemble.csv").find("# seed: 11") != std::string::npos);
}

TEST_CASE("evolve writes summary, profiles and populations") {
  const auto out = scratch("evolve");
  REQUIRE(run_cli({"evolve", "--set", "topology=interface", "--set", "cells=4", "--set", "t_star=40", "--out",
                   out.string()}) == 0);
  for (const char* f : {"summary.csv", "ends.csv", "profile.csv", "populations.csv", "norm.csv", "manifest.json"})
    CHECK(fs::exists(out / f));
}

TEST_CASE("spectrum writes gap tracking and min-gap tables") {
  const auto out = scratch("spectrum");
  REQUIRE(run_cli({"spectrum", "--set", "topology=interface", "--set", "cells=4", "--set", "t_star=1", "--set",
                   "alpha_grid=2,6", "--set", "J1_grid=0:0.5:2", "--set", "spectrum_samples=21", "--out",
                   out.string()}) == 0);
  for (const char* f : {"spectrum_vs_t.csv", "spectrum_vs_J1.csv", "gap_state.csv", "gap_density.csv", "min_gap_vs_alpha.csv"})
    CHECK(fs::exists(out / f));
}
