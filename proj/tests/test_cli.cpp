#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

const fs::path& scratch() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "forcinglab_cli_test";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

int cli(const std::string& args, const std::string& env = {}) {
  const std::string cmd = env + (env.empty() ? "" : " ") + FORCINGLAB_BIN + std::string(" ") + args + " >" +
                          (scratch() / "stdout.txt").string() + " 2>" + (scratch() / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string path(const std::string& name) { return (scratch() / name).string(); }

std::string good_instance() {
  const std::string p = path("good.json");
  if (!fs::exists(p)) REQUIRE(cli("generate --seed 3 --report " + p) == 0);
  return p;
}

}  // namespace

TEST_CASE("generate then validate") {
  const std::string p = good_instance();
  auto j = nlohmann::json::parse(slurp(p));
  CHECK(j.at("schema") == "instance-v1");
  CHECK(j.at("p_conditions").contains("root"));
  CHECK(cli("validate " + p) == 0);
  CHECK(cli("validate --instance " + p) == 0);
  auto report = nlohmann::json::parse(slurp(scratch() / "stdout.txt"));
  CHECK(report.at("verdict") == "yes");
  CHECK(report.at("command") == "validate");
}

TEST_CASE("a broken instance validates to a counterexample") {
  auto j = nlohmann::json::parse(slurp(good_instance()));
  // a support without its minimum
  auto& support = j["p_conditions"]["root"]["blocks"][0]["support"];
  support.erase(support.begin());
  const std::string bad = path("bad.json");
  std::ofstream(bad) << j.dump();
  CHECK(cli("validate " + bad) == 1);
  CHECK(cli("pforcing validate --instance " + bad + " --name root") == 1);
  CHECK(cli("check prikry --instance " + bad + " --condition root") == 2);
}

TEST_CASE("io and usage errors exit with 2") {
  CHECK(cli("validate " + path("absent.json")) == 2);
  CHECK(slurp(scratch() / "stderr.txt").find("cannot read") != std::string::npos);
  std::ofstream(path("garbage.json")) << "{";
  CHECK(cli("validate " + path("garbage.json")) == 2);
  CHECK(cli("no-such-command") == 2);
  CHECK(cli("check") == 2);
  CHECK(cli("check prikry --seed notanumber") == 2);
  CHECK(cli("generate --mode sideways") == 2);
  CHECK(cli("--help") == 0);
}

TEST_CASE("caps turn into unknown") {
  CHECK(cli("check prikry --seed 2 --cap 3") == 3);
  auto r = nlohmann::json::parse(slurp(scratch() / "stdout.txt"));
  CHECK(r.at("verdict") == "unknown");
  CHECK(cli("check subforcing --seed 2", "FORCINGLAB_CAP=3") == 3);
  CHECK(cli("check subforcing --seed 2", "FORCINGLAB_CAP=2000") == 0);
  CHECK(cli("check iso --seed 2 --cap 3") == 3);
}

TEST_CASE("every check passes on a small generated instance") {
  const std::string p = good_instance();
  for (const char* what : {"subforcing", "iso", "dichotomy", "homogeneity", "prikry", "lemmas"}) {
    CAPTURE(what);
    CHECK(cli(std::string("check ") + what + " --instance " + p + " --seed 5") == 0);
    auto r = nlohmann::json::parse(slurp(scratch() / "stdout.txt"));
    CHECK(r.at("command") == what);
    CHECK(r.at("seed") == 5);
  }
}

TEST_CASE("order, extension and factoring") {
  const std::string p = good_instance();
  CHECK(cli("pforcing order --instance " + p + " --p root --q root") == 0);
  auto o = nlohmann::json::parse(slurp(scratch() / "stdout.txt"));
  CHECK(o.at("leq_star") == true);
  CHECK(o.at("leq") == "yes");

  auto inst = nlohmann::json::parse(slurp(p));
  const std::string point = inst["p_conditions"]["root"]["blocks"][0]["tree"]["nodes"][0]["elem"];
  CHECK(cli("pforcing extend --instance " + p + " --name root --point " + point) == 0);
  auto e = nlohmann::json::parse(slurp(scratch() / "stdout.txt"));
  CHECK(e.at("blocks").size() == 2);
  inst["p_conditions"]["ext"] = {{"blocks", e.at("blocks")}};
  const std::string p2 = path("with_ext.json");
  std::ofstream(p2) << inst.dump();
  CHECK(cli("pforcing order --instance " + p2 + " --p ext --q root") == 0);
  o = nlohmann::json::parse(slurp(scratch() / "stdout.txt"));
  CHECK(o.at("leq") == "yes");
  CHECK(o.at("leq_star") == false);
  CHECK(cli("pforcing factor --instance " + p2 + " --p root --q ext") == 0);
  CHECK(cli("pforcing factor --instance " + p2 + " --p ext --q root") == 1);
  CHECK(cli("pforcing extend --instance " + p + " --name root --point nobody") == 2);

  CHECK(cli("radin validate --instance " + p + " --name root") == 0);
  CHECK(cli("radin extend --instance " + p + " --name root --point " + point) == 0);
  CHECK(cli("radin order --instance " + p + " --p root --q root") == 0);
  CHECK(cli("tree validate --instance " + p + " --name focus") == 0);
  CHECK(cli("tree show --seed 3 --owner E1 --kind focus") == 0);
}

TEST_CASE("export writes DOT") {
  const std::string p = good_instance();
  CHECK(cli("export --instance " + p + " --tree focus --report " + path("t.dot")) == 0);
  CHECK(slurp(path("t.dot")).rfind("digraph tree {", 0) == 0);
  CHECK(cli("export --instance " + p + " --p root") == 0);
  CHECK(slurp(scratch() / "stdout.txt").find("subgraph cluster_0") != std::string::npos);
  CHECK(cli("export --instance " + p + " --radin root") == 0);
  CHECK(cli("export --instance " + p) == 2);
  CHECK(cli("export --instance " + p + " --tree nothing") == 2);
}

TEST_CASE("simulate") {
  CHECK(cli("generic simulate --seed 4 --steps 3 --len 2 --strategy greedy") == 0);
  auto r = nlohmann::json::parse(slurp(scratch() / "stdout.txt"));
  CHECK(r.at("steps").size() == 4);
  CHECK(r.at("strategy") == "greedy");
}

TEST_CASE("equal seeds give byte-identical reports") {
  for (const char* args : {"check dichotomy --seed 9 --len 2 --width 3", "check homogeneity --seed 9",
                           "check prikry --seed 9 --indices 3 --width 3", "check lemmas --seed 9 --len 2",
                           "generic simulate --seed 9 --steps 4", "generate --seed 9 --mode mixed"}) {
    CAPTURE(args);
    REQUIRE(cli(std::string(args) + " --report " + path("a.json")) != 2);
    REQUIRE(cli(std::string(args) + " --report " + path("b.json")) != 2);
    CHECK(slurp(path("a.json")) == slurp(path("b.json")));
    CHECK_FALSE(slurp(path("a.json")).empty());
  }
}
