#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <functional>

#include "forcinglab/instance_io.hpp"

using namespace flab;

namespace {

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

// nodes of the tree and of every attached tree, and the number of nonempty attached trees
std::pair<std::size_t, std::size_t> dom_size(const ETree& t) {
  std::size_t nodes = 0, clusters = 0;
  std::function<void(const std::vector<Node>&)> walk = [&](const std::vector<Node>& ns) {
    for (const Node& n : ns) {
      ++nodes;
      if (!n.attached.empty()) {
        ++clusters;
        walk(n.attached.roots);
      }
      walk(n.suc);
    }
  };
  walk(t.roots);
  return {nodes, clusters};
}

Instance sample(std::uint64_t seed, unsigned len) {
  Instance inst;
  inst.u = generate_instance(seed, {2, len, 3, 3, MeasureMode::Mixed});
  const Universe& u = inst.u;
  PCondition root{{canonical_pstar(u, u.top, u.system(u.top).indices)}};
  const SeqId a = mc(u, root.blocks[0]);
  inst.p_conditions["root"] = root;
  inst.p_conditions["ext"] = p_extend_at(u, root, 0, lev0(*root.blocks[0].tree).front());
  PCondition undefined = inst.p_conditions["ext"];
  undefined.blocks[0].tree.reset();
  inst.p_conditions["undefined"] = undefined;
  inst.radin_conditions["base"] = {a, radin_base(a, full_tree(u, a))};
  inst.trees["full"] = full_tree(u, a);
  inst.trees["empty"] = empty_tree(a);
  return inst;
}

}  // namespace

TEST_CASE("instances survive a round trip") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    Instance a = sample(seed, 1 + seed % 2);
    const Json j = instance_to_json(a);
    CHECK(j.at("schema") == kInstanceSchema);
    for (const char* key : {"indices", "sequences", "filters", "projections", "trees", "p_conditions", "radin_conditions"})
      CHECK(j.contains(key));
    Instance b = instance_from_json(j);
    CHECK(b.u.seqs.size() == a.u.seqs.size());
    CHECK(b.u.names == a.u.names);
    CHECK(b.u.top == a.u.top);
    for (std::size_t i = 0; i < a.u.filters.size(); ++i) {
      CHECK(b.u.filters[i].carrier == a.u.filters[i].carrier);
      CHECK(b.u.filters[i].generators == a.u.filters[i].generators);
      CHECK(b.u.filters[i].kind == a.u.filters[i].kind);
    }
    for (std::size_t s = 0; s < a.u.systems.size(); ++s) {
      CHECK(b.u.systems[s].indices == a.u.systems[s].indices);
      CHECK(b.u.systems[s].projections == a.u.systems[s].projections);
    }
    CHECK(b.trees == a.trees);
    CHECK(b.p_conditions == a.p_conditions);
    CHECK(b.radin_conditions.at("base").cond == a.radin_conditions.at("base").cond);
    CHECK(validate_universe(b.u).ok());
    // and the text is stable
    CHECK(instance_to_json(b).dump() == j.dump());
  }
}

TEST_CASE("malformed instances are config errors") {
  Json j = instance_to_json(sample(1, 1));
  Json missing = j;
  missing.erase("sequences");
  CHECK_THROWS_AS(instance_from_json(missing), ConfigError);

  Json unknown = j;
  unknown["filters"][0]["carrier"].push_back("nobody");
  CHECK_THROWS_AS(instance_from_json(unknown), ConfigError);

  Json dup = j;
  dup["sequences"].push_back(dup["sequences"][0]);
  CHECK_THROWS_AS(instance_from_json(dup), ConfigError);

  Json schema = j;
  schema["schema"] = "instance-v0";
  CHECK_THROWS_AS(instance_from_json(schema), ConfigError);

  Json kind = j;
  kind["filters"][0]["kind"] = "strange";
  CHECK_THROWS_AS(instance_from_json(kind), ConfigError);

  Json pair = j;
  pair["p_conditions"]["root"]["blocks"][0]["support"][0] = Json::array({"E0"});
  CHECK_THROWS_AS(instance_from_json(pair), ConfigError);

  Json type = j;
  type["sequences"][0]["kappa"] = "big";
  CHECK_THROWS_AS(instance_from_json(type), ConfigError);
}

TEST_CASE("files") {
  const auto dir = std::filesystem::temp_directory_path() / "forcinglab_io_test";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "inst.json").string();
  Instance a = sample(2, 1);
  write_text(path, instance_to_json(a).dump(2));
  Instance b = read_instance(path);
  CHECK(b.p_conditions == a.p_conditions);
  CHECK_THROWS_AS(read_instance((dir / "absent.json").string()), std::runtime_error);
  write_text((dir / "broken.json").string(), "{ nope");
  CHECK_THROWS_AS(read_instance((dir / "broken.json").string()), std::runtime_error);
  std::filesystem::remove_all(dir);
}

TEST_CASE("reports serialize clause by clause") {
  ValidationReport r;
  r.pass("a");
  r.fail("b", "why");
  Json j = report_to_json(r);
  CHECK(j.at("ok") == false);
  REQUIRE(j.at("entries").size() == 2);
  CHECK(j["entries"][1]["status"] == "fail");
  CHECK(j["entries"][1]["witness"] == "why");
  CHECK_FALSE(j["entries"][0].contains("witness"));
}

TEST_CASE("dot export of an empty tree is a single root") {
  Universe u = generate_instance(1, {2, 1, 3, 2, MeasureMode::Principal});
  SeqId a = u.system(u.top).indices.back();
  std::string dot = tree_dot(u, empty_tree(a));
  CHECK(dot.rfind("digraph", 0) == 0);
  CHECK(count(dot, "[label=") == 1);
  CHECK(count(dot, "->") == 0);
}

TEST_CASE("dot export counts dom plus clusters") {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    Universe u = generate_instance(seed, {2, 2, 3, 3, MeasureMode::Principal});
    SeqId a = u.system(u.top).indices.back();
    ETree t = full_tree(u, a);
    auto [nodes, clusters] = dom_size(t);
    std::string dot = tree_dot(u, t);
    CHECK(count(dot, "[label=") == 1 + nodes + clusters);
    CHECK(count(dot, "subgraph cluster_") == clusters);
    CHECK(count(dot, "style=dashed") == 2 * clusters);
    CHECK(dot == tree_dot(u, t));
  }
}

TEST_CASE("dot export of a condition draws one cluster per block") {
  Instance inst = sample(3, 1);
  const Universe& u = inst.u;
  const PCondition& ext = inst.p_conditions.at("ext");
  std::string dot = pcondition_dot(u, ext);
  std::size_t attached = 0;
  for (const auto& b : ext.blocks)
    if (b.tree) attached += dom_size(*b.tree).second;
  CHECK(count(dot, "subgraph cluster_") == ext.blocks.size() + attached);
  CHECK(count(dot, "shape=note") == ext.blocks.size());
  CHECK(count(dot, "T undefined") == 0);
  CHECK(count(pcondition_dot(u, inst.p_conditions.at("undefined")), "T undefined") == 1);
  std::string r = radin_dot(u, inst.radin_conditions.at("base").cond);
  CHECK(r.rfind("digraph radin", 0) == 0);
}
