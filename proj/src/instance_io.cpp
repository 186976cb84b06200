#include "forcinglab/instance_io.hpp"

#include <fstream>
#include <sstream>

namespace flab {

namespace {

const Json& need(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ConfigError(std::string("missing key '") + key + "'");
  return j.at(key);
}

SeqId seq_named(const Universe& u, const Json& j) {
  if (!j.is_string()) throw ConfigError("sequence ids are strings");
  auto id = u.find(j.get<std::string>());
  if (!id) throw ConfigError("unknown sequence " + j.get<std::string>());
  return *id;
}

SystemId system_named(const Universe& u, const Json& j) {
  auto id = u.find_system(j.get<std::string>());
  if (!id) throw ConfigError("unknown system " + j.get<std::string>());
  return *id;
}

Json ids(const Universe& u, const SeqSet& s) {
  Json out = Json::array();
  for (SeqId x : s) out.push_back(u.name(x));
  return out;
}

Json tag_json(const Universe& u, Tag t) { return t ? Json(u.name(*t)) : Json(nullptr); }

Tag tag_from(const Universe& u, const Json& j) {
  if (j.is_null()) return std::nullopt;
  return seq_named(u, j);
}

Json nodes_json(const Universe& u, const std::vector<Node>& nodes) {
  Json out = Json::array();
  for (const Node& n : nodes)
    out.push_back({{"elem", u.name(n.elem)}, {"attached", tree_to_json(u, n.attached)}, {"suc", nodes_json(u, n.suc)}});
  return out;
}

std::vector<Node> nodes_from(const Universe& u, const Json& j) {
  std::vector<Node> out;
  for (const Json& n : j) {
    Node node;
    node.elem = seq_named(u, need(n, "elem"));
    if (n.contains("attached")) node.attached = tree_from_json(u, n.at("attached"));
    else node.attached.owner = node.elem;
    if (n.contains("suc")) node.suc = nodes_from(u, n.at("suc"));
    out.push_back(std::move(node));
  }
  std::sort(out.begin(), out.end(), [](const Node& a, const Node& b) { return a.elem < b.elem; });
  return out;
}

Json pstar_json(const Universe& u, const PStar& b) {
  Json supp = Json::array();
  for (const auto& [g, tag] : b.support) supp.push_back(Json::array({u.name(g), tag_json(u, tag)}));
  return {{"system", u.system(b.system).name},
          {"support", supp},
          {"tree", b.tree ? tree_to_json(u, *b.tree) : Json(nullptr)}};
}

PStar pstar_from(const Universe& u, const Json& j) {
  PStar b;
  b.system = system_named(u, need(j, "system"));
  for (const Json& e : need(j, "support")) {
    if (!e.is_array() || e.size() != 2) throw ConfigError("support entries are [index, tag] pairs");
    b.support[seq_named(u, e[0])] = tag_from(u, e[1]);
  }
  if (j.contains("tree") && !j.at("tree").is_null()) b.tree = tree_from_json(u, j.at("tree"));
  return b;
}

}  // namespace

Json universe_to_json(const Universe& u) {
  Json systems = Json::array();
  for (const auto& s : u.systems) systems.push_back({{"system", s.name}, {"members", ids(u, s.indices)}});
  Json seqs = Json::array();
  for (const auto& s : u.seqs) {
    Json ms = Json::array();
    for (FilterId f : s.measures) ms.push_back(u.filter(f).name);
    seqs.push_back({{"id", u.name(s.id)},
                    {"kappa", s.kappa.value},
                    {"kappa0", s.kappa0.value},
                    {"system", u.system(s.system).name},
                    {"measures", ms}});
  }
  Json filters = Json::array();
  for (const auto& f : u.filters) {
    Json gens = Json::array();
    for (const auto& g : f.generators) gens.push_back(ids(u, g));
    filters.push_back({{"name", f.name},
                       {"kind", f.kind == FilterKind::PrincipalUltrafilter ? "principal" : "general"},
                       {"carrier", ids(u, f.carrier)},
                       {"generators", gens}});
  }
  Json proj = Json::array();
  for (const auto& s : u.systems)
    for (const auto& [key, table] : s.projections) {
      Json map = Json::array();
      for (const auto& [a, b] : table) map.push_back(Json::array({u.name(a), u.name(b)}));
      proj.push_back({{"from", u.name(key.first)}, {"to", u.name(key.second)}, {"map", map}});
    }
  return {{"top", u.system(u.top).name}, {"indices", systems}, {"sequences", seqs}, {"filters", filters},
          {"projections", proj}};
}

Universe universe_from_json(const Json& j) {
  Universe u;
  try {
    for (const Json& s : need(j, "indices")) {
      const std::string name = need(s, "system").get<std::string>();
      if (u.find_system(name)) throw ConfigError("duplicate system " + name);
      u.add_system(name);
    }
    // ids follow file order, so carriers may name sequences listed later
    std::map<std::string, SeqId> seq_ids;
    const Json& seqs = need(j, "sequences");
    for (const Json& s : seqs) seq_ids.emplace(need(s, "id").get<std::string>(), static_cast<SeqId>(seq_ids.size()));
    if (seq_ids.size() != seqs.size()) throw ConfigError("duplicate sequence id");
    auto resolve = [&](const Json& x) {
      auto it = seq_ids.find(x.get<std::string>());
      if (it == seq_ids.end()) throw ConfigError("unknown sequence " + x.get<std::string>());
      return it->second;
    };
    std::map<std::string, FilterId> filter_ids;
    for (const Json& f : need(j, "filters")) {
      FilterOracle fo;
      fo.name = need(f, "name").get<std::string>();
      const std::string kind = f.value("kind", "general");
      if (kind != "general" && kind != "principal") throw ConfigError("unknown filter kind " + kind);
      fo.kind = kind == "principal" ? FilterKind::PrincipalUltrafilter : FilterKind::General;
      for (const Json& x : need(f, "carrier")) fo.carrier.push_back(resolve(x));
      for (const Json& g : need(f, "generators")) {
        SeqSet gen;
        for (const Json& x : g) gen.push_back(resolve(x));
        fo.generators.push_back(std::move(gen));
      }
      if (!filter_ids.emplace(fo.name, static_cast<FilterId>(filter_ids.size())).second)
        throw ConfigError("duplicate filter " + fo.name);
      u.add_filter(std::move(fo));
    }
    for (const Json& s : seqs) {
      std::vector<FilterId> ms;
      for (const Json& m : need(s, "measures")) {
        auto it = filter_ids.find(m.get<std::string>());
        if (it == filter_ids.end()) throw ConfigError("unknown filter " + m.get<std::string>());
        ms.push_back(it->second);
      }
      u.add_sequence(need(s, "id").get<std::string>(), Ordinal(need(s, "kappa").get<std::uint32_t>()),
                     Ordinal(need(s, "kappa0").get<std::uint32_t>()), std::move(ms), system_named(u, need(s, "system")));
    }
    const Json projections = j.value("projections", Json::array());
    for (const Json& p : projections) {
      const SeqId from = seq_named(u, need(p, "from")), to = seq_named(u, need(p, "to"));
      if (u.system_of(from) != u.system_of(to)) throw ConfigError("projection across systems");
      auto& table = u.systems[u.system_of(from)].projections[{from, to}];
      for (const Json& e : need(p, "map")) table[seq_named(u, e.at(0))] = seq_named(u, e.at(1));
    }
    u.top = system_named(u, need(j, "top"));
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("malformed instance: ") + e.what());
  }
  return u;
}

Json tree_to_json(const Universe& u, const ETree& t) {
  return {{"owner", u.name(t.owner)}, {"nodes", nodes_json(u, t.roots)}};
}

ETree tree_from_json(const Universe& u, const Json& j) {
  ETree t;
  t.owner = seq_named(u, need(j, "owner"));
  t.roots = nodes_from(u, j.value("nodes", Json::array()));
  return t;
}

Json radin_to_json(const Universe& u, const RadinCondition& r) {
  Json blocks = Json::array();
  for (const auto& b : r.blocks)
    blocks.push_back({{"seq", u.name(b.seq)}, {"tag", tag_json(u, b.tag)}, {"tree", tree_to_json(u, b.tree)}});
  return {{"blocks", blocks}};
}

RadinCondition radin_from_json(const Universe& u, const Json& j) {
  RadinCondition r;
  for (const Json& b : need(j, "blocks"))
    r.blocks.push_back({seq_named(u, need(b, "seq")), tag_from(u, b.value("tag", Json(nullptr))),
                        tree_from_json(u, need(b, "tree"))});
  return r;
}

Json pcondition_to_json(const Universe& u, const PCondition& p) {
  Json blocks = Json::array();
  for (const auto& b : p.blocks) blocks.push_back(pstar_json(u, b));
  return {{"blocks", blocks}};
}

PCondition pcondition_from_json(const Universe& u, const Json& j) {
  PCondition p;
  for (const Json& b : need(j, "blocks")) p.blocks.push_back(pstar_from(u, b));
  return p;
}

Json instance_to_json(const Instance& inst) {
  Json j = universe_to_json(inst.u);
  j["schema"] = kInstanceSchema;
  Json trees = Json::object(), rc = Json::object(), pc = Json::object();
  for (const auto& [name, t] : inst.trees) trees[name] = tree_to_json(inst.u, t);
  for (const auto& [name, r] : inst.radin_conditions) {
    rc[name] = radin_to_json(inst.u, r.cond);
    rc[name]["alpha"] = inst.u.name(r.alpha);
  }
  for (const auto& [name, p] : inst.p_conditions) pc[name] = pcondition_to_json(inst.u, p);
  j["trees"] = trees;
  j["radin_conditions"] = rc;
  j["p_conditions"] = pc;
  return j;
}

Instance instance_from_json(const Json& j) {
  if (j.contains("schema") && j.at("schema") != kInstanceSchema)
    throw ConfigError("unsupported schema " + j.at("schema").dump());
  Instance inst;
  inst.u = universe_from_json(j);
  try {
    const Json trees = j.value("trees", Json::object());
    const Json rc = j.value("radin_conditions", Json::object());
    const Json pc = j.value("p_conditions", Json::object());
    for (auto it = trees.begin(); it != trees.end(); ++it) inst.trees[it.key()] = tree_from_json(inst.u, it.value());
    for (auto it = rc.begin(); it != rc.end(); ++it)
      inst.radin_conditions[it.key()] = {seq_named(inst.u, need(it.value(), "alpha")), radin_from_json(inst.u, it.value())};
    for (auto it = pc.begin(); it != pc.end(); ++it) inst.p_conditions[it.key()] = pcondition_from_json(inst.u, it.value());
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("malformed instance: ") + e.what());
  }
  return inst;
}

Instance read_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
  return instance_from_json(j);
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path);
}

Json report_to_json(const ValidationReport& r) {
  Json entries = Json::array();
  for (const auto& e : r.entries()) {
    Json x = {{"clause", e.clause}, {"status", to_string(e.status)}};
    if (!e.witness.empty()) x["witness"] = e.witness;
    entries.push_back(std::move(x));
  }
  return {{"ok", r.ok()}, {"entries", entries}};
}

// --- DOT ---------------------------------------------------------------------------

namespace {

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '\\';
    out += c;
  }
  return out + '"';
}

std::string label(const Universe& u, SeqId x) {
  return std::to_string(u.kappa0(x).value) + "/" + std::to_string(u.kappa(x).value) + "/" + std::to_string(u.len(x));
}

struct DotWriter {
  const Universe& u;
  std::ostringstream out;
  std::size_t next = 0;
  std::size_t clusters = 0;

  std::string node(const std::string& text, const std::string& extra = {}) {
    const std::string id = "n" + std::to_string(next++);
    out << "  " << id << " [label=" << quote(text) << extra << "];\n";
    return id;
  }

  // emits a tree below `parent`; attached trees get their own dashed cluster
  void nodes(const std::vector<Node>& ns, const std::string& parent) {
    for (const Node& n : ns) {
      const std::string id = node(u.name(n.elem) + "\\n" + label(u, n.elem));
      out << "  " << parent << " -> " << id << ";\n";
      if (!n.attached.empty()) {
        out << "  subgraph cluster_" << clusters++ << " {\n  style=dashed;\n  label=" << quote("attached " + u.name(n.elem))
            << ";\n";
        const std::string root = node(u.name(n.attached.owner), ", shape=point");
        nodes(n.attached.roots, root);
        out << "  }\n";
        out << "  " << id << " -> " << root << " [style=dashed];\n";
      }
      nodes(n.suc, id);
    }
  }

  std::string tree(const ETree& t, const std::string& caption) {
    const std::string root = node(caption, ", shape=box");
    nodes(t.roots, root);
    return root;
  }
};

}  // namespace

std::string tree_dot(const Universe& u, const ETree& t) {
  DotWriter w{u, {}};
  w.out << "digraph tree {\n";
  w.tree(t, u.name(t.owner) + "\\n" + label(u, t.owner));
  w.out << "}\n";
  return w.out.str();
}

std::string pcondition_dot(const Universe& u, const PCondition& p) {
  DotWriter w{u, {}};
  w.out << "digraph condition {\n  rankdir=TB;\n";
  std::vector<std::string> anchors;
  // p_n first, so blocks read left to right as written
  for (std::size_t k = p.blocks.size(); k-- > 0;) {
    const PStar& b = p.blocks[k];
    w.out << "  subgraph cluster_" << w.clusters++ << " {\n  label=" << quote("p" + std::to_string(k) + " " + u.system(b.system).name)
          << ";\n";
    std::string table;
    for (const auto& [g, tag] : b.support) table += u.name(g) + " : " + tag_name(u, tag) + "\\l";
    anchors.push_back(w.node(table, ", shape=note"));
    if (b.tree) {
      const std::string root = w.tree(*b.tree, "T " + u.name(b.tree->owner));
      w.out << "  " << anchors.back() << " -> " << root << ";\n";
    }
    else w.node("T undefined", ", shape=plaintext");
    w.out << "  }\n";
  }
  for (std::size_t i = 1; i < anchors.size(); ++i)
    w.out << "  " << anchors[i - 1] << " -> " << anchors[i] << " [style=invis];\n";
  w.out << "}\n";
  return w.out.str();
}

std::string radin_dot(const Universe& u, const RadinCondition& r) {
  DotWriter w{u, {}};
  w.out << "digraph radin {\n";
  std::vector<std::string> anchors;
  for (std::size_t k = r.blocks.size(); k-- > 0;) {
    const RadinBlock& b = r.blocks[k];
    w.out << "  subgraph cluster_" << w.clusters++ << " {\n  label=" << quote("block " + std::to_string(k)) << ";\n";
    anchors.push_back(w.tree(b.tree, u.name(b.seq) + " : " + tag_name(u, b.tag)));
    w.out << "  }\n";
  }
  for (std::size_t i = 1; i < anchors.size(); ++i)
    w.out << "  " << anchors[i - 1] << " -> " << anchors[i] << " [style=invis];\n";
  w.out << "}\n";
  return w.out.str();
}

}  // namespace flab
