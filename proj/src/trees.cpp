#include "forcinglab/trees.hpp"

#include <algorithm>
#include <map>

namespace flab {

bool operator==(const ETree& a, const ETree& b) {
  if (a.roots.empty() && b.roots.empty()) return true;
  return a.owner == b.owner && a.roots == b.roots;
}

ETree empty_tree(SeqId owner) { return ETree{owner, {}}; }

namespace {

void sort_level(std::vector<Node>& nodes) {
  std::sort(nodes.begin(), nodes.end(), [](const Node& a, const Node& b) { return a.elem < b.elem; });
  for (auto& n : nodes) {
    canonicalize(n.attached);
    sort_level(n.suc);
  }
}

const Node* find_in(const std::vector<Node>& nodes, SeqId x) {
  auto it = std::lower_bound(nodes.begin(), nodes.end(), x,
                             [](const Node& n, SeqId v) { return n.elem < v; });
  if (it == nodes.end() || it->elem != x) return nullptr;
  return &*it;
}

SeqSet elems(const std::vector<Node>& nodes) {
  SeqSet out;
  for (const auto& n : nodes) out.push_back(n.elem);
  return out;
}

}  // namespace

void canonicalize(ETree& t) { sort_level(t.roots); }

const Node* find_node(const ETree& t, const TreePath& path) {
  if (path.empty()) return nullptr;
  const std::vector<Node>* level = &t.roots;
  const Node* n = nullptr;
  for (SeqId x : path) {
    n = find_in(*level, x);
    if (!n) return nullptr;
    level = &n->suc;
  }
  return n;
}

bool in_dom(const ETree& t, const TreePath& path) { return path.empty() || find_node(t, path); }

SeqSet lev0(const ETree& t) { return elems(t.roots); }

SeqSet successors(const ETree& t, const TreePath& path) {
  if (path.empty()) return lev0(t);
  const Node* n = find_node(t, path);
  if (!n) throw DomainError("path not in the tree");
  return elems(n->suc);
}

std::vector<TreePath> all_paths(const ETree& t) {
  std::vector<TreePath> out;
  std::vector<std::pair<TreePath, const std::vector<Node>*>> frontier{{{}, &t.roots}};
  while (!frontier.empty()) {
    std::vector<std::pair<TreePath, const std::vector<Node>*>> next;
    for (auto& [p, level] : frontier)
      for (const auto& n : *level) {
        TreePath q = p;
        q.push_back(n.elem);
        out.push_back(q);
        next.push_back({q, &n.suc});
      }
    frontier = std::move(next);
  }
  return out;
}

namespace {
std::size_t count_nodes(const std::vector<Node>& nodes) {
  std::size_t c = 0;
  for (const auto& n : nodes) c += 1 + count_nodes(n.attached.roots) + count_nodes(n.suc);
  return c;
}
std::size_t depth_of(const std::vector<Node>& nodes) {
  std::size_t d = 0;
  for (const auto& n : nodes) d = std::max(d, 1 + depth_of(n.suc));
  return d;
}
}  // namespace

std::size_t node_count(const ETree& t) { return count_nodes(t.roots); }
std::size_t depth(const ETree& t) { return depth_of(t.roots); }

std::string path_name(const Universe& u, const TreePath& p) {
  std::string s = "<";
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? "," : "") + u.name(p[i]);
  return s + ">";
}

namespace {

struct TreeChecker {
  const Universe& u;
  ValidationReport& r;

  void level(SeqId owner, const std::vector<Node>& nodes, std::optional<Ordinal> floor,
             const TreePath& path) {
    const std::string where = path_name(u, path);
    for (std::size_t i = 1; i < nodes.size(); ++i)
      if (!(nodes[i - 1].elem < nodes[i].elem))
        r.fail("one-to-one", "repeated or unsorted successor " + u.name(nodes[i].elem) + " after " + where);
    SeqSet carrier = u.measure_carrier(owner);
    for (const auto& n : nodes) {
      if (!sets::contains(carrier, n.elem))
        r.fail("zero-increasing", u.name(n.elem) + " after " + where + " is not a point of " + u.name(owner));
      if (floor && !(*floor < u.kappa0(n.elem)))
        r.fail("zero-increasing", u.name(n.elem) + " after " + where + " does not increase κ⁰");
      if (!n.attached.empty() && n.attached.owner != n.elem)
        r.fail("one-to-one", "tree attached to " + u.name(n.elem) + " is owned by " + u.name(n.attached.owner));
    }
    const auto& ms = u.seq(owner).measures;
    SeqSet here = elems(nodes);
    for (std::size_t xi = 0; xi < ms.size(); ++xi) {
      const auto& f = u.filter(ms[xi]);
      if (large_above(u, f, sets::intersect(here, f.carrier), floor) == Largeness::Small)
        r.fail("measure-one", "Suc" + where + " is small for measure " + std::to_string(xi) + " (" + f.name + ")");
    }
    for (const auto& n : nodes) {
      TreePath p = path;
      p.push_back(n.elem);
      if (u.len(n.elem) == 0) {
        if (!n.attached.empty())
          r.fail("attached", "degenerate " + u.name(n.elem) + " at " + path_name(u, p) + " carries a tree");
      } else {
        ValidationReport inner;
        TreeChecker{u, inner}.level(n.elem, n.attached.roots, floor, {});
        for (const auto& e : inner.entries())
          if (e.status == ClauseStatus::Fail)
            r.fail("attached", "tree at " + path_name(u, p) + ": " + e.clause + ": " + e.witness);
      }
      level(owner, n.suc, u.kappa0(n.elem), p);
    }
  }
};

}  // namespace

ValidationReport validate_tree(const Universe& u, SeqId owner, const ETree& t,
                               std::optional<Ordinal> floor) {
  ValidationReport r;
  if (!t.empty() && t.owner != owner)
    r.fail("owner", "tree owned by " + u.name(t.owner) + ", expected " + u.name(owner));
  r.settle("owner");
  if (u.len(owner) == 0) {
    if (!t.empty()) r.fail("attached", "degenerate owner " + u.name(owner) + " with a nonempty tree");
  } else {
    TreeChecker{u, r}.level(owner, t.roots, floor, {});
  }
  for (const char* c : {"one-to-one", "levels", "zero-increasing", "measure-one", "attached"}) r.settle(c);
  return r;
}

ETree subtree_at(const ETree& t, const TreePath& path) {
  if (path.empty()) return t;
  const Node* n = find_node(t, path);
  if (!n) throw DomainError("path not in the tree");
  return ETree{t.owner, n->suc};
}

ETree attached_at(const ETree& t, const TreePath& path, SeqId mu) {
  TreePath p = path;
  p.push_back(mu);
  const Node* n = find_node(t, p);
  if (!n) throw DomainError("not a successor of the path");
  if (n->attached.empty()) return empty_tree(mu);
  return n->attached;
}

namespace {

std::vector<Node> pull(const Universe& u, SeqId beta, SeqId alpha, const SeqSet& carrier,
                       const std::vector<Node>& level) {
  std::vector<Node> out;
  for (SeqId x : carrier) {
    const Node* m = find_in(level, project_id(u, beta, alpha, x));
    if (!m) continue;
    Node n;
    n.elem = x;
    n.attached = m->attached.empty() ? empty_tree(x) : preimage(u, x, m->elem, m->attached);
    n.suc = pull(u, beta, alpha, carrier, m->suc);
    out.push_back(std::move(n));
  }
  return out;
}

bool leq_level(const Universe& u, const std::vector<Node>& t, const std::vector<Node>& s) {
  for (const auto& n : t) {
    const Node* m = find_in(s, n.elem);
    if (!m) return false;
    if (!n.attached.empty()) {
      if (m->attached.empty()) return false;
      if (!leq_level(u, n.attached.roots, m->attached.roots)) return false;
    }
    if (!leq_level(u, n.suc, m->suc)) return false;
  }
  return true;
}

std::vector<Node> meet(const std::vector<Node>& t, const std::vector<Node>& s) {
  std::vector<Node> out;
  for (const auto& n : t) {
    const Node* m = find_in(s, n.elem);
    if (!m) continue;
    Node k;
    k.elem = n.elem;
    k.attached = ETree{n.elem, meet(n.attached.roots, m->attached.roots)};
    k.suc = meet(n.suc, m->suc);
    out.push_back(std::move(k));
  }
  return out;
}

}  // namespace

ETree preimage(const Universe& u, SeqId beta, SeqId alpha, const ETree& s) {
  if (beta == alpha) return s;
  if (!u.index_geq(beta, alpha))
    throw DomainError("preimage needs " + u.name(beta) + " >= " + u.name(alpha));
  if (s.empty()) return empty_tree(beta);
  return ETree{beta, pull(u, beta, alpha, u.measure_carrier(beta), s.roots)};
}

bool tree_leq(const Universe& u, const ETree& t, const ETree& s) {
  if (t.empty()) return true;
  if (s.empty()) return false;
  if (t.owner == s.owner) return leq_level(u, t.roots, s.roots);
  if (!u.index_geq(t.owner, s.owner))
    throw DomainError("tree owners " + u.name(t.owner) + " and " + u.name(s.owner) + " are unrelated");
  return leq_level(u, t.roots, preimage(u, t.owner, s.owner, s).roots);
}

ETree intersect_trees(const ETree& t, const ETree& s) {
  if (t.empty() || s.empty()) return empty_tree(t.empty() ? s.owner : t.owner);
  if (t.owner != s.owner) throw DomainError("intersection of trees with different owners");
  return ETree{t.owner, meet(t.roots, s.roots)};
}

std::vector<TreePair> diag_intersect(const Universe& u, const std::vector<DiagEntry>& family,
                                     DiagKey key) {
  auto key_of = [&](SeqId nu) { return key == DiagKey::Kappa ? u.kappa(nu) : u.kappa0(nu); };
  std::vector<TreePair> out;
  std::vector<SeqId> glued;
  auto find_pair = [](const std::vector<TreePair>& a, SeqId mu) -> const TreePair* {
    for (const auto& p : a)
      if (p.seq == mu) return &p;
    return nullptr;
  };
  for (const auto& entry : family)
    for (const auto& cand : entry.a) {
      const SeqId mu = cand.seq;
      std::vector<const DiagEntry*> constraining;
      for (const auto& e : family)
        if (key_of(e.nu) < u.kappa0(mu)) constraining.push_back(&e);
      if (constraining.empty()) {
        if (std::find(out.begin(), out.end(), cand) == out.end()) out.push_back(cand);
        continue;
      }
      if (std::find(glued.begin(), glued.end(), mu) != glued.end()) continue;
      glued.push_back(mu);
      ETree s{mu, {}};
      bool ok = true;
      for (const DiagEntry* e : constraining) {
        const TreePair* hit = find_pair(e->a, mu);
        if (!hit) {
          ok = false;
          break;
        }
        Node n;
        n.elem = e->nu;
        n.attached = e->r;
        n.suc = hit->tree.roots;
        s.roots.push_back(std::move(n));
      }
      if (!ok) continue;
      canonicalize(s);
      out.push_back(TreePair{mu, std::move(s)});
    }
  std::sort(out.begin(), out.end(), [](const TreePair& a, const TreePair& b) { return a.seq < b.seq; });
  return out;
}

std::size_t member_index(const Universe& u, SeqId x) {
  const auto& idx = u.system(u.system_of(x)).indices;
  return static_cast<std::size_t>(std::find(idx.begin(), idx.end(), x) - idx.begin());
}

namespace {

std::vector<Node> grow(const Universe& u, SeqId owner, const SeqSet& carrier,
                       std::optional<Ordinal> floor,
                       const std::function<bool(SeqId, SeqId)>& keep, std::size_t left,
                       std::size_t max_depth) {
  std::vector<Node> out;
  if (max_depth && left == 0) return out;
  for (SeqId x : carrier) {
    if (floor && !(*floor < u.kappa0(x))) continue;
    if (!keep(owner, x)) continue;
    Node n;
    n.elem = x;
    n.attached = build_tree(u, x, floor, keep, max_depth);
    n.suc = grow(u, owner, carrier, u.kappa0(x), keep, left ? left - 1 : 0, max_depth);
    out.push_back(std::move(n));
  }
  return out;
}

}  // namespace

ETree build_tree(const Universe& u, SeqId owner, std::optional<Ordinal> floor,
                 const std::function<bool(SeqId, SeqId)>& keep, std::size_t max_depth) {
  if (u.len(owner) == 0) return empty_tree(owner);
  return ETree{owner, grow(u, owner, u.measure_carrier(owner), floor, keep, max_depth, max_depth)};
}

ETree full_tree(const Universe& u, SeqId owner, std::optional<Ordinal> floor) {
  return build_tree(u, owner, floor, [](SeqId, SeqId) { return true; });
}

ETree focus_tree(const Universe& u, SeqId owner, std::optional<Ordinal> floor) {
  return build_tree(u, owner, floor,
                    [&u](SeqId o, SeqId x) { return member_index(u, x) == member_index(u, o); });
}

namespace {

std::vector<Node> prune_level(const std::vector<Node>& nodes, TreePath& path,
                              const std::function<bool(const TreePath&)>& keep) {
  std::vector<Node> out;
  for (const auto& n : nodes) {
    path.push_back(n.elem);
    if (keep(path)) {
      Node k = n;
      k.suc = prune_level(n.suc, path, keep);
      out.push_back(std::move(k));
    }
    path.pop_back();
  }
  return out;
}

}  // namespace

namespace {
void key_level(const std::vector<Node>& nodes, std::string& out) {
  for (const auto& n : nodes) {
    out += std::to_string(n.elem);
    if (!n.attached.empty()) {
      out += '[';
      key_level(n.attached.roots, out);
      out += ']';
    }
    if (!n.suc.empty()) {
      out += '{';
      key_level(n.suc, out);
      out += '}';
    }
    out += ',';
  }
}
}  // namespace

std::string tree_key(const ETree& t) {
  std::string out;
  if (!t.empty()) out = std::to_string(t.owner) + ':';
  key_level(t.roots, out);
  return out;
}

ETree prune(const ETree& t, const std::function<bool(const TreePath&)>& keep) {
  TreePath p;
  return ETree{t.owner, prune_level(t.roots, p, keep)};
}

ETree remove_path(const ETree& t, const TreePath& path) {
  return prune(t, [&](const TreePath& p) {
    return !(p.size() >= path.size() && std::equal(path.begin(), path.end(), p.begin()));
  });
}

}  // namespace flab
