#include "forcinglab/radin.hpp"

#include <unordered_map>

namespace flab {

RadinCondition radin_base(SeqId alpha, ETree t) {
  if (t.empty()) t.owner = alpha;
  return RadinCondition{{RadinBlock{alpha, std::nullopt, std::move(t)}}};
}

std::string radin_key(const RadinCondition& p) {
  std::string out;
  for (const auto& b : p.blocks) {
    out += std::to_string(b.seq) + '/' + (b.tag ? std::to_string(*b.tag) : "-") + '(' + tree_key(b.tree) + ')';
  }
  return out;
}

std::string radin_shape(const RadinCondition& p) {
  std::string out;
  for (const auto& b : p.blocks) out += std::to_string(b.seq) + '/' + (b.tag ? std::to_string(*b.tag) : "-") + ';';
  return out;
}

bool same_shape(const RadinCondition& p, const RadinCondition& q) {
  if (p.blocks.size() != q.blocks.size()) return false;
  for (std::size_t i = 0; i < p.blocks.size(); ++i)
    if (p.blocks[i].seq != q.blocks[i].seq || p.blocks[i].tag != q.blocks[i].tag) return false;
  return true;
}

std::string radin_name(const Universe& u, const RadinCondition& p) {
  std::string out = "<";
  for (std::size_t k = p.blocks.size(); k-- > 0;) {
    const auto& b = p.blocks[k];
    out += "<" + u.name(b.seq) + "," + (b.tag ? u.name(*b.tag) : "<>") + ">";
    out += "[" + std::to_string(node_count(b.tree)) + "]";
    if (k) out += ", ";
  }
  return out + ">";
}

ValidationReport validate_radin(const Universe& u, SeqId alpha, const RadinCondition& p) {
  ValidationReport r;
  if (p.blocks.empty())
    r.fail("anchor", "no blocks");
  else if (p.blocks.front().seq != alpha)
    r.fail("anchor", "last block is " + u.name(p.blocks.front().seq) + ", expected " + u.name(alpha));
  r.settle("anchor");
  for (std::size_t i = 0; i < p.blocks.size(); ++i) {
    const auto& b = p.blocks[i];
    const std::string where = "block " + std::to_string(i) + " (" + u.name(b.seq) + ")";
    if (b.tag && !(u.kappa0(*b.tag) < u.kappa0(b.seq)))
      r.fail("tag-below", where + ": tag " + u.name(*b.tag) + " is not below κ⁰");
    auto tr = validate_tree(u, b.seq, b.tree, tag_kappa0(u, b.tag));
    for (const auto& e : tr.entries())
      if (e.status == ClauseStatus::Fail) r.fail("tree", where + ": " + e.clause + ": " + e.witness);
  }
  r.settle("tag-below");
  r.settle("tree");
  return r;
}

bool radin_leq_star(const Universe& u, const RadinCondition& p, const RadinCondition& q) {
  if (p.blocks.size() != q.blocks.size()) throw DomainError("≤* between conditions with different block counts");
  for (std::size_t i = 0; i < p.blocks.size(); ++i)
    if (p.blocks[i].seq != q.blocks[i].seq) throw DomainError("≤* between conditions with different sequences");
  for (std::size_t i = 0; i < p.blocks.size(); ++i) {
    if (p.blocks[i].tag != q.blocks[i].tag) return false;
    if (!tree_leq(u, p.blocks[i].tree, q.blocks[i].tree)) return false;
  }
  return true;
}

RadinCondition radin_extend_one(const RadinCondition& q, std::size_t i, SeqId nu) {
  if (i >= q.blocks.size()) throw DomainError("block index out of range");
  const RadinBlock& b = q.blocks[i];
  if (!sets::contains(lev0(b.tree), nu)) throw DomainError("point is not in Lev_0 of the block tree");
  RadinCondition out = q;
  RadinBlock lower{nu, b.tag, attached_at(b.tree, {}, nu)};
  out.blocks[i] = RadinBlock{b.seq, nu, subtree_at(b.tree, {nu})};
  out.blocks.insert(out.blocks.begin() + static_cast<long>(i) + 1, std::move(lower));
  return out;
}

RadinCondition radin_extend_path(const RadinCondition& q, const TreePath& path) {
  RadinCondition cur = q;
  for (SeqId nu : path) cur = radin_extend_one(cur, 0, nu);
  return cur;
}

namespace {

// breadth-first over one-point extensions; parent links for chains
struct Frontier {
  std::vector<RadinCondition> nodes;
  std::vector<std::size_t> parent;
  std::vector<std::size_t> depth;
  std::unordered_map<std::string, std::size_t> seen;

  bool add(RadinCondition c, std::size_t par, std::size_t d) {
    auto [it, fresh] = seen.emplace(radin_key(c), nodes.size());
    if (!fresh) return false;
    nodes.push_back(std::move(c));
    parent.push_back(par);
    depth.push_back(d);
    return true;
  }
};

std::vector<RadinCondition> one_step(const RadinCondition& c) {
  std::vector<RadinCondition> out;
  for (std::size_t i = 0; i < c.blocks.size(); ++i)
    for (SeqId nu : lev0(c.blocks[i].tree)) out.push_back(radin_extend_one(c, i, nu));
  return out;
}

}  // namespace

std::vector<RadinCondition> radin_descendants(const RadinCondition& q, std::size_t cap) {
  Frontier f;
  f.add(q, 0, 0);
  for (std::size_t k = 0; k < f.nodes.size(); ++k) {
    for (auto& c : one_step(f.nodes[k])) {
      f.add(std::move(c), k, f.depth[k] + 1);
      if (f.nodes.size() > cap) throw CapExceeded("more than " + std::to_string(cap) + " descendants");
    }
  }
  return std::move(f.nodes);
}

RadinChain radin_leq(const Universe& u, const RadinCondition& p, const RadinCondition& q,
                     std::size_t budget) {
  RadinChain out;
  if (p.blocks.size() < q.blocks.size()) return out;
  // every extension adds one block, so n is fixed by the block counts
  const std::size_t n = p.blocks.size() - q.blocks.size();
  Frontier f;
  f.add(q, 0, 0);
  std::size_t expanded = 0;
  for (std::size_t k = 0; k < f.nodes.size(); ++k) {
    const RadinCondition& d = f.nodes[k];
    if (f.depth[k] == n) {
      if (same_shape(p, d) && radin_leq_star(u, p, d)) {
        out.verdict = Verdict::Yes;
        out.chain.push_back(p);
        if (k != 0)
          for (std::size_t j = f.parent[k];; j = f.parent[j]) {
            out.chain.push_back(f.nodes[j]);
            if (j == 0) break;
          }
        return out;
      }
      continue;
    }
    if (++expanded > budget) {
      out.verdict = Verdict::Unknown;
      return out;
    }
    std::size_t dk = f.depth[k];
    for (auto& c : one_step(d)) f.add(std::move(c), k, dk + 1);
  }
  return out;
}

namespace {

std::string first_failure(const ValidationReport& r) {
  for (const auto& e : r.entries())
    if (e.status == ClauseStatus::Fail) return e.clause + ": " + e.witness;
  return {};
}

bool not_small(const Universe& u, FilterId fid, const SeqSet& a, std::optional<Ordinal> floor) {
  const auto& f = u.filter(fid);
  return large_above(u, f, sets::intersect(a, f.carrier), floor) != Largeness::Small;
}

const Node* child(const std::vector<Node>& level, SeqId x) {
  for (const auto& n : level)
    if (n.elem == x) return &n;
  return nullptr;
}

SeqSet elems_of(const std::vector<Node>& level) {
  SeqSet out;
  for (const auto& n : level) out.push_back(n.elem);
  return out;
}

}  // namespace

ETree DefaultOracle::reflect(const Universe& u, SeqId alpha, const ETree& t, std::size_t xi0) const {
  const auto& f = u.filter(u.seq(alpha).measures.at(xi0));
  std::optional<SeqId> best;
  for (SeqId mu : lev0(t)) {
    bool everywhere = true;
    for (const auto& g : f.generators) everywhere = everywhere && sets::contains(g, mu);
    if (everywhere && (!best || u.kappa0(*best) < u.kappa0(mu))) best = mu;
  }
  if (!best) throw PreconditionError("oracle: no point of Lev_0 lies in every generator of measure " + std::to_string(xi0));
  return attached_at(t, {}, *best);
}

std::optional<std::size_t> DefaultOracle::index(const Universe& u, std::size_t, SeqId mu,
                                                std::size_t xi0) const {
  if (xi0 < u.len(mu)) return xi0;
  return std::nullopt;
}

namespace {

struct Filler {
  const Universe& u;
  SeqId alpha;
  const ETree& t;
  std::size_t xi0;
  const ReflectionOracle& oracle;

  std::vector<Node> children(const TreePath& path, const std::vector<Node>* s_level,
                             std::optional<Ordinal> floor) const {
    std::vector<Node> out;
    auto above = [&](SeqId x) { return !floor || *floor < u.kappa0(x); };
    // roots of T whose attached tree still contains the path
    std::vector<Node> here;
    for (const auto& r : t.roots) {
      if (!above(r.elem) || !in_dom(r.attached, path)) continue;
      Node n;
      n.elem = r.elem;
      n.attached = path.empty() ? r.attached : subtree_at(r.attached, path);
      if (n.attached.empty()) n.attached = empty_tree(r.elem);
      n.suc = r.suc;
      here.push_back(std::move(n));
    }
    out = here;
    const SeqSet taken = elems_of(here);
    if (s_level)
      for (const auto& s : *s_level) {
        if (sets::contains(taken, s.elem) || !above(s.elem)) continue;
        TreePath p = path;
        p.push_back(s.elem);
        Node n;
        n.elem = s.elem;
        n.attached = s.attached.empty() ? empty_tree(s.elem) : s.attached;
        n.suc = children(p, &s.suc, u.kappa0(s.elem));
        out.push_back(std::move(n));
      }
    const SeqSet a0 = taken;
    for (std::size_t xi = xi0 + 1; xi < u.len(alpha); ++xi) {
      std::vector<DiagEntry> fam;
      for (const auto& m1 : here) {
        DiagEntry e{m1.elem, m1.attached, {}};
        for (const auto& m2 : m1.suc) {
          auto h = oracle.index(u, xi, m2.elem, xi0);
          if (!h || *h >= u.len(m2.elem)) continue;
          if (!not_small(u, u.seq(m2.elem).measures[*h], a0, floor)) continue;
          e.a.push_back({m2.elem, m2.attached});
        }
        fam.push_back(std::move(e));
      }
      for (auto& pr : diag_intersect(u, fam)) {
        if (child(out, pr.seq)) continue;
        auto h = oracle.index(u, xi, pr.seq, xi0);
        ETree r;
        try {
          r = fill_missing(u, pr.seq, pr.tree, *h, oracle, floor);
        } catch (const PreconditionError&) {
          continue;
        }
        Node n;
        n.elem = pr.seq;
        n.attached = std::move(r);
        bool first = true;
        for (SeqId m1 : lev0(pr.tree)) {
          const Node* below = child(child(here, m1)->suc, pr.seq);
          ETree sub{alpha, below->suc};
          n.suc = first ? sub.roots : intersect_trees(ETree{alpha, n.suc}, sub).roots;
          first = false;
        }
        out.push_back(std::move(n));
      }
    }
    std::sort(out.begin(), out.end(), [](const Node& a, const Node& b) { return a.elem < b.elem; });
    return out;
  }
};

}  // namespace

ETree fill_missing(const Universe& u, SeqId alpha, const ETree& t, std::size_t xi0,
                   const ReflectionOracle& oracle, std::optional<Ordinal> floor) {
  const auto& ms = u.seq(alpha).measures;
  if (xi0 >= ms.size()) throw PreconditionError("measure index out of range");
  if (!t.empty() && t.owner != alpha) throw PreconditionError("tree is not owned by " + u.name(alpha));
  const SeqSet a0 = lev0(t);
  if (!not_small(u, ms[xi0], a0, floor))
    throw PreconditionError("Lev_0 is not measure one for measure " + std::to_string(xi0));
  for (const auto& r : t.roots) {
    if (!validate_tree(u, alpha, ETree{alpha, r.suc}, u.kappa0(r.elem)).ok())
      throw PreconditionError("subtree at " + u.name(r.elem) + " is not a tree");
    if (!validate_tree(u, r.elem, r.attached, floor).ok())
      throw PreconditionError("tree attached to " + u.name(r.elem) + " is not a tree");
  }
  bool complete = true;
  for (FilterId f : ms) complete = complete && not_small(u, f, a0, floor);
  if (complete) return t;

  ETree s = oracle.reflect(u, alpha, t, xi0);
  Filler fill{u, alpha, t, xi0, oracle};
  ETree out{alpha, fill.children({}, &s.roots, floor)};
  auto rep = validate_tree(u, alpha, out, floor);
  if (!rep.ok()) throw PreconditionError("filled tree fails " + first_failure(rep));
  return out;
}

namespace {

// paths of length m through `level` whose points all sit below `bound`
void paths_below(const std::vector<Node>& level, std::size_t m, Ordinal bound, const Universe& u,
                 TreePath& cur, std::vector<TreePath>& out) {
  if (m == 0) {
    out.push_back(cur);
    return;
  }
  for (const auto& n : level) {
    if (!(u.kappa(n.elem) < bound)) continue;
    cur.push_back(n.elem);
    paths_below(n.suc, m - 1, bound, u, cur, out);
    cur.pop_back();
  }
}

const Node* walk(const std::vector<Node>& level, const TreePath& r) {
  const std::vector<Node>* l = &level;
  const Node* n = nullptr;
  for (SeqId x : r) {
    n = child(*l, x);
    if (!n) return nullptr;
    l = &n->suc;
  }
  return n;
}

// U(ν̄) cut down to the glued tree of the paths r: a point survives only as an
// index below ν̄ at its level
std::vector<Node> restrict_attached(const std::vector<Node>& att, const std::vector<Node>& level,
                                    std::size_t m, SeqId nu, const Universe& u) {
  const Ordinal bound = u.kappa0(nu);
  std::vector<Node> out;
  for (const auto& a : att) {
    const Node* g = child(level, a.elem);
    if (!g || !(u.kappa(g->elem) < bound)) continue;
    Node k;
    k.elem = a.elem;
    k.attached = intersect_trees(a.attached, g->attached);
    if (m == 1)
      k.suc = intersect_trees(ETree{nu, a.suc}, child(g->suc, nu)->attached).roots;
    else
      k.suc = restrict_attached(a.suc, g->suc, m - 1, nu, u);
    out.push_back(std::move(k));
  }
  return out;
}

struct Skeleton {
  const Universe& u;
  SeqId alpha;

  // node list at depth j replaced, looking m levels ahead
  std::vector<Node> modify(const std::vector<Node>& level, std::size_t j, std::size_t m,
                           std::optional<Ordinal> floor) const {
    if (j > 0) {
      std::vector<Node> out = level;
      for (auto& n : out) n.suc = modify(n.suc, j - 1, m, u.kappa0(n.elem));
      return out;
    }
    const SeqSet here = elems_of(level);
    std::vector<Node> out;
    for (const auto& n : level) {
      const SeqId nu = n.elem;
      const Ordinal bound = u.kappa0(nu);
      std::vector<TreePath> ps;
      TreePath cur;
      paths_below(level, m, bound, u, cur, ps);
      bool a = true;
      for (const auto& r : ps) a = a && child(walk(level, r)->suc, nu);
      if (!a) continue;
      bool b = true;
      for (FilterId f : u.seq(nu).measures) b = b && not_small(u, f, here, floor);
      if (!b) continue;
      Node k = n;
      if (u.len(nu) > 0) k.attached = ETree{nu, restrict_attached(n.attached.roots, level, m, nu, u)};
      if (!ps.empty()) {
        ETree sub{alpha, n.suc};
        for (const auto& r : ps) sub = intersect_trees(sub, ETree{alpha, child(walk(level, r)->suc, nu)->suc});
        k.suc = sub.roots;
      }
      out.push_back(std::move(k));
    }
    return out;
  }
};

}  // namespace

ETree skeleton_refine(const Universe& u, SeqId alpha, const ETree& t, std::size_t depth,
                      std::optional<Ordinal> floor) {
  auto pre = validate_tree(u, alpha, t, floor);
  if (!pre.ok()) throw PreconditionError("not a tree: " + first_failure(pre));
  ETree cur = t;
  Skeleton sk{u, alpha};
  for (std::size_t k = 2; k <= depth; ++k) {
    const ETree base = cur;
    for (std::size_t j = 0; j + 2 <= k; ++j) {
      ETree tj{alpha, sk.modify(base.roots, j, k - 1 - j, floor)};
      cur = intersect_trees(cur, tj);
    }
  }
  if (cur.empty()) cur.owner = alpha;
  auto rep = validate_tree(u, alpha, cur, floor);
  if (!rep.ok()) throw PreconditionError("refined tree fails " + first_failure(rep));
  return cur;
}

}  // namespace flab
