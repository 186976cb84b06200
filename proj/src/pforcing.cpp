#include "forcinglab/pforcing.hpp"

#include <unordered_map>

namespace flab {

SeqId mc(const Universe& u, const PStar& p) {
  for (const auto& [g, tag] : p.support) {
    bool top = true;
    for (const auto& [h, t2] : p.support) top = top && u.index_geq(g, h);
    if (top) return g;
  }
  throw DomainError("support has no maximum");
}

SeqSet support_set(const PStar& p) {
  SeqSet out;
  for (const auto& [g, tag] : p.support) out.push_back(g);
  return sets::normalize(out);
}

namespace {

std::optional<Ordinal> floor_of(const Universe& u, Tag t) { return tag_kappa0(u, t); }

std::string tag_str(const Universe& u, Tag t) { return t ? u.name(*t) : "<>"; }

// every element occurring on a path of T (attached trees excluded)
SeqSet tree_points(const ETree& t) {
  SeqSet out;
  for (const auto& path : all_paths(t)) out.push_back(path.back());
  return sets::normalize(out);
}

}  // namespace

ValidationReport validate_pstar(const Universe& u, const PStar& p, const PStarOptions& opt) {
  ValidationReport r;
  if (p.system >= u.systems.size()) {
    r.fail("system", "no system " + std::to_string(p.system));
    return r;
  }
  const auto& sys = u.system(p.system);
  const std::size_t bound = opt.max_support.value_or(sys.indices.size());
  if (p.support.size() > bound)
    r.fail("support-size", std::to_string(p.support.size()) + " > " + std::to_string(bound));
  r.settle("support-size");

  for (const auto& [g, tag] : p.support)
    if (g >= u.seqs.size() || u.system_of(g) != p.system)
      r.fail("support-in-system", std::to_string(g) + " is not an index of " + sys.name);
  if (r.failed("support-in-system")) return r;
  r.pass("support-in-system");

  if (!p.support.count(u.min_index(p.system)))
    r.fail("contains-min", u.name(u.min_index(p.system)) + " missing from the support");
  r.settle("contains-min");
  std::optional<SeqId> top;
  try {
    top = mc(u, p);
    r.pass("has-max");
  } catch (const DomainError&) {
    r.fail("has-max", "no maximum among " + std::to_string(p.support.size()) + " indices");
  }

  for (const auto& [g, tag] : p.support) {
    if (!tag) continue;
    if (*tag >= u.seqs.size()) {
      r.fail("tags", u.name(g) + " carries an unknown sequence");
      continue;
    }
    if (!(u.kappa0(*tag) < u.system_kappa0(p.system)))
      r.fail("tags", u.name(g) + " carries " + u.name(*tag) + " at or above the system");
  }
  r.settle("tags");
  if (!top) return r;
  const Tag ptop = p.support.at(*top);

  // the minimum's tag is the first coordinate of the mc tag
  if (auto it = p.support.find(u.min_index(p.system)); it != p.support.end()) {
    const Tag want = ptop ? Tag{u.first_coordinate(*ptop)} : Tag{};
    if (it->second != want) {
      const std::string w = "min carries " + tag_str(u, it->second) + ", mc gives " + tag_str(u, want);
      if (opt.strict)
        r.fail("first-coordinate", w);
      else
        r.warn("first-coordinate", w);
    } else {
      r.pass("first-coordinate");
    }
  }

  if (!p.tree) {
    r.fail("tree", "tree undefined");
    return r;
  }
  if (p.tree->owner != *top && !p.tree->empty())
    r.fail("tree", "tree is over " + u.name(p.tree->owner) + ", mc is " + u.name(*top));
  else
    r.merge(validate_tree(u, *top, *p.tree, floor_of(u, ptop)), "tree: ");
  r.settle("tree");

  if (ptop)
    for (const auto& [g, tag] : p.support)
      if (g != *top && permitted_to_tag(u, *ptop, tag))
        r.fail("mc-not-permitted", "mc tag " + u.name(*ptop) + " is permitted to " + tag_str(u, tag) + " at " +
                                       u.name(g));
  r.settle("mc-not-permitted");

  for (SeqId nu : tree_points(*p.tree)) {
    std::vector<SeqId> perm;
    for (const auto& [g, tag] : p.support)
      if (permitted_to_tag(u, nu, tag)) perm.push_back(g);
    if (perm.size() > u.kappa0(nu).value)
      r.fail("permitted-count", u.name(nu) + " is permitted to " + std::to_string(perm.size()) + " coordinates");
    for (std::size_t i = 0; i < perm.size(); ++i)
      for (std::size_t j = i + 1; j < perm.size(); ++j)
        if (project_id(u, *top, perm[i], nu) == project_id(u, *top, perm[j], nu))
          r.fail("projections-distinct", u.name(nu) + " projects to the same point at " + u.name(perm[i]) +
                                             " and " + u.name(perm[j]));
  }
  r.settle("permitted-count");
  r.settle("projections-distinct");
  return r;
}

ValidationReport validate_pcondition(const Universe& u, SystemId top, const PCondition& p,
                                     const PStarOptions& opt) {
  ValidationReport r;
  if (p.blocks.empty()) {
    r.fail("blocks", "no blocks");
    return r;
  }
  if (p.blocks[0].system != top) r.fail("top-block", "block 0 is not over the top system");
  r.settle("top-block");
  for (std::size_t i = 0; i < p.blocks.size(); ++i)
    r.merge(validate_pstar(u, p.blocks[i], opt), "block " + std::to_string(i) + ": ");
  for (std::size_t i = 1; i < p.blocks.size(); ++i) {
    if (p.blocks[i].system >= u.systems.size() || p.blocks[i - 1].system >= u.systems.size()) continue;
    if (!(u.system_kappa0(p.blocks[i].system) < u.system_kappa0(p.blocks[i - 1].system)))
      r.fail("block-order", "block " + std::to_string(i) + " is not below block " + std::to_string(i - 1));
  }
  r.settle("block-order");
  return r;
}

PCondition make_pcondition(const Universe& u, std::vector<PStar> blocks) {
  for (std::size_t i = 1; i < blocks.size(); ++i)
    if (!(u.system_kappa0(blocks[i].system) < u.system_kappa0(blocks[i - 1].system)))
      throw DomainError("block " + std::to_string(i) + " is not below block " + std::to_string(i - 1));
  return PCondition{std::move(blocks)};
}

PStar canonical_pstar(const Universe& u, SystemId s, SeqSet supp) {
  PStar p;
  p.system = s;
  p.support[u.min_index(s)] = std::nullopt;
  for (SeqId g : supp) p.support[g] = std::nullopt;
  p.tree = focus_tree(u, mc(u, p));
  return p;
}

std::string pstar_key(const PStar& p) {
  std::string out = std::to_string(p.system) + '{';
  for (const auto& [g, tag] : p.support) out += std::to_string(g) + ':' + (tag ? std::to_string(*tag) : "-") + ',';
  out += '}';
  out += p.tree ? '(' + tree_key(*p.tree) + ')' : std::string("(undef)");
  return out;
}

std::string pcondition_key(const PCondition& p) {
  std::string out;
  for (const auto& b : p.blocks) out += pstar_key(b) + ';';
  return out;
}

std::string pcondition_name(const Universe& u, const PCondition& p) {
  std::string out = "<";
  for (std::size_t k = p.blocks.size(); k-- > 0;) {
    const auto& b = p.blocks[k];
    out += u.system(b.system).name + "{";
    bool first = true;
    for (const auto& [g, tag] : b.support) {
      if (!first) out += ",";
      first = false;
      out += u.name(g) + ":" + tag_str(u, tag);
    }
    out += "}[" + (b.tree ? std::to_string(node_count(*b.tree)) : std::string("undef")) + "]";
    if (k) out += ", ";
  }
  return out + ">";
}

bool same_systems(const PCondition& p, const PCondition& q) {
  if (p.blocks.size() != q.blocks.size()) return false;
  for (std::size_t i = 0; i < p.blocks.size(); ++i)
    if (p.blocks[i].system != q.blocks[i].system) return false;
  return true;
}

bool pstar_leq_star(const Universe& u, const PStar& p, const PStar& q) {
  if (p.system != q.system) throw DomainError("direct order across different systems");
  const bool treeless = u.system_len(p.system) == 0;
  if (!treeless && (!p.tree || !q.tree)) throw DomainError("direct order with an undefined tree");
  for (const auto& [g, tag] : q.support) {
    auto it = p.support.find(g);
    if (it == p.support.end() || it->second != tag) return false;
  }
  // length 0: support and tags only, there is no tree to compare
  return treeless || tree_leq(u, *p.tree, *q.tree);
}

bool pstar_leq_star_R(const Universe& u, const PStar& p, const PStar& q) {
  return pstar_leq_star(u, p, q) && support_set(p) == support_set(q);
}

bool p_leq_star(const Universe& u, const PCondition& p, const PCondition& q) {
  if (!same_systems(p, q)) throw DomainError("direct order across different block systems");
  for (std::size_t i = 0; i < p.blocks.size(); ++i)
    if (!pstar_leq_star(u, p.blocks[i], q.blocks[i])) return false;
  return true;
}

bool p_leq_star_R(const Universe& u, const PCondition& p, const PCondition& q) {
  if (!same_systems(p, q)) throw DomainError("direct order across different block systems");
  for (std::size_t i = 0; i < p.blocks.size(); ++i)
    if (!pstar_leq_star_R(u, p.blocks[i], q.blocks[i])) return false;
  return true;
}

PCondition p_extend_one(const Universe& u, const PStar& p, SeqId nu) {
  if (!p.tree) throw DomainError("extension of a block with an undefined tree");
  if (!sets::contains(lev0(*p.tree), nu)) throw DomainError(u.name(nu) + " is not in Lev_0 of the tree");
  const SeqId top = mc(u, p);
  PStar lower;
  lower.system = u.system_of(nu);
  PStar upper = p;
  for (const auto& [g, tag] : p.support) {
    if (!permitted_to_tag(u, nu, tag)) continue;
    const SeqId img = project_id(u, top, g, nu);
    lower.support.emplace(img, tag);
    upper.support[g] = img;
  }
  lower.tree = attached_at(*p.tree, {}, nu);
  upper.tree = subtree_at(*p.tree, {nu});
  return PCondition{{std::move(upper), std::move(lower)}};
}

PCondition p_extend_at(const Universe& u, const PCondition& q, std::size_t k, SeqId nu) {
  if (k >= q.blocks.size()) throw DomainError("no block " + std::to_string(k));
  PCondition split = p_extend_one(u, q.blocks[k], nu);
  PCondition out = q;
  out.blocks[k] = std::move(split.blocks[0]);
  out.blocks.insert(out.blocks.begin() + static_cast<std::ptrdiff_t>(k) + 1, std::move(split.blocks[1]));
  return out;
}

PCondition p_extend_path(const Universe& u, const PCondition& q, const TreePath& path) {
  PCondition out = q;
  for (SeqId nu : path) out = p_extend_at(u, out, 0, nu);
  return out;
}

void check_assignment(const Universe& u, const Assignment& s) {
  std::optional<SeqId> first;
  SeqSet seen;
  for (const auto& [a, v] : s) {
    if (v >= u.seqs.size()) throw DomainError("assignment value out of range");
    if (first && (u.len(v) != u.len(*first) || u.kappa0(v) != u.kappa0(*first)))
      throw DomainError("assignment values " + u.name(*first) + " and " + u.name(v) + " differ in length or kappa0");
    if (sets::contains(seen, v)) throw DomainError("assignment repeats " + u.name(v));
    seen = sets::unite(seen, {v});
    if (!first) first = v;
  }
}

PCondition p_extend_s(const Universe& u, const PStar& p, const Assignment& s) {
  check_assignment(u, s);
  if (s.empty()) return PCondition{{p}};
  PStar lower;
  lower.system = u.system_of(s.begin()->second);
  PStar upper = p;
  for (const auto& [a, tag] : p.support) {
    auto it = s.find(a);
    if (it == s.end() || !permitted_to_tag(u, it->second, tag)) continue;
    lower.support.emplace(it->second, tag);
    upper.support[a] = it->second;
  }
  upper.tree.reset();
  auto top = s.find(mc(u, p));
  if (p.tree && top != s.end() && sets::contains(lev0(*p.tree), top->second)) {
    lower.tree = attached_at(*p.tree, {}, top->second);
    upper.tree = subtree_at(*p.tree, {top->second});
  }
  return PCondition{{std::move(upper), std::move(lower)}};
}

PCondition p_extend_s(const Universe& u, const PStar& p, const std::vector<Assignment>& s) {
  PCondition out{{p}};
  for (const auto& si : s) {
    PCondition split = p_extend_s(u, out.blocks[0], si);
    out.blocks[0] = std::move(split.blocks[0]);
    if (split.blocks.size() > 1) out.blocks.insert(out.blocks.begin() + 1, std::move(split.blocks[1]));
  }
  return out;
}

std::vector<Assignment> induced_assignment(const Universe& u, const PStar& p, const TreePath& path) {
  std::vector<Assignment> out;
  PStar cur = p;
  for (SeqId nu : path) {
    const SeqId top = mc(u, cur);
    Assignment s;
    for (const auto& [g, tag] : cur.support)
      if (permitted_to_tag(u, nu, tag)) s[g] = project_id(u, top, g, nu);
    out.push_back(s);
    cur = p_extend_one(u, cur, nu).blocks[0];
  }
  return out;
}

namespace {

struct Frontier {
  std::vector<PCondition> nodes;
  std::vector<std::size_t> parent;
  std::vector<std::size_t> depth;
  std::unordered_map<std::string, std::size_t> seen;

  bool add(PCondition c, std::size_t par, std::size_t d) {
    auto [it, fresh] = seen.emplace(pcondition_key(c), nodes.size());
    if (!fresh) return false;
    nodes.push_back(std::move(c));
    parent.push_back(par);
    depth.push_back(d);
    return true;
  }
};

std::vector<PCondition> one_step(const Universe& u, const PCondition& c) {
  std::vector<PCondition> out;
  for (std::size_t i = 0; i < c.blocks.size(); ++i) {
    if (!c.blocks[i].tree) continue;
    for (SeqId nu : lev0(*c.blocks[i].tree)) out.push_back(p_extend_at(u, c, i, nu));
  }
  return out;
}

struct Found {
  Verdict verdict = Verdict::No;
  std::vector<PCondition> path;  // d, parent(d), …, q
};

// p ≤* d (or ≤*_R) for some d reachable from q in exactly blocks(p) − blocks(q) steps
Found search(const Universe& u, const PCondition& p, const PCondition& q, std::size_t budget, bool same_support) {
  Found out;
  if (p.blocks.size() < q.blocks.size()) return out;
  const std::size_t n = p.blocks.size() - q.blocks.size();
  Frontier f;
  f.add(q, 0, 0);
  std::size_t expanded = 0;
  for (std::size_t k = 0; k < f.nodes.size(); ++k) {
    const PCondition& d = f.nodes[k];
    if (f.depth[k] == n) {
      if (!same_systems(p, d)) continue;
      bool below = false;
      try {
        below = same_support ? p_leq_star_R(u, p, d) : p_leq_star(u, p, d);
      } catch (const DomainError&) {
        below = false;
      }
      if (below) {
        out.verdict = Verdict::Yes;
        for (std::size_t j = k;; j = f.parent[j]) {
          out.path.push_back(f.nodes[j]);
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
    const std::size_t dk = f.depth[k];
    for (auto& c : one_step(u, d)) f.add(std::move(c), k, dk + 1);
  }
  return out;
}

PChain chain_of(const PCondition& p, Found found) {
  PChain out;
  out.verdict = found.verdict;
  if (found.verdict != Verdict::Yes) return out;
  out.chain.push_back(p);
  // p ≤* d, and d is one step below its parent, so p ≤¹ parent(d)
  for (std::size_t i = 1; i < found.path.size(); ++i) out.chain.push_back(std::move(found.path[i]));
  return out;
}

}  // namespace

std::vector<PCondition> p_descendants(const Universe& u, const PCondition& q, std::size_t cap) {
  Frontier f;
  f.add(q, 0, 0);
  for (std::size_t k = 0; k < f.nodes.size(); ++k) {
    for (auto& c : one_step(u, f.nodes[k])) {
      f.add(std::move(c), k, f.depth[k] + 1);
      if (f.nodes.size() > cap) throw CapExceeded("more than " + std::to_string(cap) + " descendants");
    }
  }
  return std::move(f.nodes);
}

PChain p_leq(const Universe& u, const PCondition& p, const PCondition& q, std::size_t budget) {
  return chain_of(p, search(u, p, q, budget, false));
}

PChain p_leq_R(const Universe& u, const PCondition& p, const PCondition& q, std::size_t budget) {
  return chain_of(p, search(u, p, q, budget, true));
}

bool p_leq_one(const Universe& u, const PCondition& p, const PCondition& q, std::size_t* k, SeqId* nu) {
  if (p.blocks.size() != q.blocks.size() + 1) return false;
  for (std::size_t i = 0; i < q.blocks.size(); ++i) {
    if (!q.blocks[i].tree) continue;
    for (SeqId x : lev0(*q.blocks[i].tree)) {
      const PCondition d = p_extend_at(u, q, i, x);
      if (!same_systems(p, d)) continue;
      bool below = false;
      try {
        below = p_leq_star(u, p, d);
      } catch (const DomainError&) {
        below = false;
      }
      if (!below) continue;
      if (k) *k = i;
      if (nu) *nu = x;
      return true;
    }
  }
  return false;
}

PCondition factor(const Universe& u, const PCondition& q, const PCondition& p, std::size_t budget) {
  Found found = search(u, q, p, budget, false);
  if (found.verdict == Verdict::Unknown) throw CapExceeded("factor search exceeded its budget");
  if (found.verdict != Verdict::Yes) throw PreconditionError("q is not below p");
  PCondition r = found.path.front();
  for (std::size_t i = 0; i < r.blocks.size(); ++i) {
    // q's own tree when its mc stayed put; otherwise d's tree already lies above q's
    const auto& qb = q.blocks[i];
    if (qb.tree && r.blocks[i].tree && !r.blocks[i].support.empty() && mc(u, qb) == mc(u, r.blocks[i]))
      r.blocks[i].tree = qb.tree;
  }
  return r;
}

std::vector<PCondition> quotient_filter(const Universe& u, SystemId top, const std::vector<PCondition>& pool,
                                        SeqId eps, const std::vector<PCondition>& candidates) {
  if (!(u.kappa0(eps) < u.system_kappa0(top))) throw DomainError("the quotient needs kappa0(eps) below the top");
  std::vector<PCondition> qs = candidates;
  if (qs.empty()) {
    const SystemId s = u.system_of(eps);
    qs.push_back(PCondition{{canonical_pstar(u, s)}});
    qs.push_back(PCondition{{canonical_pstar(u, s, u.system(s).indices)}});
  }
  std::vector<PCondition> out;
  for (const auto& p : pool) {
    if (p.blocks.empty() || p.blocks.back().system >= u.systems.size()) continue;
    if (!(u.kappa0(eps) < u.system_kappa0(p.blocks.back().system))) continue;
    for (const auto& q : qs) {
      PCondition joined = p;
      joined.blocks.insert(joined.blocks.end(), q.blocks.begin(), q.blocks.end());
      if (validate_pcondition(u, top, joined).ok()) {
        out.push_back(p);
        break;
      }
    }
  }
  return out;
}

}  // namespace flab
