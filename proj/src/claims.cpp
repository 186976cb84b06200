#include <algorithm>
#include <bit>
#include <functional>
#include <unordered_map>

#include "forcinglab/checker.hpp"

namespace flab {

std::vector<std::size_t> below(const Relation& rel, std::size_t p) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < rel.size(); ++i)
    if (rel(i, p)) out.push_back(i);
  return out;
}

bool compatible(const Relation& rel, const std::vector<std::size_t>& among, std::size_t a, std::size_t b) {
  for (std::size_t s : among)
    if (rel(s, a) && rel(s, b)) return true;
  return false;
}

namespace {

// row a of the result: the members of `among` below a
Relation down_sets(const Relation& rel, const std::vector<std::size_t>& among) {
  Relation d(rel.size());
  for (std::size_t s : among)
    for (std::size_t a = 0; a < rel.size(); ++a)
      if (rel(s, a)) d.set(a, s);
  return d;
}

struct Cliques {
  const std::vector<std::vector<bool>>& adj;
  std::size_t cap;
  std::vector<std::vector<std::size_t>> out;
  bool complete = true;

  void run(std::vector<std::size_t>& r, std::vector<std::size_t> p, std::vector<std::size_t> x) {
    if (out.size() >= cap) {
      complete = false;
      return;
    }
    if (p.empty() && x.empty()) {
      out.push_back(r);
      return;
    }
    // pivot with the most neighbours in p
    std::size_t pivot = p.empty() ? x.front() : p.front(), best = 0;
    for (const auto* set : {&p, &x})
      for (std::size_t u : *set) {
        std::size_t c = 0;
        for (std::size_t v : p) c += adj[u][v];
        if (c > best) best = c, pivot = u;
      }
    std::vector<std::size_t> cand;
    for (std::size_t v : p)
      if (!adj[pivot][v]) cand.push_back(v);
    for (std::size_t v : cand) {
      std::vector<std::size_t> np, nx;
      for (std::size_t w : p)
        if (adj[v][w]) np.push_back(w);
      for (std::size_t w : x)
        if (adj[v][w]) nx.push_back(w);
      r.push_back(v);
      run(r, std::move(np), std::move(nx));
      r.pop_back();
      std::erase(p, v);
      x.push_back(v);
      if (!complete) return;
    }
  }
};

}  // namespace

std::vector<std::vector<std::size_t>> maximal_antichains(const Relation& rel, const std::vector<std::size_t>& among,
                                                         std::size_t cap, bool* complete) {
  const std::size_t m = among.size();
  const Relation d = down_sets(rel, among);
  // antichains are cliques of the incompatibility graph
  std::vector<std::vector<bool>> adj(m, std::vector<bool>(m, false));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) adj[i][j] = adj[j][i] = !d.rows_meet(among[i], among[j]);
  Cliques bk{adj, cap, {}, true};
  std::vector<std::size_t> r, p(m);
  for (std::size_t i = 0; i < m; ++i) p[i] = i;
  bk.run(r, p, {});
  if (complete) *complete = bk.complete;
  std::vector<std::vector<std::size_t>> out;
  for (auto& c : bk.out) {
    std::vector<std::size_t> a;
    for (std::size_t i : c) a.push_back(among[i]);
    std::sort(a.begin(), a.end());
    out.push_back(std::move(a));
  }
  std::sort(out.begin(), out.end());
  return out;
}

ClaimReport check_subforcing(const Universe& u, const FinitePoset& inst, std::size_t p, std::size_t antichain_cap) {
  ClaimReport rep;
  const auto pstar = below(inst.leq_R, p);
  const auto pp = below(inst.leq, p);
  bool complete = true;
  const auto antichains = maximal_antichains(inst.leq_R, pstar, antichain_cap, &complete);
  const Relation d = down_sets(inst.leq, pp);
  for (std::size_t k = 0; k < antichains.size(); ++k) {
    ++rep.checked;
    for (std::size_t r : pp) {
      bool met = false;
      for (std::size_t a : antichains[k]) met = met || d.rows_meet(r, a);
      if (met) continue;
      rep.verdict = Verdict::No;
      if (rep.counterexamples.size() < 20)
        rep.counterexamples.push_back("antichain " + std::to_string(k) + " of " +
                                      std::to_string(antichains[k].size()) + " misses " +
                                      pcondition_name(u, inst.elems[r]));
      break;
    }
  }
  if (!complete) {
    rep.notes.push_back("antichain enumeration stopped at " + std::to_string(antichain_cap));
    if (rep.verdict == Verdict::Yes) rep.verdict = Verdict::Unknown;
  }
  return rep;
}

RadinCondition radin_image(const Universe& u, const PCondition& q) {
  RadinCondition r;
  for (const auto& b : q.blocks) {
    const SeqId top = mc(u, b);
    r.blocks.push_back({top, b.support.at(top), b.tree ? *b.tree : empty_tree(top)});
  }
  return r;
}

IsoReport radin_iso(const Universe& u, const PCondition& p, const PosetBounds& bounds) {
  IsoReport out;
  if (p.blocks.size() != 1) throw DomainError("radin_iso needs a single-block condition");
  PosetBounds pb = bounds;
  pb.grow_support = false;
  const FinitePoset inst = enumerate_poset(u, p, pb);
  out.r = radin_image(u, p);
  const SeqId alpha = mc(u, p.blocks[0]);
  const RadinPoset rad = enumerate_radin(u, alpha, out.r, pb);
  ClaimReport& rep = out.report;
  auto bad = [&](std::string what) {
    rep.verdict = Verdict::No;
    if (rep.counterexamples.size() < 20) rep.counterexamples.push_back(std::move(what));
  };
  const std::size_t root = *inst.find(p);
  const auto pstar = below(inst.leq_R, root);
  std::vector<std::optional<std::size_t>> img(inst.size());
  std::vector<std::size_t> hits(rad.size(), 0);
  for (std::size_t q : pstar) {
    const RadinCondition r = radin_image(u, inst.elems[q]);
    auto j = rad.find(r);
    if (!j) {
      bad(pcondition_name(u, inst.elems[q]) + " maps outside R/r: " + radin_name(u, r));
      continue;
    }
    img[q] = *j;
    ++hits[*j];
    out.pairing.push_back({q, *j});
  }
  const std::size_t rroot = *rad.find(out.r);
  for (std::size_t j = 0; j < rad.size(); ++j) {
    if (!rad.leq(j, rroot)) continue;
    if (hits[j] == 0) bad(radin_name(u, rad.elems[j]) + " has no preimage");
    if (hits[j] > 1) bad(radin_name(u, rad.elems[j]) + " has " + std::to_string(hits[j]) + " preimages");
  }
  for (std::size_t a : pstar)
    for (std::size_t b : pstar) {
      if (!img[a] || !img[b]) continue;
      ++rep.checked;
      if (inst.leq_R(a, b) != rad.leq(*img[a], *img[b]))
        bad((inst.leq_R(a, b) ? "order lost: " : "order created: ") + pcondition_name(u, inst.elems[a]) + " vs " +
            pcondition_name(u, inst.elems[b]));
    }
  return out;
}

ValidationReport check_dense_open(const FinitePoset& inst, const DenseSet& d) {
  ValidationReport r;
  const std::size_t n = inst.size();
  if (d.size() != n) {
    r.fail("size", "membership vector of " + std::to_string(d.size()) + " for " + std::to_string(n) + " elements");
    return r;
  }
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t q = 0; q < n && d[a]; ++q)
      if (inst.leq(q, a) && !d[q]) {
        r.fail("open", std::to_string(q) + " is below member " + std::to_string(a));
        a = n;
        break;
      }
  r.settle("open");
  for (std::size_t p = 0; p < n; ++p) {
    bool hit = false;
    for (std::size_t q = 0; q < n && !hit; ++q) hit = d[q] && inst.leq(q, p);
    if (!hit) {
      r.fail("dense", "nothing below " + std::to_string(p));
      break;
    }
  }
  r.settle("dense");
  return r;
}

DenseSet open_closure(const FinitePoset& inst, const DenseSet& seed_members) {
  DenseSet out(inst.size(), false);
  for (std::size_t a = 0; a < inst.size(); ++a)
    if (a < seed_members.size() && seed_members[a])
      for (std::size_t q = 0; q < inst.size(); ++q)
        if (inst.leq(q, a)) out[q] = true;
  return out;
}

namespace {

void require_dense_open(const FinitePoset& inst, const DenseSet& d) {
  auto r = check_dense_open(inst, d);
  if (!r.ok())
    for (const auto& e : r.entries())
      if (e.status == ClauseStatus::Fail) throw PreconditionError("D is not dense open: " + e.clause + ": " + e.witness);
}

// Suc_S at a node is measure one for some measure of `owner`, above `floor`
bool large_somewhere(const Universe& u, SeqId owner, const SeqSet& s, std::optional<Ordinal> floor) {
  for (FilterId f : u.seq(owner).measures) {
    const auto& fl = u.filter(f);
    if (large_above(u, fl, sets::intersect(s, fl.carrier), floor) == Largeness::Large) return true;
  }
  return false;
}

std::optional<Ordinal> node_floor(const Universe& u, const PStar& b, const TreePath& path) {
  if (!path.empty()) return u.kappa0(path.back());
  return tag_kappa0(u, b.support.at(mc(u, b)));
}

std::size_t must_find(const FinitePoset& inst, const PCondition& c) {
  auto i = inst.find(c);
  if (!i) throw CapExceeded("instance is not closed under extension");
  return *i;
}

}  // namespace

DichotomyResult check_canon_dichotomy(const Universe& u, const FinitePoset& inst, const DenseSet& d, std::size_t p,
                                      std::size_t n) {
  if (n == 0) throw DomainError("n must be positive");
  require_dense_open(inst, d);
  DichotomyResult res;
  for (std::size_t ps = 0; ps < inst.size(); ++ps) {
    if (!inst.leq_star(ps, p)) continue;
    ++res.tried;
    const PCondition& c = inst.elems[ps];
    const PStar& b = c.blocks[0];
    if (!b.tree) continue;
    const ETree& t = *b.tree;
    const SeqId owner = mc(u, b);

    // branch 1: the largest S whose n-paths all land in D
    std::vector<TreePath> good;
    std::function<bool(TreePath&)> grow = [&](TreePath& path) -> bool {
      if (path.size() == n) {
        if (!d[must_find(inst, p_extend_path(u, c, path))]) return false;
        good.push_back(path);
        return true;
      }
      SeqSet g;
      const std::size_t mark = good.size();
      for (SeqId nu : successors(t, path)) {
        path.push_back(nu);
        if (grow(path)) g.push_back(nu);
        path.pop_back();
      }
      if (!large_somewhere(u, owner, g, node_floor(u, b, path))) {
        good.resize(mark);
        return false;
      }
      return true;
    };
    TreePath root;
    const bool one = grow(root);

    // branch 2: nothing ≤* an n-step extension lies in D
    bool two = true;
    for (const auto& path : all_paths(t)) {
      if (path.size() != n) continue;
      const std::size_t e = must_find(inst, p_extend_path(u, c, path));
      for (std::size_t q = 0; q < inst.size() && two; ++q) two = !(d[q] && inst.leq_star(q, e));
      if (!two) break;
    }
    if (one && two) res.both = true;
    if (one != two && res.verdict != Verdict::Yes) {
      res.verdict = Verdict::Yes;
      res.branch = one ? 1 : 2;
      res.pstar = ps;
      if (one) {
        res.s = prune(t, [&](const TreePath& q) {
          if (q.size() > n) return false;
          for (const auto& g : good)
            if (std::equal(q.begin(), q.end(), g.begin())) return true;
          return false;
        });
      }
    }
  }
  return res;
}

HomogeneityResult check_dense_homogeneity(const Universe& u, const FinitePoset& inst, const DenseSet& d,
                                          std::size_t p, std::size_t max_evals) {
  require_dense_open(inst, d);
  HomogeneityResult res;
  std::size_t evals = 0;
  bool exhausted = false;
  std::unordered_map<std::string, bool> memo;
  std::vector<std::size_t> ns;

  // win(c, i): blocks i, i-1, …, 0 of c can still be driven into D
  std::function<bool(std::size_t, long)> win = [&](std::size_t c, long i) -> bool {
    if (i < 0) return d[c];
    const std::string key = std::to_string(c) + '/' + std::to_string(i);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    if (++evals > max_evals) {
      exhausted = true;
      return false;
    }
    const PCondition& cond = inst.elems[c];
    const PStar& b = cond.blocks[static_cast<std::size_t>(i)];
    bool ok = win(c, i - 1);
    std::size_t chosen = 0;
    if (!ok && b.tree && !b.tree->empty()) {
      const ETree& t = *b.tree;
      const SeqId owner = mc(u, b);
      for (std::size_t n = 1; n <= depth(t) && !ok; ++n) {
        std::function<bool(TreePath&)> good = [&](TreePath& path) -> bool {
          if (path.size() == n) {
            PCondition e = cond;
            for (SeqId nu : path) e = p_extend_at(u, e, static_cast<std::size_t>(i), nu);
            return win(must_find(inst, e), i - 1);
          }
          SeqSet g;
          for (SeqId nu : successors(t, path)) {
            path.push_back(nu);
            if (good(path)) g.push_back(nu);
            path.pop_back();
          }
          return large_somewhere(u, owner, g, node_floor(u, b, path));
        };
        TreePath root;
        ok = good(root);
        if (ok) chosen = n;
      }
    }
    memo[key] = ok;
    if (ok && ns.size() <= static_cast<std::size_t>(i)) ns.resize(static_cast<std::size_t>(i) + 1);
    if (ok) ns[static_cast<std::size_t>(i)] = chosen;
    return ok;
  };

  for (std::size_t ps = 0; ps < inst.size(); ++ps) {
    if (!inst.leq_star(ps, p)) continue;
    ns.clear();
    if (win(ps, static_cast<long>(inst.elems[ps].blocks.size()) - 1)) {
      res.verdict = Verdict::Yes;
      res.pstar = ps;
      res.n = ns;
      return res;
    }
    if (exhausted) break;
  }
  res.verdict = exhausted ? Verdict::Unknown : Verdict::No;
  return res;
}

void check_labeling(const FinitePoset& inst, const Labeling& sigma) {
  if (sigma.sigma.size() != sigma.antichain.size()) throw DomainError("one label per antichain member expected");
  if (sigma.antichain.empty()) throw DomainError("empty antichain");
  std::vector<std::size_t> all(inst.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  const Relation d = down_sets(inst.leq, all);
  for (std::size_t a : sigma.antichain)
    if (a >= inst.size()) throw DomainError("antichain member out of range");
  for (std::size_t i = 0; i < sigma.antichain.size(); ++i)
    for (std::size_t j = i + 1; j < sigma.antichain.size(); ++j)
      if (d.rows_meet(sigma.antichain[i], sigma.antichain[j])) throw DomainError("antichain members are compatible");
  for (std::size_t q = 0; q < inst.size(); ++q) {
    bool met = false;
    for (std::size_t a : sigma.antichain) met = met || d.rows_meet(q, a);
    if (!met) throw DomainError("antichain is not maximal at element " + std::to_string(q));
  }
}

namespace {

// bit k set when antichain member k is compatible with q
std::vector<std::uint64_t> compat_masks(const FinitePoset& inst, const std::vector<std::size_t>& antichain,
                                        const std::vector<std::size_t>& cands) {
  std::vector<std::size_t> all(inst.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  const Relation d = down_sets(inst.leq, all);
  std::vector<std::uint64_t> out;
  for (std::size_t q : cands) {
    std::uint64_t m = 0;
    for (std::size_t k = 0; k < antichain.size() && k < 64; ++k)
      if (d.rows_meet(q, antichain[k])) m |= std::uint64_t{1} << k;
    out.push_back(m);
  }
  return out;
}

// ≤* candidates first, index order inside each group
std::vector<std::size_t> candidates(const FinitePoset& inst, std::size_t p) {
  std::vector<std::size_t> out;
  for (std::size_t q = 0; q < inst.size(); ++q)
    if (inst.leq_star(q, p)) out.push_back(q);
  for (std::size_t q = 0; q < inst.size(); ++q)
    if (inst.leq(q, p) && !inst.leq_star(q, p)) out.push_back(q);
  return out;
}

}  // namespace

PrikryResult check_prikry(const FinitePoset& inst, const Labeling& sigma, std::size_t p) {
  check_labeling(inst, sigma);
  if (sigma.antichain.size() > 64) throw DomainError("antichains above 64 members are not supported");
  std::uint64_t yes = 0;
  for (std::size_t k = 0; k < sigma.sigma.size(); ++k)
    if (sigma.sigma[k]) yes |= std::uint64_t{1} << k;
  const auto cands = candidates(inst, p);
  const auto masks = compat_masks(inst, sigma.antichain, cands);
  PrikryResult res;
  for (std::size_t k = 0; k < cands.size(); ++k) {
    const std::uint64_t m = masks[k];
    if ((m & yes) == m || (m & ~yes) == m) {
      res.verdict = Verdict::Yes;
      res.pstar = cands[k];
      res.direct = inst.leq_star(cands[k], p);
      return res;
    }
  }
  return res;
}

PrikryResult check_prikry_all(const FinitePoset& inst, const std::vector<std::size_t>& antichain, std::size_t p) {
  check_labeling(inst, {antichain, std::vector<bool>(antichain.size(), false)});
  const auto cands = candidates(inst, p);
  PrikryResult res;
  if (antichain.size() <= 64) {
    const auto masks = compat_masks(inst, antichain, cands);
    // a condition meeting a single member decides every labeling
    for (std::size_t k = 0; k < cands.size(); ++k)
      if (std::popcount(masks[k]) <= 1) {
        res.verdict = Verdict::Yes;
        res.pstar = cands[k];
        res.direct = inst.leq_star(cands[k], p);
        return res;
      }
    if (antichain.size() <= 20) {
      const std::uint64_t full = (std::uint64_t{1} << antichain.size()) - 1;
      for (std::uint64_t yes = 0; yes <= full; ++yes) {
        bool decided = false;
        for (std::uint64_t m : masks) decided = decided || (m & yes) == m || (m & ~yes) == m;
        if (!decided) return res;
      }
      res.verdict = Verdict::Yes;
      return res;
    }
  }
  res.verdict = Verdict::Unknown;
  return res;
}

}  // namespace flab
