#include <algorithm>
#include <deque>
#include <map>
#include <random>

#include "forcinglab/checker.hpp"

namespace flab {

bool Relation::row_subset(std::size_t i, std::size_t j) const {
  for (std::size_t w = 0; w < words_; ++w)
    if (bits_[i * words_ + w] & ~bits_[j * words_ + w]) return false;
  return true;
}

bool Relation::rows_meet(std::size_t i, std::size_t j) const {
  for (std::size_t w = 0; w < words_; ++w)
    if (bits_[i * words_ + w] & bits_[j * words_ + w]) return true;
  return false;
}

void Relation::or_row(std::size_t into, const Relation& other, std::size_t from) {
  for (std::size_t w = 0; w < words_; ++w) bits_[into * words_ + w] |= other.bits_[from * words_ + w];
}

std::vector<std::size_t> Relation::row(std::size_t i) const {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < n_; ++j)
    if ((*this)(i, j)) out.push_back(j);
  return out;
}

Relation Relation::transposed() const {
  Relation t(n_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j)
      if ((*this)(i, j)) t.set(j, i);
  return t;
}

bool included(const Relation& a, const Relation& b) {
  if (a.n_ != b.n_) return false;
  for (std::size_t k = 0; k < a.bits_.size(); ++k)
    if (a.bits_[k] & ~b.bits_[k]) return false;
  return true;
}

namespace {

std::string systems_key(const PCondition& p) {
  std::string out;
  for (const auto& b : p.blocks) out += std::to_string(b.system) + ',';
  return out;
}

// the moves other than one-point extension; every result is a valid block
std::vector<PCondition> side_moves(const Universe& u, const PCondition& c, const PosetBounds& bounds) {
  std::vector<PCondition> out;
  for (std::size_t i = 0; i < c.blocks.size(); ++i) {
    const PStar& b = c.blocks[i];
    if (bounds.prune && b.tree)
      for (const auto& path : all_paths(*b.tree)) {
        PCondition d = c;
        d.blocks[i].tree = remove_path(*b.tree, path);
        if (validate_pstar(u, d.blocks[i]).ok()) out.push_back(std::move(d));
      }
    if (bounds.grow_support) {
      bool untagged = true;
      for (const auto& [g, tag] : b.support) untagged = untagged && !tag;
      if (!untagged) continue;
      const SeqId top = mc(u, b);
      for (SeqId g : u.system(b.system).indices) {
        if (b.support.count(g) || !u.index_geq(top, g)) continue;
        PCondition d = c;
        d.blocks[i].support[g] = std::nullopt;
        if (validate_pstar(u, d.blocks[i]).ok()) out.push_back(std::move(d));
      }
    }
  }
  return out;
}

// leq(p, q) = ∃ d reachable from q by extensions with star(p, d)
Relation close_under_extensions(const Relation& star, const std::vector<std::vector<std::size_t>>& ext,
                                const std::vector<std::size_t>& blocks) {
  const std::size_t n = star.size();
  Relation reach(n);
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  // extensions add a block, so more blocks first settles every child before its parent
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return blocks[a] > blocks[b]; });
  for (std::size_t q : order) {
    reach.set(q, q);
    for (std::size_t d : ext[q]) reach.or_row(q, d);
  }
  const Relation starT = star.transposed();  // row d: every p ≤* d
  Relation downT(n);                          // row q: every p ≤ q
  for (std::size_t q = 0; q < n; ++q)
    for (std::size_t d : reach.row(q)) downT.or_row(q, starT, d);
  return downT.transposed();
}

template <class C, class Key>
std::optional<std::size_t> lookup(const std::unordered_map<std::string, std::size_t>& index, const C& c, Key key) {
  auto it = index.find(key(c));
  if (it == index.end()) return std::nullopt;
  return it->second;
}

}  // namespace

std::optional<std::size_t> FinitePoset::find(const PCondition& p) const {
  return lookup(index, p, pcondition_key);
}

std::optional<std::size_t> RadinPoset::find(const RadinCondition& p) const { return lookup(index, p, radin_key); }

FinitePoset enumerate_poset(const Universe& u, const PCondition& root, const PosetBounds& bounds) {
  FinitePoset inst;
  auto add = [&](PCondition c) -> std::size_t {
    auto [it, fresh] = inst.index.emplace(pcondition_key(c), inst.elems.size());
    if (fresh) {
      inst.elems.push_back(std::move(c));
      inst.ext.emplace_back();
      if (inst.elems.size() > bounds.cap)
        throw CapExceeded("poset has more than " + std::to_string(bounds.cap) + " elements");
    }
    return it->second;
  };
  add(root);
  for (std::size_t k = 0; k < inst.elems.size(); ++k) {
    const PCondition c = inst.elems[k];
    for (std::size_t i = 0; i < c.blocks.size(); ++i) {
      if (!c.blocks[i].tree) continue;
      for (SeqId nu : lev0(*c.blocks[i].tree)) {
        std::size_t j = add(p_extend_at(u, c, i, nu));
        inst.ext[k].push_back(j);
      }
    }
    for (auto& d : side_moves(u, c, bounds)) add(std::move(d));
  }

  const std::size_t n = inst.size();
  inst.leq_star = Relation(n);
  inst.leq_star_R = Relation(n);
  std::map<std::string, std::vector<std::size_t>> groups;
  std::vector<std::size_t> blocks(n);
  for (std::size_t i = 0; i < n; ++i) {
    groups[systems_key(inst.elems[i])].push_back(i);
    blocks[i] = inst.elems[i].blocks.size();
  }
  for (const auto& [key, members] : groups)
    for (std::size_t a : members)
      for (std::size_t b : members) {
        const PCondition& p = inst.elems[a];
        const PCondition& q = inst.elems[b];
        if (!p_leq_star(u, p, q)) continue;
        inst.leq_star.set(a, b);
        bool same = true;
        for (std::size_t i = 0; i < p.blocks.size(); ++i)
          same = same && support_set(p.blocks[i]) == support_set(q.blocks[i]);
        if (same) inst.leq_star_R.set(a, b);
      }
  inst.leq = close_under_extensions(inst.leq_star, inst.ext, blocks);
  inst.leq_R = close_under_extensions(inst.leq_star_R, inst.ext, blocks);
  return inst;
}

FinitePoset enumerate_poset(const Universe& u, const PosetBounds& bounds) {
  return enumerate_poset(u, PCondition{{canonical_pstar(u, u.top)}}, bounds);
}

ValidationReport audit_poset(const Universe& u, const FinitePoset& inst, std::size_t max_pairs, std::uint64_t seed) {
  ValidationReport r;
  const std::size_t n = inst.size();
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  if (max_pairs == 0 || n * n <= max_pairs) {
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) pairs.push_back({a, b});
  } else {
    std::mt19937_64 rng(seed);
    for (std::size_t k = 0; k < max_pairs; ++k) pairs.push_back({rng() % n, rng() % n});
  }
  auto mismatch = [&](const char* what, std::size_t a, std::size_t b) {
    r.fail(std::string("cache-") + what,
           pcondition_name(u, inst.elems[a]) + " vs " + pcondition_name(u, inst.elems[b]));
  };
  for (auto [a, b] : pairs) {
    const PCondition& p = inst.elems[a];
    const PCondition& q = inst.elems[b];
    bool star = false, star_r = false;
    if (same_systems(p, q)) {
      star = p_leq_star(u, p, q);
      star_r = p_leq_star_R(u, p, q);
    }
    if (star != inst.leq_star(a, b)) mismatch("leq-star", a, b);
    if (star_r != inst.leq_star_R(a, b)) mismatch("leq-star-R", a, b);
    const PChain c = p_leq(u, p, q);
    if (c.verdict == Verdict::Unknown) r.warn("cache-leq", "budget exhausted");
    else if ((c.verdict == Verdict::Yes) != inst.leq(a, b)) mismatch("leq", a, b);
    const PChain cr = p_leq_R(u, p, q);
    if (cr.verdict == Verdict::Unknown) r.warn("cache-leq-R", "budget exhausted");
    else if ((cr.verdict == Verdict::Yes) != inst.leq_R(a, b)) mismatch("leq-R", a, b);
  }
  for (const char* c : {"cache-leq-star", "cache-leq-star-R", "cache-leq", "cache-leq-R"}) r.settle(c);
  return r;
}

namespace {

void laws(ValidationReport& r, const Relation& rel, const std::string& name) {
  const std::size_t n = rel.size();
  for (std::size_t i = 0; i < n; ++i)
    if (!rel(i, i)) {
      r.fail(name + " reflexive", "element " + std::to_string(i));
      break;
    }
  r.settle(name + " reflexive");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (rel(i, j) && !rel.row_subset(j, i)) {
        r.fail(name + " transitive", "through " + std::to_string(i) + " <= " + std::to_string(j));
        i = n;
        break;
      }
  r.settle(name + " transitive");
}

}  // namespace

ValidationReport check_order_laws(const FinitePoset& inst) {
  ValidationReport r;
  laws(r, inst.leq_star, "direct");
  laws(r, inst.leq, "extension");
  laws(r, inst.leq_R, "support-preserving");
  if (!included(inst.leq_star_R, inst.leq_star)) r.fail("direct-R within direct", "");
  r.settle("direct-R within direct");
  if (!included(inst.leq_R, inst.leq)) r.fail("support-preserving within extension", "");
  r.settle("support-preserving within extension");
  if (!included(inst.leq_star, inst.leq)) r.fail("direct within extension", "");
  r.settle("direct within extension");
  return r;
}

RadinPoset enumerate_radin(const Universe& u, SeqId alpha, const RadinCondition& root, const PosetBounds& bounds) {
  RadinPoset inst;
  auto add = [&](RadinCondition c) -> std::size_t {
    auto [it, fresh] = inst.index.emplace(radin_key(c), inst.elems.size());
    if (fresh) {
      inst.elems.push_back(std::move(c));
      inst.ext.emplace_back();
      if (inst.elems.size() > bounds.cap)
        throw CapExceeded("poset has more than " + std::to_string(bounds.cap) + " elements");
    }
    return it->second;
  };
  add(root);
  for (std::size_t k = 0; k < inst.elems.size(); ++k) {
    const RadinCondition c = inst.elems[k];
    for (std::size_t i = 0; i < c.blocks.size(); ++i)
      for (SeqId nu : lev0(c.blocks[i].tree)) {
        const std::size_t j = add(radin_extend_one(c, i, nu));
        inst.ext[k].push_back(j);
      }
    if (!bounds.prune) continue;
    for (std::size_t i = 0; i < c.blocks.size(); ++i)
      for (const auto& path : all_paths(c.blocks[i].tree)) {
        RadinCondition d = c;
        d.blocks[i].tree = remove_path(c.blocks[i].tree, path);
        if (validate_radin(u, alpha, d).ok()) add(std::move(d));
      }
  }
  const std::size_t n = inst.size();
  inst.leq_star = Relation(n);
  std::map<std::string, std::vector<std::size_t>> groups;
  std::vector<std::size_t> blocks(n);
  for (std::size_t i = 0; i < n; ++i) {
    groups[radin_shape(inst.elems[i])].push_back(i);
    blocks[i] = inst.elems[i].blocks.size();
  }
  for (const auto& [key, members] : groups)
    for (std::size_t a : members)
      for (std::size_t b : members)
        if (radin_leq_star(u, inst.elems[a], inst.elems[b])) inst.leq_star.set(a, b);
  inst.leq = close_under_extensions(inst.leq_star, inst.ext, blocks);
  return inst;
}

}  // namespace flab
