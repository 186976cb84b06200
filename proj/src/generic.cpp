#include "forcinglab/generic.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <set>

namespace flab {

void push_step(const Universe& u, GenericChain& g, PCondition next) {
  PChain w;
  if (!g.steps.empty()) {
    w = p_leq(u, next, g.steps.back());
    if (w.verdict != Verdict::Yes) throw DomainError("step is not below the previous one");
  }
  g.steps.push_back(std::move(next));
  g.witness.push_back(std::move(w));
}

ValidationReport validate_chain(const Universe& u, const GenericChain& g) {
  ValidationReport r;
  if (g.witness.size() != g.steps.size()) r.fail("witnesses", "one witness per step expected");
  for (std::size_t i = 1; i < g.steps.size(); ++i) {
    PChain c = p_leq(u, g.steps[i], g.steps[i - 1]);
    if (c.verdict != Verdict::Yes)
      r.fail("decreasing", "step " + std::to_string(i) + " is not below step " + std::to_string(i - 1) + " (" +
                               to_string(c.verdict) + ")");
  }
  r.settle("decreasing");
  r.settle("witnesses");
  return r;
}

std::vector<SystemId> ebar_G(const Universe& u, const GenericChain& g) {
  std::set<SystemId> seen;
  for (const auto& p : g.steps)
    for (const auto& b : p.blocks) seen.insert(b.system);
  std::vector<SystemId> out(seen.begin(), seen.end());
  std::stable_sort(out.begin(), out.end(),
                   [&](SystemId a, SystemId b) { return u.system_kappa0(a) < u.system_kappa0(b); });
  return out;
}

ChainSplit restrict_G(const Universe& u, const GenericChain& g, std::size_t zeta) {
  const auto e = ebar_G(u, g);
  if (zeta >= e.size())
    throw DomainError("zeta " + std::to_string(zeta) + " is past the " + std::to_string(e.size()) + " systems");
  ChainSplit out;
  for (const auto& p : g.steps) {
    auto it = std::find_if(p.blocks.begin(), p.blocks.end(), [&](const PStar& b) { return b.system == e[zeta]; });
    if (it == p.blocks.end()) continue;
    out.above.steps.push_back(PCondition{{p.blocks.begin(), it}});
    out.below.steps.push_back(PCondition{{it, p.blocks.end()}});
    out.above.witness.emplace_back();
    out.below.witness.emplace_back();
  }
  return out;
}

ClubSequence club(const Universe& u, const GenericChain& g, SeqId alpha) {
  ClubSequence out;
  out.alpha = alpha;
  std::set<SeqId> m;
  // tags have strictly smaller κ⁰, so the recursion ends
  std::function<void(SeqId)> chase = [&](SeqId a) {
    if (!m.insert(a).second) return;
    for (const auto& p : g.steps)
      for (const auto& b : p.blocks)
        if (auto it = b.support.find(a); it != b.support.end() && it->second) chase(*it->second);
  };
  chase(alpha);
  out.m.assign(m.begin(), m.end());
  std::set<Ordinal> c;
  for (SeqId x : out.m) c.insert(u.kappa(x));
  out.c.assign(c.begin(), c.end());
  return out;
}

ValidationReport distinct_clubs(const Universe& u, const GenericChain& g) {
  ValidationReport r;
  std::map<SystemId, std::set<SeqId>> bysys;
  for (const auto& p : g.steps)
    for (const auto& b : p.blocks)
      for (const auto& [a, tag] : b.support) bysys[b.system].insert(a);
  for (const auto& [s, ids] : bysys) {
    // κ(ᾱ) alone already separates the clubs, so compare what lies below it
    std::vector<std::pair<SeqId, std::vector<Ordinal>>> tails;
    for (SeqId a : ids) {
      auto c = club(u, g, a).c;
      std::erase(c, u.kappa(a));
      if (!c.empty()) tails.push_back({a, std::move(c)});
    }
    for (std::size_t i = 0; i < tails.size(); ++i)
      for (std::size_t j = i + 1; j < tails.size(); ++j)
        if (tails[i].second == tails[j].second)
          r.fail("distinct-clubs", u.name(tails[i].first) + " and " + u.name(tails[j].first) + " share C below their tops");
  }
  r.settle("distinct-clubs");
  return r;
}

GenericChain simulate(const Universe& u, std::uint64_t seed, std::size_t steps, Strategy strategy) {
  std::mt19937_64 rng(seed);
  GenericChain g;
  push_step(u, g, PCondition{{canonical_pstar(u, u.top, u.system(u.top).indices)}});
  for (std::size_t i = 0; i < steps; ++i) {
    const PCondition& cur = g.steps.back();
    std::vector<std::pair<std::size_t, SeqId>> moves;
    for (std::size_t k = 0; k < cur.blocks.size(); ++k)
      if (cur.blocks[k].tree)
        for (SeqId nu : lev0(*cur.blocks[k].tree)) moves.push_back({k, nu});
    if (moves.empty()) break;
    const auto [k, nu] = strategy == Strategy::Greedy ? moves.front() : moves[rng() % moves.size()];
    push_step(u, g, p_extend_at(u, cur, k, nu));
  }
  return g;
}

}  // namespace flab
