#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "forcinglab/runs.hpp"

using namespace flab;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
};

void note(Outcome& o, const std::string& why) {
  o.pass = false;
  if (o.detail.size() < 600) o.detail += (o.detail.empty() ? "" : "; ") + why;
}

std::string join(const std::vector<std::string>& xs) {
  std::string out = "{";
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? "," : "") + xs[i];
  return out + "}";
}

PCondition single(PStar p) { return PCondition{{std::move(p)}}; }

PCondition full_root(const Universe& u) { return single(canonical_pstar(u, u.top, u.system(u.top).indices)); }

std::vector<std::size_t> everything(const FinitePoset& inst) {
  std::vector<std::size_t> all(inst.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return all;
}

std::optional<FinitePoset> poset(const Universe& u, const PCondition& root, PosetBounds b) {
  try {
    return enumerate_poset(u, root, b);
  } catch (const CapExceeded&) {
    return std::nullopt;
  }
}

ETree only_measure(const Universe& u, const ETree& t, std::size_t xi) {
  const auto& f = u.filter(u.seq(t.owner).measures.at(xi));
  return prune(t, [&](const TreePath& p) { return sets::contains(f.carrier, p[0]); });
}

// --- generated objects and hand-built violations ---------------------------------

struct Mutation {
  std::string name;
  std::string clause;
  std::function<ValidationReport()> run;
};

// first candidate report failing exactly `clause`, else the last one tried
ValidationReport first_exact(const std::string& clause, const std::vector<std::function<ValidationReport()>>& tries) {
  ValidationReport last;
  for (const auto& t : tries) {
    last = t();
    if (last.failed_clauses() == std::vector<std::string>{clause}) return last;
  }
  return last;
}

SeqSet seqs_where(const Universe& u, const std::function<bool(SeqId)>& keep) {
  SeqSet out;
  for (SeqId x = 0; x < u.seqs.size(); ++x)
    if (keep(x)) out.push_back(x);
  return out;
}

// top indices m < a < b < c over trivial filters, every lower point projecting
// to the one point under m; `twisted` swaps the two values of π_{c,a}
Universe square(bool twisted) {
  Universe u;
  const SystemId low = u.add_system("S1_0");
  const SystemId top = u.add_system("E");
  u.top = top;
  std::vector<SeqId> pts;
  for (unsigned i = 0; i < 7; ++i)
    pts.push_back(u.add_sequence("s1_0_" + std::to_string(i), Ordinal{10 + i}, Ordinal{10}, {}, low));
  auto trivial = [&](const std::string& name, SeqSet c) {
    return u.add_filter(FilterOracle{name, c, {c}, FilterKind::General});
  };
  const SeqId m = u.add_sequence("E0", Ordinal{20}, Ordinal{20}, {trivial("f:E0:0", {pts[0]})}, top);
  const SeqId a = u.add_sequence("E1", Ordinal{21}, Ordinal{20}, {trivial("f:E1:0", {pts[1], pts[2]})}, top);
  const SeqId b = u.add_sequence("E2", Ordinal{22}, Ordinal{20}, {trivial("f:E2:0", {pts[3], pts[4]})}, top);
  const SeqId c = u.add_sequence("E3", Ordinal{23}, Ordinal{20}, {trivial("f:E3:0", {pts[5], pts[6]})}, top);
  auto& pr = u.systems[top].projections;
  for (SeqId x : {a, b, c})
    for (SeqId y : u.measure_carrier(x)) pr[{x, m}][y] = pts[0];
  pr[{b, a}] = {{pts[3], pts[1]}, {pts[4], pts[2]}};
  pr[{c, b}] = {{pts[5], pts[3]}, {pts[6], pts[4]}};
  pr[{c, a}] = twisted ? std::map<SeqId, SeqId>{{pts[5], pts[2]}, {pts[6], pts[1]}}
                       : std::map<SeqId, SeqId>{{pts[5], pts[1]}, {pts[6], pts[2]}};
  return u;
}

std::vector<Mutation> catalogue() {
  std::vector<Mutation> out;
  const Universe deep = generate_instance(5, {3, 2, 3, 3, MeasureMode::Principal});
  const Universe mixed = generate_instance(2, {2, 2, 3, 3, MeasureMode::Mixed});

  auto top = [](const Universe& u, std::size_t i) { return u.system(u.top).indices.at(i); };

  // systems
  out.push_back({"lower the first coordinate of one index", "common-kappa0", [=] {
                   Universe u = deep;
                   u.seqs[top(u, 2)].kappa0 = Ordinal{u.kappa0(top(u, 2)).value - 1};
                   return validate_system(u, u.top);
                 }});
  out.push_back({"give one index an extra measure", "equal-length", [=] {
                   Universe u = deep;
                   auto& ms = u.seqs[top(u, 2)].measures;
                   ms.push_back(ms.back());
                   return validate_system(u, u.top);
                 }});
  out.push_back({"tie an index with the minimum", "minimal-index", [=] {
                   Universe u = deep;
                   u.seqs[top(u, 1)].kappa = u.kappa(top(u, 0));
                   return validate_system(u, u.top);
                 }});
  out.push_back({"an identity table that moves a point", "identity", [=] {
                   std::vector<std::function<ValidationReport()>> tries;
                   const SeqId a = top(deep, 1);
                   const SeqSet dom = deep.measure_carrier(a);
                   for (SeqId x : dom)
                     for (SeqId y : dom)
                       if (x != y && deep.kappa0(x) == deep.kappa0(y))
                         tries.push_back([=] {
                           Universe u = deep;
                           auto& t = u.systems[u.top].projections[{a, a}];
                           for (SeqId z : dom) t[z] = z;
                           t[x] = y;
                           return validate_system(u, u.top);
                         });
                   return first_exact("identity", tries);
                 }});
  out.push_back({"a projection table with a hole", "totality", [=] {
                   Universe u = deep;
                   auto& t = u.systems[u.top].projections.at({top(u, 1), top(u, 0)});
                   t.erase(t.begin());
                   return validate_system(u, u.top);
                 }});
  out.push_back({"a projection that moves the first coordinate", "kappa0-preserved", [=] {
                   std::vector<std::function<ValidationReport()>> tries;
                   const SeqId b = top(deep, 1), a = top(deep, 0);
                   for (SeqId x : deep.measure_carrier(b))
                     for (SeqId y : deep.measure_carrier(a))
                       if (deep.kappa0(x) != deep.kappa0(y))
                         tries.push_back([=] {
                           Universe u = deep;
                           u.systems[u.top].projections.at({b, a})[x] = y;
                           return validate_system(u, u.top);
                         });
                   return first_exact("kappa0-preserved", tries);
                 }});
  out.push_back({"a projection going upward", "projection-indices", [=] {
                   Universe u = deep;
                   const SeqId lo = top(u, 0), hi = top(u, 1);
                   std::map<SeqId, SeqId> t;
                   for (SeqId x : u.measure_carrier(lo))
                     for (SeqId y : u.measure_carrier(hi))
                       if (u.kappa0(x) == u.kappa0(y)) {
                         t[x] = y;
                         break;
                       }
                   u.systems[u.top].projections[{lo, hi}] = t;
                   return validate_system(u, u.top);
                 }});
  // edits of generated tables always break the measures or the factoring through
  // the minimum as well, so this one is built from scratch
  out.push_back({"projections that fail to commute away from the minimum", "commute", [] {
                   const Universe ok = square(false), bad = square(true);
                   if (!validate_system(ok, ok.top).ok()) return validate_system(ok, ok.top);
                   return validate_system(bad, bad.top);
                 }});

  // filters
  const FilterId f0 = deep.seq(top(deep, 0)).measures.at(0);
  const std::string fname = "filter " + deep.filter(f0).name + ": ";
  out.push_back({"an empty generator", fname + "generators", [=] {
                   Universe u = deep;
                   u.filters[f0].generators.push_back({});
                   return validate_filter(u, f0);
                 }});
  out.push_back({"two generators without their meet", fname + "intersection-closure", [=] {
                   Universe u = deep;
                   auto& f = u.filters[f0];
                   const SeqSet& c = f.carrier;
                   f.kind = FilterKind::General;
                   if (c.size() >= 3) f.generators = {{c[0], c[1]}, {c[1], c[2]}};
                   return validate_filter(u, f0);
                 }});
  out.push_back({"a principal filter with no singleton", fname + "principal", [=] {
                   Universe u = deep;
                   auto& f = u.filters[f0];
                   f.generators = {f.carrier};
                   return validate_filter(u, f0);
                 }});
  out.push_back({"a carrier reaching the owner's level", "carrier-below", [=] {
                   Universe u = deep;
                   auto& f = u.filters[f0];
                   const SeqId x = top(u, 1);
                   f.carrier = sets::normalize([&] { auto c = f.carrier; c.push_back(x); return c; }());
                   // keep the identity table total
                   if (auto it = u.systems[u.top].projections.find({top(u, 0), top(u, 0)});
                       it != u.systems[u.top].projections.end())
                     it->second[x] = x;
                   return validate_universe(u);
                 }});

  // trees
  const SeqId owner = top(deep, 2);
  out.push_back({"a successor on the same level", "zero-increasing", [=] {
                   ETree t = full_tree(deep, owner);
                   Node& r = t.roots.front();
                   Node bad = r;
                   r.suc.insert(r.suc.begin(), bad);
                   return validate_tree(deep, owner, t);
                 }});
  out.push_back({"the focus point removed from the first level", "measure-one", [=] {
                   ETree t = full_tree(deep, owner);
                   const SeqId g = deep.filter(deep.seq(owner).measures[0]).generators[0][0];
                   return validate_tree(deep, owner, remove_path(t, {g}));
                 }});
  out.push_back({"a tree owned by another index", "owner", [=] {
                   ETree t = full_tree(deep, owner);
                   t.owner = top(deep, 0);
                   return validate_tree(deep, owner, t);
                 }});
  out.push_back({"a repeated root", "one-to-one", [=] {
                   ETree t = full_tree(deep, owner);
                   t.roots.insert(t.roots.begin(), t.roots.front());
                   return validate_tree(deep, owner, t);
                 }});
  out.push_back({"a nonempty tree over a degenerate sequence", "attached", [=] {
                   const SeqSet flat = seqs_where(deep, [&](SeqId x) { return deep.len(x) == 0; });
                   const SeqId low = flat.back();
                   ETree t{low, {Node{flat.front(), empty_tree(flat.front()), {}}}};
                   return validate_tree(deep, low, t);
                 }});

  // P*-blocks
  const SeqSet below_top = seqs_where(deep, [&](SeqId x) { return deep.kappa0(x) < deep.system_kappa0(deep.top); });
  const SeqSet at_top = seqs_where(deep, [&](SeqId x) { return !(deep.kappa0(x) < deep.system_kappa0(deep.top)); });
  auto retree = [](const Universe& u, PStar& p) {
    const SeqId m = mc(u, p);
    const Tag t = p.support.at(m);
    p.tree = focus_tree(u, m, t ? std::optional<Ordinal>(u.kappa0(*t)) : std::nullopt);
  };
  out.push_back({"a support without the minimum", "contains-min", [=] {
                   PStar p = canonical_pstar(deep, deep.top, {top(deep, 1)});
                   p.support.erase(top(deep, 0));
                   return validate_pstar(deep, p);
                 }});
  out.push_back({"a support over the bound", "support-size", [=] {
                   PStar p = canonical_pstar(deep, deep.top, {top(deep, 1), top(deep, 2)});
                   return validate_pstar(deep, p, {.strict = false, .max_support = 1});
                 }});
  out.push_back({"a tag at the level of the system", "tags", [=] {
                   std::vector<std::function<ValidationReport()>> tries;
                   for (SeqId x : at_top)
                     tries.push_back([=] {
                       PStar p = canonical_pstar(deep, deep.top, {top(deep, 1)});
                       p.support[top(deep, 0)] = x;
                       return validate_pstar(deep, p);
                     });
                   return first_exact("tags", tries);
                 }});
  out.push_back({"an undefined tree", "tree", [=] {
                   PStar p = canonical_pstar(deep, deep.top, {top(deep, 1)});
                   p.tree.reset();
                   return validate_pstar(deep, p);
                 }});
  out.push_back({"an mc tag permitted to another tag", "mc-not-permitted", [=] {
                   std::vector<std::function<ValidationReport()>> tries;
                   for (SeqId t : below_top)
                     for (SeqId s : below_top)
                       if (permitted_to_tag(deep, t, s))
                         tries.push_back([=] {
                           PStar p = canonical_pstar(deep, deep.top, {top(deep, 1), top(deep, 2)});
                           p.support[top(deep, 2)] = t;
                           p.support[top(deep, 1)] = s;
                           p.support[top(deep, 0)] = deep.first_coordinate(t);
                           retree(deep, p);
                           return validate_pstar(deep, p);
                         });
                   return first_exact("mc-not-permitted", tries);
                 }});
  // generated tables never collide, so one entry is rewired by hand
  out.push_back({"two permitted coordinates with one projection", "projections-distinct", [=] {
                   std::vector<std::function<ValidationReport()>> tries;
                   const SeqId m = top(deep, 2), g1 = top(deep, 1), g0 = top(deep, 0);
                   const PStar p = canonical_pstar(deep, deep.top, {g1, m});
                   for (const auto& path : all_paths(*p.tree))
                     tries.push_back([=] {
                       Universe u = deep;
                       const SeqId nu = path.back();
                       u.systems[u.top].projections.at({m, g1})[nu] = project_id(deep, m, g0, nu);
                       return validate_pstar(u, p);
                     });
                   return first_exact("projections-distinct", tries);
                 }});
  out.push_back({"a minimum tag that is not the first coordinate (strict)", "first-coordinate", [=] {
                   std::vector<std::function<ValidationReport()>> tries;
                   for (SeqId x : below_top)
                     tries.push_back([=] {
                       PStar p = canonical_pstar(deep, deep.top, {top(deep, 1)});
                       p.support[top(deep, 0)] = x;
                       return validate_pstar(deep, p, {.strict = true, .max_support = std::nullopt});
                     });
                   return first_exact("first-coordinate", tries);
                 }});

  // Radin conditions
  out.push_back({"a Radin condition anchored elsewhere", "anchor", [=] {
                   const SeqId a = top(deep, 0);
                   return validate_radin(deep, top(deep, 1), radin_base(a, full_tree(deep, a)));
                 }});
  out.push_back({"a lower block tagged from above", "tag-below", [=] {
                   std::vector<std::function<ValidationReport()>> tries;
                   const SeqId a = top(mixed, 1);
                   const RadinCondition q = radin_base(a, full_tree(mixed, a));
                   for (SeqId nu : lev0(q.blocks[0].tree))
                     for (SeqId x = 0; x < mixed.seqs.size(); ++x)
                       tries.push_back([=] {
                         RadinCondition e = radin_extend_one(q, 0, nu);
                         if (!(mixed.kappa0(e.blocks[1].seq) <= mixed.kappa0(x))) return ValidationReport{};
                         e.blocks[1].tag = x;
                         return validate_radin(mixed, a, e);
                       });
                   return first_exact("tag-below", tries);
                 }});

  // conditions
  out.push_back({"a single block over a lower system", "top-block", [=] {
                   const SeqSet low = seqs_where(deep, [&](SeqId x) { return deep.system_of(x) != deep.top; });
                   return validate_pcondition(deep, deep.top, single(canonical_pstar(deep, deep.system_of(low.back()))));
                 }});
  out.push_back({"two blocks over one lower system", "block-order", [=] {
                   const PCondition root = full_root(deep);
                   PCondition e = p_extend_at(deep, root, 0, lev0(*root.blocks[0].tree).front());
                   e.blocks.push_back(e.blocks.back());
                   return validate_pcondition(deep, deep.top, e);
                 }});
  return out;
}

Outcome axiom_suite() {
  Outcome o;
  std::size_t generated = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const unsigned indices = 1 + seed % 3, len = 1 + seed % 2;
    const MeasureMode mode = seed % 3 == 0 ? MeasureMode::Principal
                             : seed % 3 == 1 ? MeasureMode::General
                                             : MeasureMode::Mixed;
    const GenParams gp{indices, len, len + 1 + static_cast<unsigned>(seed % 2), indices + static_cast<unsigned>(seed % 2),
                       mode};
    const Universe u = generate_instance(seed, gp);
    const std::string where = "seed " + std::to_string(seed);
    if (auto r = validate_universe(u); !r.ok()) note(o, where + " universe " + join(r.failed_clauses()));
    for (SeqId a : u.system(u.top).indices) {
      for (const ETree& t : {full_tree(u, a), focus_tree(u, a)})
        if (auto r = validate_tree(u, a, t); !r.ok()) note(o, where + " tree " + join(r.failed_clauses()));
      const PStar p = canonical_pstar(u, u.top, {a});
      if (auto r = validate_pstar(u, p, {.strict = true, .max_support = std::nullopt}); !r.ok())
        note(o, where + " pstar " + join(r.failed_clauses()));
      const RadinCondition rc = radin_base(a, full_tree(u, a));
      if (auto r = validate_radin(u, a, rc); !r.ok()) note(o, where + " radin " + join(r.failed_clauses()));
    }
    if (auto r = validate_pcondition(u, u.top, full_root(u), {.strict = true, .max_support = std::nullopt}); !r.ok())
      note(o, where + " condition " + join(r.failed_clauses()));
    ++generated;
  }
  std::size_t exact = 0;
  const auto muts = catalogue();
  for (const auto& m : muts) {
    const auto failed = m.run().failed_clauses();
    if (failed == std::vector<std::string>{m.clause})
      ++exact;
    else
      note(o, m.name + ": wanted {" + m.clause + "}, got " + join(failed));
  }
  o.detail += (o.detail.empty() ? "" : "; ") + std::to_string(generated) + " instances, " + std::to_string(exact) + "/" +
              std::to_string(muts.size()) + " violations isolated";
  if (muts.size() < 20) note(o, "fewer than 20 violations");
  return o;
}

// --- orders ------------------------------------------------------------------------

struct Sample {
  std::uint64_t seed;
  GenParams params;
};

std::vector<Sample> samples() {
  std::vector<Sample> out;
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    out.push_back({seed, {2, 1, 3, 2, MeasureMode::Principal}});
    out.push_back({seed, {3, 1, 3, 3, MeasureMode::Mixed}});
    out.push_back({seed, {3, 2, 3, 3, MeasureMode::General}});
    out.push_back({seed, {2, 2, 3, 3, MeasureMode::Principal}});
  }
  return out;
}

Outcome order_laws() {
  Outcome o;
  std::size_t checked = 0, skipped = 0;
  for (const auto& s : samples()) {
    const Universe u = generate_instance(s.seed, s.params);
    auto inst = poset(u, full_root(u), {2000, true, true});
    if (!inst) {
      ++skipped;
      continue;
    }
    ++checked;
    if (auto r = check_order_laws(*inst); !r.ok()) note(o, "seed " + std::to_string(s.seed) + " " + join(r.failed_clauses()));
    if (auto r = audit_poset(u, *inst, 2000, s.seed); !r.ok())
      note(o, "seed " + std::to_string(s.seed) + " cache " + join(r.failed_clauses()));
  }
  if (checked == 0) note(o, "no poset within the cap");
  o.detail += (o.detail.empty() ? "" : "; ") + std::to_string(checked) + " posets, " + std::to_string(skipped) + " over 2000";
  return o;
}

Outcome factorization() {
  Outcome o;
  std::size_t pairs = 0, posets = 0;
  for (const auto& s : samples()) {
    const Universe u = generate_instance(s.seed, s.params);
    auto inst = poset(u, full_root(u), {500, true, true});
    if (!inst) continue;
    ++posets;
    for (std::size_t p = 0; p < inst->size(); ++p)
      for (std::size_t q = 0; q < inst->size(); ++q) {
        if (!inst->leq(q, p)) continue;
        ++pairs;
        const auto& P = inst->elems[p];
        const auto& Q = inst->elems[q];
        try {
          const PCondition r = factor(u, Q, P);
          if (!p_leq_star(u, Q, r)) note(o, "q not direct below r: " + pcondition_name(u, Q));
          if (p_leq_R(u, r, P).verdict != Verdict::Yes) note(o, "r not R-below p: " + pcondition_name(u, r));
        } catch (const Error& e) {
          note(o, std::string("factor threw: ") + e.what());
        }
      }
  }
  if (pairs == 0) note(o, "no pairs");
  o.detail += (o.detail.empty() ? "" : "; ") + std::to_string(pairs) + " pairs in " + std::to_string(posets) + " posets";
  return o;
}

Outcome assignment_coherence() {
  Outcome o;
  std::size_t paths = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Universe u = generate_instance(seed, {2 + static_cast<unsigned>(seed % 2), 1 + static_cast<unsigned>(seed % 2), 3,
                                                3, seed % 2 ? MeasureMode::Mixed : MeasureMode::Principal});
    const PStar p = canonical_pstar(u, u.top, u.system(u.top).indices);
    for (const auto& path : all_paths(*p.tree)) {
      if (path.size() > 3) continue;
      ++paths;
      if (p_extend_s(u, p, induced_assignment(u, p, path)) != p_extend_path(u, single(p), path))
        note(o, "seed " + std::to_string(seed) + " path " + path_name(u, path));
    }
  }
  o.detail += (o.detail.empty() ? "" : "; ") + std::to_string(paths) + " paths";
  return o;
}

Outcome lemma_postconditions() {
  Outcome o;
  std::size_t fills = 0, skeletons = 0, checked = 0;
  auto tally = [&](const LemmaReport& r, const std::string& what) {
    checked += r.checked;
    if (r.verdict != Verdict::Yes || !r.counterexamples.empty())
      note(o, what + " " + to_string(r.verdict) + (r.counterexamples.empty() ? "" : ": " + r.counterexamples.front()));
  };
  std::mt19937_64 rng(17);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Universe u = generate_instance(seed, {2, 2, 3, 3, MeasureMode::Principal});
    for (SeqId a : u.system(u.top).indices) {
      const ETree full = full_tree(u, a);
      const std::string where = "seed " + std::to_string(seed) + " " + u.name(a);
      for (std::size_t xi = 0; xi < 2; ++xi) {
        const ETree t = only_measure(u, full, xi);
        try {
          tally(verify_fill_missing(u, a, t, fill_missing(u, a, t, xi, DefaultOracle{})), where + " fill");
          ++fills;
        } catch (const PreconditionError& e) {
          note(o, where + " fill refused: " + e.what());
        }
      }
      ETree shrunk = full;
      for (const auto& p : all_paths(full)) {
        if (rng() % 3) continue;
        ETree cand = remove_path(shrunk, p);
        if (validate_tree(u, a, cand).ok()) shrunk = cand;
      }
      for (const ETree& t : {full, shrunk}) {
        tally(verify_skeleton(u, a, t, skeleton_refine(u, a, t, std::min<std::size_t>(depth(t), 3))), where + " skeleton");
        ++skeletons;
      }
    }
  }
  o.detail += (o.detail.empty() ? "" : "; ") + std::to_string(fills) + " fills, " + std::to_string(skeletons) +
              " skeletons, " + std::to_string(checked) + " extensions";
  return o;
}

// --- claims ------------------------------------------------------------------------

Outcome subforcing() {
  Outcome o;
  std::size_t posets = 0, conditions = 0, skipped = 0;
  const std::vector<GenParams> configs{{2, 1, 3, 2, MeasureMode::Principal},
                                       {2, 2, 3, 3, MeasureMode::Principal},
                                       {3, 1, 4, 4, MeasureMode::Mixed}};
  for (const auto& gp : configs)
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
      const Universe u = generate_instance(seed, gp);
      auto inst = poset(u, full_root(u), {60, true, true});
      if (!inst) {
        ++skipped;
        continue;
      }
      ++posets;
      for (std::size_t p = 0; p < inst->size(); ++p) {
        ++conditions;
        auto r = check_subforcing(u, *inst, p, 200000);
        if (r.verdict != Verdict::Yes)
          note(o, "seed " + std::to_string(seed) + " p=" + std::to_string(p) + " " + to_string(r.verdict) +
                      (r.counterexamples.empty() ? "" : ": " + r.counterexamples.front()));
      }
    }
  if (posets == 0) note(o, "no poset within the cap");
  o.detail += (o.detail.empty() ? "" : "; ") + std::to_string(conditions) + " conditions in " + std::to_string(posets) +
              " posets, " + std::to_string(skipped) + " over 60";
  return o;
}

Outcome radin_isomorphism() {
  Outcome o;
  std::size_t done = 0, skipped = 0;
  for (std::uint64_t seed = 0; seed < 200 && done < 20; ++seed) {
    const Universe u = generate_instance(seed, {2, 1 + static_cast<unsigned>(seed % 2), 3, 3, MeasureMode::Principal});
    IsoReport iso;
    try {
      iso = radin_iso(u, full_root(u), {400, true, false});
    } catch (const CapExceeded&) {
      ++skipped;
      continue;
    }
    ++done;
    if (iso.report.verdict != Verdict::Yes)
      note(o, "seed " + std::to_string(seed) + " " + to_string(iso.report.verdict) +
                  (iso.report.counterexamples.empty() ? "" : ": " + iso.report.counterexamples.front()));
  }
  if (done < 20) note(o, "only " + std::to_string(done) + " instances within the cap");
  o.detail += (o.detail.empty() ? "" : "; ") + std::to_string(done) + " instances, " + std::to_string(skipped) + " over 400";
  return o;
}

Outcome prikry() {
  Outcome o;
  std::size_t posets = 0, runs = 0;
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const Universe u = generate_instance(seed, {2, 1 + static_cast<unsigned>(seed % 2), 3, 2, MeasureMode::Principal});
    auto inst = poset(u, full_root(u), {300, true, true});
    if (!inst) continue;
    ++posets;
    for (const auto& a : maximal_antichains(inst->leq, everything(*inst), 100))
      for (std::size_t p = 0; p < inst->size(); ++p) {
        ++runs;
        auto r = check_prikry_all(*inst, a, p);
        if (r.verdict != Verdict::Yes)
          note(o, "seed " + std::to_string(seed) + " p=" + std::to_string(p) + " " + to_string(r.verdict));
      }
  }
  if (posets == 0) note(o, "no poset within the cap");
  o.detail += (o.detail.empty() ? "" : "; ") + std::to_string(runs) + " antichain/condition pairs in " +
              std::to_string(posets) + " posets";
  return o;
}

Outcome determinism() {
  Outcome o;
  std::size_t compared = 0;
  for (std::uint64_t seed : {3u, 9u}) {
    RunOptions opt;
    opt.seed = seed;
    auto make = [&] {
      Instance inst;
      inst.u = generate_instance(seed, {2, 2, 3, 3, MeasureMode::Mixed});
      return inst;
    };
    const std::vector<std::pair<std::string, std::function<std::string()>>> runs{
        {"instance", [&] { return instance_to_json(make()).dump(2); }},
        {"validate", [&] { return render(run_validate(make(), opt).report); }},
        {"subforcing", [&] { auto i = make(); return render(run_subforcing(i, full_root(i.u), opt).report); }},
        {"dichotomy", [&] { auto i = make(); return render(run_dichotomy(i, full_root(i.u), opt).report); }},
        {"homogeneity", [&] { auto i = make(); return render(run_homogeneity(i, full_root(i.u), opt).report); }},
        {"prikry", [&] { auto i = make(); return render(run_prikry(i, full_root(i.u), opt).report); }},
        {"lemmas", [&] { return render(run_lemmas(make(), opt).report); }},
        {"simulate", [&] { return render(run_simulate(make(), 4, Strategy::Random, opt).report); }},
    };
    for (const auto& [name, run] : runs) {
      ++compared;
      if (run() != run()) note(o, name + " differs for seed " + std::to_string(seed));
    }
  }
  o.detail += (o.detail.empty() ? "" : "; ") + std::to_string(compared) + " report pairs";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, Outcome (*)()>> criteria{
      {"generated objects validate and hand-built violations fail one clause", axiom_suite},
      {"cached orders obey the order laws", order_laws},
      {"every extension factors through a support-preserving one", factorization},
      {"assignment extension matches the iterated one-point extension", assignment_coherence},
      {"fill-missing and skeleton postconditions hold", lemma_postconditions},
      {"maximal antichains of the support-preserving order stay maximal", subforcing},
      {"conditions below a single block match the Radin poset", radin_isomorphism},
      {"every labeling of a maximal antichain is decided", prikry},
      {"equal seeds give byte-identical reports", determinism},
  };
  int failures = 0;
  for (const auto& [name, run] : criteria) {
    const auto start = Clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      note(o, std::string("threw: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    std::printf("%s %s (%.1fs; %s)\n", o.pass ? "PASS" : "FAIL", name, secs, o.detail.c_str());
    std::fflush(stdout);
    failures += !o.pass;
  }
  return failures ? 1 : 0;
}
