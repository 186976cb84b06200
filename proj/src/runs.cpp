#include "forcinglab/runs.hpp"

#include <cstdlib>
#include <random>

namespace flab {

Verdict combine(Verdict a, Verdict b) {
  if (a == Verdict::No || b == Verdict::No) return Verdict::No;
  if (a == Verdict::Unknown || b == Verdict::Unknown) return Verdict::Unknown;
  return Verdict::Yes;
}

std::size_t cap_from_env(std::size_t fallback) {
  const char* v = std::getenv("FORCINGLAB_CAP");
  if (!v || !*v) return fallback;
  char* end = nullptr;
  const unsigned long long n = std::strtoull(v, &end, 10);
  if (*end || n == 0) return fallback;
  return static_cast<std::size_t>(n);
}

PCondition pick_condition(const Instance& inst, const std::optional<std::string>& name) {
  if (!name) return PCondition{{canonical_pstar(inst.u, inst.u.top, inst.u.system(inst.u.top).indices)}};
  auto it = inst.p_conditions.find(*name);
  if (it == inst.p_conditions.end()) throw ConfigError("no p-condition named " + *name);
  return it->second;
}

std::string render(const Json& report) { return report.dump(2) + "\n"; }

namespace {

Json header(const char* command, const RunOptions& opt) {
  return {{"command", command}, {"seed", opt.seed}, {"cap", opt.cap}};
}

void finish(RunResult& r) { r.report["verdict"] = to_string(r.verdict); }

// cap overruns become an unknown verdict
std::optional<FinitePoset> enumerate(const Instance& inst, const PCondition& root, const RunOptions& opt,
                                     RunResult& r, bool grow = true) {
  auto v = validate_pcondition(inst.u, inst.u.top, root, {.strict = opt.strict, .max_support = std::nullopt});
  if (!v.ok()) throw DomainError("the root is not a condition: " + v.failed_clauses().front());
  try {
    auto p = enumerate_poset(inst.u, root, {opt.cap, true, grow});
    r.report["poset_size"] = p.size();
    r.report["root"] = pcondition_name(inst.u, root);
    return p;
  } catch (const CapExceeded& e) {
    r.verdict = Verdict::Unknown;
    r.report["note"] = e.what();
    return std::nullopt;
  }
}

void add_example(Json& list, std::string text) {
  if (list.size() < 20) list.push_back(std::move(text));
}

ETree only_measure(const Universe& u, const ETree& t, std::size_t xi) {
  const auto& f = u.filter(u.seq(t.owner).measures.at(xi));
  return prune(t, [&](const TreePath& p) { return sets::contains(f.carrier, p[0]); });
}

ETree random_shrink(const Universe& u, const ETree& t, std::mt19937_64& rng) {
  ETree cur = t;
  for (const auto& p : all_paths(t)) {
    if (rng() % 3) continue;
    ETree cand = remove_path(cur, p);
    if (validate_tree(u, cur.owner, cand).ok()) cur = cand;
  }
  return cur;
}

}  // namespace

std::vector<DenseSet> random_dense_sets(const FinitePoset& inst, std::uint64_t seed, std::size_t count) {
  std::mt19937_64 rng(seed);
  std::vector<DenseSet> out;
  for (std::size_t k = 0; k < count; ++k) {
    DenseSet s(inst.size(), false);
    for (std::size_t i = 0; i < inst.size(); ++i) s[i] = below(inst.leq, i).size() == 1 || rng() % 4 == 0;
    out.push_back(open_closure(inst, s));
  }
  return out;
}

RunResult run_validate(const Instance& inst, const RunOptions& opt) {
  RunResult r;
  r.report = header("validate", opt);
  const Universe& u = inst.u;
  auto take = [&](const ValidationReport& v) {
    if (!v.ok()) r.verdict = Verdict::No;
    return report_to_json(v);
  };
  r.report["universe"] = take(validate_universe(u));
  Json trees = Json::object(), rc = Json::object(), pc = Json::object();
  for (const auto& [name, t] : inst.trees) trees[name] = take(validate_tree(u, t.owner, t));
  for (const auto& [name, c] : inst.radin_conditions) rc[name] = take(validate_radin(u, c.alpha, c.cond));
  for (const auto& [name, p] : inst.p_conditions) pc[name] = take(validate_pcondition(u, u.top, p, {.strict = opt.strict, .max_support = std::nullopt}));
  r.report["trees"] = trees;
  r.report["radin_conditions"] = rc;
  r.report["p_conditions"] = pc;
  finish(r);
  return r;
}

RunResult run_subforcing(const Instance& inst, const PCondition& root, const RunOptions& opt) {
  RunResult r;
  r.report = header("subforcing", opt);
  if (auto poset = enumerate(inst, root, opt, r)) {
    std::size_t antichains = 0, unknown = 0;
    Json examples = Json::array();
    for (std::size_t p = 0; p < poset->size(); ++p) {
      auto c = check_subforcing(inst.u, *poset, p, opt.subforcing_cap);
      antichains += c.checked;
      unknown += c.verdict == Verdict::Unknown;
      r.verdict = combine(r.verdict, c.verdict);
      for (auto& e : c.counterexamples) add_example(examples, pcondition_name(inst.u, poset->elems[p]) + ": " + e);
    }
    r.report["antichains"] = antichains;
    r.report["unknown_conditions"] = unknown;
    r.report["counterexamples"] = examples;
  }
  finish(r);
  return r;
}

RunResult run_iso(const Instance& inst, const PCondition& root, const RunOptions& opt) {
  RunResult r;
  r.report = header("iso", opt);
  if (root.blocks.size() != 1) throw DomainError("iso needs a single-block condition");
  auto v = validate_pcondition(inst.u, inst.u.top, root, {.strict = opt.strict, .max_support = std::nullopt});
  if (!v.ok()) throw DomainError("the root is not a condition: " + v.failed_clauses().front());
  try {
    IsoReport iso = radin_iso(inst.u, root, {opt.cap, true, false});
    r.verdict = iso.report.verdict;
    r.report["root"] = pcondition_name(inst.u, root);
    r.report["radin_root"] = radin_name(inst.u, iso.r);
    r.report["pairs"] = iso.pairing.size();
    r.report["order_checks"] = iso.report.checked;
    r.report["counterexamples"] = iso.report.counterexamples;
  } catch (const CapExceeded& e) {
    r.verdict = Verdict::Unknown;
    r.report["note"] = e.what();
  }
  finish(r);
  return r;
}

RunResult run_dichotomy(const Instance& inst, const PCondition& root, const RunOptions& opt) {
  RunResult r;
  r.report = header("dichotomy", opt);
  if (auto poset = enumerate(inst, root, opt, r)) {
    auto sets = random_dense_sets(*poset, opt.seed, opt.dense_sets);
    sets.insert(sets.begin(), DenseSet(poset->size(), true));
    std::size_t runs = 0, first = 0, second = 0, both = 0;
    Json examples = Json::array();
    for (std::size_t k = 0; k < sets.size(); ++k)
      for (std::size_t p = 0; p < poset->size(); ++p) {
        const PCondition& c = poset->elems[p];
        if (c.blocks.size() != 1 || !c.blocks[0].tree) continue;
        for (std::size_t n = 1; n <= depth(*c.blocks[0].tree); ++n) {
          auto d = check_canon_dichotomy(inst.u, *poset, sets[k], p, n);
          ++runs;
          first += d.verdict == Verdict::Yes && d.branch == 1;
          second += d.verdict == Verdict::Yes && d.branch == 2;
          both += d.both;
          if (d.verdict != Verdict::Yes || d.both) {
            r.verdict = Verdict::No;
            add_example(examples, "set " + std::to_string(k) + " n=" + std::to_string(n) + " " +
                                      pcondition_name(inst.u, c) + (d.both ? ": both branches" : ": no branch"));
          }
        }
      }
    r.report["dense_sets"] = sets.size();
    r.report["runs"] = runs;
    r.report["branch_one"] = first;
    r.report["branch_two"] = second;
    r.report["both_branches"] = both;
    r.report["counterexamples"] = examples;
  }
  finish(r);
  return r;
}

RunResult run_homogeneity(const Instance& inst, const PCondition& root, const RunOptions& opt) {
  RunResult r;
  r.report = header("homogeneity", opt);
  if (auto poset = enumerate(inst, root, opt, r)) {
    auto sets = random_dense_sets(*poset, opt.seed, opt.dense_sets);
    std::size_t runs = 0, unknown = 0;
    Json examples = Json::array();
    for (std::size_t k = 0; k < sets.size(); ++k)
      for (std::size_t p = 0; p < poset->size(); ++p) {
        auto h = check_dense_homogeneity(inst.u, *poset, sets[k], p);
        ++runs;
        unknown += h.verdict == Verdict::Unknown;
        r.verdict = combine(r.verdict, h.verdict);
        if (h.verdict == Verdict::No)
          add_example(examples, "set " + std::to_string(k) + " " + pcondition_name(inst.u, poset->elems[p]));
      }
    r.report["dense_sets"] = sets.size();
    r.report["runs"] = runs;
    r.report["unknown"] = unknown;
    r.report["counterexamples"] = examples;
  }
  finish(r);
  return r;
}

RunResult run_prikry(const Instance& inst, const PCondition& root, const RunOptions& opt) {
  RunResult r;
  r.report = header("prikry", opt);
  if (auto poset = enumerate(inst, root, opt, r)) {
    std::vector<std::size_t> all(poset->size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    bool complete = true;
    auto antichains = maximal_antichains(poset->leq, all, opt.antichain_cap, &complete);
    std::size_t runs = 0, direct = 0, unknown = 0;
    Json examples = Json::array();
    for (std::size_t k = 0; k < antichains.size(); ++k)
      for (std::size_t p = 0; p < poset->size(); ++p) {
        auto res = check_prikry_all(*poset, antichains[k], p);
        ++runs;
        direct += res.direct;
        unknown += res.verdict == Verdict::Unknown;
        r.verdict = combine(r.verdict, res.verdict);
        if (res.verdict == Verdict::No)
          add_example(examples, "antichain " + std::to_string(k) + " undecided below " +
                                    pcondition_name(inst.u, poset->elems[p]));
      }
    r.report["antichains"] = antichains.size();
    r.report["antichains_complete"] = complete;
    r.report["runs"] = runs;
    r.report["direct_witnesses"] = direct;
    r.report["unknown"] = unknown;
    r.report["counterexamples"] = examples;
  }
  finish(r);
  return r;
}

RunResult run_lemmas(const Instance& inst, const RunOptions& opt) {
  RunResult r;
  r.report = header("lemmas", opt);
  const Universe& u = inst.u;
  std::mt19937_64 rng(opt.seed);
  std::size_t skeleton = 0, skeleton_refused = 0, fill = 0, refused = 0, checked = 0;
  Json examples = Json::array();
  auto tally = [&](const LemmaReport& rep, const std::string& what) {
    checked += rep.checked;
    r.verdict = combine(r.verdict, rep.verdict);
    for (const auto& c : rep.counterexamples) add_example(examples, what + ": " + c);
    if (rep.verdict == Verdict::Unknown) add_example(examples, what + ": unknown");
  };
  for (SeqId a : u.system(u.top).indices) {
    const ETree full = full_tree(u, a);
    for (const ETree& t : {full, random_shrink(u, full, rng)}) {
      try {
        ETree s = skeleton_refine(u, a, t, std::min<std::size_t>(depth(t), 3));
        tally(verify_skeleton(u, a, t, s, opt.cap * 1000), "skeleton " + u.name(a));
        ++skeleton;
      } catch (const PreconditionError&) {
        ++skeleton_refused;
      }
    }
    for (std::size_t xi = 0; xi < u.len(a); ++xi) {
      const ETree t = only_measure(u, full, xi);
      try {
        ETree s = fill_missing(u, a, t, xi, DefaultOracle{});
        tally(verify_fill_missing(u, a, t, s, opt.cap * 1000), "fill " + u.name(a) + " xi=" + std::to_string(xi));
        ++fill;
      } catch (const PreconditionError&) {
        ++refused;
      }
    }
  }
  r.report["skeleton_runs"] = skeleton;
  r.report["skeleton_refused"] = skeleton_refused;
  r.report["fill_runs"] = fill;
  r.report["fill_refused"] = refused;
  r.report["extensions_checked"] = checked;
  r.report["counterexamples"] = examples;
  finish(r);
  return r;
}

RunResult run_simulate(const Instance& inst, std::size_t steps, Strategy strategy, const RunOptions& opt) {
  RunResult r;
  r.report = header("simulate", opt);
  const Universe& u = inst.u;
  GenericChain g = simulate(u, opt.seed, steps, strategy);
  Json chain = Json::array();
  for (const auto& p : g.steps) chain.push_back(pcondition_name(u, p));
  Json systems = Json::array();
  for (SystemId s : ebar_G(u, g)) systems.push_back(u.system(s).name);
  Json clubs = Json::object();
  for (SeqId a : u.system(u.top).indices) {
    ClubSequence c = club(u, g, a);
    Json cs = Json::array();
    for (Ordinal o : c.c) cs.push_back(o.value);
    clubs[u.name(a)] = {{"m", [&] {
                           Json m = Json::array();
                           for (SeqId x : c.m) m.push_back(u.name(x));
                           return m;
                         }()},
                        {"c", cs}};
  }
  auto chain_ok = validate_chain(u, g);
  auto distinct = distinct_clubs(u, g);
  if (!chain_ok.ok() || !distinct.ok()) r.verdict = Verdict::No;
  r.report["strategy"] = strategy == Strategy::Greedy ? "greedy" : "random";
  r.report["steps"] = chain;
  r.report["ebar_G"] = systems;
  r.report["clubs"] = clubs;
  r.report["chain"] = report_to_json(chain_ok);
  r.report["distinct_clubs"] = report_to_json(distinct);
  finish(r);
  return r;
}

}  // namespace flab
