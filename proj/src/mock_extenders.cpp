#include "forcinglab/mock_extenders.hpp"

#include <random>
#include <sstream>

namespace flab {

SystemId Universe::add_system(std::string name) {
  systems.push_back(ExtenderSystem{std::move(name), {}, {}});
  return static_cast<SystemId>(systems.size() - 1);
}

FilterId Universe::add_filter(FilterOracle f) {
  f.carrier = sets::normalize(std::move(f.carrier));
  for (auto& g : f.generators) g = sets::normalize(std::move(g));
  filters.push_back(std::move(f));
  return static_cast<FilterId>(filters.size() - 1);
}

SeqId Universe::add_sequence(std::string name, Ordinal kappa, Ordinal kappa0,
                             std::vector<FilterId> measures, SystemId system) {
  if (by_name_.count(name)) throw ConfigError("duplicate sequence name " + name);
  if (system >= systems.size()) throw ConfigError("unknown system for " + name);
  SeqId id = static_cast<SeqId>(seqs.size());
  seqs.push_back(ExtenderSequence{id, kappa, kappa0, std::move(measures), system});
  by_name_[name] = id;
  names.push_back(std::move(name));
  auto& idx = systems[system].indices;
  idx.push_back(id);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](SeqId a, SeqId b) { return seqs[a].kappa < seqs[b].kappa; });
  return id;
}

std::optional<SeqId> Universe::find(const std::string& n) const {
  auto it = by_name_.find(n);
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

SeqId Universe::require(const std::string& n) const {
  auto id = find(n);
  if (!id) throw ConfigError("unknown sequence " + n);
  return *id;
}

std::optional<SystemId> Universe::find_system(const std::string& n) const {
  for (SystemId s = 0; s < systems.size(); ++s)
    if (systems[s].name == n) return s;
  return std::nullopt;
}

bool Universe::index_geq(SeqId beta, SeqId alpha) const {
  if (system_of(beta) != system_of(alpha))
    throw DomainError(name(beta) + " and " + name(alpha) + " lie in different systems");
  return kappa(beta) >= kappa(alpha);
}

SeqSet Universe::measure_carrier(SeqId id) const {
  SeqSet out;
  for (FilterId f : seq(id).measures) out = sets::unite(out, filter(f).carrier);
  return out;
}

std::string tag_name(const Universe& u, Tag t) { return t ? u.name(*t) : std::string("<>"); }

std::optional<Ordinal> tag_kappa0(const Universe& u, Tag t) {
  if (!t) return std::nullopt;
  return u.kappa0(*t);
}

bool filter_member(const FilterOracle& f, const SeqSet& a) {
  if (!sets::subset(a, f.carrier)) throw DomainError("set leaves the carrier of " + f.name);
  for (const auto& g : f.generators)
    if (sets::subset(g, a)) return true;
  return false;
}

Largeness large_above(const Universe& u, const FilterOracle& f, const SeqSet& a,
                      std::optional<Ordinal> floor) {
  bool any = false;
  for (const auto& g : f.generators) {
    SeqSet trace;
    for (SeqId x : g)
      if (!floor || u.kappa0(x) > *floor) trace.push_back(x);
    if (trace.empty()) continue;
    any = true;
    if (sets::subset(trace, a)) return Largeness::Large;
  }
  return any ? Largeness::Small : Largeness::Exhausted;
}

bool seq_member(const Universe& u, const ExtenderSequence& mu, const SeqSet& a) {
  if (mu.measures.empty()) throw DomainError("no measures on degenerate sequence");
  for (FilterId fid : mu.measures) {
    const auto& f = u.filter(fid);
    if (!filter_member(f, sets::intersect(a, f.carrier))) return false;
  }
  return true;
}

SeqId project_id(const Universe& u, SeqId beta, SeqId alpha, SeqId nu) {
  const auto& sys = u.system(u.system_of(beta));
  if (!u.index_geq(beta, alpha))
    throw DomainError("projection needs " + u.name(beta) + " >= " + u.name(alpha));
  auto it = sys.projections.find({beta, alpha});
  if (it == sys.projections.end()) {
    if (beta == alpha) return nu;
    throw ConfigError("missing projection " + u.name(beta) + " -> " + u.name(alpha));
  }
  auto jt = it->second.find(nu);
  if (jt == it->second.end())
    throw ConfigError("projection " + u.name(beta) + " -> " + u.name(alpha) + " undefined at " +
                      u.name(nu));
  return jt->second;
}

const ExtenderSequence& project(const Universe& u, SeqId beta, SeqId alpha, SeqId nu) {
  return u.seq(project_id(u, beta, alpha, nu));
}

bool is_zero_increasing(const Universe& u, std::span<const SeqId> s) {
  for (std::size_t i = 1; i < s.size(); ++i)
    if (!(u.kappa0(s[i - 1]) < u.kappa0(s[i]))) return false;
  return true;
}

bool permitted(const Universe& u, SeqId nu, std::span<const SeqId> tail) {
  return tail.empty() || u.kappa0(tail.back()) < u.kappa0(nu);
}

bool permitted_to_tag(const Universe& u, SeqId nu, Tag tag) {
  return !tag || u.kappa0(*tag) < u.kappa0(nu);
}

ValidationReport validate_filter(const Universe& u, FilterId fid) {
  ValidationReport r;
  const auto& f = u.filter(fid);
  const std::string c = "filter " + f.name + ": ";
  if (f.generators.empty()) r.fail(c + "generators", "no generators");
  for (const auto& g : f.generators) {
    if (g.empty()) r.fail(c + "generators", "empty generator");
    if (!sets::subset(g, f.carrier)) r.fail(c + "generators", "generator leaves carrier");
  }
  r.settle(c + "generators");
  for (std::size_t i = 0; i < f.generators.size(); ++i)
    for (std::size_t j = i + 1; j < f.generators.size(); ++j) {
      auto meet = sets::intersect(f.generators[i], f.generators[j]);
      bool ok = false;
      for (const auto& g : f.generators) ok = ok || sets::subset(g, meet);
      if (!ok)
        r.fail(c + "intersection-closure",
               "generators " + std::to_string(i) + " and " + std::to_string(j));
    }
  r.settle(c + "intersection-closure");
  if (f.kind == FilterKind::PrincipalUltrafilter) {
    bool single = false;
    for (const auto& g : f.generators) single = single || g.size() == 1;
    if (!single) r.fail(c + "principal", "no singleton generator");
    r.settle(c + "principal");
  }
  return r;
}

namespace {

std::string seq_list(const Universe& u, const SeqSet& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + u.name(s[i]);
  return out + "}";
}

SeqSet image(const Universe& u, SeqId b, SeqId a, const SeqSet& s) {
  SeqSet out;
  for (SeqId x : s) out.push_back(project_id(u, b, a, x));
  return sets::normalize(out);
}

SeqSet preimage_set(const Universe& u, SeqId b, SeqId a, const SeqSet& dom, const SeqSet& s) {
  SeqSet out;
  for (SeqId x : dom)
    if (sets::contains(s, project_id(u, b, a, x))) out.push_back(x);
  return out;
}

}  // namespace

ValidationReport validate_system(const Universe& u, SystemId sid) {
  ValidationReport r;
  const auto& sys = u.system(sid);
  if (sys.indices.empty()) {
    r.fail("nonempty", "system " + sys.name + " has no indices");
    return r;
  }
  r.pass("nonempty");
  const SeqId mn = sys.indices.front();

  for (SeqId a : sys.indices) {
    if (u.kappa0(a) > u.kappa(a)) r.fail("kappa0-below-kappa", u.name(a));
    if (u.kappa0(a) != u.kappa0(mn)) r.fail("common-kappa0", u.name(a));
    if (u.len(a) != u.len(mn)) r.fail("equal-length", u.name(a));
  }
  r.settle("kappa0-below-kappa");
  r.settle("common-kappa0");
  r.settle("equal-length");

  // the distinguished minimum is strictly below everything else
  for (SeqId a : sys.indices)
    if (a != mn && !(u.kappa(mn) < u.kappa(a))) r.fail("minimal-index", u.name(a));
  if (u.kappa(mn) != u.kappa0(mn))
    r.fail("minimal-index", u.name(mn) + " label differs from its first coordinate");
  r.settle("minimal-index");
  r.not_applicable("index-count", "cardinal arithmetic");
  r.not_applicable("naming", "naming convention only");

  auto has_table = [&](SeqId b, SeqId a) {
    return b == a || sys.projections.count({b, a}) > 0;
  };
  // directedness
  for (SeqId a : sys.indices)
    for (SeqId b : sys.indices) {
      bool found = false;
      for (SeqId c : sys.indices)
        if (u.kappa(c) >= u.kappa(a) && u.kappa(c) >= u.kappa(b) && has_table(c, a) &&
            has_table(c, b))
          found = true;
      if (!found) r.fail("directed", u.name(a) + "," + u.name(b));
    }
  r.settle("directed");

  for (const auto& [key, table] : sys.projections) {
    auto [b, a] = key;
    const std::string tn = u.name(b) + "->" + u.name(a);
    if (u.system_of(b) != sid || u.system_of(a) != sid) {
      r.fail("projection-indices", tn);
      continue;
    }
    if (u.kappa(b) < u.kappa(a)) r.fail("projection-indices", tn + " goes upward");
    SeqSet dom = u.measure_carrier(b);
    SeqSet cod = u.measure_carrier(a);
    for (SeqId x : dom)
      if (!table.count(x)) r.fail("totality", tn + " undefined at " + u.name(x));
    for (const auto& [x, y] : table) {
      if (!sets::contains(cod, y) && !(dom.empty() && x == y))
        r.fail("totality", tn + " sends " + u.name(x) + " outside the carrier");
      if (u.kappa0(x) != u.kappa0(y))
        r.fail("kappa0-preserved", tn + " moves " + u.name(x) + " to " + u.name(y));
    }
    if (b == a)
      for (const auto& [x, y] : table)
        if (x != y) r.fail("identity", tn + " moves " + u.name(x));
  }
  r.settle("projection-indices");
  r.settle("totality");
  r.settle("kappa0-preserved");
  r.settle("identity");
  if (!r.ok()) return r;

  // π_{β,0} = π_{α,0}∘π_{β,α}
  for (SeqId b : sys.indices)
    for (SeqId a : sys.indices) {
      if (u.kappa(b) < u.kappa(a) || !has_table(b, a) || !has_table(b, mn) || !has_table(a, mn))
        continue;
      for (SeqId x : u.measure_carrier(b)) {
        SeqId lhs = project_id(u, b, mn, x);
        SeqId rhs = project_id(u, a, mn, project_id(u, b, a, x));
        if (lhs != rhs) r.fail("factor-through-min", u.name(b) + "," + u.name(a) + " at " + u.name(x));
      }
    }
  r.settle("factor-through-min");

  // commutation on a measure-one set
  for (SeqId c : sys.indices)
    for (SeqId b : sys.indices)
      for (SeqId a : sys.indices) {
        if (u.kappa(c) < u.kappa(b) || u.kappa(b) < u.kappa(a)) continue;
        if (!has_table(c, b) || !has_table(b, a) || !has_table(c, a)) continue;
        if (u.len(c) == 0) continue;
        SeqSet agree;
        for (SeqId x : u.measure_carrier(c))
          if (project_id(u, c, a, x) == project_id(u, b, a, project_id(u, c, b, x)))
            agree.push_back(x);
        if (!seq_member(u, u.seq(c), agree))
          r.fail("commute", u.name(c) + "," + u.name(b) + "," + u.name(a) + " agree only on " +
                                   seq_list(u, agree));
      }
  r.settle("commute");

  // projections carry measures onto measures
  for (const auto& [key, table] : sys.projections) {
    auto [b, a] = key;
    (void)table;
    const auto& mb = u.seq(b).measures;
    const auto& ma = u.seq(a).measures;
    for (std::size_t xi = 0; xi < mb.size() && xi < ma.size(); ++xi) {
      const auto& fb = u.filter(mb[xi]);
      const auto& fa = u.filter(ma[xi]);
      for (const auto& g : fb.generators) {
        auto img = sets::intersect(image(u, b, a, g), fa.carrier);
        if (!filter_member(fa, img))
          r.fail("projection-measures", "image of a generator of " + fb.name + " is small for " + fa.name);
      }
      for (const auto& g : fa.generators)
        if (!filter_member(fb, preimage_set(u, b, a, fb.carrier, g)))
          r.fail("projection-measures", "preimage of a generator of " + fa.name + " is small for " + fb.name);
    }
  }
  r.settle("projection-measures");
  return r;
}

ValidationReport validate_universe(const Universe& u) {
  ValidationReport r;
  for (FilterId f = 0; f < u.filters.size(); ++f) r.merge(validate_filter(u, f));
  for (const auto& s : u.seqs) {
    for (FilterId f : s.measures)
      for (SeqId x : u.filter(f).carrier)
        if (!(u.kappa0(x) < s.kappa0))
          r.fail("carrier-below", u.filter(f).name + " contains " + u.name(x));
  }
  r.settle("carrier-below");
  for (SystemId s = 0; s < u.systems.size(); ++s)
    r.merge(validate_system(u, s), "system " + u.systems[s].name + ": ");
  return r;
}

namespace {

struct Gen {
  std::mt19937_64 rng;
  std::uint64_t below(std::uint64_t n) { return rng() % n; }
};

}  // namespace

Universe generate_instance(std::uint64_t seed, const GenParams& p) {
  if (p.indices == 0 || p.length == 0 || p.levels == 0 || p.width == 0)
    throw GenerationError("generation parameters must be positive");
  if (p.width < p.indices) throw GenerationError("width must be at least the number of indices");
  if (p.width >= kLevelStride) throw GenerationError("width must stay below 10");
  if (p.levels < p.length) throw GenerationError("need at least as many levels as measures");

  Gen g{std::mt19937_64(seed)};
  const unsigned L = p.levels, n = p.length, W = p.width;

  // strictly increasing level of each measure index ξ
  std::vector<unsigned> lev;
  {
    std::vector<unsigned> pool;
    for (unsigned l = 1; l <= L; ++l) pool.push_back(l);
    for (unsigned i = 0; i < n; ++i) {
      unsigned left = n - i;
      // leave room for the remaining measures
      std::vector<unsigned> ok;
      for (unsigned l : pool)
        if ((lev.empty() || l > lev.back()) && l + (left - 1) <= L) ok.push_back(l);
      lev.push_back(ok[g.below(ok.size())]);
    }
  }
  std::vector<FilterKind> kind(n);
  for (unsigned xi = 0; xi < n; ++xi) {
    if (p.mode == MeasureMode::Principal)
      kind[xi] = FilterKind::PrincipalUltrafilter;
    else if (p.mode == MeasureMode::General)
      kind[xi] = FilterKind::General;
    else
      kind[xi] = g.below(2) ? FilterKind::General : FilterKind::PrincipalUltrafilter;
  }

  Universe u;
  u.top = u.add_system("E");
  // members[l][λ] for lower systems
  std::vector<std::vector<std::vector<SeqId>>> members(L + 2, std::vector<std::vector<SeqId>>(n));
  auto exists = [&](unsigned l, unsigned lam) { return lam == 0 || lev[lam - 1] < l; };

  auto make_measures = [&](unsigned l, unsigned lam, const std::string& owner_prefix,
                           unsigned count) {
    // one filter per (member, ξ)
    std::vector<std::vector<FilterId>> out(count);
    for (unsigned xi = 0; xi < lam; ++xi) {
      std::vector<unsigned> thresholds{lev[xi]};
      for (unsigned m = lev[xi] + 1; m < l; ++m)
        if (g.below(2)) thresholds.push_back(m);
      for (unsigned j = 0; j < count; ++j) {
        FilterOracle f;
        f.name = "f:" + owner_prefix + std::to_string(j) + ":" + std::to_string(xi);
        f.kind = kind[xi];
        for (unsigned lp = 1; lp < l; ++lp)
          if (exists(lp, xi))
            for (SeqId x : members[lp][xi]) f.carrier.push_back(x);
        if (kind[xi] == FilterKind::PrincipalUltrafilter) {
          f.generators.push_back({members[lev[xi]][xi][j]});
        } else {
          for (unsigned m : thresholds) {
            SeqSet t;
            for (unsigned lp = m; lp < l; ++lp)
              if (exists(lp, xi)) t.push_back(members[lp][xi][j]);
            f.generators.push_back(t);
          }
        }
        out[j].push_back(u.add_filter(std::move(f)));
      }
    }
    return out;
  };

  auto add_tables = [&](SystemId sid) {
    auto& sys = u.systems[sid];
    const auto idx = sys.indices;
    for (std::size_t bi = 0; bi < idx.size(); ++bi)
      for (std::size_t ai = 0; ai <= bi; ++ai) {
        std::map<SeqId, SeqId> table;
        for (SeqId x : u.measure_carrier(idx[bi])) {
          // x is member k of its own system: member β goes to member α, the rest to member 0
          const auto& xs = u.system(u.system_of(x)).indices;
          std::size_t k = std::find(xs.begin(), xs.end(), x) - xs.begin();
          SeqId y = x;
          if (ai != bi) y = k == bi ? xs[ai] : xs[0];
          table[x] = y;
        }
        u.systems[sid].projections[{idx[bi], idx[ai]}] = std::move(table);
      }
  };

  for (unsigned l = 1; l <= L; ++l)
    for (unsigned lam = 0; lam < n; ++lam) {
      if (!exists(l, lam)) continue;
      std::string prefix = "s" + std::to_string(l) + "_" + std::to_string(lam) + "_";
      SystemId sid = u.add_system("S" + std::to_string(l) + "_" + std::to_string(lam));
      auto ms = make_measures(l, lam, prefix, W);
      for (unsigned j = 0; j < W; ++j)
        members[l][lam].push_back(u.add_sequence(prefix + std::to_string(j),
                                                 Ordinal(kLevelStride * l + j),
                                                 Ordinal(kLevelStride * l), ms[j], sid));
      add_tables(sid);
    }

  {
    auto ms = make_measures(L + 1, n, "E", p.indices);
    for (unsigned j = 0; j < p.indices; ++j)
      u.add_sequence("E" + std::to_string(j), Ordinal(kLevelStride * (L + 1) + j),
                     Ordinal(kLevelStride * (L + 1)), ms[j], u.top);
    add_tables(u.top);
  }
  return u;
}

}  // namespace flab
