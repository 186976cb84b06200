#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "forcinglab/pforcing.hpp"

using namespace flab;

namespace {

Universe instance(std::uint64_t seed = 3, unsigned len = 1, unsigned indices = 3) {
  return generate_instance(seed, {indices, len, 3, 3, MeasureMode::Principal});
}

SeqId idx(const Universe& u, std::size_t i) { return u.system(u.top).indices.at(i); }

// the root of Lev_0 with the largest kappa0
SeqId highest(const Universe& u, const ETree& t) {
  SeqId best = t.roots.front().elem;
  for (SeqId x : lev0(t))
    if (u.kappa0(best) < u.kappa0(x)) best = x;
  return best;
}

PCondition single(PStar p) { return PCondition{{std::move(p)}}; }

bool has_failure(const ValidationReport& r, const std::string& clause) {
  for (const auto& e : r.entries())
    if (e.status == ClauseStatus::Fail && e.clause == clause) return true;
  return false;
}

std::string witness(const ValidationReport& r, const std::string& clause) {
  for (const auto& e : r.entries())
    if (e.status == ClauseStatus::Fail && e.clause == clause) return e.witness;
  return {};
}

// random walk of one-point extensions at random blocks
PCondition walk(const Universe& u, PCondition c, std::size_t steps, std::mt19937_64& rng) {
  for (std::size_t i = 0; i < steps; ++i) {
    std::vector<std::pair<std::size_t, SeqId>> moves;
    for (std::size_t k = 0; k < c.blocks.size(); ++k)
      if (c.blocks[k].tree)
        for (SeqId nu : lev0(*c.blocks[k].tree)) moves.push_back({k, nu});
    if (moves.empty()) break;
    auto [k, nu] = moves[rng() % moves.size()];
    c = p_extend_at(u, c, k, nu);
  }
  return c;
}

}  // namespace

TEST_CASE("canonical conditions validate") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Universe u = instance(seed, 1 + seed % 2);
    PStar p = canonical_pstar(u, u.top, u.system(u.top).indices);
    auto r = validate_pstar(u, p, {.strict = true});
    CHECK_MESSAGE(r.ok(), witness(r, "tree"));
    CHECK(mc(u, p) == idx(u, 2));
    CHECK(validate_pcondition(u, u.top, single(p)).ok());
  }
}

TEST_CASE("validate_pstar clause failures") {
  Universe u = instance();
  SeqId min = idx(u, 0), g1 = idx(u, 1), g2 = idx(u, 2);

  SUBCASE("missing minimum") {
    PStar p = canonical_pstar(u, u.top, {g1});
    p.support.erase(min);
    CHECK(has_failure(validate_pstar(u, p), "contains-min"));
  }
  SUBCASE("projections collide off the focus points") {
    PStar p = canonical_pstar(u, u.top, {g1, g2});
    p.tree = full_tree(u, g2);
    auto r = validate_pstar(u, p);
    REQUIRE(has_failure(r, "projections-distinct"));
    CHECK(witness(r, "projections-distinct").find(" and ") != std::string::npos);
    // a single coordinate cannot collide
    PStar one = canonical_pstar(u, u.top);
    one.tree = full_tree(u, min);
    CHECK(validate_pstar(u, one).ok());
  }
  SUBCASE("tree over the wrong index") {
    PStar p = canonical_pstar(u, u.top, {g1});
    p.tree = focus_tree(u, min);
    CHECK(has_failure(validate_pstar(u, p), "tree"));
  }
  SUBCASE("undefined tree") {
    PStar p = canonical_pstar(u, u.top);
    p.tree.reset();
    CHECK(has_failure(validate_pstar(u, p), "tree"));
  }
  SUBCASE("first coordinate is a warning unless strict") {
    PStar p = canonical_pstar(u, u.top, {g1});
    SeqId nu = lev0(*p.tree).front();
    PStar ext = p_extend_one(u, p, nu).blocks[0];
    // same level as the mc tag but not its first coordinate
    REQUIRE(u.first_coordinate(nu) != nu);
    ext.support[min] = nu;
    auto loose = validate_pstar(u, ext);
    CHECK(loose.ok());
    bool warned = false;
    for (const auto& e : loose.entries()) warned = warned || (e.status == ClauseStatus::Warn);
    CHECK(warned);
    CHECK(has_failure(validate_pstar(u, ext, {.strict = true}), "first-coordinate"));
  }
  SUBCASE("mc permitted to another coordinate") {
    PStar p = canonical_pstar(u, u.top, {g1, g2});
    SeqId nu = highest(u, *p.tree);
    PStar ext = p_extend_one(u, p, nu).blocks[0];
    // a coordinate tagged below the mc tag
    SeqId low = *u.find("s1_0_0");
    REQUIRE(u.kappa0(low) < u.kappa0(nu));
    ext.support[g1] = low;
    CHECK(has_failure(validate_pstar(u, ext), "mc-not-permitted"));
  }
  SUBCASE("too large a support") {
    PStar p = canonical_pstar(u, u.top, {g1, g2});
    CHECK(has_failure(validate_pstar(u, p, {.max_support = 2}), "support-size"));
  }
}

TEST_CASE("conditions keep their blocks in kappa0 order") {
  Universe u = instance();
  PStar top = canonical_pstar(u, u.top);
  SeqId nu = lev0(*top.tree).front();
  PCondition ext = p_extend_one(u, top, nu);
  CHECK(validate_pcondition(u, u.top, ext).ok());
  CHECK_THROWS_AS(make_pcondition(u, {ext.blocks[1], ext.blocks[0]}), DomainError);
  CHECK(make_pcondition(u, ext.blocks) == ext);
  PCondition swapped{{ext.blocks[1], ext.blocks[0]}};
  CHECK(has_failure(validate_pcondition(u, u.top, swapped), "block-order"));
  CHECK(has_failure(validate_pcondition(u, u.top, swapped), "top-block"));
}

TEST_CASE("direct order on P*") {
  Universe u = instance();
  SeqId g1 = idx(u, 1), g2 = idx(u, 2);
  PStar q = canonical_pstar(u, u.top);
  CHECK(pstar_leq_star(u, q, q));

  PStar bigger = canonical_pstar(u, u.top, {g1});
  CHECK(pstar_leq_star(u, bigger, q));
  CHECK_FALSE(pstar_leq_star(u, q, bigger));
  CHECK_FALSE(pstar_leq_star_R(u, bigger, q));

  PStar shrunk = q;
  shrunk.tree = remove_path(*q.tree, {lev0(*q.tree).front()});
  CHECK(pstar_leq_star(u, shrunk, q));
  CHECK(pstar_leq_star_R(u, shrunk, q));
  CHECK_FALSE(pstar_leq_star(u, q, shrunk));

  PStar retagged = canonical_pstar(u, u.top, {g1, g2});
  PStar base = canonical_pstar(u, u.top, {g1, g2});
  retagged.support[g1] = *u.find("s1_0_0");
  CHECK_FALSE(pstar_leq_star(u, retagged, base));

  PStar lower = p_extend_one(u, q, lev0(*q.tree).front()).blocks[1];
  CHECK_THROWS_AS(pstar_leq_star(u, lower, q), DomainError);
  PStar undef = q;
  undef.tree.reset();
  CHECK_THROWS_AS(pstar_leq_star(u, undef, q), DomainError);
}

TEST_CASE("one-point extension by hand") {
  Universe u = instance();
  SeqId min = idx(u, 0), g2 = idx(u, 2);
  PStar p = canonical_pstar(u, u.top, {g2});
  SeqId nu = lev0(*p.tree).front();
  PCondition e = p_extend_one(u, p, nu);
  REQUIRE(e.blocks.size() == 2);
  const PStar& p0 = e.blocks[0];
  const PStar& p1 = e.blocks[1];
  // empty tags permit everything, so both coordinates move down to ν̄'s projections
  CHECK(p1.system == u.system_of(nu));
  CHECK(p1.support.size() == 2);
  CHECK(p1.support.at(nu) == std::nullopt);
  CHECK(p1.support.count(project_id(u, g2, min, nu)) == 1);
  CHECK(p0.support.at(g2) == Tag{nu});
  CHECK(p0.support.at(min) == Tag{project_id(u, g2, min, nu)});
  CHECK(*p1.tree == attached_at(*p.tree, {}, nu));
  CHECK(*p0.tree == subtree_at(*p.tree, {nu}));
  CHECK(validate_pcondition(u, u.top, e, {.strict = true}).ok());
  CHECK_THROWS_AS(p_extend_one(u, p, min), DomainError);
}

TEST_CASE("extensions stay conditions") {
  std::mt19937_64 rng(11);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Universe u = instance(seed, 1 + seed % 2);
    PCondition c = single(canonical_pstar(u, u.top, u.system(u.top).indices));
    PCondition w = walk(u, c, 4, rng);
    auto r = validate_pcondition(u, u.top, w, {.strict = true});
    CHECK_MESSAGE(r.ok(), pcondition_name(u, w));
  }
}

TEST_CASE("enlarging by an assignment matches the iterated one-point extension") {
  std::size_t paths = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Universe u = instance(seed, 2);
    PStar p = canonical_pstar(u, u.top, u.system(u.top).indices);
    for (const auto& path : all_paths(*p.tree)) {
      if (path.size() > 3) continue;
      ++paths;
      auto s = induced_assignment(u, p, path);
      CHECK(p_extend_s(u, p, s) == p_extend_path(u, single(p), path));
    }
  }
  CHECK(paths > 0);
}

TEST_CASE("assignment edge cases") {
  Universe u = instance();
  SeqId min = idx(u, 0), g1 = idx(u, 1);
  PStar p = canonical_pstar(u, u.top, {g1});

  CHECK(p_extend_s(u, p, Assignment{}) == single(p));

  // s(mc) off the tree: both trees are undefined
  SeqId off = 0;
  for (SeqId x : u.measure_carrier(g1))
    if (!sets::contains(lev0(*p.tree), x)) off = x;
  REQUIRE(off != 0);
  PCondition e = p_extend_s(u, p, Assignment{{g1, off}});
  CHECK_FALSE(e.blocks[0].tree.has_value());
  CHECK_FALSE(e.blocks[1].tree.has_value());
  CHECK(e.blocks[0].support.at(g1) == Tag{off});
  CHECK(has_failure(validate_pstar(u, e.blocks[0]), "tree"));

  // mc outside dom s
  PCondition f = p_extend_s(u, p, Assignment{{min, off}});
  CHECK_FALSE(f.blocks[0].tree.has_value());
  CHECK(f.blocks[0].support.at(g1) == std::nullopt);

  CHECK_THROWS_AS(check_assignment(u, {{min, off}, {g1, off}}), DomainError);
  SeqId deeper = *u.find("s1_0_0");
  SeqId higher = *u.find("s2_0_0");
  CHECK_THROWS_AS(check_assignment(u, {{min, deeper}, {g1, higher}}), DomainError);
  CHECK_THROWS_AS(p_extend_s(u, p, Assignment{{min, deeper}, {g1, higher}}), DomainError);
}

TEST_CASE("extension order with chains") {
  Universe u = instance();
  PCondition q = single(canonical_pstar(u, u.top, {idx(u, 2)}));
  SeqId nu = lev0(*q.blocks[0].tree).front();
  PCondition e1 = p_extend_at(u, q, 0, nu);
  std::size_t k = 9;
  SeqId got = 0;
  CHECK(p_leq_one(u, e1, q, &k, &got));
  CHECK(k == 0);
  CHECK(got == nu);

  PChain c = p_leq(u, e1, q);
  CHECK(c.verdict == Verdict::Yes);
  CHECK(c.length() == 1);
  CHECK(p_leq(u, q, q).length() == 0);
  CHECK(p_leq(u, q, e1).verdict == Verdict::No);

  // two steps, the second one inside the lower block when it has a tree
  PCondition e2 = e1;
  if (!lev0(*e1.blocks[1].tree).empty())
    e2 = p_extend_at(u, e1, 1, lev0(*e1.blocks[1].tree).front());
  else if (!lev0(*e1.blocks[0].tree).empty())
    e2 = p_extend_at(u, e1, 0, lev0(*e1.blocks[0].tree).front());
  if (e2.blocks.size() == 3) {
    PChain c2 = p_leq(u, e2, q);
    CHECK(c2.verdict == Verdict::Yes);
    CHECK(c2.length() == 2);
    CHECK(c2.chain.front() == e2);
    CHECK(c2.chain.back() == q);
    for (std::size_t i = 0; i + 1 < c2.chain.size(); ++i) CHECK(p_leq_one(u, c2.chain[i], c2.chain[i + 1]));
    CHECK(p_leq(u, e2, q, 1).verdict == Verdict::Unknown);
  }
}

TEST_CASE("support-preserving order") {
  Universe u = instance();
  PCondition q = single(canonical_pstar(u, u.top, {idx(u, 2)}));
  PCondition wide = single(canonical_pstar(u, u.top, u.system(u.top).indices));
  CHECK(p_leq(u, wide, q).verdict == Verdict::Yes);
  CHECK(p_leq_R(u, wide, q).verdict == Verdict::No);
  SeqId nu = lev0(*q.blocks[0].tree).front();
  PCondition e = p_extend_at(u, q, 0, nu);
  CHECK(p_leq_R(u, e, q).verdict == Verdict::Yes);
}

TEST_CASE("factoring through a support-preserving extension") {
  Universe u = instance();
  SeqId g1 = idx(u, 1), g2 = idx(u, 2);
  PCondition p = single(canonical_pstar(u, u.top, {g2}));
  // a pure support enlargement keeping mc
  PCondition q = single(canonical_pstar(u, u.top, {g1, g2}));
  q.blocks[0].tree = remove_path(*q.blocks[0].tree, {lev0(*q.blocks[0].tree).front()});
  REQUIRE(p_leq(u, q, p).verdict == Verdict::Yes);
  PCondition r = factor(u, q, p);
  CHECK(r.blocks[0].support == p.blocks[0].support);
  CHECK(r.blocks[0].tree == q.blocks[0].tree);
  CHECK(p_leq_star(u, q, r));
  CHECK(p_leq_R(u, r, p).verdict == Verdict::Yes);
  CHECK_THROWS_AS(factor(u, p, q), PreconditionError);
}

TEST_CASE("every extension factors") {
  std::mt19937_64 rng(5);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Universe u = instance(seed);
    PCondition p = single(canonical_pstar(u, u.top, {idx(u, 1)}));
    PCondition q = walk(u, single(canonical_pstar(u, u.top, u.system(u.top).indices)), 1 + seed % 3, rng);
    REQUIRE(p_leq(u, q, p).verdict == Verdict::Yes);
    PCondition r = factor(u, q, p);
    CHECK(p_leq_star(u, q, r));
    CHECK(p_leq_R(u, r, p).verdict == Verdict::Yes);
    CHECK(validate_pcondition(u, u.top, r).ok());
  }
}

TEST_CASE("quotient filter") {
  Universe u = instance();
  PCondition base = single(canonical_pstar(u, u.top));
  const ETree& t = *base.blocks[0].tree;
  SeqId lo = lev0(t).front(), hi = highest(u, t);
  REQUIRE(u.kappa0(lo) < u.kappa0(hi));
  PCondition ext_lo = p_extend_at(u, base, 0, lo);
  PCondition ext_hi = p_extend_at(u, base, 0, hi);

  // ε̄ at κ⁰(lo): only conditions whose lowest block clears it survive
  auto got = quotient_filter(u, u.top, {base, ext_lo, ext_hi}, lo);
  REQUIRE(got.size() == 2);
  CHECK(got[0] == base);
  CHECK(got[1] == ext_hi);
  // a candidate that cannot be concatenated
  PCondition bad = single(canonical_pstar(u, u.system_of(lo)));
  bad.blocks[0].support.erase(u.min_index(u.system_of(lo)));
  CHECK(quotient_filter(u, u.top, {base}, lo, {bad}).empty());
  CHECK_THROWS_AS(quotient_filter(u, u.top, {base}, idx(u, 0)), DomainError);
}
