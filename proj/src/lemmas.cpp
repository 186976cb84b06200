#include <set>

#include "forcinglab/checker.hpp"

namespace flab {

namespace {

TreePath points_of(const RadinCondition& d) {
  TreePath path;
  for (std::size_t i = d.blocks.size(); i-- > 1;) path.push_back(d.blocks[i].seq);
  return path;
}

RadinCondition emptied(const RadinCondition& d) {
  RadinCondition out = d;
  for (auto& b : out.blocks) b.tree = empty_tree(b.seq);
  return out;
}

void note(LemmaReport& r, std::string what) {
  r.verdict = Verdict::No;
  if (r.counterexamples.size() < 20) r.counterexamples.push_back(std::move(what));
}

}  // namespace

LemmaReport verify_skeleton(const Universe& u, SeqId alpha, const ETree& t, const ETree& tstar,
                            std::size_t cap) {
  LemmaReport r;
  if (!tree_leq(u, tstar, t)) note(r, "T* is not below T");
  std::vector<RadinCondition> ds;
  try {
    ds = radin_descendants(radin_base(alpha, tstar), cap);
  } catch (const CapExceeded&) {
    if (r.verdict == Verdict::Yes) r.verdict = Verdict::Unknown;
    return r;
  }
  const RadinCondition base = radin_base(alpha, t);
  for (const auto& d : ds) {
    ++r.checked;
    const TreePath path = points_of(d);
    if (!in_dom(t, path)) {
      note(r, radin_name(u, d) + ": " + path_name(u, path) + " is not a path of T");
      continue;
    }
    const RadinCondition e = radin_extend_path(base, path);
    if (!same_shape(d, e) || !radin_leq_star(u, d, e))
      note(r, radin_name(u, d) + " is not a direct extension of T extended by " + path_name(u, path));
  }
  return r;
}

LemmaReport verify_fill_missing(const Universe& u, SeqId alpha, const ETree& t, const ETree& tstar,
                                std::size_t cap) {
  LemmaReport r;
  const SeqSet common = sets::intersect(lev0(t), lev0(tstar));
  for (SeqId nu : common) {
    ++r.checked;
    if (!tree_leq(u, subtree_at(tstar, {nu}), subtree_at(t, {nu})))
      note(r, "subtree at " + u.name(nu) + " grew");
    if (!tree_leq(u, attached_at(tstar, {}, nu), attached_at(t, {}, nu)))
      note(r, "tree attached to " + u.name(nu) + " grew");
  }
  const RadinCondition base = radin_base(alpha, tstar);
  std::set<std::string> reachable;
  std::vector<RadinCondition> ds;
  try {
    for (SeqId mu : common)
      for (const auto& x : radin_descendants(radin_extend_one(base, 0, mu), cap))
        reachable.insert(radin_shape(x));
    ds = radin_descendants(base, cap);
  } catch (const CapExceeded&) {
    if (r.verdict == Verdict::Yes) r.verdict = Verdict::Unknown;
    return r;
  }
  // the minimal conditions are the descendants with every tree emptied; each
  // extension lies above one of them
  for (const auto& d : ds) {
    const RadinCondition m = emptied(d);
    if (!validate_radin(u, alpha, m).ok()) continue;
    ++r.checked;
    if (!reachable.count(radin_shape(m)))
      note(r, radin_name(u, m) + " is incompatible with every one-point extension");
  }
  return r;
}

}  // namespace flab
