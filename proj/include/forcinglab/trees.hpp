#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "forcinglab/mock_extenders.hpp"

namespace flab {

struct Node;

/// A tree owned by one extender sequence. `roots` is Lev_0; every node carries
/// the attached tree S of its pair ⟨μ̄,S⟩ and its successor set.
struct ETree {
  SeqId owner = 0;
  std::vector<Node> roots;  // sorted by elem

  bool empty() const { return roots.empty(); }
  friend bool operator==(const ETree&, const ETree&);
};

struct Node {
  SeqId elem = 0;
  ETree attached;
  std::vector<Node> suc;  // sorted by elem

  friend bool operator==(const Node&, const Node&) = default;
};

using TreePath = std::vector<SeqId>;

/// A pair ⟨μ̄,S⟩.
struct TreePair {
  SeqId seq = 0;
  ETree tree;
  friend bool operator==(const TreePair&, const TreePair&) = default;
};

ETree empty_tree(SeqId owner);

/// Sorts every sibling list. Construction helpers call this.
void canonicalize(ETree& t);

const Node* find_node(const ETree& t, const TreePath& path);
bool in_dom(const ETree& t, const TreePath& path);
/// Elements of Lev_0.
SeqSet lev0(const ETree& t);
/// Elements of Suc(t).
SeqSet successors(const ETree& t, const TreePath& path);
/// Every nonempty path of dom T, shallow first.
std::vector<TreePath> all_paths(const ETree& t);
std::size_t node_count(const ETree& t);
std::size_t depth(const ETree& t);

std::string path_name(const Universe& u, const TreePath& p);

/// Clause-by-clause well-formedness. `floor` is the κ⁰ every root must exceed
/// (the tag or stem in front of the tree).
ValidationReport validate_tree(const Universe& u, SeqId owner, const ETree& t,
                               std::optional<Ordinal> floor = std::nullopt);

/// T_t: all ⟨s,S⟩ with ⟨t⌢s,S⟩ ∈ T. Throws DomainError if t ∉ dom T.
ETree subtree_at(const ETree& t, const TreePath& path);
/// T_t(μ̄): the S with ⟨μ̄,S⟩ ∈ Suc_T(t).
ETree attached_at(const ETree& t, const TreePath& path, SeqId mu);

/// π⁻¹_{β,α}(S), a β-tree.
ETree preimage(const Universe& u, SeqId beta, SeqId alpha, const ETree& s);

/// T ≤ S: same owner recursively, or owner(T) ≥ owner(S) through the preimage.
/// Owners in different systems are a DomainError.
bool tree_leq(const Universe& u, const ETree& t, const ETree& s);

/// Pointwise intersection, attached trees intersected recursively.
ETree intersect_trees(const ETree& t, const ETree& s);

enum class DiagKey { Kappa, Kappa0 };

/// One member A_⟨ν̄,R⟩ of a diagonal-intersection family.
struct DiagEntry {
  SeqId nu = 0;
  ETree r;
  std::vector<TreePair> a;
};

/// ∩⁰ of the family. ⟨μ̄,S⟩ survives iff for every entry with key(ν̄) < κ⁰(μ̄)
/// the set A_⟨ν̄,R⟩ holds μ̄. The surviving S has those ⟨ν̄,R⟩ as Lev_0 and
/// the tree A_⟨ν̄,R⟩ attaches to μ̄ above each of them. With no constraining
/// entry a candidate passes unchanged.
std::vector<TreePair> diag_intersect(const Universe& u, const std::vector<DiagEntry>& family,
                                     DiagKey key = DiagKey::Kappa);

/// Position of x inside its own system.
std::size_t member_index(const Universe& u, SeqId x);

/// Largest tree over `owner` above `floor` whose elements pass `keep(owner, x)`,
/// attached trees built the same way. `max_depth` 0 means unbounded.
ETree build_tree(const Universe& u, SeqId owner, std::optional<Ordinal> floor,
                 const std::function<bool(SeqId, SeqId)>& keep, std::size_t max_depth = 0);
/// Every carrier point kept.
ETree full_tree(const Universe& u, SeqId owner, std::optional<Ordinal> floor = std::nullopt);
/// Only points in the same member position as their owner. Projections of such
/// points to distinct indices are distinct.
ETree focus_tree(const Universe& u, SeqId owner, std::optional<Ordinal> floor = std::nullopt);

/// Compact canonical encoding, equal iff the trees are equal (owners of empty
/// trees ignored).
std::string tree_key(const ETree& t);

/// Drops a node (and everything below it) reached by `path`.
ETree remove_path(const ETree& t, const TreePath& path);
/// Keeps only the nodes whose whole path satisfies `keep`.
ETree prune(const ETree& t, const std::function<bool(const TreePath&)>& keep);

}  // namespace flab
