#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "forcinglab/trees.hpp"

namespace flab {

/// A P*-block: support γ̄ ↦ p^γ̄ over one system, plus a tree over mc.
/// `tree` is nullopt when an operation left it undefined.
struct PStar {
  SystemId system = 0;
  std::map<SeqId, Tag> support;
  std::optional<ETree> tree;
  friend bool operator==(const PStar&, const PStar&) = default;
};

/// p_n ⌢ … ⌢ p_0; blocks[0] is p_0 over the top system.
struct PCondition {
  std::vector<PStar> blocks;
  friend bool operator==(const PCondition&, const PCondition&) = default;
};

/// Max of the support in the index order. Throws DomainError when there is none.
SeqId mc(const Universe& u, const PStar& p);
SeqSet support_set(const PStar& p);

struct PStarOptions {
  bool strict = false;                 // first-coordinate clause becomes an error
  std::optional<std::size_t> max_support;  // defaults to the system size
};

ValidationReport validate_pstar(const Universe& u, const PStar& p, const PStarOptions& opt = {});
/// Blocks valid, systems strictly increasing in κ⁰ towards block 0, block 0 over `top`.
ValidationReport validate_pcondition(const Universe& u, SystemId top, const PCondition& p,
                                     const PStarOptions& opt = {});

/// Checks the κ⁰ ordering of the block systems and builds the condition.
PCondition make_pcondition(const Universe& u, std::vector<PStar> blocks);

/// Support `supp` plus the system minimum, empty tags and the focus tree of its mc.
PStar canonical_pstar(const Universe& u, SystemId s, SeqSet supp = {});

std::string pstar_key(const PStar& p);
std::string pcondition_key(const PCondition& p);
std::string pcondition_name(const Universe& u, const PCondition& p);
/// Block systems only.
bool same_systems(const PCondition& p, const PCondition& q);

/// ≤* on P*. Different systems or undefined trees are a DomainError. Over a
/// length-0 system only supports and tags are compared.
bool pstar_leq_star(const Universe& u, const PStar& p, const PStar& q);
bool pstar_leq_star_R(const Universe& u, const PStar& p, const PStar& q);
/// Blockwise ≤*. Different block systems are a DomainError.
bool p_leq_star(const Universe& u, const PCondition& p, const PCondition& q);
bool p_leq_star_R(const Universe& u, const PCondition& p, const PCondition& q);

/// (p)_⟨ν̄⟩ = p'_1 ⌢ p'_0, returned with blocks {p'_0, p'_1}.
PCondition p_extend_one(const Universe& u, const PStar& p, SeqId nu);
/// The same split applied to block k of a condition.
PCondition p_extend_at(const Universe& u, const PCondition& q, std::size_t k, SeqId nu);
/// (p)_⟨ν̄₁,…,ν̄ₙ⟩: successive splits of block 0.
PCondition p_extend_path(const Universe& u, const PCondition& q, const TreePath& path);

using Assignment = std::map<SeqId, SeqId>;

/// Throws DomainError unless the values share length and κ⁰ and are distinct.
void check_assignment(const Universe& u, const Assignment& s);
/// (p)_⟨s⟩. Trees left undefined when s(mc) is not in Lev_0(T^p). An empty
/// assignment returns p as a one-block condition.
PCondition p_extend_s(const Universe& u, const PStar& p, const Assignment& s);
/// The iterated version over s(1..n), always splitting block 0.
PCondition p_extend_s(const Universe& u, const PStar& p, const std::vector<Assignment>& s);
/// s(i) read off a path of T^p through the projections, on the coordinates the
/// point is permitted to at that step.
std::vector<Assignment> induced_assignment(const Universe& u, const PStar& p, const TreePath& path);

/// Every condition reachable from q by one-point extensions alone, q first.
/// Throws CapExceeded past `cap`.
std::vector<PCondition> p_descendants(const Universe& u, const PCondition& q, std::size_t cap);

struct PChain {
  Verdict verdict = Verdict::No;
  /// p = chain.front() ≤¹ … ≤¹ chain.back() = q; a single entry means p ≤* q.
  std::vector<PCondition> chain;
  std::size_t length() const { return chain.empty() ? 0 : chain.size() - 1; }
};

PChain p_leq(const Universe& u, const PCondition& p, const PCondition& q, std::size_t budget = 100000);
/// As p_leq with support equality at every direct step.
PChain p_leq_R(const Universe& u, const PCondition& p, const PCondition& q, std::size_t budget = 100000);
/// p ≤¹ q, with the block index k and the point ν̄ when it holds.
bool p_leq_one(const Universe& u, const PCondition& p, const PCondition& q, std::size_t* k = nullptr,
               SeqId* nu = nullptr);

/// r with q ≤* r ≤_R p. Throws PreconditionError unless q ≤ p.
PCondition factor(const Universe& u, const PCondition& q, const PCondition& p, std::size_t budget = 100000);

/// Members p of the pool for which q ⌢ p is a condition for some q ∈ P_ε̄.
/// With no candidates given, q ranges over the canonical conditions of ε̄'s system.
std::vector<PCondition> quotient_filter(const Universe& u, SystemId top, const std::vector<PCondition>& pool,
                                        SeqId eps, const std::vector<PCondition>& candidates = {});

}  // namespace flab
