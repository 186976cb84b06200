#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "forcinglab/trees.hpp"

namespace flab {

struct RadinBlock {
  SeqId seq = 0;
  Tag tag;
  ETree tree;
  friend bool operator==(const RadinBlock&, const RadinBlock&) = default;
};

/// blocks[0] is the block of Ē_α; higher indices sit lower in κ⁰.
struct RadinCondition {
  std::vector<RadinBlock> blocks;
  friend bool operator==(const RadinCondition&, const RadinCondition&) = default;
};

/// ⟨⟨Ē_α, ⟨⟩⟩, T⟩
RadinCondition radin_base(SeqId alpha, ETree t);

std::string radin_key(const RadinCondition& p);
/// Block sequences and tags only.
std::string radin_shape(const RadinCondition& p);
bool same_shape(const RadinCondition& p, const RadinCondition& q);
std::string radin_name(const Universe& u, const RadinCondition& p);

ValidationReport validate_radin(const Universe& u, SeqId alpha, const RadinCondition& p);

/// p ≤* q. Different block counts or sequences are a DomainError.
bool radin_leq_star(const Universe& u, const RadinCondition& p, const RadinCondition& q);

/// (q)_⟨ν̄⟩ taken in block i. Throws DomainError unless ν̄ ∈ Lev_0 of that tree.
RadinCondition radin_extend_one(const RadinCondition& q, std::size_t i, SeqId nu);
/// (q)_⟨ν̄₁,…,ν̄ₙ⟩: successive extensions in block 0.
RadinCondition radin_extend_path(const RadinCondition& q, const TreePath& path);

/// Every condition reachable from q by one-point extensions alone (q included).
/// Throws CapExceeded past `cap`.
std::vector<RadinCondition> radin_descendants(const RadinCondition& q, std::size_t cap);

struct RadinChain {
  Verdict verdict = Verdict::No;
  /// p = chain.front() ≤¹ … ≤¹ chain.back() = q when the verdict is Yes; a
  /// single entry means p ≤* q.
  std::vector<RadinCondition> chain;
  std::size_t length() const { return chain.empty() ? 0 : chain.size() - 1; }
};

/// p ≤ q with a witness chain. Unknown once `budget` conditions were expanded.
RadinChain radin_leq(const Universe& u, const RadinCondition& p, const RadinCondition& q,
                     std::size_t budget = 100000);

/// Stand-in for j(T): supplies the reflected tree and the index functions used
/// by fill_missing. Throwing PreconditionError is a refusal.
class ReflectionOracle {
 public:
  virtual ~ReflectionOracle() = default;
  /// The tree S read off j(T) at Ē_α↾ξ₀.
  virtual ETree reflect(const Universe& u, SeqId alpha, const ETree& t, std::size_t xi0) const = 0;
  /// h_ξ(μ̄): which measure of μ̄ should see Lev_0(T).
  virtual std::optional<std::size_t> index(const Universe& u, std::size_t xi, SeqId mu,
                                           std::size_t xi0) const = 0;
};

/// Reflects at the point of Lev_0(T) that lies in every generator of E_α(ξ₀)
/// (highest κ⁰ first) and returns its attached tree; h_ξ(μ̄) = ξ₀.
class DefaultOracle : public ReflectionOracle {
 public:
  ETree reflect(const Universe& u, SeqId alpha, const ETree& t, std::size_t xi0) const override;
  std::optional<std::size_t> index(const Universe& u, std::size_t xi, SeqId mu,
                                   std::size_t xi0) const override;
};

/// Tree surgery completing a tree whose Lev_0 is measure one only for E_α(ξ₀).
/// Returns T unchanged when Lev_0(T) is already measure one everywhere.
ETree fill_missing(const Universe& u, SeqId alpha, const ETree& t, std::size_t xi0,
                   const ReflectionOracle& oracle, std::optional<Ordinal> floor = std::nullopt);

/// T* ≤ T closing T under reordered insertions, level by level up to `depth`.
ETree skeleton_refine(const Universe& u, SeqId alpha, const ETree& t, std::size_t depth,
                      std::optional<Ordinal> floor = std::nullopt);

}  // namespace flab
