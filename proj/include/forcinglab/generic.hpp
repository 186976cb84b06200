#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "forcinglab/pforcing.hpp"

namespace flab {

/// A finite ≤-decreasing run of conditions standing in for a generic filter.
/// witness[i] is the chain from steps[i] up to steps[i-1]; witness[0] is empty.
struct GenericChain {
  std::vector<PCondition> steps;
  std::vector<PChain> witness;
};

struct ClubSequence {
  SeqId alpha = 0;
  SeqSet m;
  std::vector<Ordinal> c;  // κ of every member of m, sorted
};

/// Appends `next`; throws DomainError unless next ≤ the last step.
void push_step(const Universe& u, GenericChain& g, PCondition next);
/// Re-checks every consecutive pair with p_leq.
ValidationReport validate_chain(const Universe& u, const GenericChain& g);

/// Block systems over every step, sorted by κ⁰, without repeats.
std::vector<SystemId> ebar_G(const Universe& u, const GenericChain& g);

struct ChainSplit {
  GenericChain below;  // p_n ⌢ … ⌢ p_k
  GenericChain above;  // p_{k-1} ⌢ … ⌢ p_0
};
/// Splits every step holding a block over Ē_G(ζ) at that block. Steps without
/// it are dropped. Throws DomainError when ζ is out of range.
ChainSplit restrict_G(const Universe& u, const GenericChain& g, std::size_t zeta);

/// M^ᾱ and C^ᾱ, chasing tags inside the chain.
ClubSequence club(const Universe& u, const GenericChain& g, SeqId alpha);
/// Flags pairs of one system, both in some support, whose C below their own κ
/// are equal and nonempty.
ValidationReport distinct_clubs(const Universe& u, const GenericChain& g);

enum class Strategy { Random, Greedy };

/// Starts at the canonical condition with full top support and takes up to
/// `steps` one-point extensions, stopping early when none is left. Random picks
/// a move from a seeded generator; Greedy takes the first move in block and
/// point order.
GenericChain simulate(const Universe& u, std::uint64_t seed, std::size_t steps,
                      Strategy strategy = Strategy::Random);

}  // namespace flab
