#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "forcinglab/pforcing.hpp"
#include "forcinglab/radin.hpp"

namespace flab {

/// Outcome of an exhaustive lemma check. Unknown when the enumeration hit its cap.
struct LemmaReport {
  Verdict verdict = Verdict::Yes;
  std::size_t checked = 0;
  std::vector<std::string> counterexamples;
};

/// T* ≤ T, and every extension of ⟨⟨Ē_α,⟨⟩⟩,T*⟩ is a direct extension of
/// (⟨⟨Ē_α,⟨⟩⟩,T⟩)_⟨ν̄₁,…,ν̄ₙ⟩ for a path of T.
LemmaReport verify_skeleton(const Universe& u, SeqId alpha, const ETree& t, const ETree& tstar,
                            std::size_t cap = 100000);

/// Both conclusions of the fill-missing construction: T* stays below T at the
/// common points of Lev_0, and every extension of ⟨⟨Ē_α,⟨⟩⟩,T*⟩ is compatible
/// with a one-point extension by some μ̄ ∈ Lev_0(T*) ∩ Lev_0(T).
LemmaReport verify_fill_missing(const Universe& u, SeqId alpha, const ETree& t, const ETree& tstar,
                                std::size_t cap = 100000);

// --- finite posets ---------------------------------------------------------------

/// Square boolean matrix, row i holds the j with i R j.
class Relation {
 public:
  Relation() = default;
  explicit Relation(std::size_t n) : n_(n), words_((n + 63) / 64), bits_(n * words_, 0) {}
  std::size_t size() const { return n_; }
  bool operator()(std::size_t i, std::size_t j) const { return (bits_[i * words_ + j / 64] >> (j % 64)) & 1U; }
  void set(std::size_t i, std::size_t j, bool v = true) {
    auto& w = bits_[i * words_ + j / 64];
    const std::uint64_t m = std::uint64_t{1} << (j % 64);
    w = v ? (w | m) : (w & ~m);
  }
  /// Row i ⊆ row j.
  bool row_subset(std::size_t i, std::size_t j) const;
  /// Rows i and j share a column.
  bool rows_meet(std::size_t i, std::size_t j) const;
  void or_row(std::size_t into, std::size_t from) { or_row(into, *this, from); }
  /// Row `into` |= row `from` of `other` (same size).
  void or_row(std::size_t into, const Relation& other, std::size_t from);
  std::vector<std::size_t> row(std::size_t i) const;
  Relation transposed() const;
  /// a ⊆ b as sets of pairs.
  friend bool included(const Relation& a, const Relation& b);

 private:
  std::size_t n_ = 0, words_ = 0;
  std::vector<std::uint64_t> bits_;
};

struct PosetBounds {
  std::size_t cap = 2000;
  bool prune = true;           // drop one node of a block tree
  bool grow_support = true;    // add an index below mc to a block whose tags are all empty
};

/// Every condition reachable from `root` by one-point extensions and the moves
/// `bounds` enables, with the orders cached. Rows are the smaller side:
/// leq(p, q) means p ≤ q.
struct FinitePoset {
  std::vector<PCondition> elems;
  std::unordered_map<std::string, std::size_t> index;
  std::vector<std::vector<std::size_t>> ext;  // one-point extensions
  Relation leq_star, leq_star_R, leq, leq_R;

  std::size_t size() const { return elems.size(); }
  std::optional<std::size_t> find(const PCondition& p) const;
};

/// Throws CapExceeded past bounds.cap.
FinitePoset enumerate_poset(const Universe& u, const PCondition& root, const PosetBounds& bounds = {});
/// Root: the canonical single-block condition with support {min Ē}.
FinitePoset enumerate_poset(const Universe& u, const PosetBounds& bounds = {});

/// Compares the cached relations with p_leq_star, p_leq, p_leq_R on every pair,
/// or on `max_pairs` seeded pairs when there are more.
ValidationReport audit_poset(const Universe& u, const FinitePoset& inst, std::size_t max_pairs = 0,
                             std::uint64_t seed = 0);
/// Reflexivity and transitivity of ≤*, ≤, ≤_R; ≤*_R ⊆ ≤*; ≤_R ⊆ ≤; ≤* ⊆ ≤.
ValidationReport check_order_laws(const FinitePoset& inst);

/// Radin conditions below a root, closed under one-point extension and pruning.
struct RadinPoset {
  std::vector<RadinCondition> elems;
  std::unordered_map<std::string, std::size_t> index;
  std::vector<std::vector<std::size_t>> ext;
  Relation leq_star, leq;

  std::size_t size() const { return elems.size(); }
  std::optional<std::size_t> find(const RadinCondition& p) const;
};

RadinPoset enumerate_radin(const Universe& u, SeqId alpha, const RadinCondition& root, const PosetBounds& bounds = {});

// --- claims ------------------------------------------------------------------------

struct ClaimReport {
  Verdict verdict = Verdict::Yes;
  std::size_t checked = 0;
  std::vector<std::string> counterexamples;
  std::vector<std::string> notes;
};

/// Elements below `p` in `rel` (p included).
std::vector<std::size_t> below(const Relation& rel, std::size_t p);
/// Common lower bound inside `among`.
bool compatible(const Relation& rel, const std::vector<std::size_t>& among, std::size_t a, std::size_t b);
/// Maximal antichains of `rel` restricted to `among`, at most `cap` of them.
/// `complete` is cleared when the cap cut the enumeration short.
std::vector<std::vector<std::size_t>> maximal_antichains(const Relation& rel, const std::vector<std::size_t>& among,
                                                         std::size_t cap, bool* complete = nullptr);

/// Every maximal antichain of ({q ≤_R p}, ≤_R) is maximal in ({q ≤ p}, ≤).
ClaimReport check_subforcing(const Universe& u, const FinitePoset& inst, std::size_t p,
                             std::size_t antichain_cap = 1000);

struct IsoReport {
  ClaimReport report;
  RadinCondition r;
  std::vector<std::pair<std::size_t, std::size_t>> pairing;  // poset index, radin index
};
/// {q ≤_R p} against R_mc(p)/r for a single-block p, both enumerated from their
/// roots; bijectivity and order preservation checked on every pair.
IsoReport radin_iso(const Universe& u, const PCondition& p, const PosetBounds& bounds = {});
RadinCondition radin_image(const Universe& u, const PCondition& q);

/// Subset of an instance given by membership flags.
using DenseSet = std::vector<bool>;

/// Open (closed downwards under ≤) and dense (below every element) inside the instance.
ValidationReport check_dense_open(const FinitePoset& inst, const DenseSet& d);
/// Smallest open set holding `seed_members`.
DenseSet open_closure(const FinitePoset& inst, const DenseSet& seed_members);

struct DichotomyResult {
  Verdict verdict = Verdict::No;  // Yes when some p* ≤* p satisfies exactly one branch
  int branch = 0;                 // 1 or 2
  std::optional<std::size_t> pstar;
  ETree s;                        // branch 1: the n-level tree
  bool both = false;              // some p* satisfied both branches
  std::size_t tried = 0;
};
/// The canonical dichotomy for a single-block p and n ≥ 1. Throws
/// PreconditionError when D is not dense open.
DichotomyResult check_canon_dichotomy(const Universe& u, const FinitePoset& inst, const DenseSet& d, std::size_t p,
                                      std::size_t n);

struct HomogeneityResult {
  Verdict verdict = Verdict::No;
  std::optional<std::size_t> pstar;
  std::vector<std::size_t> n;  // n_k … n_0 on the first branch found, by block index
};
/// Searches p* ≤* p with per-block trees S^i and lengths n_i landing every
/// combined extension in D. Unknown when `max_evals` runs out.
HomogeneityResult check_dense_homogeneity(const Universe& u, const FinitePoset& inst, const DenseSet& d,
                                          std::size_t p, std::size_t max_evals = 1000000);

struct Labeling {
  std::vector<std::size_t> antichain;
  std::vector<bool> sigma;  // label per antichain member
};

struct PrikryResult {
  Verdict verdict = Verdict::No;
  std::optional<std::size_t> pstar;
  bool direct = false;  // the witness is ≤* p
};
/// Throws DomainError unless the labeling is a maximal antichain of the instance
/// with one label per member.
void check_labeling(const FinitePoset& inst, const Labeling& sigma);
/// p* ≤ p deciding σ: all antichain members compatible with p* share one label.
/// ≤*-witnesses are preferred.
PrikryResult check_prikry(const FinitePoset& inst, const Labeling& sigma, std::size_t p);
/// The same for every labeling of the antichain at once: Yes iff no labeling
/// leaves p without a decider. Unknown past 20 members when it has to search.
PrikryResult check_prikry_all(const FinitePoset& inst, const std::vector<std::size_t>& antichain, std::size_t p);

}  // namespace flab
