#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "forcinglab/core.hpp"
#include "forcinglab/report.hpp"

namespace flab {

enum class FilterKind { General, PrincipalUltrafilter };

/// Generator-presented filter on a finite carrier. A set is measure one iff
/// it covers some generator.
struct FilterOracle {
  std::string name;
  SeqSet carrier;
  std::vector<SeqSet> generators;
  FilterKind kind = FilterKind::General;
};

struct ExtenderSequence {
  SeqId id = 0;
  Ordinal kappa;   // the label κ(μ̄)
  Ordinal kappa0;  // its first coordinate κ⁰(μ̄)
  std::vector<FilterId> measures;
  SystemId system = 0;

  std::size_t len() const { return measures.size(); }
};

/// One extender sequence system: equal-length sequences indexed by `indices`
/// (sorted by label, front is the distinguished minimum) and the projection
/// tables between them. Key (β, α) holds π_{β,α} for β ≥ α.
struct ExtenderSystem {
  std::string name;
  std::vector<SeqId> indices;
  std::map<std::pair<SeqId, SeqId>, std::map<SeqId, SeqId>> projections;
};

/// The whole finite world: every sequence, filter and system of an instance.
/// Lower systems are the systems the carriers of higher measures live in.
struct Universe {
  std::vector<ExtenderSequence> seqs;
  std::vector<std::string> names;
  std::vector<FilterOracle> filters;
  std::vector<ExtenderSystem> systems;
  SystemId top = 0;

  SystemId add_system(std::string name);
  FilterId add_filter(FilterOracle f);
  SeqId add_sequence(std::string name, Ordinal kappa, Ordinal kappa0,
                     std::vector<FilterId> measures, SystemId system);

  const ExtenderSequence& seq(SeqId id) const { return seqs.at(id); }
  const FilterOracle& filter(FilterId id) const { return filters.at(id); }
  const ExtenderSystem& system(SystemId id) const { return systems.at(id); }
  const std::string& name(SeqId id) const { return names.at(id); }
  std::optional<SeqId> find(const std::string& name) const;
  SeqId require(const std::string& name) const;
  std::optional<SystemId> find_system(const std::string& name) const;

  Ordinal kappa0(SeqId id) const { return seq(id).kappa0; }
  Ordinal kappa(SeqId id) const { return seq(id).kappa; }
  std::size_t len(SeqId id) const { return seq(id).len(); }
  SystemId system_of(SeqId id) const { return seq(id).system; }

  SeqId min_index(SystemId s) const { return system(s).indices.front(); }
  /// κ⁰ shared by every index of the system.
  Ordinal system_kappa0(SystemId s) const { return kappa0(min_index(s)); }
  std::size_t system_len(SystemId s) const { return len(min_index(s)); }
  /// β ≥ α inside one system (label order).
  bool index_geq(SeqId beta, SeqId alpha) const;
  /// The first coordinate (x)⁰: the minimal index of x's system.
  SeqId first_coordinate(SeqId x) const { return min_index(system_of(x)); }

  /// Union of the carriers of all measures of `id`.
  SeqSet measure_carrier(SeqId id) const;

 private:
  std::unordered_map<std::string, SeqId> by_name_;
};

std::string tag_name(const Universe& u, Tag t);
/// κ⁰ of a tag; the empty tag sits below every ordinal.
std::optional<Ordinal> tag_kappa0(const Universe& u, Tag t);

// --- measure-one oracles -----------------------------------------------------

/// True iff A covers a generator of F. Elements of A outside the carrier are a
/// domain error.
bool filter_member(const FilterOracle& f, const SeqSet& a);

enum class Largeness { Large, Small, Exhausted };

/// Largeness of A for F relative to a floor: only carrier points with
/// κ⁰ above the floor count. Exhausted means no generator has a point there.
Largeness large_above(const Universe& u, const FilterOracle& f, const SeqSet& a,
                      std::optional<Ordinal> floor);

/// A ∈ μ̄: A (restricted to each carrier) is measure one for every measure.
/// Throws DomainError for sequences of length 0.
bool seq_member(const Universe& u, const ExtenderSequence& mu, const SeqSet& a);

// --- projections ---------------------------------------------------------------

/// π_{β,α}(ν̄) as a pool id. Identity when β = α and no table is stored.
SeqId project_id(const Universe& u, SeqId beta, SeqId alpha, SeqId nu);
const ExtenderSequence& project(const Universe& u, SeqId beta, SeqId alpha, SeqId nu);

// --- orders on tuples ----------------------------------------------------------

bool is_zero_increasing(const Universe& u, std::span<const SeqId> seqs);
/// ν̄ is permitted to `tail` (vacuous for the empty tail).
bool permitted(const Universe& u, SeqId nu, std::span<const SeqId> tail);
/// ν̄ permitted to a single tag; the empty tag permits everything.
bool permitted_to_tag(const Universe& u, SeqId nu, Tag tag);

// --- validation and generation ---------------------------------------------------

ValidationReport validate_filter(const Universe& u, FilterId f);
ValidationReport validate_system(const Universe& u, SystemId s);
/// Every filter, every sequence and every system of the universe.
ValidationReport validate_universe(const Universe& u);

enum class MeasureMode { Principal, General, Mixed };

struct GenParams {
  unsigned indices = 2;  // indices of the top system
  unsigned length = 1;   // len(Ē)
  unsigned levels = 2;   // κ⁰ levels below the top
  unsigned width = 2;    // members of every lower system
  MeasureMode mode = MeasureMode::Principal;
};

/// Deterministic per (seed, params). The result passes validate_universe.
Universe generate_instance(std::uint64_t seed, const GenParams& params);

/// Label scale used by the generator: κ⁰ of level l is 10·l.
constexpr std::uint32_t kLevelStride = 10;

}  // namespace flab
