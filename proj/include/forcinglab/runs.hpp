#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "forcinglab/checker.hpp"
#include "forcinglab/generic.hpp"
#include "forcinglab/instance_io.hpp"

namespace flab {

/// Settings shared by the batch checks. `cap` bounds every poset enumeration.
struct RunOptions {
  std::uint64_t seed = 0;
  std::size_t cap = 300;
  std::size_t antichain_cap = 100;  // maximal antichains per poset for prikry
  std::size_t subforcing_cap = 200000;
  std::size_t dense_sets = 4;       // random dense open sets per poset
  bool strict = false;
};

struct RunResult {
  Verdict verdict = Verdict::Yes;
  Json report;
};

/// Worst of two verdicts: No beats Unknown beats Yes.
Verdict combine(Verdict a, Verdict b);

/// FORCINGLAB_CAP when set to a positive number, else `fallback`.
std::size_t cap_from_env(std::size_t fallback);

/// The condition to check: the named one, or the canonical single block over
/// the top system with full support.
PCondition pick_condition(const Instance& inst, const std::optional<std::string>& name);

RunResult run_validate(const Instance& inst, const RunOptions& opt);
RunResult run_subforcing(const Instance& inst, const PCondition& root, const RunOptions& opt);
RunResult run_iso(const Instance& inst, const PCondition& root, const RunOptions& opt);
RunResult run_dichotomy(const Instance& inst, const PCondition& root, const RunOptions& opt);
RunResult run_homogeneity(const Instance& inst, const PCondition& root, const RunOptions& opt);
RunResult run_prikry(const Instance& inst, const PCondition& root, const RunOptions& opt);
/// skeleton_refine and fill_missing on the full trees of every top index.
RunResult run_lemmas(const Instance& inst, const RunOptions& opt);
RunResult run_simulate(const Instance& inst, std::size_t steps, Strategy strategy, const RunOptions& opt);

/// Dense open sets of a finite poset: the open closure of the minimal elements
/// together with a seeded random subset.
std::vector<DenseSet> random_dense_sets(const FinitePoset& inst, std::uint64_t seed, std::size_t count);

/// Canonical text form of a report: sorted keys, two-space indent, trailing newline.
std::string render(const Json& report);

}  // namespace flab
