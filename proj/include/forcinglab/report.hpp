#pragma once

#include <algorithm>
#include <string>
#include <vector>

namespace flab {

enum class ClauseStatus { Pass, Fail, Warn, NotApplicable };

inline const char* to_string(ClauseStatus s) {
  switch (s) {
    case ClauseStatus::Pass:
      return "pass";
    case ClauseStatus::Fail:
      return "fail";
    case ClauseStatus::Warn:
      return "warn";
    case ClauseStatus::NotApplicable:
      return "n/a";
  }
  return "?";
}

struct ClauseResult {
  std::string clause;
  ClauseStatus status = ClauseStatus::Pass;
  std::string witness;
};

/// Clause-by-clause outcome of a validator. Failures carry a witness.
class ValidationReport {
 public:
  void pass(std::string clause) { entries_.push_back({std::move(clause), ClauseStatus::Pass, {}}); }
  void fail(std::string clause, std::string witness) {
    entries_.push_back({std::move(clause), ClauseStatus::Fail, std::move(witness)});
  }
  void warn(std::string clause, std::string witness) {
    entries_.push_back({std::move(clause), ClauseStatus::Warn, std::move(witness)});
  }
  void not_applicable(std::string clause, std::string why) {
    entries_.push_back({std::move(clause), ClauseStatus::NotApplicable, std::move(why)});
  }
  /// Records pass for `clause` unless a failure with that name was already recorded.
  void settle(const std::string& clause) {
    if (!failed(clause)) pass(clause);
  }

  void merge(const ValidationReport& other, const std::string& prefix = {}) {
    for (const auto& e : other.entries_) entries_.push_back({prefix + e.clause, e.status, e.witness});
  }

  bool ok() const {
    for (const auto& e : entries_)
      if (e.status == ClauseStatus::Fail) return false;
    return true;
  }
  bool failed(const std::string& clause) const {
    for (const auto& e : entries_)
      if (e.status == ClauseStatus::Fail && e.clause == clause) return true;
    return false;
  }
  std::vector<std::string> failed_clauses() const {
    std::vector<std::string> out;
    for (const auto& e : entries_)
      if (e.status == ClauseStatus::Fail &&
          std::find(out.begin(), out.end(), e.clause) == out.end())
        out.push_back(e.clause);
    return out;
  }
  const std::vector<ClauseResult>& entries() const { return entries_; }

 private:
  std::vector<ClauseResult> entries_;
};

}  // namespace flab
