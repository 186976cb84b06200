#pragma once

#include <map>
#include <string>

#include <json.hpp>

#include "forcinglab/pforcing.hpp"
#include "forcinglab/radin.hpp"

namespace flab {

using Json = nlohmann::json;

inline constexpr const char* kInstanceSchema = "instance-v1";

struct NamedRadin {
  SeqId alpha = 0;
  RadinCondition cond;
};

/// Everything an instance file can hold. Objects are keyed by their name in the file.
struct Instance {
  Universe u;
  std::map<std::string, ETree> trees;
  std::map<std::string, NamedRadin> radin_conditions;
  std::map<std::string, PCondition> p_conditions;
};

Json universe_to_json(const Universe& u);
/// Throws ConfigError on unknown names, duplicates or missing keys.
Universe universe_from_json(const Json& j);

Json tree_to_json(const Universe& u, const ETree& t);
ETree tree_from_json(const Universe& u, const Json& j);
Json radin_to_json(const Universe& u, const RadinCondition& r);
RadinCondition radin_from_json(const Universe& u, const Json& j);
Json pcondition_to_json(const Universe& u, const PCondition& p);
PCondition pcondition_from_json(const Universe& u, const Json& j);

Json instance_to_json(const Instance& inst);
Instance instance_from_json(const Json& j);

/// Throws std::runtime_error when the file cannot be read or parsed.
Instance read_instance(const std::string& path);
void write_text(const std::string& path, const std::string& text);

Json report_to_json(const ValidationReport& r);

// --- DOT ---------------------------------------------------------------------------

/// One digraph; node labels are "κ⁰/κ/len", attached trees are dashed clusters.
/// An empty tree renders as its owner alone.
std::string tree_dot(const Universe& u, const ETree& t);
/// Blocks left to right as clusters with a support table each.
std::string pcondition_dot(const Universe& u, const PCondition& p);
std::string radin_dot(const Universe& u, const RadinCondition& r);

}  // namespace flab
