#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "wsncalc/node_model.hpp"
#include "wsncalc/qos_bounds.hpp"
#include "wsncalc/regulators.hpp"

namespace wsncalc {

inline constexpr std::string_view kScenarioVersion = "wsncalc/1";
inline constexpr std::string_view kToolVersion = "0.1.0";

// Units a document was written in. Values inside ScenarioDocument are always
// stored in canonical units (Mbps, Kb, ms).
struct Units {
  std::string rate = "Mbps";  // Kbps | Mbps
  std::string data = "Kb";    // Kb | Mb
  std::string time = "ms";    // ms | s

  // Convert a value written in these units to canonical units.
  double rate_in_mbps(double v) const;
  double data_in_kb(double v) const;
  double time_in_ms(double v) const;
};

struct ScenarioDocument {
  std::string version{kScenarioVersion};
  std::string name;
  Units units;  // as declared in the source text
  std::vector<Hop> nodes;
  std::vector<FlowSpec> flows;
  std::vector<std::string> path;  // node ids in traversal order
  std::vector<double> fixed_delays;
  Convention convention = Convention::paper;
  EeMode ee_mode = EeMode::aggregate;
  FractalConstants constants;

  PathScenario to_path_scenario() const;
};

// Throws ScenarioError with a "line L, column C" location for malformed JSON
// and a JSON-pointer location for schema, id, unit and Hurst errors.
ScenarioDocument parse_scenario(std::string_view text);
ScenarioDocument load_scenario_file(const std::filesystem::path& file);

// Canonical text: canonical units, fixed key order, two-space indent.
std::string serialize_scenario(const ScenarioDocument& doc);

struct ExpectedValue {
  std::string flow_id;
  std::string quantity;  // "D", "e" (first node) or "DD", "jitter", "ee" (path)
  double value;
  double tolerance;
};

struct BuiltinScenario {
  std::string name;
  std::string description;
  std::string text;  // scenario document
  std::vector<ExpectedValue> expected;
};

const std::vector<BuiltinScenario>& builtin_scenarios();
// Throws InvalidArgument for an unknown name.
const BuiltinScenario& builtin_scenario(std::string_view name);

}  // namespace wsncalc
