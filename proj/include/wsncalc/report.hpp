#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wsncalc/node_model.hpp"
#include "wsncalc/qos_bounds.hpp"
#include "wsncalc/scenario.hpp"

namespace wsncalc {

enum class Scope { node, path, all };
enum class ReportFormat { table, csv, json };

std::string_view to_string(Scope s);
Scope parse_scope(std::string_view text);
std::string_view to_string(ReportFormat f);
ReportFormat parse_report_format(std::string_view text);

struct NodeReport {
  std::string node_id;
  StabilityReport stability;
  std::vector<NodeBounds> bounds;  // one per flow, document order
};

struct BoundsReport {
  std::string tool_version{kToolVersion};
  std::string scenario_name;
  Convention convention = Convention::paper;
  EeMode ee_mode = EeMode::aggregate;
  Scope scope = Scope::all;
  std::vector<NodeReport> nodes;  // empty for path scope
  std::vector<PathBounds> path;   // empty for node scope
};

// Evaluates every flow at every node of the path and/or along the path.
// `convention` overrides the document's. Throws UnstableNode naming the first
// unstable node on the path.
BoundsReport run_report(const ScenarioDocument& doc, Scope scope,
                        std::optional<Convention> convention = std::nullopt);

// Four significant digits, fixed notation: 58.90, 489.6, 0.5227. Rounds the
// binary value as printf does, so exact ties go to even. Infinite prints "inf".
std::string format_sig4(double v);
std::string format_sig4(const Extended& v);

std::string render_table(const BoundsReport& r);
// Long format: scope,node,flow_id,quantity,value,unit
std::string render_csv(const BoundsReport& r);
std::string render_json(const BoundsReport& r);
std::string render(const BoundsReport& r, ReportFormat format);

}  // namespace wsncalc
