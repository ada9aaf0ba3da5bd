#pragma once

#include <string>
#include <vector>

#include "wsncalc/qos_bounds.hpp"
#include "wsncalc/scenario.hpp"

namespace wsncalc {

struct ValidationOptions {
  double grid_step = 0.05;      // ms
  double horizon_factor = 4.0;  // horizon = factor x largest delay bound
  // Multiplies every closed-form bound before comparison; values below 1 are
  // a self-test of the harness and must make validation fail.
  double bound_scale = 1.0;
  unsigned threads = 0;  // 0: hardware concurrency
};

// One closed-form bound against its sampled counterparts.
//   grid:      the same deviation computed on the sampled curves
//   simulated: the greedy source through the sampled service (worst case)
// A check passes when the simulation does not exceed the bound by more than
// `tolerance` and, if `expect_tight`, the grid value is within `tolerance`
// of the bound.
struct ValidationCheck {
  std::string where;     // node id or "path"
  std::string flow_id;
  std::string quantity;  // Q, D, e, DD
  double bound = 0.0;
  double grid = 0.0;
  double simulated = 0.0;
  double tolerance = 0.0;
  bool expect_tight = true;
  bool passed = false;

  double margin() const { return bound - simulated; }
};

struct ValidationReport {
  std::string scenario_name;
  ValidationOptions options;
  double node_horizon = 0.0;  // ms
  double path_horizon = 0.0;  // ms
  std::vector<ValidationCheck> checks;

  bool passed() const;
};

// Throws UnstableNode, or HorizonTooShort carrying a suggested horizon factor.
ValidationReport validate(const PathScenario& path, const ValidationOptions& options = {},
                          const std::string& name = {});
ValidationReport validate(const ScenarioDocument& doc, const ValidationOptions& options = {});

std::string render_validation(const ValidationReport& report);

// Mean absolute difference between the grid and the closed-form node backlog
// (Kb) and delay (ms) over every node and flow of a stable path.
struct GridError {
  double backlog = 0.0;
  double delay = 0.0;
  std::size_t count = 0;
};
GridError node_grid_error(const PathScenario& path, double step, double horizon_factor = 4.0);

}  // namespace wsncalc
