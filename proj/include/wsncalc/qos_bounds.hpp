#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "wsncalc/curve.hpp"
#include "wsncalc/node_model.hpp"
#include "wsncalc/regulators.hpp"

namespace wsncalc {

// Per-node bounds for one flow.
struct NodeBounds {
  std::string flow_id;
  Extended backlog;              // Q, Kb
  Extended delay;                // D, ms
  Extended effective_bandwidth;  // e, Mbps
};

// Backlog, delay and effective bandwidth return Extended::infinite() at an
// unstable node. They throw UnknownFlow for a flow absent from the node.
Extended node_backlog_bound(const NodeSpec& node, std::string_view flow_id, Convention conv,
                            const FractalConstants& consts = {});
Extended node_delay_bound(const NodeSpec& node, std::string_view flow_id, Convention conv,
                          const FractalConstants& consts = {});
Extended node_effective_bandwidth_bound(const NodeSpec& node, std::string_view flow_id, Convention conv,
                                        const FractalConstants& consts = {});
NodeBounds node_bounds(const NodeSpec& node, std::string_view flow_id, Convention conv,
                       const FractalConstants& consts = {});

// Backlog at a finite evaluation time t (no supremum): own envelope at t minus
// the unclamped residual line R'(t - T'). Used for bounded-time sweeps.
double node_backlog_at(const NodeSpec& node, std::string_view flow_id, Convention conv, double t,
                       const FractalConstants& consts = {});

enum class EeMode { literal, aggregate };

std::string_view to_string(EeMode m);
EeMode parse_ee_mode(std::string_view text);

struct Hop {
  std::string id;
  double rate = 0.0;     // Mbps
  double latency = 0.0;  // ms
};

// A tandem of nodes crossed in order by every flow of `flows`.
// fixed_delays holds either N-1 inter-node delays or N (the last one being
// the hop to the sink); all of them are summed into the fixed delay.
struct PathScenario {
  std::vector<Hop> hops;
  std::vector<double> fixed_delays;
  std::vector<FlowSpec> flows;
  Convention convention = Convention::paper;
  EeMode ee_mode = EeMode::aggregate;
  FractalConstants constants;

  // Throws InvalidArgument.
  void validate() const;
  NodeSpec node(std::size_t index) const;
  double fixed_delay_sum() const;
};

struct PathBounds {
  std::string flow_id;
  double delay = 0.0;                // DD, ms
  double jitter = 0.0;               // DD - fixed delay sum, ms
  double effective_bandwidth = 0.0;  // ee, Mbps
  double fixed_delay_sum = 0.0;      // D_c, ms
};

// rate = min_i R'_i, latency = sum_i T'_i + sum d. Throws UnstableNode.
RateLatency path_service_curve(const PathScenario& path, std::string_view flow_id);
// The same curve built by chaining convolutions of every residual curve and
// the burst-delay curve of the fixed delays.
Curve path_service_curve_convolved(const PathScenario& path, std::string_view flow_id);

// DD = T_1 + b_own / min R' + sum T' + sum d. Throws UnstableNode.
double path_delay_bound(const PathScenario& path, std::string_view flow_id);
double path_jitter_bound(const PathScenario& path, std::string_view flow_id);
double path_effective_bandwidth_bound(const PathScenario& path, std::string_view flow_id, EeMode mode);
PathBounds path_bounds(const PathScenario& path, std::string_view flow_id);

}  // namespace wsncalc
