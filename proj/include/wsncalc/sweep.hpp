#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wsncalc/curve.hpp"
#include "wsncalc/scenario.hpp"

namespace wsncalc {

// R: every node's service rate. T: every node's latency. d: every fixed delay.
// N: number of nodes (copies of the first node, N-1 copies of the first fixed
// delay). H: Hurst parameter of every fractal micro-flow. t: evaluation time
// of the bounded-time backlog Q(t).
enum class SweepParam { R, T, d, N, H, t };

std::string_view to_string(SweepParam p);
SweepParam parse_sweep_param(std::string_view text);

struct SweepRequest {
  SweepParam param = SweepParam::R;
  double from = 0.0;
  double to = 0.0;
  double step = 1.0;
  // When set, Q is the backlog at this time instead of its supremum.
  std::optional<double> eval_time;
  unsigned threads = 0;  // 0: hardware concurrency
};

// Node quantities refer to the first node of the path.
struct SweepRow {
  double value = 0.0;
  std::string flow_id;
  Extended backlog, delay, effective_bandwidth;
  Extended path_delay, jitter, path_effective_bandwidth;
};

// Rows sorted by parameter value, then flow id. An unstable point yields
// infinite entries rather than an error. Throws InvalidArgument for an empty
// or malformed range or a parameter the document does not support.
std::vector<SweepRow> sweep(const ScenarioDocument& doc, const SweepRequest& request);

// Header: <param>,flow_id,Q,D,e,DD,jitter,ee
std::string sweep_csv(SweepParam param, const std::vector<SweepRow>& rows);

// Evenly spaced values from..to inclusive (to within 1e-9 of a step).
std::vector<double> sweep_values(const SweepRequest& request);

}  // namespace wsncalc
