#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "wsncalc/curve.hpp"
#include "wsncalc/regulators.hpp"

namespace wsncalc {

// A sensor node: rate-latency server shared by the flows of its buffers.
struct NodeSpec {
  std::string id;
  double rate = 0.0;     // R, Mbps
  double latency = 0.0;  // T, ms
  std::vector<FlowSpec> flows;

  // Throws InvalidArgument when R <= 0, T < 0, flow ids collide or a flow is degenerate.
  void validate() const;
};

// How the latency term of a flow's residual service is formed.
//   strict: cross-traffic bursts only, T' = T + sum_{k != i} b_k / R
//   paper:  all bursts at the node (own flow included), T' = T + sum_k b_k / R
// The rate term R' = R - sum_{k != i} r_k is the same under both.
enum class Convention { strict, paper };

std::string_view to_string(Convention c);
// Accepts "strict"/"strict_eq17" and "paper"/"paper_numeric".
Convention parse_convention(std::string_view text);

struct StabilityReport {
  bool stable = true;
  double total_rate = 0.0;    // Mbps, every micro-flow of every flow
  double service_rate = 0.0;  // Mbps

  explicit operator bool() const { return stable; }
};

StabilityReport stability_check(const NodeSpec& node, const FractalConstants& consts = {});

struct ResidualService {
  std::string flow_id;
  double rate = 0.0;     // R', Mbps
  double latency = 0.0;  // T', ms
  double theta = 0.0;    // T + cross bursts / R, ms

  RateLatency curve() const { return {rate, latency}; }
};

// Per-flow affine sums at one node, built in a single pass over every
// micro-flow so that all n residual curves cost O(c n) parameter visits.
class NodeAggregate {
 public:
  NodeAggregate(const NodeSpec& node, const FractalConstants& consts = {});

  const NodeSpec& node() const { return *node_; }
  const std::vector<TokenBucket>& per_flow() const { return per_flow_; }
  const TokenBucket& total() const { return total_; }
  std::size_t parameter_visits() const { return visits_; }
  std::size_t index_of(std::string_view flow_id) const;  // throws UnknownFlow

  StabilityReport stability() const;
  // Throws UnstableNode or UnknownFlow.
  ResidualService residual(std::string_view flow_id, Convention conv) const;
  std::vector<ResidualService> residuals(Convention conv) const;

 private:
  ResidualService residual_at(std::size_t index, Convention conv) const;

  const NodeSpec* node_;
  std::vector<TokenBucket> per_flow_;
  TokenBucket total_;
  std::size_t visits_ = 0;
};

ResidualService residual_service(const NodeSpec& node, std::string_view flow_id, Convention conv,
                                 const FractalConstants& consts = {});

}  // namespace wsncalc
