#include "wsncalc/qos_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "wsncalc/errors.hpp"

namespace wsncalc {

namespace {

const FlowSpec& find_flow(const PathScenario& path, std::string_view flow_id) {
  for (const auto& f : path.flows) {
    if (f.id == flow_id) return f;
  }
  throw UnknownFlow(std::string(flow_id), path.hops.empty() ? std::string("<path>") : path.hops.front().id);
}

// Residual curve and own envelope for a stable node, or nullopt when unstable.
struct NodeView {
  Curve envelope;
  ResidualService residual;
};

std::optional<NodeView> node_view(const NodeSpec& node, std::string_view flow_id, Convention conv,
                                  const FractalConstants& consts) {
  NodeAggregate agg(node, consts);
  const auto& flow = node.flows[agg.index_of(flow_id)];
  if (!agg.stability()) return std::nullopt;
  return NodeView{flow_envelope(flow, consts), agg.residual(flow_id, conv)};
}

Extended bandwidth_for_delay(const Curve& envelope, const Extended& delay) {
  if (delay.is_infinite()) return Extended::infinite();
  if (delay.value() > 0.0) return effective_bandwidth(envelope, delay.value());
  // Zero delay is only possible without a burst; the ratio tends to the rate.
  if (envelope.eval(0.0).value() > 0.0) return Extended::infinite();
  return envelope.final_slope();
}

double burst_share(double burst, double delay) { return burst > 0.0 ? burst / delay : 0.0; }

}  // namespace

Extended node_backlog_bound(const NodeSpec& node, std::string_view flow_id, Convention conv,
                            const FractalConstants& consts) {
  auto view = node_view(node, flow_id, conv, consts);
  if (!view) return Extended::infinite();
  return v_dev(view->envelope, view->residual.curve().to_curve());
}

Extended node_delay_bound(const NodeSpec& node, std::string_view flow_id, Convention conv,
                          const FractalConstants& consts) {
  auto view = node_view(node, flow_id, conv, consts);
  if (!view) return Extended::infinite();
  return h_dev(view->envelope, view->residual.curve().to_curve());
}

Extended node_effective_bandwidth_bound(const NodeSpec& node, std::string_view flow_id, Convention conv,
                                        const FractalConstants& consts) {
  auto view = node_view(node, flow_id, conv, consts);
  if (!view) return Extended::infinite();
  return bandwidth_for_delay(view->envelope, h_dev(view->envelope, view->residual.curve().to_curve()));
}

NodeBounds node_bounds(const NodeSpec& node, std::string_view flow_id, Convention conv,
                       const FractalConstants& consts) {
  NodeBounds out{std::string(flow_id), Extended::infinite(), Extended::infinite(), Extended::infinite()};
  auto view = node_view(node, flow_id, conv, consts);
  if (!view) return out;
  Curve service = view->residual.curve().to_curve();
  out.backlog = v_dev(view->envelope, service);
  out.delay = h_dev(view->envelope, service);
  out.effective_bandwidth = bandwidth_for_delay(view->envelope, out.delay);
  return out;
}

double node_backlog_at(const NodeSpec& node, std::string_view flow_id, Convention conv, double t,
                       const FractalConstants& consts) {
  if (!(t >= 0.0)) throw InvalidArgument("evaluation time must be non-negative");
  NodeAggregate agg(node, consts);
  const auto& own = agg.per_flow()[agg.index_of(flow_id)];
  auto residual = agg.residual(flow_id, conv);
  return own.burst + own.rate * t - residual.rate * (t - residual.latency);
}

std::string_view to_string(EeMode m) { return m == EeMode::literal ? "literal" : "aggregate"; }

EeMode parse_ee_mode(std::string_view text) {
  if (text == "literal") return EeMode::literal;
  if (text == "aggregate") return EeMode::aggregate;
  throw InvalidArgument("unknown effective-bandwidth mode '" + std::string(text) + "' (expected literal or aggregate)");
}

void PathScenario::validate() const {
  if (hops.empty()) throw InvalidArgument("a path needs at least one node");
  for (const auto& h : hops) {
    if (!(h.rate > 0.0) || !std::isfinite(h.rate)) throw InvalidArgument("node '" + h.id + "' needs a positive service rate");
    if (!(h.latency >= 0.0) || !std::isfinite(h.latency)) throw InvalidArgument("node '" + h.id + "' needs a non-negative latency");
  }
  if (fixed_delays.size() + 1 != hops.size() && fixed_delays.size() != hops.size()) {
    throw InvalidArgument("a path of " + std::to_string(hops.size()) + " nodes takes " +
                          std::to_string(hops.size() - 1) + " or " + std::to_string(hops.size()) +
                          " fixed delays, got " + std::to_string(fixed_delays.size()));
  }
  for (double d : fixed_delays) {
    if (!(d >= 0.0) || !std::isfinite(d)) throw InvalidArgument("fixed delays must be finite and non-negative");
  }
  if (flows.empty()) throw InvalidArgument("a path needs at least one flow");
  std::set<std::string> seen;
  for (const auto& f : flows) {
    f.validate();
    if (!seen.insert(f.id).second) throw InvalidArgument("duplicate flow id '" + f.id + "'");
  }
  if (!(constants.gamma > 0.0)) throw InvalidArgument("fractal gamma must be positive");
}

NodeSpec PathScenario::node(std::size_t index) const {
  const auto& h = hops.at(index);
  return {h.id, h.rate, h.latency, flows};
}

double PathScenario::fixed_delay_sum() const {
  return std::accumulate(fixed_delays.begin(), fixed_delays.end(), 0.0);
}

RateLatency path_service_curve(const PathScenario& path, std::string_view flow_id) {
  path.validate();
  find_flow(path, flow_id);
  double rate = std::numeric_limits<double>::infinity();
  double latency = 0.0;
  for (std::size_t i = 0; i < path.hops.size(); ++i) {
    NodeSpec node = path.node(i);
    auto residual = NodeAggregate(node, path.constants).residual(flow_id, path.convention);
    rate = std::min(rate, residual.rate);
    latency += residual.latency;
  }
  return {rate, latency + path.fixed_delay_sum()};
}

Curve path_service_curve_convolved(const PathScenario& path, std::string_view flow_id) {
  path.validate();
  find_flow(path, flow_id);
  std::optional<Curve> acc;
  for (std::size_t i = 0; i < path.hops.size(); ++i) {
    NodeSpec node = path.node(i);
    auto residual = NodeAggregate(node, path.constants).residual(flow_id, path.convention);
    Curve hop = residual.curve().to_curve();
    acc = acc ? convolve(*acc, hop) : hop;
  }
  return convolve(*acc, Curve::burst_delay(path.fixed_delay_sum()));
}

double path_delay_bound(const PathScenario& path, std::string_view flow_id) {
  RateLatency service = path_service_curve(path, flow_id);
  TokenBucket own = flow_affine_bound(find_flow(path, flow_id), path.constants);
  return path.hops.front().latency + own.burst / service.rate + service.latency;
}

double path_jitter_bound(const PathScenario& path, std::string_view flow_id) {
  return path_delay_bound(path, flow_id) - path.fixed_delay_sum();
}

double path_effective_bandwidth_bound(const PathScenario& path, std::string_view flow_id, EeMode mode) {
  const double delay = path_delay_bound(path, flow_id);
  const auto& flow = find_flow(path, flow_id);
  if (mode == EeMode::aggregate) {
    TokenBucket own = flow_affine_bound(flow, path.constants);
    return std::max(own.rate, burst_share(own.burst, delay));
  }
  double best = 0.0;
  for (const auto& mf : flow.micro_flows) {
    TokenBucket tb = micro_flow_envelope(mf, path.constants).affine_bound();
    best = std::max({best, tb.rate, burst_share(tb.burst, delay)});
  }
  return best;
}

PathBounds path_bounds(const PathScenario& path, std::string_view flow_id) {
  PathBounds out;
  out.flow_id = std::string(flow_id);
  out.delay = path_delay_bound(path, flow_id);
  out.fixed_delay_sum = path.fixed_delay_sum();
  out.jitter = out.delay - out.fixed_delay_sum;
  out.effective_bandwidth = path_effective_bandwidth_bound(path, flow_id, path.ee_mode);
  return out;
}

}  // namespace wsncalc
