#include "wsncalc/node_model.hpp"

#include <cmath>
#include <set>

#include "wsncalc/errors.hpp"

namespace wsncalc {

void NodeSpec::validate() const {
  if (!(rate > 0.0) || !std::isfinite(rate)) throw InvalidArgument("node '" + id + "' needs a positive service rate");
  if (!(latency >= 0.0) || !std::isfinite(latency)) throw InvalidArgument("node '" + id + "' needs a non-negative latency");
  std::set<std::string> seen;
  for (const auto& f : flows) {
    f.validate();
    if (!seen.insert(f.id).second) throw InvalidArgument("node '" + id + "' carries flow '" + f.id + "' twice");
  }
}

std::string_view to_string(Convention c) {
  return c == Convention::strict ? "strict" : "paper";
}

Convention parse_convention(std::string_view text) {
  if (text == "strict" || text == "strict_eq17") return Convention::strict;
  if (text == "paper" || text == "paper_numeric") return Convention::paper;
  throw InvalidArgument("unknown convention '" + std::string(text) + "' (expected strict or paper)");
}

NodeAggregate::NodeAggregate(const NodeSpec& node, const FractalConstants& consts) : node_(&node) {
  node.validate();
  per_flow_.reserve(node.flows.size());
  for (const auto& flow : node.flows) {
    TokenBucket sum;
    for (const auto& mf : flow.micro_flows) {
      auto tb = micro_flow_envelope(mf, consts).affine_bound();
      sum.rate += tb.rate;
      sum.burst += tb.burst;
      ++visits_;
    }
    per_flow_.push_back(sum);
    total_.rate += sum.rate;
    total_.burst += sum.burst;
  }
}

std::size_t NodeAggregate::index_of(std::string_view flow_id) const {
  for (std::size_t i = 0; i < node_->flows.size(); ++i) {
    if (node_->flows[i].id == flow_id) return i;
  }
  throw UnknownFlow(std::string(flow_id), node_->id);
}

StabilityReport NodeAggregate::stability() const {
  return {total_.rate < node_->rate, total_.rate, node_->rate};
}

ResidualService NodeAggregate::residual_at(std::size_t index, Convention conv) const {
  auto st = stability();
  if (!st) throw UnstableNode(node_->id, st.total_rate, st.service_rate);
  const auto& own = per_flow_[index];
  const double cross_rate = total_.rate - own.rate;
  const double cross_burst = total_.burst - own.burst;
  const double R = node_->rate;
  const double T = node_->latency;

  ResidualService out;
  out.flow_id = node_->flows[index].id;
  out.rate = R - cross_rate;
  out.theta = T + cross_burst / R;
  out.latency = conv == Convention::strict ? out.theta : T + total_.burst / R;
  return out;
}

ResidualService NodeAggregate::residual(std::string_view flow_id, Convention conv) const {
  return residual_at(index_of(flow_id), conv);
}

std::vector<ResidualService> NodeAggregate::residuals(Convention conv) const {
  std::vector<ResidualService> out;
  out.reserve(per_flow_.size());
  for (std::size_t i = 0; i < per_flow_.size(); ++i) out.push_back(residual_at(i, conv));
  return out;
}

StabilityReport stability_check(const NodeSpec& node, const FractalConstants& consts) {
  return NodeAggregate(node, consts).stability();
}

ResidualService residual_service(const NodeSpec& node, std::string_view flow_id, Convention conv,
                                 const FractalConstants& consts) {
  return NodeAggregate(node, consts).residual(flow_id, conv);
}

}  // namespace wsncalc
