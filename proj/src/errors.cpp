#include "wsncalc/errors.hpp"

#include <cstdio>
#include <utility>

namespace wsncalc {

namespace {

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

}  // namespace

HurstOutOfRange::HurstOutOfRange(double hurst)
    : Error("Hurst parameter " + format_double(hurst) + " outside the open interval (0.5, 1)"),
      hurst_(hurst) {}

UnstableNode::UnstableNode(std::string node_id, double total_rate, double service_rate)
    : Error("node '" + node_id + "' is unstable: total arrival rate " + format_double(total_rate) +
            " Mbps is not below service rate " + format_double(service_rate) + " Mbps"),
      node_id_(std::move(node_id)),
      total_rate_(total_rate),
      service_rate_(service_rate) {}

UnknownFlow::UnknownFlow(const std::string& flow_id, const std::string& node_id)
    : Error("flow '" + flow_id + "' does not traverse node '" + node_id + "'") {}

StepMismatch::StepMismatch(double lhs, double rhs)
    : Error("grid steps differ: " + format_double(lhs) + " vs " + format_double(rhs)) {}

HorizonTooShort::HorizonTooShort(const std::string& what, double suggested_factor)
    : Error(what + "; try a horizon factor of at least " + format_double(suggested_factor)),
      suggested_factor_(suggested_factor) {}

ScenarioError::ScenarioError(std::string location, const std::string& message)
    : Error(location + ": " + message), location_(std::move(location)) {}

}  // namespace wsncalc
