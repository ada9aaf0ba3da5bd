#include "wsncalc/regulators.hpp"

#include <cmath>
#include <set>

#include "wsncalc/errors.hpp"

namespace wsncalc {

namespace {

// sigma * rate_coeff is in Kb per second; 1 Kb/s = 1e-3 Mbps.
constexpr double kKbPerSecondInMbps = 1e-3;

}  // namespace

MicroFlowSpec MicroFlowSpec::token_bucket(std::string id, double rate, double burst) {
  return {std::move(id), TokenBucketEnvelope{{{rate, burst}}}};
}

MicroFlowSpec MicroFlowSpec::fractal(std::string id, double mean_rate, double std_dev, double hurst) {
  return {std::move(id), FractalParams{mean_rate, std_dev, hurst}};
}

void FlowSpec::validate() const {
  if (micro_flows.empty()) throw InvalidArgument("flow '" + id + "' has no micro-flows");
  std::set<std::string> seen;
  for (const auto& mf : micro_flows) {
    if (!seen.insert(mf.id).second) {
      throw InvalidArgument("flow '" + id + "' has duplicate micro-flow id '" + mf.id + "'");
    }
  }
}

FractalCoefficients fractal_coefficients(double hurst, const FractalConstants& consts) {
  if (!(hurst > 0.5 && hurst < 1.0)) throw HurstOutOfRange(hurst);
  if (!(consts.gamma > 0.0)) throw InvalidArgument("fractal gamma must be positive");
  const double ratio = hurst / (1.0 - hurst);
  const double scale = 1.0 - hurst;
  return {scale * std::sqrt(2.0 * consts.gamma * std::pow(ratio, hurst - 1.0)),
          scale * std::sqrt(2.0 * consts.gamma * std::pow(ratio, hurst))};
}

TokenBucket fractal_to_token_bucket(const FractalParams& params, const FractalConstants& consts) {
  if (!(params.mean_rate >= 0.0) || !(params.std_dev >= 0.0)) {
    throw InvalidArgument("fractal mean rate and standard deviation must be non-negative");
  }
  auto c = fractal_coefficients(params.hurst, consts);
  return {params.mean_rate + params.std_dev * c.rate_coeff * kKbPerSecondInMbps,
          params.std_dev * c.burst_coeff};
}

TokenBucketEnvelope micro_flow_envelope(const MicroFlowSpec& mf, const FractalConstants& consts) {
  if (const auto* fp = std::get_if<FractalParams>(&mf.kind)) {
    return TokenBucketEnvelope{{fractal_to_token_bucket(*fp, consts)}};
  }
  const auto& env = std::get<TokenBucketEnvelope>(mf.kind);
  env.validate();
  return env;
}

Curve flow_envelope(const FlowSpec& flow, const FractalConstants& consts) {
  flow.validate();
  Curve out = micro_flow_envelope(flow.micro_flows.front(), consts).to_curve();
  for (std::size_t k = 1; k < flow.micro_flows.size(); ++k) {
    out = sum_of(out, micro_flow_envelope(flow.micro_flows[k], consts).to_curve());
  }
  return out;
}

TokenBucket flow_affine_bound(const FlowSpec& flow, const FractalConstants& consts) {
  flow.validate();
  TokenBucket sum;
  for (const auto& mf : flow.micro_flows) {
    auto tb = micro_flow_envelope(mf, consts).affine_bound();
    sum.rate += tb.rate;
    sum.burst += tb.burst;
  }
  return sum;
}

}  // namespace wsncalc
