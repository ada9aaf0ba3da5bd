#pragma once

#include <string>
#include <variant>
#include <vector>

#include "wsncalc/curve.hpp"

namespace wsncalc {

// Self-similar micro-flow statistics.
struct FractalParams {
  double mean_rate = 0.0;  // m, Mbps
  double std_dev = 0.0;    // sigma, Kb
  double hurst = 0.75;     // H, strictly inside (0.5, 1)
};

struct FractalConstants {
  double gamma = 6.0;
};

struct MicroFlowSpec {
  std::string id;
  // A plain TokenBucketEnvelope with one piece is the usual leaky bucket.
  std::variant<TokenBucketEnvelope, FractalParams> kind;

  static MicroFlowSpec token_bucket(std::string id, double rate, double burst);
  static MicroFlowSpec fractal(std::string id, double mean_rate, double std_dev, double hurst);

  bool is_fractal() const { return std::holds_alternative<FractalParams>(kind); }
};

struct FlowSpec {
  std::string id;
  std::vector<MicroFlowSpec> micro_flows;

  // Throws InvalidArgument on an empty flow or duplicate micro-flow ids.
  void validate() const;
};

// Dimensionless coefficients of the fractal mapping for a given H:
//   rate  = m + sigma * rate_coeff  [sigma in Kb, rate_coeff per second]
//   burst =     sigma * burst_coeff
// with rate_coeff  = (1-H) sqrt(2 gamma (H/(1-H))^(H-1))
//      burst_coeff = (1-H) sqrt(2 gamma (H/(1-H))^H)
struct FractalCoefficients {
  double rate_coeff;
  double burst_coeff;
};

FractalCoefficients fractal_coefficients(double hurst, const FractalConstants& consts = {});

// Token-bucket parameters equivalent to a fractal leaky bucket regulator.
// Throws HurstOutOfRange unless 0.5 < H < 1.
TokenBucket fractal_to_token_bucket(const FractalParams& params, const FractalConstants& consts = {});

TokenBucketEnvelope micro_flow_envelope(const MicroFlowSpec& mf, const FractalConstants& consts = {});

// Aggregate envelope of all micro-flows of a flow (pointwise sum).
Curve flow_envelope(const FlowSpec& flow, const FractalConstants& consts = {});

// Sum of the per-micro-flow affine bounds: (sum r, sum b).
TokenBucket flow_affine_bound(const FlowSpec& flow, const FractalConstants& consts = {});

}  // namespace wsncalc
