#pragma once

// Brute-force numerical counterparts of the min-plus operators. Nothing here
// depends on the closed-form bounds; curves are only sampled.

#include <cstdint>
#include <vector>

#include "wsncalc/curve.hpp"

namespace wsncalc::oracle {

// Samples at t = 0, step, 2 step, ...; +inf is allowed (burst-delay tails).
struct GridCurve {
  double step = 0.05;
  std::vector<double> samples;

  // Samples `curve` on [0, horizon]. f(0) is the right limit f(0+).
  static GridCurve sample(const Curve& curve, double step, double horizon);

  std::size_t size() const { return samples.size(); }
  double horizon() const { return step * static_cast<double>(samples.size() - 1); }
  double time_at(std::size_t k) const { return step * static_cast<double>(k); }
};

// Cumulative arrivals A(0, t) on a grid, stored as an integer number of
// quanta so that A(t1,t3) = A(t1,t2) + A(t2,t3) holds exactly.
class ArrivalTrace {
 public:
  static constexpr double kQuantum = 1.0 / (1 << 20);  // Kb

  ArrivalTrace(double step, std::vector<std::int64_t> quanta);

  double step() const { return step_; }
  std::size_t size() const { return quanta_.size(); }
  // A(t_i, t_j) for i <= j, in Kb.
  double between(std::size_t i, std::size_t j) const;
  double cumulative(std::size_t k) const { return between(0, k); }
  std::int64_t quanta_between(std::size_t i, std::size_t j) const { return quanta_[j] - quanta_[i]; }
  GridCurve as_grid() const;

 private:
  double step_;
  std::vector<std::int64_t> quanta_;
};

// out[k] = min_{j<=k} f[k-j] + g[j]. Throws StepMismatch.
GridCurve grid_convolve(const GridCurve& f, const GridCurve& g);

// max_k a[k] - b[k]. Throws StepMismatch, or HorizonTooShort when the gap is
// still growing at the last sample.
double grid_vdev(const GridCurve& a, const GridCurve& b);

// max over sampled t of the smallest grid multiple d with b(t + d) >= a(t).
// Samples in the second half of the horizon may be skipped when b has not
// caught up before the horizon; HorizonTooShort otherwise.
double grid_hdev(const GridCurve& a, const GridCurve& b);

// max_k a[k] / (t_k + delay), or the slope of the last grid interval if
// larger (the limit of the ratio as t grows).
double grid_effective_bandwidth(const GridCurve& a, double delay);

// The greedy source: emits exactly its envelope, A(0, t) = alpha(t) for t > 0
// (rounded down to whole quanta) and A(0, 0) = 0.
ArrivalTrace greedy_trace(const Curve& envelope, double step, double horizon);

// Largest A(t, t+tau) - alpha(tau) over every sampled pair (<= 0 when the
// trace conforms to the envelope). O(K^2) with K samples.
double max_envelope_violation(const ArrivalTrace& trace, const Curve& envelope);

struct ServerRun {
  double backlog_max = 0.0;  // Kb
  double delay_max = 0.0;    // ms
  GridCurve departures;
};

// Worst-case output of a server offering `service`: departures = trace ⊗ service.
ServerRun simulate_server(const ArrivalTrace& trace, const GridCurve& service);

}  // namespace wsncalc::oracle
