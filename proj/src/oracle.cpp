#include "wsncalc/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wsncalc/errors.hpp"

namespace wsncalc::oracle {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kValueTol = 1e-9;

void require_same_step(const GridCurve& a, const GridCurve& b) {
  if (std::abs(a.step - b.step) > 1e-12 * std::max(a.step, b.step)) throw StepMismatch(a.step, b.step);
}

std::size_t sample_count(double step, double horizon) {
  if (!(step > 0.0)) throw InvalidArgument("grid step must be positive");
  if (!(horizon >= 0.0) || !std::isfinite(horizon)) throw InvalidArgument("grid horizon must be finite and non-negative");
  return static_cast<std::size_t>(std::ceil(horizon / step - 1e-9)) + 1;
}

}  // namespace

GridCurve GridCurve::sample(const Curve& curve, double step, double horizon) {
  GridCurve g;
  g.step = step;
  const std::size_t n = sample_count(step, horizon);
  g.samples.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    Extended v = curve.eval(step * static_cast<double>(k));
    g.samples[k] = v.is_infinite() ? kInf : v.value();
  }
  return g;
}

ArrivalTrace::ArrivalTrace(double step, std::vector<std::int64_t> quanta)
    : step_(step), quanta_(std::move(quanta)) {
  if (!(step_ > 0.0)) throw InvalidArgument("trace step must be positive");
  if (quanta_.empty() || quanta_.front() != 0) throw InvalidArgument("a trace starts with A(0,0) = 0");
  for (std::size_t k = 1; k < quanta_.size(); ++k) {
    if (quanta_[k] < quanta_[k - 1]) throw InvalidArgument("cumulative arrivals must be non-decreasing");
  }
}

double ArrivalTrace::between(std::size_t i, std::size_t j) const {
  return static_cast<double>(quanta_.at(j) - quanta_.at(i)) * kQuantum;
}

GridCurve ArrivalTrace::as_grid() const {
  GridCurve g;
  g.step = step_;
  g.samples.reserve(quanta_.size());
  for (auto q : quanta_) g.samples.push_back(static_cast<double>(q) * kQuantum);
  return g;
}

GridCurve grid_convolve(const GridCurve& f, const GridCurve& g) {
  require_same_step(f, g);
  const std::size_t n = std::min(f.size(), g.size());
  GridCurve out;
  out.step = f.step;
  out.samples.assign(n, kInf);
  // f reversed so that both operands are read forwards: f[k - j] = rev[n - 1 - k + j].
  std::vector<double> rev(f.samples.rbegin() + static_cast<std::ptrdiff_t>(f.size() - n), f.samples.rend());
  const double* gs = g.samples.data();
  for (std::size_t k = 0; k < n; ++k) {
    const double* fs = rev.data() + (n - 1 - k);
    // Four independent minima keep the loop free of a serial dependency.
    double m[4] = {kInf, kInf, kInf, kInf};
    std::size_t j = 0;
    for (; j + 4 <= k + 1; j += 4) {
      for (std::size_t l = 0; l < 4; ++l) {
        double v = fs[j + l] + gs[j + l];
        m[l] = v < m[l] ? v : m[l];
      }
    }
    for (; j <= k; ++j) {
      double v = fs[j] + gs[j];
      m[0] = v < m[0] ? v : m[0];
    }
    out.samples[k] = std::min(std::min(m[0], m[1]), std::min(m[2], m[3]));
  }
  return out;
}

double grid_vdev(const GridCurve& a, const GridCurve& b) {
  require_same_step(a, b);
  const std::size_t n = std::min(a.size(), b.size());
  if (n == 0) throw InvalidArgument("empty grid");
  double best = -kInf;
  std::size_t arg = 0;
  for (std::size_t k = 0; k < n; ++k) {
    if (std::isinf(b.samples[k])) continue;
    double gap = a.samples[k] - b.samples[k];
    if (gap > best) {
      best = gap;
      arg = k;
    }
  }
  if (n >= 2 && arg == n - 1 && !std::isinf(b.samples[n - 2]) &&
      best > a.samples[n - 2] - b.samples[n - 2] + kValueTol) {
    throw HorizonTooShort("vertical deviation still growing at the grid horizon", 2.0);
  }
  return best;
}

double grid_hdev(const GridCurve& a, const GridCurve& b) {
  require_same_step(a, b);
  const std::size_t n = std::min(a.size(), b.size());
  if (n == 0) throw InvalidArgument("empty grid");
  std::size_t best = 0;
  std::size_t best_at = 0;
  std::size_t j = 0;
  for (std::size_t k = 0; k < n; ++k) {
    j = std::max(j, k);
    while (j < n && b.samples[j] < a.samples[k] - kValueTol * std::max(1.0, std::abs(a.samples[k]))) ++j;
    if (j == n) {
      if (2 * k >= n) break;
      throw HorizonTooShort("service never catches up with arrivals inside the grid horizon", 2.0);
    }
    if (j - k > best) {
      best = j - k;
      best_at = k;
    }
  }
  if (n >= 4 && 2 * best_at >= n) {
    throw HorizonTooShort("horizontal deviation still growing in the second half of the horizon", 2.0);
  }
  return a.step * static_cast<double>(best);
}

double grid_effective_bandwidth(const GridCurve& a, double delay) {
  if (!(delay > 0.0)) throw InvalidArgument("effective bandwidth needs a positive delay");
  double best = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) best = std::max(best, a.samples[k] / (a.time_at(k) + delay));
  // The ratio tends to the tail slope as t grows; use the last sampled slope
  // when the ratio is still rising at the horizon.
  if (a.size() >= 2) {
    const std::size_t n = a.size();
    double tail = (a.samples[n - 1] - a.samples[n - 2]) / a.step;
    if (std::isfinite(tail)) best = std::max(best, tail);
  }
  return best;
}

ArrivalTrace greedy_trace(const Curve& envelope, double step, double horizon) {
  const std::size_t n = sample_count(step, horizon);
  std::vector<std::int64_t> quanta(n, 0);
  for (std::size_t k = 1; k < n; ++k) {
    Extended v = envelope.eval(step * static_cast<double>(k));
    if (v.is_infinite()) throw InvalidArgument("greedy trace of an envelope that becomes infinite");
    quanta[k] = static_cast<std::int64_t>(std::floor(v.value() / ArrivalTrace::kQuantum));
  }
  return ArrivalTrace(step, std::move(quanta));
}

double max_envelope_violation(const ArrivalTrace& trace, const Curve& envelope) {
  const std::size_t n = trace.size();
  std::vector<double> alpha(n);
  for (std::size_t k = 0; k < n; ++k) {
    Extended v = envelope.eval(trace.step() * static_cast<double>(k));
    alpha[k] = v.is_infinite() ? kInf : v.value();
  }
  double worst = -kInf;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) worst = std::max(worst, trace.between(i, j) - alpha[j - i]);
  }
  return worst;
}

ServerRun simulate_server(const ArrivalTrace& trace, const GridCurve& service) {
  GridCurve arrivals = trace.as_grid();
  ServerRun run;
  run.departures = grid_convolve(arrivals, service);
  run.backlog_max = grid_vdev(arrivals, run.departures);
  run.delay_max = grid_hdev(arrivals, run.departures);
  return run;
}

}  // namespace wsncalc::oracle
