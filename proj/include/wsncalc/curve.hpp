#pragma once

// Piecewise-affine, wide-sense increasing curves and the min-plus operators
// used to bound backlog and delay.
//
// Units throughout the library: data in Kb, time in ms, rate in Mbps
// (1 Kb / 1 Mbps = 1 ms).

#include <optional>
#include <string>
#include <vector>

namespace wsncalc {

inline constexpr double kCanonicalTolerance = 1e-9;

// A real quantity that may be +infinity. Used for deviations and bounds so
// that an unstable system is distinguishable from a large bound.
class Extended {
 public:
  constexpr Extended() = default;
  constexpr Extended(double value) : value_(value) {}  // NOLINT(google-explicit-constructor)

  static constexpr Extended infinite() {
    Extended e;
    e.infinite_ = true;
    return e;
  }

  constexpr bool is_infinite() const { return infinite_; }
  constexpr bool is_finite() const { return !infinite_; }

  // Throws InvalidArgument when infinite.
  double value() const;
  double value_or(double fallback) const { return infinite_ ? fallback : value_; }

  friend bool operator==(const Extended& a, const Extended& b) {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
  }
  friend bool operator<(const Extended& a, const Extended& b) {
    if (a.infinite_) return false;
    if (b.infinite_) return true;
    return a.value_ < b.value_;
  }
  friend Extended operator+(const Extended& a, const Extended& b) {
    if (a.infinite_ || b.infinite_) return infinite();
    return a.value_ + b.value_;
  }

  std::string to_string() const;

 private:
  double value_ = 0.0;
  bool infinite_ = false;
};

// Affine piece starting at `start`. `value` is the right limit f(start+);
// the curve is left-continuous at every breakpoint after 0, and f(0) is
// taken to be f(0+).
struct Segment {
  double start;
  double value;
  double slope;
};

class Curve {
 public:
  // Validates and canonicalizes. Throws InvalidCurve.
  explicit Curve(std::vector<Segment> segments,
                 std::optional<double> infinite_after = std::nullopt);

  static Curve zero();
  static Curve affine(double rate, double burst);
  static Curve rate_latency(double rate, double latency);
  static Curve burst_delay(double delay);

  const std::vector<Segment>& segments() const { return segments_; }
  // The curve is +infinity for every t strictly greater than this.
  const std::optional<double>& infinite_after() const { return infinite_after_; }

  Extended eval(double t) const;
  Extended right_limit(double t) const;
  double final_slope() const { return segments_.back().slope; }

  // Canonical-form equality up to `tol` (relative to magnitude, floored at 1).
  bool approx_equal(const Curve& other, double tol = 1e-9) const;

  std::string describe() const;

 private:
  std::size_t segment_index_left(double t) const;
  std::size_t segment_index_right(double t) const;

  std::vector<Segment> segments_;
  std::optional<double> infinite_after_;
};

// Single-piece token bucket: b + r*t.
struct TokenBucket {
  double rate = 0.0;   // Mbps
  double burst = 0.0;  // Kb
};

// min over pieces of (rate*t + burst); one piece is a simple leaky bucket.
struct TokenBucketEnvelope {
  std::vector<TokenBucket> pieces;

  Curve to_curve() const;
  // A single affine upper bound of the envelope: the piece with the smallest
  // rate (the long-run tail), ties broken by smallest burst.
  TokenBucket affine_bound() const;
  void validate() const;
};

struct RateLatency {
  double rate = 0.0;     // Mbps
  double latency = 0.0;  // ms

  Curve to_curve() const { return Curve::rate_latency(rate, latency); }
};

struct BurstDelay {
  double delay = 0.0;  // ms

  Curve to_curve() const { return Curve::burst_delay(delay); }
};

// (f ⊗ g)(t) = inf_{0<=s<=t} f(t-s) + g(s), exact for piecewise-affine inputs.
Curve convolve(const Curve& f, const Curve& g);
Curve min_of(const Curve& f, const Curve& g);
Curve sum_of(const Curve& f, const Curve& g);

// sup_{t>=0} alpha(t) - beta(t)
Extended v_dev(const Curve& alpha, const Curve& beta);
// sup_{t>=0} inf{d >= 0 : alpha(t) <= beta(t+d)}
Extended h_dev(const Curve& alpha, const Curve& beta);

// sup_{t>=0} alpha(t) / (t + delay), delay > 0.
Extended effective_bandwidth(const Curve& alpha, double delay);

}  // namespace wsncalc
