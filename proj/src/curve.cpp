#include "wsncalc/curve.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "wsncalc/errors.hpp"

namespace wsncalc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double tol_at(double x) {
  return kCanonicalTolerance * std::max(1.0, std::abs(x));
}

bool near(double a, double b, double tol = kCanonicalTolerance) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

// Affine function restricted to the closed interval [x0, x1]; +inf elsewhere.
struct Piece {
  double x0;
  double x1;  // may be +inf
  double y0;
  double slope;

  double at(double x) const { return y0 + slope * (x - x0); }
};

std::vector<Piece> pieces_of(const Curve& c) {
  const auto& segs = c.segments();
  std::vector<Piece> out;
  out.reserve(segs.size());
  for (std::size_t k = 0; k < segs.size(); ++k) {
    double end = kInf;
    if (k + 1 < segs.size()) {
      end = segs[k + 1].start;
    } else if (c.infinite_after()) {
      end = *c.infinite_after();
    }
    out.push_back({segs[k].start, end, segs[k].value, segs[k].slope});
  }
  return out;
}

// Pointwise minimum of a family of closed affine pieces. The family must cover
// a contiguous interval starting at 0 (true for pieces of increasing curves
// and for their pairwise convolutions).
Curve lower_envelope(const std::vector<Piece>& pieces) {
  double end = 0.0;
  for (const auto& p : pieces) end = std::max(end, p.x1);

  std::vector<double> xs{0.0};
  for (const auto& p : pieces) {
    xs.push_back(p.x0);
    if (std::isfinite(p.x1)) xs.push_back(p.x1);
  }
  std::sort(xs.begin(), xs.end());
  std::vector<double> grid;
  for (double x : xs) {
    if (x > end) break;
    if (grid.empty() || x - grid.back() > tol_at(x)) grid.push_back(x);
  }

  std::vector<Segment> out;
  std::vector<const Piece*> active;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double left = grid[i];
    const double right = i + 1 < grid.size() ? grid[i + 1] : kInf;
    if (std::isfinite(end) && left >= end - tol_at(end)) break;

    active.clear();
    for (const auto& p : pieces) {
      bool covers_right = std::isinf(right) ? std::isinf(p.x1) : p.x1 >= right - tol_at(right);
      if (p.x0 <= left + tol_at(left) && covers_right) active.push_back(&p);
    }
    if (active.empty()) {
      end = left;
      break;
    }

    double x = left;
    while (true) {
      const Piece* cur = active.front();
      for (const Piece* p : active) {
        double diff = p->at(x) - cur->at(x);
        if (diff < -tol_at(cur->at(x)) || (std::abs(diff) <= tol_at(cur->at(x)) && p->slope < cur->slope)) {
          cur = p;
        }
      }
      double next = right;
      for (const Piece* p : active) {
        if (p->slope >= cur->slope) continue;
        double xc = x + (p->at(x) - cur->at(x)) / (cur->slope - p->slope);
        if (xc > x + tol_at(x) && (std::isinf(next) || xc < next - tol_at(next))) next = xc;
      }
      out.push_back({x, cur->at(x), cur->slope});
      if (next >= right) break;
      x = next;
    }
  }

  if (out.empty()) {
    // Finite only at t = 0.
    double v = kInf;
    for (const auto& p : pieces) {
      if (p.x0 <= tol_at(0.0)) v = std::min(v, p.y0);
    }
    return Curve({{0.0, v, 0.0}}, 0.0);
  }
  std::optional<double> tail;
  if (std::isfinite(end)) tail = end;
  return Curve(std::move(out), tail);
}

}  // namespace

double Extended::value() const {
  if (infinite_) throw InvalidArgument("value requested from an infinite quantity");
  return value_;
}

std::string Extended::to_string() const {
  if (infinite_) return "inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", value_);
  return buf;
}

Curve::Curve(std::vector<Segment> segments, std::optional<double> infinite_after)
    : infinite_after_(infinite_after) {
  if (segments.empty()) throw InvalidCurve("a curve needs at least one segment");
  if (infinite_after_ && (!std::isfinite(*infinite_after_) || *infinite_after_ < 0.0)) {
    throw InvalidCurve("infinite-after marker must be a finite non-negative time");
  }
  if (!near(segments.front().start, 0.0)) throw InvalidCurve("first segment must start at 0");
  segments.front().start = 0.0;

  for (std::size_t k = 0; k < segments.size(); ++k) {
    auto& s = segments[k];
    if (!std::isfinite(s.start) || !std::isfinite(s.value) || !std::isfinite(s.slope)) {
      throw InvalidCurve("segment fields must be finite");
    }
    if (s.slope < 0.0) {
      if (s.slope < -kCanonicalTolerance) throw InvalidCurve("curve must be wide-sense increasing");
      s.slope = 0.0;
    }
    if (s.value < 0.0) {
      if (s.value < -tol_at(s.value)) throw InvalidCurve("curve must be non-negative");
      s.value = 0.0;
    }
    if (k > 0) {
      const auto& prev = segments[k - 1];
      if (s.start <= prev.start) throw InvalidCurve("segment start times must be strictly increasing");
      double end_value = prev.value + prev.slope * (s.start - prev.start);
      if (s.value < end_value - tol_at(end_value)) throw InvalidCurve("downward jump in curve");
      s.value = std::max(s.value, end_value);
    }
  }

  if (infinite_after_) {
    double d = *infinite_after_;
    auto it = std::find_if(segments.begin() + 1, segments.end(),
                           [d](const Segment& s) { return s.start >= d; });
    segments.erase(it, segments.end());
  }

  segments_.reserve(segments.size());
  segments_.push_back(segments.front());
  for (std::size_t k = 1; k < segments.size(); ++k) {
    const auto& prev = segments_.back();
    const auto& s = segments[k];
    double end_value = prev.value + prev.slope * (s.start - prev.start);
    if (near(prev.slope, s.slope) && near(end_value, s.value)) continue;
    segments_.push_back(s);
  }
}

Curve Curve::zero() { return Curve({{0.0, 0.0, 0.0}}); }

Curve Curve::affine(double rate, double burst) { return Curve({{0.0, burst, rate}}); }

Curve Curve::rate_latency(double rate, double latency) {
  if (!(rate > 0.0)) throw InvalidCurve("rate-latency curve needs a positive rate");
  if (!(latency >= 0.0)) throw InvalidCurve("rate-latency curve needs a non-negative latency");
  if (latency == 0.0) return Curve({{0.0, 0.0, rate}});
  return Curve({{0.0, 0.0, 0.0}, {latency, 0.0, rate}});
}

Curve Curve::burst_delay(double delay) {
  if (!(delay >= 0.0)) throw InvalidCurve("burst-delay curve needs a non-negative delay");
  return Curve({{0.0, 0.0, 0.0}}, delay);
}

std::size_t Curve::segment_index_left(double t) const {
  // last k with start < t (segment 0 for t <= 0)
  auto it = std::lower_bound(segments_.begin(), segments_.end(), t,
                             [](const Segment& s, double v) { return s.start < v; });
  if (it == segments_.begin()) return 0;
  return static_cast<std::size_t>(std::distance(segments_.begin(), it)) - 1;
}

std::size_t Curve::segment_index_right(double t) const {
  // last k with start <= t
  auto it = std::upper_bound(segments_.begin(), segments_.end(), t,
                             [](double v, const Segment& s) { return v < s.start; });
  if (it == segments_.begin()) return 0;
  return static_cast<std::size_t>(std::distance(segments_.begin(), it)) - 1;
}

Extended Curve::eval(double t) const {
  if (t < 0.0) throw InvalidArgument("curves are defined for t >= 0 only");
  if (infinite_after_ && t > *infinite_after_) return Extended::infinite();
  const auto& s = segments_[segment_index_left(t)];
  return s.value + s.slope * (t - s.start);
}

Extended Curve::right_limit(double t) const {
  if (t < 0.0) throw InvalidArgument("curves are defined for t >= 0 only");
  if (infinite_after_ && t >= *infinite_after_) return Extended::infinite();
  const auto& s = segments_[segment_index_right(t)];
  return s.value + s.slope * (t - s.start);
}

bool Curve::approx_equal(const Curve& other, double tol) const {
  if (segments_.size() != other.segments_.size()) return false;
  if (infinite_after_.has_value() != other.infinite_after_.has_value()) return false;
  if (infinite_after_ && !near(*infinite_after_, *other.infinite_after_, tol)) return false;
  for (std::size_t k = 0; k < segments_.size(); ++k) {
    const auto& a = segments_[k];
    const auto& b = other.segments_[k];
    if (!near(a.start, b.start, tol) || !near(a.value, b.value, tol) || !near(a.slope, b.slope, tol)) {
      return false;
    }
  }
  return true;
}

std::string Curve::describe() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t k = 0; k < segments_.size(); ++k) {
    if (k) os << ' ';
    os << '(' << segments_[k].start << ',' << segments_[k].value << ',' << segments_[k].slope << ')';
  }
  os << ']';
  if (infinite_after_) os << " inf after " << *infinite_after_;
  return os.str();
}

Curve TokenBucketEnvelope::to_curve() const {
  validate();
  Curve out = Curve::affine(pieces.front().rate, pieces.front().burst);
  for (std::size_t m = 1; m < pieces.size(); ++m) {
    out = min_of(out, Curve::affine(pieces[m].rate, pieces[m].burst));
  }
  return out;
}

TokenBucket TokenBucketEnvelope::affine_bound() const {
  validate();
  return *std::min_element(pieces.begin(), pieces.end(), [](const TokenBucket& a, const TokenBucket& b) {
    return a.rate < b.rate || (a.rate == b.rate && a.burst < b.burst);
  });
}

void TokenBucketEnvelope::validate() const {
  if (pieces.empty()) throw InvalidArgument("token-bucket envelope needs at least one piece");
  for (const auto& p : pieces) {
    if (!std::isfinite(p.rate) || !std::isfinite(p.burst) || p.rate < 0.0 || p.burst < 0.0) {
      throw InvalidArgument("token-bucket rate and burst must be finite and non-negative");
    }
  }
}

Curve convolve(const Curve& f, const Curve& g) {
  std::vector<Piece> result;
  for (const Piece& p : pieces_of(f)) {
    for (const Piece& q : pieces_of(g)) {
      const Piece& lo = p.slope <= q.slope ? p : q;
      const Piece& hi = p.slope <= q.slope ? q : p;
      double start = p.x0 + q.x0;
      double y = p.y0 + q.y0;
      double len_lo = lo.x1 - lo.x0;
      double len_hi = hi.x1 - hi.x0;
      if (std::isinf(len_lo)) {
        result.push_back({start, kInf, y, lo.slope});
        continue;
      }
      double mid = start + len_lo;
      result.push_back({start, mid, y, lo.slope});
      result.push_back({mid, mid + len_hi, y + lo.slope * len_lo, hi.slope});
    }
  }
  return lower_envelope(result);
}

Curve min_of(const Curve& f, const Curve& g) {
  auto pieces = pieces_of(f);
  auto more = pieces_of(g);
  pieces.insert(pieces.end(), more.begin(), more.end());
  return lower_envelope(pieces);
}

Curve sum_of(const Curve& f, const Curve& g) {
  double end = kInf;
  if (f.infinite_after()) end = std::min(end, *f.infinite_after());
  if (g.infinite_after()) end = std::min(end, *g.infinite_after());

  std::vector<double> xs;
  for (const auto& s : f.segments()) xs.push_back(s.start);
  for (const auto& s : g.segments()) xs.push_back(s.start);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  std::vector<Segment> out;
  for (double x : xs) {
    if (x > 0.0 && x >= end) break;
    double slope = 0.0;
    for (const Curve* c : {&f, &g}) {
      const auto& segs = c->segments();
      auto it = std::upper_bound(segs.begin(), segs.end(), x,
                                 [](double v, const Segment& s) { return v < s.start; });
      slope += std::prev(it)->slope;
    }
    double value = x == 0.0 ? f.eval(0.0).value() + g.eval(0.0).value()
                            : f.right_limit(x).value() + g.right_limit(x).value();
    out.push_back({x, value, slope});
  }
  std::optional<double> tail;
  if (std::isfinite(end)) tail = end;
  return Curve(std::move(out), tail);
}

Extended v_dev(const Curve& alpha, const Curve& beta) {
  std::vector<double> xs{0.0};
  for (const auto& s : alpha.segments()) xs.push_back(s.start);
  for (const auto& s : beta.segments()) xs.push_back(s.start);
  if (alpha.infinite_after()) xs.push_back(*alpha.infinite_after());
  if (beta.infinite_after()) xs.push_back(*beta.infinite_after());

  double best = -kInf;
  auto consider = [&](const Extended& a, const Extended& b) -> bool {
    if (b.is_infinite()) return true;
    if (a.is_infinite()) return false;
    best = std::max(best, a.value() - b.value());
    return true;
  };
  for (double x : xs) {
    if (!consider(alpha.eval(x), beta.eval(x))) return Extended::infinite();
    if (!consider(alpha.right_limit(x), beta.right_limit(x))) return Extended::infinite();
  }
  if (!beta.infinite_after()) {
    if (alpha.infinite_after()) return Extended::infinite();
    if (alpha.final_slope() > beta.final_slope() + kCanonicalTolerance) return Extended::infinite();
  }
  return best;
}

namespace {

// inf{s >= 0 : beta(s) >= y}, or > y when `strict`.
Extended pseudo_inverse(const Curve& beta, double y, bool strict) {
  auto reaches = [&](double v) { return strict ? v > y : v >= y; };
  const auto& segs = beta.segments();
  for (std::size_t k = 0; k < segs.size(); ++k) {
    const auto& s = segs[k];
    double end = kInf;
    if (k + 1 < segs.size()) {
      end = segs[k + 1].start;
    } else if (beta.infinite_after()) {
      end = *beta.infinite_after();
    }
    if (reaches(s.value)) return s.start;
    if (s.slope > 0.0) {
      double at = s.start + (y - s.value) / s.slope;
      if (at <= end) return at;
    }
  }
  if (beta.infinite_after()) return *beta.infinite_after();
  return Extended::infinite();
}

}  // namespace

Extended h_dev(const Curve& alpha, const Curve& beta) {
  if (alpha.infinite_after() && !beta.infinite_after()) return Extended::infinite();

  std::vector<double> levels;
  {
    const auto& segs = beta.segments();
    for (std::size_t k = 0; k < segs.size(); ++k) {
      levels.push_back(segs[k].value);
      if (k + 1 < segs.size()) {
        levels.push_back(segs[k].value + segs[k].slope * (segs[k + 1].start - segs[k].start));
      }
    }
  }

  std::vector<double> ts{0.0};
  {
    const auto& segs = alpha.segments();
    for (std::size_t k = 0; k < segs.size(); ++k) {
      const auto& s = segs[k];
      ts.push_back(s.start);
      double end = k + 1 < segs.size() ? segs[k + 1].start
                                       : alpha.infinite_after().value_or(kInf);
      if (s.slope <= 0.0) continue;
      for (double y : levels) {
        double t = s.start + (y - s.value) / s.slope;
        if (t > s.start && t < end) ts.push_back(t);
      }
    }
  }

  double best = 0.0;
  for (double t : ts) {
    if (alpha.infinite_after() && t > *alpha.infinite_after()) continue;
    if (t > 0.0) {
      Extended inv = pseudo_inverse(beta, alpha.eval(t).value(), false);
      if (inv.is_infinite()) return inv;
      best = std::max(best, inv.value() - t);
    }
    Extended a_right = alpha.right_limit(t);
    if (a_right.is_infinite()) continue;
    const auto& segs = alpha.segments();
    auto it = std::upper_bound(segs.begin(), segs.end(), t,
                               [](double v, const Segment& s) { return v < s.start; });
    bool rising = std::prev(it)->slope > 0.0;
    Extended inv = pseudo_inverse(beta, a_right.value(), rising);
    if (inv.is_infinite()) return inv;
    best = std::max(best, inv.value() - t);
  }

  if (alpha.infinite_after()) {
    best = std::max(best, *beta.infinite_after() - *alpha.infinite_after());
  } else if (!beta.infinite_after()) {
    double ra = alpha.final_slope();
    double rb = beta.final_slope();
    if (ra > 0.0 && rb <= 0.0) return Extended::infinite();
    if (ra > rb + kCanonicalTolerance) return Extended::infinite();
  }
  return best;
}

Extended effective_bandwidth(const Curve& alpha, double delay) {
  if (!(delay > 0.0)) throw InvalidArgument("effective bandwidth needs a positive delay");
  if (alpha.infinite_after()) return Extended::infinite();
  double best = alpha.final_slope();
  for (const auto& s : alpha.segments()) {
    best = std::max(best, alpha.right_limit(s.start).value() / (s.start + delay));
    if (s.start > 0.0) best = std::max(best, alpha.eval(s.start).value() / (s.start + delay));
  }
  return best;
}

}  // namespace wsncalc
