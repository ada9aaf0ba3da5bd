#include "wsncalc/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "wsncalc/errors.hpp"
#include "wsncalc/report.hpp"

namespace wsncalc {

std::string_view to_string(SweepParam p) {
  switch (p) {
    case SweepParam::R: return "R";
    case SweepParam::T: return "T";
    case SweepParam::d: return "d";
    case SweepParam::N: return "N";
    case SweepParam::H: return "H";
    case SweepParam::t: return "t";
  }
  return "R";
}

SweepParam parse_sweep_param(std::string_view text) {
  if (text == "R") return SweepParam::R;
  if (text == "T") return SweepParam::T;
  if (text == "d") return SweepParam::d;
  if (text == "N") return SweepParam::N;
  if (text == "H") return SweepParam::H;
  if (text == "t") return SweepParam::t;
  throw InvalidArgument("unknown sweep parameter '" + std::string(text) + "' (expected R, T, d, N, H or t)");
}

std::vector<double> sweep_values(const SweepRequest& req) {
  if (!std::isfinite(req.from) || !std::isfinite(req.to) || !std::isfinite(req.step)) {
    throw InvalidArgument("sweep range must be finite");
  }
  if (!(req.step > 0.0)) throw InvalidArgument("sweep step must be positive");
  if (req.to < req.from) throw InvalidArgument("empty sweep range: --to is below --from");
  const double span = (req.to - req.from) / req.step;
  if (span > 1e6) throw InvalidArgument("sweep range has more than a million points");
  const auto count = static_cast<std::size_t>(std::floor(span + 1e-9)) + 1;
  std::vector<double> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    double v = req.from + req.step * static_cast<double>(k);
    out.push_back(std::round(v * 1e9) / 1e9);
  }
  return out;
}

namespace {

bool has_fractal(const PathScenario& p) {
  for (const auto& f : p.flows) {
    for (const auto& mf : f.micro_flows) {
      if (mf.is_fractal()) return true;
    }
  }
  return false;
}

void check_applicable(const PathScenario& base, const SweepRequest& req, const std::vector<double>& values) {
  for (double v : values) {
    switch (req.param) {
      case SweepParam::R:
        if (!(v > 0.0)) throw InvalidArgument("service rate values must be positive");
        break;
      case SweepParam::T:
      case SweepParam::d:
      case SweepParam::t:
        if (!(v >= 0.0)) throw InvalidArgument("time values must be non-negative");
        break;
      case SweepParam::N:
        if (v < 1.0 || v != std::floor(v)) throw InvalidArgument("N values must be positive integers");
        break;
      case SweepParam::H:
        if (!(v > 0.5 && v < 1.0)) throw HurstOutOfRange(v);
        break;
    }
  }
  if (req.param == SweepParam::H && !has_fractal(base)) {
    throw InvalidArgument("sweeping H needs at least one fractal micro-flow");
  }
  if (req.param == SweepParam::d && base.hops.size() < 2 && base.fixed_delays.empty()) {
    throw InvalidArgument("sweeping d needs a path with fixed delays");
  }
  if (req.eval_time && !(*req.eval_time >= 0.0)) throw InvalidArgument("evaluation time must be non-negative");
}

PathScenario at_point(const PathScenario& base, SweepParam param, double v) {
  PathScenario p = base;
  switch (param) {
    case SweepParam::R:
      for (auto& h : p.hops) h.rate = v;
      break;
    case SweepParam::T:
      for (auto& h : p.hops) h.latency = v;
      break;
    case SweepParam::d:
      for (auto& d : p.fixed_delays) d = v;
      break;
    case SweepParam::N: {
      const auto n = static_cast<std::size_t>(v);
      const double d = base.fixed_delays.empty() ? 0.0 : base.fixed_delays.front();
      Hop first = base.hops.front();
      p.hops.clear();
      for (std::size_t i = 0; i < n; ++i) {
        Hop h = first;
        h.id = first.id + (i ? "#" + std::to_string(i + 1) : std::string());
        p.hops.push_back(h);
      }
      p.fixed_delays.assign(n - 1, d);
      break;
    }
    case SweepParam::H:
      for (auto& f : p.flows) {
        for (auto& mf : f.micro_flows) {
          if (auto* fp = std::get_if<FractalParams>(&mf.kind)) fp->hurst = v;
        }
      }
      break;
    case SweepParam::t:
      break;
  }
  return p;
}

std::vector<SweepRow> evaluate_point(const PathScenario& base, const SweepRequest& req, double v) {
  PathScenario p = at_point(base, req.param, v);
  std::optional<double> t = req.param == SweepParam::t ? std::optional<double>(v) : req.eval_time;
  NodeSpec first = p.node(0);
  bool stable = true;
  for (std::size_t i = 0; i < p.hops.size() && stable; ++i) stable = bool(stability_check(p.node(i), p.constants));

  std::vector<SweepRow> rows;
  for (const auto& f : p.flows) {
    SweepRow row{v, f.id, Extended::infinite(), Extended::infinite(), Extended::infinite(),
                 Extended::infinite(), Extended::infinite(), Extended::infinite()};
    NodeBounds nb = node_bounds(first, f.id, p.convention, p.constants);
    row.backlog = nb.backlog;
    row.delay = nb.delay;
    row.effective_bandwidth = nb.effective_bandwidth;
    if (t && stability_check(first, p.constants)) {
      row.backlog = node_backlog_at(first, f.id, p.convention, *t, p.constants);
    }
    if (stable) {
      PathBounds pb = path_bounds(p, f.id);
      row.path_delay = pb.delay;
      row.jitter = pb.jitter;
      row.path_effective_bandwidth = pb.effective_bandwidth;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

std::vector<SweepRow> sweep(const ScenarioDocument& doc, const SweepRequest& req) {
  PathScenario base = doc.to_path_scenario();
  base.validate();
  const std::vector<double> values = sweep_values(req);
  check_applicable(base, req, values);

  std::vector<std::vector<SweepRow>> per_point(values.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t k = next++; k < values.size(); k = next++) {
      try {
        per_point[k] = evaluate_point(base, req, values[k]);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  unsigned n_threads = req.threads ? req.threads : std::max(1u, std::thread::hardware_concurrency());
  n_threads = static_cast<unsigned>(std::min<std::size_t>(n_threads, values.size()));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < n_threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);

  std::vector<SweepRow> rows;
  for (auto& pts : per_point) {
    for (auto& r : pts) rows.push_back(std::move(r));
  }
  std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
    if (a.value != b.value) return a.value < b.value;
    return a.flow_id < b.flow_id;
  });
  return rows;
}

namespace {

std::string shortest(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

std::string sweep_csv(SweepParam param, const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << to_string(param) << ",flow_id,Q,D,e,DD,jitter,ee\n";
  for (const auto& r : rows) {
    out << shortest(r.value) << ',' << r.flow_id << ',' << format_sig4(r.backlog) << ',' << format_sig4(r.delay)
        << ',' << format_sig4(r.effective_bandwidth) << ',' << format_sig4(r.path_delay) << ','
        << format_sig4(r.jitter) << ',' << format_sig4(r.path_effective_bandwidth) << '\n';
  }
  return out.str();
}

}  // namespace wsncalc
