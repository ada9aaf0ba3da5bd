#include "wsncalc/validate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <mutex>
#include <sstream>
#include <thread>

#include "wsncalc/errors.hpp"
#include "wsncalc/oracle.hpp"
#include "wsncalc/report.hpp"

namespace wsncalc {

bool ValidationReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const ValidationCheck& c) { return c.passed; });
}

namespace {

void run_parallel(std::vector<std::function<void()>>& tasks, unsigned threads) {
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t k = next++; k < tasks.size(); k = next++) {
      try {
        tasks[k]();
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  unsigned n = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
  n = static_cast<unsigned>(std::min<std::size_t>(n, tasks.size()));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < n; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

void require_stable(const PathScenario& path) {
  for (std::size_t i = 0; i < path.hops.size(); ++i) {
    auto st = stability_check(path.node(i), path.constants);
    if (!st) throw UnstableNode(path.hops[i].id, st.total_rate, st.service_rate);
  }
}

double horizon_for(double largest_delay, const ValidationOptions& opt) {
  return opt.horizon_factor * std::max(largest_delay, 10.0 * opt.grid_step);
}

// Rethrows a too-short horizon with the factor that would have sufficed.
template <typename F>
auto with_horizon(const ValidationOptions& opt, F&& f) {
  try {
    return f();
  } catch (const HorizonTooShort& e) {
    throw HorizonTooShort(std::string(e.what()) + "; retry with --horizon-factor " +
                              format_sig4(opt.horizon_factor * e.suggested_factor()),
                          opt.horizon_factor * e.suggested_factor());
  }
}

ValidationCheck finish(ValidationCheck c) {
  bool within = c.simulated <= c.bound + c.tolerance;
  bool tight = !c.expect_tight || std::abs(c.grid - c.bound) <= c.tolerance;
  c.passed = within && tight;
  return c;
}

double max_slope(const Curve& c) {
  double s = 0.0;
  for (const auto& seg : c.segments()) s = std::max(s, seg.slope);
  return s;
}

std::vector<ValidationCheck> node_checks(const NodeSpec& node, const FlowSpec& flow, const PathScenario& path,
                                         double horizon, const ValidationOptions& opt) {
  const double step = opt.grid_step;
  const double scale = opt.bound_scale;
  NodeBounds nb = node_bounds(node, flow.id, path.convention, path.constants);
  Curve envelope = flow_envelope(flow, path.constants);
  Curve service = residual_service(node, flow.id, path.convention, path.constants).curve().to_curve();

  auto alpha = oracle::GridCurve::sample(envelope, step, horizon);
  auto beta = oracle::GridCurve::sample(service, step, horizon);
  auto trace = oracle::greedy_trace(envelope, step, horizon);
  auto run = with_horizon(opt, [&] { return oracle::simulate_server(trace, beta); });
  double grid_q = with_horizon(opt, [&] { return oracle::grid_vdev(alpha, beta); });
  double grid_d = with_horizon(opt, [&] { return oracle::grid_hdev(alpha, beta); });

  // One cell of backlog: what either curve can move in one step.
  const double q_tol = step * std::max(max_slope(envelope), max_slope(service)) + 1e-9;
  const double d_tol = step + 1e-9;
  std::vector<ValidationCheck> out;
  out.push_back(finish({node.id, flow.id, "Q", nb.backlog.value() * scale, grid_q, run.backlog_max, q_tol}));
  out.push_back(finish({node.id, flow.id, "D", nb.delay.value() * scale, grid_d, run.delay_max, d_tol}));

  // Effective bandwidth at the closed-form delay: sampling can only miss the
  // supremum by the envelope's growth over one step.
  const double d = nb.delay.value();
  if (d > 0.0) {
    double grid_e = oracle::grid_effective_bandwidth(alpha, d);
    double e_tol = step * max_slope(envelope) / d + 1e-9;
    out.push_back(finish({node.id, flow.id, "e", nb.effective_bandwidth.value() * scale, grid_e, grid_e, e_tol}));
  }
  return out;
}

ValidationCheck path_check(const PathScenario& path, const FlowSpec& flow, double horizon,
                           const ValidationOptions& opt) {
  const double step = opt.grid_step;
  PathBounds pb = path_bounds(path, flow.id);
  Curve envelope = flow_envelope(flow, path.constants);
  Curve service = path_service_curve_convolved(path, flow.id);
  auto alpha = oracle::GridCurve::sample(envelope, step, horizon);
  auto beta = oracle::GridCurve::sample(service, step, horizon);
  auto trace = oracle::greedy_trace(envelope, step, horizon);
  const double lead = path.hops.front().latency;
  double grid = with_horizon(opt, [&] { return oracle::grid_hdev(alpha, beta); }) + lead;
  auto run = with_horizon(opt, [&] { return oracle::simulate_server(trace, beta); });

  // The closed form uses the affine bound of the flow; it is attained only
  // when the envelope is that affine curve.
  TokenBucket affine = flow_affine_bound(flow, path.constants);
  bool affine_envelope = envelope.approx_equal(Curve::affine(affine.rate, affine.burst), 1e-9);
  ValidationCheck c{"path", flow.id, "DD", pb.delay * opt.bound_scale, grid, run.delay_max + lead, step + 1e-9,
                    affine_envelope};
  return finish(c);
}

}  // namespace

ValidationReport validate(const PathScenario& path, const ValidationOptions& opt, const std::string& name) {
  path.validate();
  if (!(opt.grid_step > 0.0)) throw InvalidArgument("grid step must be positive");
  if (!(opt.horizon_factor >= 1.0)) throw InvalidArgument("horizon factor must be at least 1");
  if (!(opt.bound_scale > 0.0)) throw InvalidArgument("bound scale must be positive");
  require_stable(path);

  ValidationReport report;
  report.scenario_name = name;
  report.options = opt;

  double node_d = 0.0;
  for (std::size_t i = 0; i < path.hops.size(); ++i) {
    for (const auto& f : path.flows) {
      node_d = std::max(node_d, node_delay_bound(path.node(i), f.id, path.convention, path.constants).value());
    }
  }
  double path_dd = 0.0;
  for (const auto& f : path.flows) path_dd = std::max(path_dd, path_delay_bound(path, f.id));
  report.node_horizon = horizon_for(node_d, opt);
  report.path_horizon = horizon_for(path_dd, opt);

  const std::size_t nf = path.flows.size();
  std::vector<std::vector<ValidationCheck>> node_results(path.hops.size() * nf);
  std::vector<ValidationCheck> path_results(nf);
  std::vector<std::function<void()>> tasks;
  // Path simulations are the most expensive; schedule them first.
  for (std::size_t f = 0; f < nf; ++f) {
    tasks.emplace_back([&, f] { path_results[f] = path_check(path, path.flows[f], report.path_horizon, opt); });
  }
  for (std::size_t i = 0; i < path.hops.size(); ++i) {
    for (std::size_t f = 0; f < nf; ++f) {
      tasks.emplace_back([&, i, f] {
        node_results[i * nf + f] = node_checks(path.node(i), path.flows[f], path, report.node_horizon, opt);
      });
    }
  }
  run_parallel(tasks, opt.threads);

  for (auto& r : node_results) report.checks.insert(report.checks.end(), r.begin(), r.end());
  report.checks.insert(report.checks.end(), path_results.begin(), path_results.end());
  return report;
}

ValidationReport validate(const ScenarioDocument& doc, const ValidationOptions& opt) {
  return validate(doc.to_path_scenario(), opt, doc.name);
}

std::string render_validation(const ValidationReport& r) {
  std::ostringstream out;
  out << "scenario: " << (r.scenario_name.empty() ? "(unnamed)" : r.scenario_name) << '\n';
  out << "grid step " << format_sig4(r.options.grid_step) << " ms, node horizon " << format_sig4(r.node_horizon)
      << " ms, path horizon " << format_sig4(r.path_horizon) << " ms";
  if (r.options.bound_scale != 1.0) out << ", bounds scaled by " << format_sig4(r.options.bound_scale);
  out << "\n\n";
  out << "where       flow  qty  bound       grid        simulated   margin      result\n";
  for (const auto& c : r.checks) {
    char line[256];
    std::snprintf(line, sizeof line, "%-10s  %-4s  %-3s  %-10s  %-10s  %-10s  %-10s  %s\n", c.where.c_str(),
                  c.flow_id.c_str(), c.quantity.c_str(), format_sig4(c.bound).c_str(), format_sig4(c.grid).c_str(),
                  format_sig4(c.simulated).c_str(), format_sig4(c.margin()).c_str(), c.passed ? "pass" : "FAIL");
    out << line;
  }
  std::size_t failed = std::count_if(r.checks.begin(), r.checks.end(), [](const auto& c) { return !c.passed; });
  out << '\n' << (failed ? "FAIL" : "PASS") << ": " << r.checks.size() - failed << " of " << r.checks.size()
      << " checks passed\n";
  return out.str();
}

GridError node_grid_error(const PathScenario& path, double step, double horizon_factor) {
  path.validate();
  require_stable(path);
  ValidationOptions opt;
  opt.grid_step = step;
  opt.horizon_factor = horizon_factor;
  double node_d = 0.0;
  for (std::size_t i = 0; i < path.hops.size(); ++i) {
    for (const auto& f : path.flows) {
      node_d = std::max(node_d, node_delay_bound(path.node(i), f.id, path.convention, path.constants).value());
    }
  }
  const double horizon = horizon_for(node_d, opt);
  GridError err;
  for (std::size_t i = 0; i < path.hops.size(); ++i) {
    NodeSpec node = path.node(i);
    for (const auto& f : path.flows) {
      NodeBounds nb = node_bounds(node, f.id, path.convention, path.constants);
      auto alpha = oracle::GridCurve::sample(flow_envelope(f, path.constants), step, horizon);
      auto beta = oracle::GridCurve::sample(
          residual_service(node, f.id, path.convention, path.constants).curve().to_curve(), step, horizon);
      err.backlog += std::abs(oracle::grid_vdev(alpha, beta) - nb.backlog.value());
      err.delay += std::abs(oracle::grid_hdev(alpha, beta) - nb.delay.value());
      ++err.count;
    }
  }
  if (err.count) {
    err.backlog /= static_cast<double>(err.count);
    err.delay /= static_cast<double>(err.count);
  }
  return err;
}

}  // namespace wsncalc
