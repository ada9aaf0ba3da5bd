// wsncalc: worst-case backlog, delay and bandwidth bounds for tandems of
// rate-latency nodes.
//
// Exit codes: 0 success, 2 validation failure, 3 unstable node, 4 input error.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "wsncalc/errors.hpp"
#include "wsncalc/report.hpp"
#include "wsncalc/scenario.hpp"
#include "wsncalc/sweep.hpp"
#include "wsncalc/validate.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kValidationFailure = 2;
constexpr int kUnstable = 3;
constexpr int kInputError = 4;

constexpr std::string_view kBuiltinPrefix = "builtin:";

wsncalc::ScenarioDocument load(const std::string& file) {
  if (file.rfind(kBuiltinPrefix, 0) == 0) {
    return wsncalc::parse_scenario(wsncalc::builtin_scenario(file.substr(kBuiltinPrefix.size())).text);
  }
  return wsncalc::load_scenario_file(file);
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw wsncalc::InvalidArgument("cannot write " + path.string());
  out << text;
  if (!out) throw wsncalc::InvalidArgument("failed writing " + path.string());
}

struct ReportArgs {
  std::string file;
  std::string scope = "all";
  std::optional<std::string> convention;
  std::string format = "table";
};

int cmd_report(const ReportArgs& a) {
  auto doc = load(a.file);
  std::optional<wsncalc::Convention> conv;
  if (a.convention) conv = wsncalc::parse_convention(*a.convention);
  auto report = wsncalc::run_report(doc, wsncalc::parse_scope(a.scope), conv);
  std::cout << wsncalc::render(report, wsncalc::parse_report_format(a.format));
  return kOk;
}

struct SweepArgs {
  std::string file;
  std::string param;
  double from = 0.0, to = 0.0, step = 0.0;
  std::optional<double> at;
  std::optional<std::string> out;
  unsigned threads = 0;
};

int cmd_sweep(const SweepArgs& a) {
  auto doc = load(a.file);
  wsncalc::SweepRequest req;
  req.param = wsncalc::parse_sweep_param(a.param);
  req.from = a.from;
  req.to = a.to;
  req.step = a.step;
  req.eval_time = a.at;
  req.threads = a.threads;
  std::string csv = wsncalc::sweep_csv(req.param, wsncalc::sweep(doc, req));
  if (a.out) {
    write_file(*a.out, csv);
  } else {
    std::cout << csv;
  }
  return kOk;
}

struct ValidateArgs {
  std::string file;
  wsncalc::ValidationOptions options;
};

int cmd_validate(const ValidateArgs& a) {
  auto doc = load(a.file);
  auto report = wsncalc::validate(doc, a.options);
  std::cout << wsncalc::render_validation(report);
  return report.passed() ? kOk : kValidationFailure;
}

// Runs every built-in scenario, prints one line per expected value and
// optionally writes the documents and their reports.
int cmd_replicate(const std::optional<std::string>& out_dir) {
  if (out_dir) std::filesystem::create_directories(*out_dir);
  bool all_ok = true;
  for (const auto& s : wsncalc::builtin_scenarios()) {
    auto doc = wsncalc::parse_scenario(s.text);
    auto report = wsncalc::run_report(doc, wsncalc::Scope::all);
    std::cout << s.name << ": " << s.description << '\n';
    for (const auto& e : s.expected) {
      double got = NAN;
      if (e.quantity == "D" || e.quantity == "e") {
        for (const auto& b : report.nodes.front().bounds) {
          if (b.flow_id == e.flow_id) got = (e.quantity == "D" ? b.delay : b.effective_bandwidth).value();
        }
      } else {
        for (const auto& p : report.path) {
          if (p.flow_id != e.flow_id) continue;
          if (e.quantity == "DD") got = p.delay;
          if (e.quantity == "jitter") got = p.jitter;
          if (e.quantity == "ee") got = p.effective_bandwidth;
        }
      }
      bool ok = std::abs(got - e.value) <= e.tolerance + 1e-9;
      all_ok = all_ok && ok;
      std::cout << "  " << (ok ? "ok  " : "DIFF") << "  " << e.flow_id << ' ' << e.quantity << " = "
                << wsncalc::format_sig4(got) << "  expected " << wsncalc::format_sig4(e.value) << " +/- "
                << wsncalc::format_sig4(e.tolerance) << '\n';
    }
    if (out_dir) {
      std::filesystem::path dir(*out_dir);
      write_file(dir / (s.name + ".json"), s.text);
      write_file(dir / (s.name + ".report.txt"), wsncalc::render_table(report));
      write_file(dir / (s.name + ".report.csv"), wsncalc::render_csv(report));
      write_file(dir / (s.name + ".report.json"), wsncalc::render_json(report));
    }
  }
  std::cout << (all_ok ? "all built-in scenarios match" : "some built-in scenarios differ") << '\n';
  return all_ok ? kOk : kValidationFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Worst-case QoS bounds for flows of token-bucket micro-flows over rate-latency nodes"};
  app.set_version_flag("--version", std::string(wsncalc::kToolVersion));
  app.require_subcommand(1);

  ReportArgs report_args;
  auto* report = app.add_subcommand("report", "Node and end-to-end bounds for every flow");
  report->add_option("file", report_args.file, "Scenario file, or builtin:<name>")->required();
  report->add_option("--scope", report_args.scope, "node, path or all")
      ->check(CLI::IsMember({"node", "path", "all"}));
  report->add_option("--convention", report_args.convention, "strict or paper (overrides the document)")
      ->check(CLI::IsMember({"strict", "paper", "strict_eq17", "paper_numeric"}));
  report->add_option("--format", report_args.format, "table, csv or json")
      ->check(CLI::IsMember({"table", "csv", "json"}));

  SweepArgs sweep_args;
  auto* sweep = app.add_subcommand("sweep", "Bounds over a range of one parameter, as CSV");
  sweep->add_option("file", sweep_args.file, "Scenario file, or builtin:<name>")->required();
  sweep->add_option("--param", sweep_args.param, "R, T, d, N, H or t")->required();
  sweep->add_option("--from", sweep_args.from, "First value")->required();
  sweep->add_option("--to", sweep_args.to, "Last value (inclusive)")->required();
  sweep->add_option("--step", sweep_args.step, "Increment")->required();
  sweep->add_option("--at", sweep_args.at, "Report the backlog at this time (ms) instead of its supremum");
  sweep->add_option("--out", sweep_args.out, "Output CSV file (default: stdout)");
  sweep->add_option("--threads", sweep_args.threads, "Worker threads (0: all cores)");

  ValidateArgs validate_args;
  auto* validate = app.add_subcommand("validate", "Check every bound against sampled curves and a greedy source");
  validate->add_option("file", validate_args.file, "Scenario file, or builtin:<name>")->required();
  validate->add_option("--grid-step", validate_args.options.grid_step, "Grid step in ms");
  validate->add_option("--horizon-factor", validate_args.options.horizon_factor,
                       "Horizon as a multiple of the largest delay bound");
  validate->add_option("--bound-scale", validate_args.options.bound_scale,
                       "Scale the closed-form bounds (harness self-test)")
      ->group("");
  validate->add_option("--threads", validate_args.options.threads, "Worker threads (0: all cores)");

  std::optional<std::string> replicate_out;
  auto* replicate = app.add_subcommand("replicate-paper", "Run the built-in scenarios against their expected values");
  replicate->add_option("--out", replicate_out, "Directory for scenario documents and reports");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kInputError;
  }

  try {
    if (*report) return cmd_report(report_args);
    if (*sweep) return cmd_sweep(sweep_args);
    if (*validate) return cmd_validate(validate_args);
    if (*replicate) return cmd_replicate(replicate_out);
  } catch (const wsncalc::UnstableNode& e) {
    std::cerr << "wsncalc: " << e.what() << '\n';
    return kUnstable;
  } catch (const wsncalc::HorizonTooShort& e) {
    std::cerr << "wsncalc: " << e.what() << '\n';
    return kValidationFailure;
  } catch (const wsncalc::ScenarioError& e) {
    std::cerr << "wsncalc: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "wsncalc: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}
