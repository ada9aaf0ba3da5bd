// Built-in replication scenarios: three flows of six leaky-bucket micro-flows
// crossing homogeneous (case 1) and heterogeneous (case 2) tandems, and their
// self-similar variants. Expected values are reference bounds with the
// tolerance each one is checked at.

#include <array>

#include "json.hpp"
#include "wsncalc/errors.hpp"
#include "wsncalc/scenario.hpp"

namespace wsncalc {

namespace {

using json = nlohmann::ordered_json;

struct MicroFlowRow {
  const char* flow;
  const char* id;
  double rate_kbps;
  double burst_kb;
};

constexpr std::array<MicroFlowRow, 6> kMicroFlows{{
    {"A1", "1", 500, 30},
    {"A1", "2", 300, 300},
    {"A1", "3", 420, 150},
    {"A2", "1", 600, 200},
    {"A2", "2", 240, 500},
    {"A3", "1", 300, 200},
}};

// hurst < 0 selects plain token buckets; otherwise every micro-flow is
// fractal with m = r and sigma = b. `per_flow_hurst` overrides per micro-flow.
json flows_json(double hurst, const std::array<double, 6>* per_flow_hurst = nullptr) {
  json flows = json::array();
  for (std::size_t k = 0; k < kMicroFlows.size(); ++k) {
    const auto& row = kMicroFlows[k];
    if (flows.empty() || flows.back()["id"] != row.flow) {
      flows.push_back(json{{"id", row.flow}, {"micro_flows", json::array()}});
    }
    json mf{{"id", row.id}};
    if (hurst < 0.0 && !per_flow_hurst) {
      mf["token_bucket"] = json{{"rate", row.rate_kbps}, {"burst", row.burst_kb}};
    } else {
      double h = per_flow_hurst ? (*per_flow_hurst)[k] : hurst;
      mf["fractal"] = json{{"mean", row.rate_kbps}, {"std_dev", row.burst_kb}, {"hurst", h}};
    }
    flows.back()["micro_flows"].push_back(mf);
  }
  return flows;
}

json homogeneous(const std::string& name, int hops, double rate_mbps, double latency_ms, double delay_ms,
                 json flows) {
  json doc;
  doc["version"] = std::string(kScenarioVersion);
  doc["name"] = name;
  // Flow parameters are written in Kbps; node rates are given
  // in Kbps as well so that a single unit block applies.
  doc["units"] = json{{"rate", "Kbps"}, {"data", "Kb"}, {"time", "ms"}};
  doc["convention"] = "paper";
  doc["ee_mode"] = "aggregate";
  doc["fractal_gamma"] = 6;
  json nodes = json::array();
  json path = json::array();
  for (int i = 1; i <= hops; ++i) {
    std::string id = "n" + std::to_string(i);
    nodes.push_back(json{{"id", id}, {"rate", rate_mbps * 1000.0}, {"latency", latency_ms}});
    path.push_back(id);
  }
  doc["nodes"] = nodes;
  doc["flows"] = std::move(flows);
  doc["path"] = path;
  doc["fixed_delays"] = std::vector<double>(static_cast<std::size_t>(hops - 1), delay_ms);
  return doc;
}

json case2() {
  json doc;
  doc["version"] = std::string(kScenarioVersion);
  doc["name"] = "case2";
  doc["units"] = json{{"rate", "Kbps"}, {"data", "Kb"}, {"time", "ms"}};
  doc["convention"] = "paper";
  doc["ee_mode"] = "aggregate";
  doc["fractal_gamma"] = 6;
  const std::array<std::pair<double, double>, 5> service{{{540, 5.80}, {510, 7.80}, {624, 3.38}, {480, 6.54}, {420, 3.20}}};
  json nodes = json::array();
  json path = json::array();
  for (std::size_t i = 0; i < service.size(); ++i) {
    std::string id = "n" + std::to_string(i + 1);
    nodes.push_back(json{{"id", id}, {"rate", service[i].first * 1000.0}, {"latency", service[i].second}});
    path.push_back(id);
  }
  doc["nodes"] = nodes;
  doc["flows"] = flows_json(-1.0);
  doc["path"] = path;
  doc["fixed_delays"] = {1.2, 2.3, 2.0, 3.5, 2.6};
  return doc;
}

std::vector<ExpectedValue> triple(const char* quantity, double a1, double a2, double a3, double tol) {
  return {{"A1", quantity, a1, tol}, {"A2", quantity, a2, tol}, {"A3", quantity, a3, tol}};
}

void append(std::vector<ExpectedValue>& out, std::vector<ExpectedValue> more) {
  out.insert(out.end(), more.begin(), more.end());
}

std::vector<BuiltinScenario> make_builtins() {
  std::vector<BuiltinScenario> out;

  {
    BuiltinScenario s{"case2", "five heterogeneous nodes, fixed delays 1.2/2.3/2.0/3.5/2.6 ms", case2().dump(2) + "\n", {}};
    append(s.expected, triple("DD", 58.9, 59.4, 58.2, 0.1));
    append(s.expected, triple("jitter", 47.3, 47.8, 46.6, 0.1));
    append(s.expected, triple("ee", 8.15, 11.78, 3.43, 0.02));
    out.push_back(std::move(s));
  }
  {
    BuiltinScenario s{"case1_N10_R200", "ten identical nodes, R=200 Mbps, T=1 ms, d=2 ms",
                      homogeneous("case1_N10_R200", 10, 200, 1, 2, flows_json(-1.0)).dump(2) + "\n", {}};
    append(s.expected, triple("DD", 100, 102, 99, 1.0));
    append(s.expected, triple("D", 10.3, 11.4, 8.9, 0.1));
    append(s.expected, triple("e", 46.47, 61.18, 22.44, 0.2));
    out.push_back(std::move(s));
  }
  {
    BuiltinScenario s{"case1_N10_R50", "ten identical nodes, R=50 Mbps, T=1 ms, d=2 ms",
                      homogeneous("case1_N10_R50", 10, 50, 1, 2, flows_json(-1.0)).dump(2) + "\n", {}};
    append(s.expected, triple("DD", 315, 320, 309, 1.0));
    s.expected.push_back({"A1", "D", 38.7, 0.5});
    s.expected.push_back({"A2", "D", 43.3, 0.3});
    s.expected.push_back({"A3", "D", 32.8, 0.3});
    append(s.expected, triple("e", 12.41, 16.17, 6.10, 0.1));
    out.push_back(std::move(s));
  }
  {
    BuiltinScenario s{"singlehop", "one node, R=100 Mbps, T=1 ms",
                      homogeneous("singlehop", 1, 100, 1, 2, flows_json(-1.0)).dump(2) + "\n", {}};
    append(s.expected, triple("DD", 21, 23, 18, 1.0));
    append(s.expected, triple("ee", 23.2, 30.5, 11.2, 0.2));
    out.push_back(std::move(s));
  }
  {
    BuiltinScenario s{"fractal_H075", "self-similar micro-flows, H=0.75, ten nodes R=100 Mbps",
                      homogeneous("fractal_H075", 10, 100, 1, 2, flows_json(0.75)).dump(2) + "\n", {}};
    append(s.expected, triple("DD", 215.9, 218.9, 212.1, 0.5));
    out.push_back(std::move(s));
  }
  {
    BuiltinScenario s{"fractal_H095", "self-similar micro-flows, H=0.95, ten nodes R=100 Mbps",
                      homogeneous("fractal_H095", 10, 100, 1, 2, flows_json(0.95)).dump(2) + "\n", {}};
    append(s.expected, triple("DD", 129, 131, 127, 1.0));
    out.push_back(std::move(s));
  }
  {
    const std::array<double, 6> mixed{0.90, 0.80, 0.75, 0.85, 0.60, 0.70};
    BuiltinScenario s{"fractal_mixed", "self-similar micro-flows with individual Hurst parameters",
                      homogeneous("fractal_mixed", 10, 100, 1, 2, flows_json(0.0, &mixed)).dump(2) + "\n", {}};
    append(s.expected, triple("DD", 222, 226, 218, 1.0));
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

const std::vector<BuiltinScenario>& builtin_scenarios() {
  static const std::vector<BuiltinScenario> all = make_builtins();
  return all;
}

const BuiltinScenario& builtin_scenario(std::string_view name) {
  for (const auto& s : builtin_scenarios()) {
    if (s.name == name) return s;
  }
  throw InvalidArgument("unknown built-in scenario '" + std::string(name) + "'");
}

}  // namespace wsncalc
