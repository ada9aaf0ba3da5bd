#include <string>

#include "doctest.h"
#include "wsncalc/errors.hpp"
#include "wsncalc/report.hpp"
#include "wsncalc/scenario.hpp"

using namespace wsncalc;
using doctest::Approx;

namespace {

const char* kMinimal = R"({
  "version": "wsncalc/1",
  "name": "mini",
  "units": {"rate": "Kbps", "data": "Kb", "time": "ms"},
  "nodes": [
    {"id": "a", "rate": 100000, "latency": 1},
    {"id": "b", "rate": 50000, "latency": 2}
  ],
  "flows": [
    {"id": "F", "micro_flows": [{"id": "1", "token_bucket": {"rate": 500, "burst": 30}}]},
    {"id": "G", "micro_flows": [{"id": "1", "fractal": {"mean": 300, "std_dev": 20, "hurst": 0.8}}]}
  ],
  "path": ["a", "b"],
  "fixed_delays": [1.5]
})";

std::string replace(std::string text, const std::string& from, const std::string& to) {
  auto pos = text.find(from);
  REQUIRE(pos != std::string::npos);
  return text.replace(pos, from.size(), to);
}

std::string error_of(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const ScenarioError& e) {
    return e.what();
  }
  return "";
}

bool contains(const std::string& s, const std::string& part) { return s.find(part) != std::string::npos; }

}  // namespace

TEST_SUITE("scenario_io") {
  TEST_CASE("parse converts to canonical units") {
    auto doc = parse_scenario(kMinimal);
    CHECK(doc.name == "mini");
    REQUIRE(doc.nodes.size() == 2);
    CHECK(doc.nodes[0].rate == Approx(100.0));
    CHECK(doc.nodes[1].latency == 2.0);
    const auto& tb = std::get<TokenBucketEnvelope>(doc.flows[0].micro_flows[0].kind);
    CHECK(tb.pieces[0].rate == Approx(0.5));
    CHECK(tb.pieces[0].burst == 30.0);
    const auto& fp = std::get<FractalParams>(doc.flows[1].micro_flows[0].kind);
    CHECK(fp.mean_rate == Approx(0.3));
    CHECK(fp.hurst == 0.8);
    CHECK(doc.fixed_delays == std::vector<double>{1.5});
    CHECK(doc.convention == Convention::paper);
    CHECK(doc.ee_mode == EeMode::aggregate);
  }

  TEST_CASE("seconds and megabits") {
    auto doc = parse_scenario(replace(replace(kMinimal, R"("data": "Kb", "time": "ms")", R"("data": "Mb", "time": "s")"),
                                      R"("burst": 30)", R"("burst": 0.03)"));
    CHECK(doc.nodes[0].latency == Approx(1000.0));
    CHECK(doc.fixed_delays[0] == Approx(1500.0));
    CHECK(std::get<TokenBucketEnvelope>(doc.flows[0].micro_flows[0].kind).pieces[0].burst == Approx(30.0));
  }

  TEST_CASE("path defaults to node order") {
    auto doc = parse_scenario(replace(kMinimal, R"("path": ["a", "b"],)", ""));
    CHECK(doc.path == std::vector<std::string>{"a", "b"});
  }

  TEST_CASE("syntax errors carry line and column") {
    std::string bad = replace(kMinimal, R"("name": "mini",)", R"("name": "mini" "x",)");
    std::string msg = error_of(bad);
    CHECK(contains(msg, "line 3, column"));
    CHECK(contains(error_of("{"), "line 1"));
  }

  TEST_CASE("schema errors carry a JSON pointer") {
    CHECK(contains(error_of(replace(kMinimal, R"("name": "mini",)", R"("name": "mini", "colour": 1,)")), "/colour"));
    CHECK(contains(error_of(replace(kMinimal, R"("latency": 2})", R"("latency": 2, "qos": 3})")), "/nodes/1/qos"));
    CHECK(contains(error_of(replace(kMinimal, R"("path": ["a", "b"])", R"("path": ["a", "c"])")), "/path/1"));
    CHECK(contains(error_of(replace(kMinimal, R"("rate": "Kbps")", R"("rate": "bps")")), "/units/rate"));
    CHECK(contains(error_of(replace(kMinimal, R"("hurst": 0.8)", R"("hurst": 1.2)")),
                   "/flows/1/micro_flows/0/fractal/hurst"));
    CHECK(contains(error_of(replace(kMinimal, R"("hurst": 0.8)", R"("hurst": 0.5)")), "hurst"));
    CHECK(contains(error_of(replace(kMinimal, R"("burst": 30)", R"("burst": -30)")), "/flows/0/micro_flows/0"));
    CHECK(contains(error_of(replace(kMinimal, R"("fixed_delays": [1.5])", R"("fixed_delays": [1, 2, 3])")),
                   "/fixed_delays"));
    CHECK(contains(error_of(replace(kMinimal, R"("version": "wsncalc/1")", R"("version": "wsncalc/9")")), "/version"));
  }

  TEST_CASE("empty collections and duplicates are rejected") {
    std::string no_micro = replace(kMinimal, R"("micro_flows": [{"id": "1", "token_bucket": {"rate": 500, "burst": 30}}])",
                                   R"("micro_flows": [])");
    CHECK(contains(error_of(no_micro), "/flows/0/micro_flows"));
    std::string dup = replace(kMinimal, R"({"id": "G")", R"({"id": "F")");
    CHECK(contains(error_of(dup), "/flows/1/id"));
    CHECK(contains(error_of(R"({"version": "wsncalc/1", "units": {"rate": "Mbps", "data": "Kb", "time": "ms"},
                               "nodes": [], "flows": []})"),
                   "/nodes"));
  }

  TEST_CASE("unknown conventions are rejected with their location") {
    std::string bad = replace(kMinimal, R"("name": "mini",)", R"("name": "mini", "convention": "loose",)");
    CHECK(contains(error_of(bad), "/convention"));
    std::string ok = replace(kMinimal, R"("name": "mini",)", R"("name": "mini", "convention": "strict",)");
    CHECK(parse_scenario(ok).convention == Convention::strict);
  }

  TEST_CASE("serialize then parse is the identity") {
    for (const auto& b : builtin_scenarios()) {
      CAPTURE(b.name);
      auto doc = parse_scenario(b.text);
      std::string once = serialize_scenario(doc);
      auto again = parse_scenario(once);
      CHECK(serialize_scenario(again) == once);
      CHECK(again.path == doc.path);
      CHECK(again.fixed_delays == doc.fixed_delays);
      REQUIRE(again.nodes.size() == doc.nodes.size());
      for (std::size_t i = 0; i < doc.nodes.size(); ++i) {
        CHECK(again.nodes[i].rate == doc.nodes[i].rate);
        CHECK(again.nodes[i].latency == doc.nodes[i].latency);
      }
    }
    auto mini = parse_scenario(kMinimal);
    CHECK(serialize_scenario(parse_scenario(serialize_scenario(mini))) == serialize_scenario(mini));
  }

  TEST_CASE("builtin case2 holds the reference parameters") {
    auto doc = parse_scenario(builtin_scenario("case2").text);
    REQUIRE(doc.nodes.size() == 5);
    const double rates[] = {540, 510, 624, 480, 420};
    const double latencies[] = {5.80, 7.80, 3.38, 6.54, 3.20};
    for (int i = 0; i < 5; ++i) {
      CHECK(doc.nodes[i].rate == Approx(rates[i]));
      CHECK(doc.nodes[i].latency == Approx(latencies[i]));
    }
    CHECK(doc.fixed_delays == std::vector<double>{1.2, 2.3, 2.0, 3.5, 2.6});
    REQUIRE(doc.flows.size() == 3);
    CHECK(flow_affine_bound(doc.flows[0]).rate == Approx(1.22));
    CHECK(flow_affine_bound(doc.flows[0]).burst == Approx(480.0));
    CHECK(flow_affine_bound(doc.flows[1]).burst == Approx(700.0));
    CHECK(flow_affine_bound(doc.flows[2]).rate == Approx(0.3));
    CHECK_THROWS_AS(builtin_scenario("nope"), InvalidArgument);
  }

  TEST_CASE("every builtin reproduces its expected values") {
    for (const auto& b : builtin_scenarios()) {
      auto path = parse_scenario(b.text).to_path_scenario();
      for (const auto& e : b.expected) {
        CAPTURE(b.name);
        CAPTURE(e.flow_id);
        CAPTURE(e.quantity);
        double got = 0.0;
        if (e.quantity == "D") got = node_delay_bound(path.node(0), e.flow_id, path.convention).value();
        else if (e.quantity == "e") got = node_effective_bandwidth_bound(path.node(0), e.flow_id, path.convention).value();
        else if (e.quantity == "DD") got = path_delay_bound(path, e.flow_id);
        else if (e.quantity == "jitter") got = path_jitter_bound(path, e.flow_id);
        else if (e.quantity == "ee") got = path_effective_bandwidth_bound(path, e.flow_id, path.ee_mode);
        else FAIL("unknown quantity");
        CHECK(std::abs(got - e.value) <= e.tolerance);
      }
    }
  }

  TEST_CASE("load from a missing file") {
    CHECK_THROWS_AS(load_scenario_file("/nonexistent/scenario.json"), ScenarioError);
  }
}

TEST_SUITE("report") {
  TEST_CASE("four significant digits") {
    CHECK(format_sig4(58.9) == "58.90");
    CHECK(format_sig4(489.638) == "489.6");
    CHECK(format_sig4(0.52267) == "0.5227");
    // Exact binary ties go to even, as printf does.
    CHECK(format_sig4(0.52265) == "0.5226");
    CHECK(format_sig4(10.314) == "10.31");
    CHECK(format_sig4(1234.5) == "1234");
    CHECK(format_sig4(1235.5) == "1236");
    CHECK(format_sig4(99.996) == "100.0");
    CHECK(format_sig4(9.99996) == "10.00");
    CHECK(format_sig4(0.0) == "0.000");
    CHECK(format_sig4(-3.14159) == "-3.142");
    CHECK(format_sig4(Extended::infinite()) == "inf");
    CHECK(format_sig4(Extended(8.149)) == "8.149");
  }

  TEST_CASE("scope filtering") {
    auto doc = parse_scenario(builtin_scenario("case2").text);
    auto node = run_report(doc, Scope::node);
    CHECK(node.nodes.size() == 5);
    CHECK(node.path.empty());
    auto path = run_report(doc, Scope::path);
    CHECK(path.nodes.empty());
    CHECK(path.path.size() == 3);
    auto all = run_report(doc, Scope::all);
    CHECK(all.nodes.size() == 5);
    CHECK(all.path.size() == 3);
    CHECK(all.path[0].delay == Approx(58.90).epsilon(2e-4));
    CHECK(parse_scope("node") == Scope::node);
    CHECK_THROWS_AS(parse_scope("hop"), InvalidArgument);
    CHECK_THROWS_AS(parse_report_format("xml"), InvalidArgument);
  }

  TEST_CASE("convention override") {
    auto doc = parse_scenario(builtin_scenario("case2").text);
    auto strict = run_report(doc, Scope::path, Convention::strict);
    auto paper = run_report(doc, Scope::path, Convention::paper);
    CHECK(strict.convention == Convention::strict);
    for (std::size_t i = 0; i < strict.path.size(); ++i) CHECK(strict.path[i].delay < paper.path[i].delay);
  }

  TEST_CASE("unstable nodes are named") {
    auto doc = parse_scenario(kMinimal);
    doc.nodes[1].rate = 0.5;
    try {
      run_report(doc, Scope::all);
      FAIL("expected UnstableNode");
    } catch (const UnstableNode& e) {
      CHECK(e.node_id() == "b");
    }
  }

  TEST_CASE("csv layout") {
    auto r = run_report(parse_scenario(builtin_scenario("case2").text), Scope::all);
    std::string csv = render_csv(r);
    CHECK(csv.rfind("scope,node,flow_id,quantity,value,unit\n", 0) == 0);
    CHECK(csv.find('\r') == std::string::npos);
    CHECK(contains(csv, "node,n1,A1,Q,490.2,Kb\n"));
    CHECK(contains(csv, "path,,A1,DD,58.90,ms\n"));
    CHECK(contains(csv, "path,,A3,ee,3.435,Mbps\n"));
    CHECK(csv.back() == '\n');
  }

  TEST_CASE("json and table renderings") {
    auto r = run_report(parse_scenario(builtin_scenario("case2").text), Scope::path);
    std::string js = render_json(r);
    CHECK(contains(js, "\"tool_version\""));
    CHECK(contains(js, "58.9"));
    std::string table = render_table(r);
    CHECK(contains(table, "58.90"));
    CHECK(contains(table, "case2"));
  }

  TEST_CASE("output is byte-identical across runs") {
    auto doc = parse_scenario(builtin_scenario("fractal_mixed").text);
    for (auto f : {ReportFormat::table, ReportFormat::csv, ReportFormat::json}) {
      std::string first = render(run_report(doc, Scope::all), f);
      for (int i = 0; i < 3; ++i) CHECK(render(run_report(parse_scenario(serialize_scenario(doc)), Scope::all), f) == first);
    }
  }
}
