#include <map>

#include "doctest.h"
#include "wsncalc/errors.hpp"
#include "wsncalc/sweep.hpp"
#include "wsncalc/validate.hpp"

using namespace wsncalc;
using doctest::Approx;

namespace {

ScenarioDocument builtin(std::string_view name) { return parse_scenario(builtin_scenario(name).text); }

std::map<std::string, std::vector<SweepRow>> by_flow(const std::vector<SweepRow>& rows) {
  std::map<std::string, std::vector<SweepRow>> out;
  for (const auto& r : rows) out[r.flow_id].push_back(r);
  return out;
}

}  // namespace

TEST_SUITE("sweep") {
  TEST_CASE("range expansion") {
    SweepRequest req{SweepParam::R, 50, 200, 10, std::nullopt, 0};
    auto v = sweep_values(req);
    REQUIRE(v.size() == 16);
    CHECK(v.front() == 50.0);
    CHECK(v.back() == 200.0);
    req.step = 0.1;
    req.from = 0.0;
    req.to = 1.0;
    CHECK(sweep_values(req).size() == 11);
    CHECK_THROWS_AS(sweep_values({SweepParam::R, 200, 50, 10, std::nullopt, 0}), InvalidArgument);
    CHECK_THROWS_AS(sweep_values({SweepParam::R, 50, 200, 0, std::nullopt, 0}), InvalidArgument);
    CHECK_THROWS_AS(sweep_values({SweepParam::R, 50, 200, -1, std::nullopt, 0}), InvalidArgument);
    CHECK(sweep_values({SweepParam::R, 5, 5, 1, std::nullopt, 0}).size() == 1);
  }

  TEST_CASE("parameter names") {
    CHECK(parse_sweep_param("R") == SweepParam::R);
    CHECK(parse_sweep_param("H") == SweepParam::H);
    CHECK_THROWS_AS(parse_sweep_param("Z"), InvalidArgument);
    CHECK(to_string(SweepParam::N) == "N");
  }

  TEST_CASE("service rate sweep endpoints") {
    auto rows = by_flow(sweep(builtin("case1_N10_R200"), {SweepParam::R, 50, 200, 10, std::nullopt, 1}));
    REQUIRE(rows["A1"].size() == 16);
    CHECK(rows["A1"].front().delay.value() == Approx(38.42).epsilon(2e-4));
    CHECK(rows["A2"].front().delay.value() == Approx(43.04).epsilon(2e-4));
    CHECK(rows["A3"].front().delay.value() == Approx(32.77).epsilon(2e-4));
    CHECK(rows["A1"].back().delay.value() == Approx(10.31).epsilon(5e-4));
    CHECK(rows["A2"].back().delay.value() == Approx(11.43).epsilon(5e-4));
    CHECK(rows["A3"].back().delay.value() == Approx(8.91).epsilon(5e-4));
    for (const auto& [id, series] : rows) {
      for (std::size_t k = 1; k < series.size(); ++k) {
        CHECK(series[k].delay.value() < series[k - 1].delay.value());
        CHECK(series[k].backlog.value() <= series[k - 1].backlog.value());
        CHECK(series[k].path_delay.value() < series[k - 1].path_delay.value());
      }
    }
  }

  TEST_CASE("unstable points are infinite") {
    auto rows = sweep(builtin("case1_N10_R200"), {SweepParam::R, 1, 3, 1, std::nullopt, 1});
    for (const auto& r : rows) {
      if (r.value < 2.36) {
        CHECK(r.delay.is_infinite());
        CHECK(r.path_delay.is_infinite());
      } else {
        CHECK_FALSE(r.delay.is_infinite());
      }
    }
  }

  TEST_CASE("hop count sweep grows by one residual latency and one fixed delay") {
    auto doc = builtin("case1_N10_R200");
    auto rows = by_flow(sweep(doc, {SweepParam::N, 1, 12, 1, std::nullopt, 1}));
    auto path = doc.to_path_scenario();
    for (const auto& [id, series] : rows) {
      auto res = residual_service(path.node(0), id, path.convention);
      REQUIRE(series.size() == 12);
      for (std::size_t k = 1; k < series.size(); ++k) {
        CHECK(series[k].path_delay.value() - series[k - 1].path_delay.value() ==
              Approx(res.latency + path.fixed_delays.front()));
      }
    }
    CHECK_THROWS_AS(sweep(doc, {SweepParam::N, 0.5, 2, 0.5, std::nullopt, 1}), InvalidArgument);
  }

  TEST_CASE("Hurst sweep needs fractal flows") {
    CHECK_THROWS_AS(sweep(builtin("case2"), {SweepParam::H, 0.6, 0.9, 0.1, std::nullopt, 1}), InvalidArgument);
    auto rows = by_flow(sweep(builtin("fractal_H075"), {SweepParam::H, 0.6, 0.95, 0.05, std::nullopt, 1}));
    for (const auto& [id, series] : rows) {
      for (std::size_t k = 1; k < series.size(); ++k) {
        CHECK(series[k].path_delay.value() < series[k - 1].path_delay.value());
      }
    }
    CHECK_THROWS(sweep(builtin("fractal_H075"), {SweepParam::H, 0.5, 0.9, 0.1, std::nullopt, 1}));
  }

  TEST_CASE("backlog grows affinely with latency") {
    auto rows = by_flow(sweep(builtin("case1_N10_R200"), {SweepParam::T, 0, 10, 1, std::nullopt, 1}));
    for (const auto& [id, series] : rows) {
      double slope = series[1].backlog.value() - series[0].backlog.value();
      CHECK(slope > 0.0);
      for (std::size_t k = 1; k < series.size(); ++k) {
        CHECK(series[k].backlog.value() - series[k - 1].backlog.value() == Approx(slope).epsilon(1e-9));
      }
    }
  }

  TEST_CASE("bounded-time backlog is affine in t") {
    auto rows = by_flow(sweep(builtin("case1_N10_R200"), {SweepParam::t, 20, 60, 5, std::nullopt, 1}));
    for (const auto& [id, series] : rows) {
      double slope = series[1].backlog.value() - series[0].backlog.value();
      for (std::size_t k = 1; k < series.size(); ++k) {
        CHECK(series[k].backlog.value() - series[k - 1].backlog.value() == Approx(slope).epsilon(1e-9));
      }
    }
  }

  TEST_CASE("bounded-time backlog peaks inside the rate range") {
    auto rows = by_flow(sweep(builtin("case1_N10_R200"), {SweepParam::R, 5, 200, 5, 15.0, 1}));
    for (const auto& [id, series] : rows) {
      std::size_t peak = 0;
      for (std::size_t k = 0; k < series.size(); ++k) {
        if (series[k].backlog.value() > series[peak].backlog.value()) peak = k;
      }
      CAPTURE(id);
      CHECK(peak > 0);
      CHECK(peak + 1 < series.size());
    }
  }

  TEST_CASE("csv") {
    auto rows = sweep(builtin("case2"), {SweepParam::d, 0, 1, 0.5, std::nullopt, 1});
    std::string csv = sweep_csv(SweepParam::d, rows);
    CHECK(csv.rfind("d,flow_id,Q,D,e,DD,jitter,ee\n", 0) == 0);
    CHECK(csv.find("\n0.5,A1,") != std::string::npos);
    CHECK(csv.find('\r') == std::string::npos);
    std::size_t lines = 0;
    for (char c : csv) lines += c == '\n';
    CHECK(lines == 1 + 3 * 3);
  }

  TEST_CASE("thread count does not change the result") {
    auto doc = builtin("case2");
    std::string one = sweep_csv(SweepParam::R, sweep(doc, {SweepParam::R, 420, 600, 10, std::nullopt, 1}));
    std::string four = sweep_csv(SweepParam::R, sweep(doc, {SweepParam::R, 420, 600, 10, std::nullopt, 4}));
    CHECK(one == four);
  }
}

TEST_SUITE("validate") {
  TEST_CASE("reference scenario passes") {
    auto report = validate(builtin("case2"), {0.05, 4.0, 1.0, 1});
    CHECK(report.passed());
    CHECK(report.node_horizon > 0.0);
    CHECK(report.path_horizon >= report.node_horizon);
    std::size_t dd = 0;
    for (const auto& c : report.checks) {
      CAPTURE(c.where);
      CAPTURE(c.quantity);
      CHECK(c.simulated <= c.bound + c.tolerance);
      dd += c.quantity == "DD";
    }
    CHECK(dd == 3);
    std::string text = render_validation(report);
    CHECK(text.find("PASS") != std::string::npos);
  }

  TEST_CASE("scaled-down bounds fail") {
    auto report = validate(builtin("case2"), {0.05, 4.0, 0.9, 1});
    CHECK_FALSE(report.passed());
    CHECK(render_validation(report).find("FAIL") != std::string::npos);
  }

  TEST_CASE("grid error shrinks with the step") {
    auto path = builtin("case2").to_path_scenario();
    auto coarse = node_grid_error(path, 0.1);
    auto fine = node_grid_error(path, 0.05);
    CHECK(fine.count == coarse.count);
    CHECK(fine.backlog <= coarse.backlog);
    CHECK(fine.delay <= coarse.delay);
  }

  TEST_CASE("bad options") {
    CHECK_THROWS_AS(validate(builtin("case2"), {0.0, 4.0, 1.0, 1}), InvalidArgument);
    CHECK_THROWS_AS(validate(builtin("case2"), {0.05, 0.5, 1.0, 1}), InvalidArgument);
  }
}
