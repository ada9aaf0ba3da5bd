#include "wsncalc/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "json.hpp"
#include "wsncalc/errors.hpp"

namespace wsncalc {

std::string_view to_string(Scope s) {
  switch (s) {
    case Scope::node: return "node";
    case Scope::path: return "path";
    case Scope::all: return "all";
  }
  return "all";
}

Scope parse_scope(std::string_view text) {
  if (text == "node") return Scope::node;
  if (text == "path") return Scope::path;
  if (text == "all") return Scope::all;
  throw InvalidArgument("unknown scope '" + std::string(text) + "' (expected node, path or all)");
}

std::string_view to_string(ReportFormat f) {
  switch (f) {
    case ReportFormat::table: return "table";
    case ReportFormat::csv: return "csv";
    case ReportFormat::json: return "json";
  }
  return "table";
}

ReportFormat parse_report_format(std::string_view text) {
  if (text == "table") return ReportFormat::table;
  if (text == "csv") return ReportFormat::csv;
  if (text == "json") return ReportFormat::json;
  throw InvalidArgument("unknown format '" + std::string(text) + "' (expected table, csv or json)");
}

BoundsReport run_report(const ScenarioDocument& doc, Scope scope, std::optional<Convention> convention) {
  PathScenario path = doc.to_path_scenario();
  if (convention) path.convention = *convention;
  path.validate();

  for (std::size_t i = 0; i < path.hops.size(); ++i) {
    auto st = stability_check(path.node(i), path.constants);
    if (!st) throw UnstableNode(path.hops[i].id, st.total_rate, st.service_rate);
  }

  BoundsReport r;
  r.scenario_name = doc.name;
  r.convention = path.convention;
  r.ee_mode = path.ee_mode;
  r.scope = scope;
  if (scope != Scope::path) {
    for (std::size_t i = 0; i < path.hops.size(); ++i) {
      NodeSpec node = path.node(i);
      NodeReport nr{node.id, stability_check(node, path.constants), {}};
      for (const auto& f : path.flows) nr.bounds.push_back(node_bounds(node, f.id, path.convention, path.constants));
      r.nodes.push_back(std::move(nr));
    }
  }
  if (scope != Scope::node) {
    for (const auto& f : path.flows) r.path.push_back(path_bounds(path, f.id));
  }
  return r;
}

std::string format_sig4(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  if (v == 0.0) return "0.000";
  // Digits before the point after rounding to four significant digits.
  int magnitude = static_cast<int>(std::floor(std::log10(std::abs(v))));
  int decimals = std::max(0, 3 - magnitude);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  // Rounding may carry into a new digit (9.9996 -> 10.000); drop the extra decimal.
  std::string s(buf);
  double rounded = std::abs(std::strtod(buf, nullptr));
  if (decimals > 0 && rounded >= std::pow(10.0, magnitude + 1)) {
    std::snprintf(buf, sizeof buf, "%.*f", decimals - 1, v);
    s = buf;
  }
  if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

std::string format_sig4(const Extended& v) { return v.is_infinite() ? "inf" : format_sig4(v.value()); }

namespace {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void print(std::ostringstream& out) const {
    std::vector<std::size_t> width(header.size());
    for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
    for (const auto& row : rows) {
      for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
    }
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t c = 0; c < cells.size(); ++c) {
        if (c) out << "  ";
        // Text columns left-aligned, numbers right-aligned.
        if (c < 2) {
          out << cells[c] << std::string(width[c] - cells[c].size(), ' ');
        } else {
          out << std::string(width[c] - cells[c].size(), ' ') << cells[c];
        }
      }
      out << '\n';
    };
    line(header);
    std::size_t total = 0;
    for (auto w : width) total += w;
    out << std::string(total + 2 * (width.size() - 1), '-') << '\n';
    for (const auto& row : rows) line(row);
  }
};

}  // namespace

std::string render_table(const BoundsReport& r) {
  std::ostringstream out;
  out << "scenario: " << (r.scenario_name.empty() ? "(unnamed)" : r.scenario_name) << '\n';
  out << "convention: " << to_string(r.convention) << "  ee_mode: " << to_string(r.ee_mode)
      << "  units: Mbps, Kb, ms  wsncalc " << r.tool_version << '\n';
  if (!r.nodes.empty()) {
    out << '\n';
    Table t{{"node", "flow", "Q [Kb]", "D [ms]", "e [Mbps]"}, {}};
    for (const auto& n : r.nodes) {
      for (const auto& b : n.bounds) {
        t.rows.push_back({n.node_id, b.flow_id, format_sig4(b.backlog), format_sig4(b.delay),
                          format_sig4(b.effective_bandwidth)});
      }
    }
    t.print(out);
  }
  if (!r.path.empty()) {
    out << '\n';
    Table t{{"path", "flow", "DD [ms]", "jitter [ms]", "ee [Mbps]", "sum d [ms]"}, {}};
    for (const auto& p : r.path) {
      t.rows.push_back({"end-to-end", p.flow_id, format_sig4(p.delay), format_sig4(p.jitter),
                        format_sig4(p.effective_bandwidth), format_sig4(p.fixed_delay_sum)});
    }
    t.print(out);
  }
  return out.str();
}

std::string render_csv(const BoundsReport& r) {
  std::ostringstream out;
  out << "scope,node,flow_id,quantity,value,unit\n";
  for (const auto& n : r.nodes) {
    for (const auto& b : n.bounds) {
      out << "node," << n.node_id << ',' << b.flow_id << ",Q," << format_sig4(b.backlog) << ",Kb\n";
      out << "node," << n.node_id << ',' << b.flow_id << ",D," << format_sig4(b.delay) << ",ms\n";
      out << "node," << n.node_id << ',' << b.flow_id << ",e," << format_sig4(b.effective_bandwidth) << ",Mbps\n";
    }
  }
  for (const auto& p : r.path) {
    out << "path,," << p.flow_id << ",DD," << format_sig4(p.delay) << ",ms\n";
    out << "path,," << p.flow_id << ",jitter," << format_sig4(p.jitter) << ",ms\n";
    out << "path,," << p.flow_id << ",ee," << format_sig4(p.effective_bandwidth) << ",Mbps\n";
  }
  return out.str();
}

namespace {

// Numbers are emitted as the same 4-significant-digit text the other formats
// use, so every format is byte-stable.
nlohmann::ordered_json number(const Extended& v) {
  if (v.is_infinite()) return "inf";
  return nlohmann::ordered_json::parse(format_sig4(v.value()));
}

}  // namespace

std::string render_json(const BoundsReport& r) {
  using json = nlohmann::ordered_json;
  json root;
  root["tool"] = "wsncalc";
  root["tool_version"] = r.tool_version;
  root["scenario"] = r.scenario_name;
  root["convention"] = std::string(to_string(r.convention));
  root["ee_mode"] = std::string(to_string(r.ee_mode));
  root["scope"] = std::string(to_string(r.scope));
  root["units"] = json{{"rate", "Mbps"}, {"data", "Kb"}, {"time", "ms"}};
  if (r.scope != Scope::path) {
    json nodes = json::array();
    for (const auto& n : r.nodes) {
      json flows = json::array();
      for (const auto& b : n.bounds) {
        flows.push_back(json{{"flow_id", b.flow_id},
                             {"Q", number(b.backlog)},
                             {"D", number(b.delay)},
                             {"e", number(b.effective_bandwidth)}});
      }
      nodes.push_back(json{{"id", n.node_id},
                           {"total_rate", number(n.stability.total_rate)},
                           {"service_rate", number(n.stability.service_rate)},
                           {"flows", flows}});
    }
    root["nodes"] = nodes;
  }
  if (r.scope != Scope::node) {
    json path = json::array();
    for (const auto& p : r.path) {
      path.push_back(json{{"flow_id", p.flow_id},
                          {"DD", number(p.delay)},
                          {"jitter", number(p.jitter)},
                          {"ee", number(p.effective_bandwidth)},
                          {"fixed_delay_sum", number(p.fixed_delay_sum)}});
    }
    root["path"] = path;
  }
  return root.dump(2) + "\n";
}

std::string render(const BoundsReport& r, ReportFormat format) {
  switch (format) {
    case ReportFormat::table: return render_table(r);
    case ReportFormat::csv: return render_csv(r);
    case ReportFormat::json: return render_json(r);
  }
  return render_table(r);
}

}  // namespace wsncalc
