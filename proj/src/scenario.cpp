#include "wsncalc/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"
#include "wsncalc/errors.hpp"

namespace wsncalc {

using json = nlohmann::ordered_json;

double Units::rate_in_mbps(double v) const { return rate == "Kbps" ? v / 1000.0 : v; }
double Units::data_in_kb(double v) const { return data == "Mb" ? v * 1000.0 : v; }
double Units::time_in_ms(double v) const { return time == "s" ? v * 1000.0 : v; }

PathScenario ScenarioDocument::to_path_scenario() const {
  PathScenario out;
  for (const auto& id : path) {
    auto it = std::find_if(nodes.begin(), nodes.end(), [&](const Hop& h) { return h.id == id; });
    if (it == nodes.end()) throw InvalidArgument("path references unknown node '" + id + "'");
    out.hops.push_back(*it);
  }
  out.fixed_delays = fixed_delays;
  out.flows = flows;
  out.convention = convention;
  out.ee_mode = ee_mode;
  out.constants = constants;
  return out;
}

namespace {

std::string line_col(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

std::string child(const std::string& where, std::string_view key) {
  return where + "/" + std::string(key);
}

std::string child(const std::string& where, std::size_t index) {
  return where + "/" + std::to_string(index);
}

void reject_unknown(const json& obj, std::initializer_list<std::string_view> allowed, const std::string& where) {
  for (const auto& [key, _] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ScenarioError(child(where, key), "unknown field");
    }
  }
}

const json& object_at(const json& v, const std::string& where) {
  if (!v.is_object()) throw ScenarioError(where.empty() ? "/" : where, "expected an object");
  return v;
}

const json& required(const json& obj, std::string_view key, const std::string& where) {
  auto it = obj.find(std::string(key));
  if (it == obj.end()) throw ScenarioError(child(where, key), "missing required field");
  return *it;
}

double number_at(const json& v, const std::string& where) {
  if (!v.is_number()) throw ScenarioError(where, "expected a number");
  double x = v.get<double>();
  if (!std::isfinite(x)) throw ScenarioError(where, "expected a finite number");
  return x;
}

double non_negative(const json& obj, std::string_view key, const std::string& where) {
  double x = number_at(required(obj, key, where), child(where, key));
  if (x < 0.0) throw ScenarioError(child(where, key), "must be non-negative");
  return x;
}

std::string string_at(const json& v, const std::string& where) {
  if (!v.is_string()) throw ScenarioError(where, "expected a string");
  return v.get<std::string>();
}

const json& non_empty_array(const json& v, const std::string& where) {
  if (!v.is_array()) throw ScenarioError(where, "expected an array");
  if (v.empty()) throw ScenarioError(where, "must not be empty");
  return v;
}

Units parse_units(const json& v, const std::string& where) {
  object_at(v, where);
  reject_unknown(v, {"rate", "data", "time"}, where);
  Units u;
  u.rate = string_at(required(v, "rate", where), child(where, "rate"));
  u.data = string_at(required(v, "data", where), child(where, "data"));
  u.time = string_at(required(v, "time", where), child(where, "time"));
  if (u.rate != "Kbps" && u.rate != "Mbps") throw ScenarioError(child(where, "rate"), "rate unit must be Kbps or Mbps");
  if (u.data != "Kb" && u.data != "Mb") throw ScenarioError(child(where, "data"), "data unit must be Kb or Mb");
  if (u.time != "ms" && u.time != "s") throw ScenarioError(child(where, "time"), "time unit must be ms or s");
  return u;
}

TokenBucket parse_bucket(const json& v, const Units& u, const std::string& where) {
  object_at(v, where);
  reject_unknown(v, {"rate", "burst"}, where);
  return {u.rate_in_mbps(non_negative(v, "rate", where)), u.data_in_kb(non_negative(v, "burst", where))};
}

MicroFlowSpec parse_micro_flow(const json& v, const Units& u, const FractalConstants& consts,
                               const std::string& where) {
  object_at(v, where);
  reject_unknown(v, {"id", "token_bucket", "envelope", "fractal"}, where);
  MicroFlowSpec mf;
  mf.id = string_at(required(v, "id", where), child(where, "id"));
  int kinds = static_cast<int>(v.contains("token_bucket")) + static_cast<int>(v.contains("envelope")) +
              static_cast<int>(v.contains("fractal"));
  if (kinds != 1) throw ScenarioError(where, "exactly one of token_bucket, envelope or fractal is required");

  if (v.contains("token_bucket")) {
    mf.kind = TokenBucketEnvelope{{parse_bucket(v["token_bucket"], u, child(where, "token_bucket"))}};
  } else if (v.contains("envelope")) {
    const std::string at = child(where, "envelope");
    TokenBucketEnvelope env;
    const auto& arr = non_empty_array(v["envelope"], at);
    for (std::size_t m = 0; m < arr.size(); ++m) env.pieces.push_back(parse_bucket(arr[m], u, child(at, m)));
    mf.kind = env;
  } else {
    const std::string at = child(where, "fractal");
    const json& f = object_at(v["fractal"], at);
    reject_unknown(f, {"mean", "std_dev", "hurst"}, at);
    FractalParams p;
    p.mean_rate = u.rate_in_mbps(non_negative(f, "mean", at));
    p.std_dev = u.data_in_kb(non_negative(f, "std_dev", at));
    p.hurst = number_at(required(f, "hurst", at), child(at, "hurst"));
    try {
      fractal_coefficients(p.hurst, consts);
    } catch (const HurstOutOfRange& e) {
      throw ScenarioError(child(at, "hurst"), e.what());
    }
    mf.kind = p;
  }
  return mf;
}

FlowSpec parse_flow(const json& v, const Units& u, const FractalConstants& consts, const std::string& where) {
  object_at(v, where);
  reject_unknown(v, {"id", "micro_flows"}, where);
  FlowSpec flow;
  flow.id = string_at(required(v, "id", where), child(where, "id"));
  const std::string at = child(where, "micro_flows");
  const auto& arr = non_empty_array(required(v, "micro_flows", where), at);
  std::set<std::string> seen;
  for (std::size_t k = 0; k < arr.size(); ++k) {
    auto mf = parse_micro_flow(arr[k], u, consts, child(at, k));
    if (!seen.insert(mf.id).second) throw ScenarioError(child(child(at, k), "id"), "duplicate micro-flow id '" + mf.id + "'");
    flow.micro_flows.push_back(std::move(mf));
  }
  return flow;
}

Hop parse_node(const json& v, const Units& u, const std::string& where) {
  object_at(v, where);
  reject_unknown(v, {"id", "rate", "latency"}, where);
  Hop h;
  h.id = string_at(required(v, "id", where), child(where, "id"));
  h.rate = u.rate_in_mbps(number_at(required(v, "rate", where), child(where, "rate")));
  if (!(h.rate > 0.0)) throw ScenarioError(child(where, "rate"), "service rate must be positive");
  h.latency = u.time_in_ms(non_negative(v, "latency", where));
  return h;
}

json bucket_json(const TokenBucket& tb) { return json{{"rate", tb.rate}, {"burst", tb.burst}}; }

}  // namespace

ScenarioDocument parse_scenario(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::string msg = e.what();
    throw ScenarioError(line_col(text, e.byte > 0 ? e.byte - 1 : 0), msg);
  }
  const std::string top;
  object_at(root, top);
  reject_unknown(root,
                 {"version", "name", "units", "convention", "ee_mode", "fractal_gamma", "nodes", "flows", "path",
                  "fixed_delays"},
                 top);

  ScenarioDocument doc;
  doc.version = string_at(required(root, "version", top), "/version");
  if (doc.version != kScenarioVersion) {
    throw ScenarioError("/version", "unsupported version '" + doc.version + "' (expected " +
                                        std::string(kScenarioVersion) + ")");
  }
  if (root.contains("name")) doc.name = string_at(root["name"], "/name");
  doc.units = parse_units(required(root, "units", top), "/units");

  try {
    if (root.contains("convention")) doc.convention = parse_convention(string_at(root["convention"], "/convention"));
  } catch (const InvalidArgument& e) {
    throw ScenarioError("/convention", e.what());
  }
  try {
    if (root.contains("ee_mode")) doc.ee_mode = parse_ee_mode(string_at(root["ee_mode"], "/ee_mode"));
  } catch (const InvalidArgument& e) {
    throw ScenarioError("/ee_mode", e.what());
  }
  if (root.contains("fractal_gamma")) {
    doc.constants.gamma = number_at(root["fractal_gamma"], "/fractal_gamma");
    if (!(doc.constants.gamma > 0.0)) throw ScenarioError("/fractal_gamma", "must be positive");
  }

  const auto& nodes = non_empty_array(required(root, "nodes", top), "/nodes");
  std::set<std::string> node_ids;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    Hop h = parse_node(nodes[i], doc.units, child("/nodes", i));
    if (!node_ids.insert(h.id).second) throw ScenarioError(child(child("/nodes", i), "id"), "duplicate node id '" + h.id + "'");
    doc.nodes.push_back(std::move(h));
  }

  const auto& flows = non_empty_array(required(root, "flows", top), "/flows");
  std::set<std::string> flow_ids;
  for (std::size_t i = 0; i < flows.size(); ++i) {
    FlowSpec f = parse_flow(flows[i], doc.units, doc.constants, child("/flows", i));
    if (!flow_ids.insert(f.id).second) throw ScenarioError(child(child("/flows", i), "id"), "duplicate flow id '" + f.id + "'");
    doc.flows.push_back(std::move(f));
  }

  if (root.contains("path")) {
    const auto& path = non_empty_array(root["path"], "/path");
    for (std::size_t k = 0; k < path.size(); ++k) {
      std::string id = string_at(path[k], child("/path", k));
      if (!node_ids.count(id)) throw ScenarioError(child("/path", k), "unknown node id '" + id + "'");
      doc.path.push_back(std::move(id));
    }
  } else {
    for (const auto& h : doc.nodes) doc.path.push_back(h.id);
  }

  if (root.contains("fixed_delays")) {
    const auto& delays = root["fixed_delays"];
    if (!delays.is_array()) throw ScenarioError("/fixed_delays", "expected an array");
    for (std::size_t k = 0; k < delays.size(); ++k) {
      double d = number_at(delays[k], child("/fixed_delays", k));
      if (d < 0.0) throw ScenarioError(child("/fixed_delays", k), "must be non-negative");
      doc.fixed_delays.push_back(doc.units.time_in_ms(d));
    }
  }
  const std::size_t n = doc.path.size();
  if (doc.fixed_delays.size() + 1 != n && doc.fixed_delays.size() != n) {
    throw ScenarioError("/fixed_delays", "a path of " + std::to_string(n) + " nodes takes " + std::to_string(n - 1) +
                                             " or " + std::to_string(n) + " fixed delays, got " +
                                             std::to_string(doc.fixed_delays.size()));
  }

  try {
    doc.to_path_scenario().validate();
  } catch (const InvalidArgument& e) {
    throw ScenarioError("/", e.what());
  }
  return doc;
}

ScenarioDocument load_scenario_file(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw ScenarioError(file.string(), "cannot open scenario file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string serialize_scenario(const ScenarioDocument& doc) {
  json root;
  root["version"] = doc.version;
  if (!doc.name.empty()) root["name"] = doc.name;
  root["units"] = json{{"rate", "Mbps"}, {"data", "Kb"}, {"time", "ms"}};
  root["convention"] = std::string(to_string(doc.convention));
  root["ee_mode"] = std::string(to_string(doc.ee_mode));
  root["fractal_gamma"] = doc.constants.gamma;

  json nodes = json::array();
  for (const auto& h : doc.nodes) nodes.push_back(json{{"id", h.id}, {"rate", h.rate}, {"latency", h.latency}});
  root["nodes"] = nodes;

  json flows = json::array();
  for (const auto& f : doc.flows) {
    json mfs = json::array();
    for (const auto& mf : f.micro_flows) {
      json m;
      m["id"] = mf.id;
      if (const auto* fp = std::get_if<FractalParams>(&mf.kind)) {
        m["fractal"] = json{{"mean", fp->mean_rate}, {"std_dev", fp->std_dev}, {"hurst", fp->hurst}};
      } else {
        const auto& env = std::get<TokenBucketEnvelope>(mf.kind);
        if (env.pieces.size() == 1) {
          m["token_bucket"] = bucket_json(env.pieces.front());
        } else {
          json pieces = json::array();
          for (const auto& p : env.pieces) pieces.push_back(bucket_json(p));
          m["envelope"] = pieces;
        }
      }
      mfs.push_back(m);
    }
    flows.push_back(json{{"id", f.id}, {"micro_flows", mfs}});
  }
  root["flows"] = flows;
  root["path"] = doc.path;
  root["fixed_delays"] = doc.fixed_delays;
  return root.dump(2) + "\n";
}

}  // namespace wsncalc
