#include "cpa/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace cpa::report {
namespace {

Json num() { return {{"type", Json::array({"number", "null"})}}; }
Json integer() { return {{"type", "integer"}}; }
Json boolean() { return {{"type", "boolean"}}; }
Json string() { return {{"type", "string"}}; }
Json array_of(Json items) { return {{"type", "array"}, {"items", std::move(items)}}; }

Json object(Json props) {
  Json req = Json::array();
  for (auto it = props.begin(); it != props.end(); ++it) req.push_back(it.key());
  return {{"type", "object"}, {"properties", std::move(props)}, {"required", std::move(req)}};
}

Json mean_se_schema() { return object({{"mean", num()}, {"se", num()}}); }
Json estimate_schema() { return object({{"value", num()}, {"std_error", num()}, {"method", string()}}); }
Json violation_schema() {
  return object({{"ok", boolean()}, {"count", integer()}, {"magnitude", num()}, {"theta", num()}, {"pi", num()}});
}

Json config_schema() {
  const Json dist = object({{"family", string()}, {"params", {{"type", Json::array({"array", "object"})}}}});
  Json income_params = object({{"error", dist}});
  income_params["properties"]["anchor"] = num();
  const Json agent = object({{"type_dist", dist},
                             {"income", object({{"family", string()}, {"params", income_params}})},
                             {"audit_cost", num()},
                             {"sensitivity", num()}});
  return object({{"agents", array_of(agent)},
                 {"grids", object({{"theta_points", integer()}, {"pi_points", integer()}})},
                 {"simulation", object({{"n_runs", integer()}, {"seed", integer()}})},
                 {"output", object({{"formats", array_of(string())}})}});
}

Json certificate_schema() {
  return object({{"income_strategy", string()},
                 {"theta_points", integer()},
                 {"pi_points", integer()},
                 {"max_advantage", num()},
                 {"worst_theta", num()},
                 {"worst_report", num()},
                 {"min_truthful_utility", num()},
                 {"utility_at_lo", num()},
                 {"ic_ok", boolean()},
                 {"ir_ok", boolean()},
                 {"rival_method", string()}});
}

Json with_header(std::string_view kind, Json body) {
  body["schema"] = {{"const", "cpa." + std::string(kind) + "/1"}};
  body["config"] = config_schema();
  return object(std::move(body));
}

std::string type_name(const Json& j) {
  if (j.is_null()) return "null";
  if (j.is_boolean()) return "boolean";
  if (j.is_number_integer() || j.is_number_unsigned()) return "integer";
  if (j.is_number()) return "number";
  if (j.is_string()) return "string";
  if (j.is_array()) return "array";
  return "object";
}

bool type_matches(const Json& j, const std::string& want) {
  const auto got = type_name(j);
  return got == want || (want == "number" && got == "integer");
}

void check(const Json& doc, const Json& s, const std::string& path, std::vector<std::string>& out) {
  if (s.contains("type")) {
    const auto& t = s["type"];
    bool ok = false;
    if (t.is_array()) {
      for (const auto& x : t) ok = ok || type_matches(doc, x.get<std::string>());
    } else {
      ok = type_matches(doc, t.get<std::string>());
    }
    if (!ok) {
      out.push_back(path + ": expected " + t.dump() + ", got " + type_name(doc));
      return;
    }
  }
  if (s.contains("const") && doc != s["const"]) out.push_back(path + ": expected " + s["const"].dump());
  if (s.contains("enum")) {
    bool hit = false;
    for (const auto& e : s["enum"]) hit = hit || doc == e;
    if (!hit) out.push_back(path + ": not one of " + s["enum"].dump());
  }
  if (doc.is_object()) {
    if (s.contains("required"))
      for (const auto& k : s["required"])
        if (!doc.contains(k.get<std::string>())) out.push_back(path + ": missing '" + k.get<std::string>() + "'");
    if (s.contains("properties")) {
      const auto& props = s["properties"];
      for (auto it = doc.begin(); it != doc.end(); ++it) {
        if (props.contains(it.key()))
          check(it.value(), props[it.key()], path + "." + it.key(), out);
        else if (s.value("additionalProperties", true) == false)
          out.push_back(path + ": unexpected '" + it.key() + "'");
      }
    }
  }
  if (doc.is_array() && s.contains("items"))
    for (std::size_t k = 0; k < doc.size(); ++k) check(doc[k], s["items"], path + "[" + std::to_string(k) + "]", out);
}

Json dist_json(DistFamily f, const DistParams& p) {
  Json j{{"family", std::string(to_string(f))}};
  if (f == DistFamily::table)
    j["params"] = {{"knots", p.values}, {"cdf", p.cdf}};
  else
    j["params"] = p.values;
  return j;
}

}  // namespace

Json schema(std::string_view kind) {
  if (kind == "check") {
    const Json checks = object({{"normalization", violation_schema()},
                                {"fosd", violation_schema()},
                                {"single_crossing_theta", violation_schema()},
                                {"single_crossing_pi", violation_schema()},
                                {"psi_increasing", violation_schema()}});
    const Json agent = object({{"index", integer()},
                               {"ok", boolean()},
                               {"theta_points", integer()},
                               {"pi_points", integer()},
                               {"checks", checks}});
    return with_header(kind, {{"ok", boolean()}, {"agents", array_of(agent)}});
  }
  if (kind == "solve") {
    const Json row = object({{"theta", num()},
                             {"inv_hazard", num()},
                             {"psi_m", num()},
                             {"psi", num()},
                             {"pi_star", num()},
                             {"phi_cap", num()},
                             {"audit_prob", num()},
                             {"win_prob", num()},
                             {"transfer", num()}});
    const Json agent = object({{"index", integer()}, {"rows", array_of(row)}});
    const Json summary = object({{"payoff_bound", estimate_schema()},
                                 {"myerson_cash_revenue", estimate_schema()},
                                 {"full_extraction_revenue", estimate_schema()}});
    return with_header(kind, {{"agents", array_of(agent)}, {"summary", summary}});
  }
  if (kind == "simulate") {
    const Json agent =
        object({{"index", integer()}, {"utility", mean_se_schema()}, {"allocation_frequency", num()}});
    return with_header(kind, {{"n_runs", integer()},
                              {"seed", integer()},
                              {"revenue", mean_se_schema()},
                              {"audit_frequency", mean_se_schema()},
                              {"on_path_penalty", mean_se_schema()},
                              {"abs_penalty", num()},
                              {"payoff_bound", estimate_schema()},
                              {"agents", array_of(agent)}});
  }
  if (kind == "verify-ic") {
    const Json income = object({{"theta_points", integer()},
                                {"pi_points", integer()},
                                {"max_advantage", num()},
                                {"worst_theta", num()},
                                {"worst_pi", num()},
                                {"ok", boolean()}});
    const Json agent = object({{"index", integer()},
                               {"type_ic", object({{"truthful_projection", certificate_schema()},
                                                   {"grid_best", certificate_schema()}})},
                               {"income_ic", income}});
    return with_header(kind, {{"ok", boolean()}, {"agents", array_of(agent)}});
  }
  if (kind == "sweep") {
    const Json row = object({{"value", num()},
                             {"ok", boolean()},
                             {"error", string()},
                             {"revenue", mean_se_schema()},
                             {"audit_frequency", mean_se_schema()},
                             {"payoff_bound", estimate_schema()},
                             {"myerson_cash_revenue", estimate_schema()},
                             {"full_extraction_revenue", estimate_schema()},
                             {"mean_pi_star", num()}});
    return with_header(kind, {{"axis", {{"enum", Json::array({"audit_cost", "sensitivity"})}}},
                              {"agent", {{"type", Json::array({"integer", "null"})}}},
                              {"n_runs", integer()},
                              {"seed", integer()},
                              {"rows", array_of(row)}});
  }
  if (kind == "menu") {
    const Json contract = object({{"kind", {{"enum", Json::array({"lump_sum", "linear_royalty"})}}},
                                  {"upfront_price", num()},
                                  {"royalty_rate", num()},
                                  {"audited", boolean()}});
    return with_header(kind, {{"lump_sum", num()},
                              {"royalty_contract", num()},
                              {"theta_star", num()},
                              {"theta_0", num()},
                              {"contracts", array_of(contract)}});
  }
  throw DomainError("unknown report kind '" + std::string(kind) + "'");
}

std::vector<std::string> validate(const Json& doc, const Json& s) {
  std::vector<std::string> out;
  check(doc, s, "$", out);
  return out;
}

Json config_json(const InstanceConfig& cfg) {
  Json agents = Json::array();
  for (const auto& a : cfg.agent_configs) {
    Json params{{"error", dist_json(a.income_params.error_family, a.income_params.error)}};
    if (a.income_params.anchor) params["anchor"] = *a.income_params.anchor;
    agents.push_back({{"type_dist", dist_json(a.type_family, a.type_params)},
                      {"income", {{"family", std::string(to_string(a.income_kind))}, {"params", params}}},
                      {"audit_cost", a.audit_cost},
                      {"sensitivity", a.sensitivity}});
  }
  Json formats = Json::array();
  if (cfg.output.csv) formats.push_back("csv");
  if (cfg.output.json) formats.push_back("json");
  return {{"agents", agents},
          {"grids", {{"theta_points", cfg.grids.theta_points}, {"pi_points", cfg.grids.pi_points}}},
          {"simulation", {{"n_runs", cfg.simulation.n_runs}, {"seed", cfg.simulation.seed}}},
          {"output", {{"formats", formats}}}};
}

Json to_json(const kernels::MeanSe& m) { return {{"mean", m.mean}, {"se", m.se}}; }

Json to_json(const Estimate& e) { return {{"value", e.value}, {"std_error", e.std_error}, {"method", e.method}}; }

Json to_json(const Violation& v) {
  return {{"ok", v.ok()}, {"count", v.count}, {"magnitude", v.magnitude}, {"theta", v.theta}, {"pi", v.pi}};
}

Json to_json(const RegularityReport& r) {
  return {{"ok", r.all_ok()},
          {"theta_points", r.theta_points},
          {"pi_points", r.pi_points},
          {"checks",
           {{"normalization", to_json(r.normalization)},
            {"fosd", to_json(r.fosd)},
            {"single_crossing_theta", to_json(r.single_crossing_theta)},
            {"single_crossing_pi", to_json(r.single_crossing_pi)},
            {"psi_increasing", to_json(r.psi_increasing)}}}};
}

Json to_json(const IcCertificate& c) {
  return {{"income_strategy", c.income_strategy},
          {"theta_points", c.theta_points},
          {"pi_points", c.pi_points},
          {"max_advantage", c.max_advantage},
          {"worst_theta", c.worst_theta},
          {"worst_report", c.worst_report},
          {"min_truthful_utility", c.min_truthful_utility},
          {"utility_at_lo", c.utility_at_lo},
          {"ic_ok", c.ic_ok},
          {"ir_ok", c.ir_ok},
          {"rival_method", c.rival_method}};
}

Json to_json(const IncomeIcCertificate& c) {
  return {{"theta_points", c.theta_points}, {"pi_points", c.pi_points}, {"max_advantage", c.max_advantage},
          {"worst_theta", c.worst_theta},   {"worst_pi", c.worst_pi},     {"ok", c.ok}};
}

Json to_json(const SimReport& r) {
  Json agents = Json::array();
  for (std::size_t i = 0; i < r.agent_utility.size(); ++i)
    agents.push_back(
        {{"index", i}, {"utility", to_json(r.agent_utility[i])}, {"allocation_frequency", r.allocation_frequency[i]}});
  return {{"n_runs", r.n_runs},
          {"seed", r.seed},
          {"revenue", to_json(r.revenue)},
          {"audit_frequency", to_json(r.audit_frequency)},
          {"on_path_penalty", to_json(r.on_path_penalty)},
          {"abs_penalty", r.abs_penalty},
          {"agents", agents}};
}

Json to_json(const BinaryMenu& m) {
  Json contracts = Json::array();
  Json j{{"theta_star", m.theta_star}, {"theta_0", m.theta_0}};
  j["lump_sum"] = nullptr;
  j["royalty_contract"] = nullptr;
  for (const auto& c : m.contracts) {
    const bool lump = c.kind == ContractKind::lump_sum;
    contracts.push_back({{"kind", lump ? "lump_sum" : "linear_royalty"},
                         {"upfront_price", c.upfront_price},
                         {"royalty_rate", c.royalty_rate},
                         {"audited", c.audited}});
    j[lump ? "lump_sum" : "royalty_contract"] = c.upfront_price;
  }
  j["contracts"] = contracts;
  return j;
}

std::string to_csv(const Table& t) {
  std::ostringstream os;
  auto field = [](const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) {
      if (ch == '"') q += '"';
      q += ch;
    }
    return q + "\"";
  };
  for (std::size_t k = 0; k < t.columns.size(); ++k) os << (k ? "," : "") << field(t.columns[k]);
  os << "\n";
  for (const auto& row : t.rows) {
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k) os << ",";
      if (const auto* d = std::get_if<double>(&row[k])) {
        if (std::isnan(*d)) {
          os << "nan";
        } else {
          char buf[32];
          std::snprintf(buf, sizeof buf, "%.6g", *d);
          os << buf;
        }
      } else if (const auto* i = std::get_if<long long>(&row[k])) {
        os << *i;
      } else {
        os << field(std::get<std::string>(row[k]));
      }
    }
    os << "\n";
  }
  return os.str();
}

std::string dump(const Json& doc) { return doc.dump(2) + "\n"; }

}  // namespace cpa::report
