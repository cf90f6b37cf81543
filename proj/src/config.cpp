#include "cpa/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace cpa {

ConfigError::ConfigError(std::string path, int line, const std::string& msg)
    : Error((line > 0 ? "line " + std::to_string(line) + ": " : std::string()) + path + ": " + msg),
      path_(std::move(path)),
      line_(line) {}

namespace {

struct Field {
  YAML::Node node;
  std::string path;

  int line() const { return node.IsDefined() && node.Mark().line >= 0 ? node.Mark().line + 1 : 0; }
  [[noreturn]] void fail(const std::string& msg) const { throw ConfigError(path, line(), msg); }

  Field child(const std::string& key) const {
    return {node[key], path.empty() ? key : path + "." + key};
  }
  Field at(std::size_t k) const { return {node[k], path + "[" + std::to_string(k) + "]"}; }
  bool present() const { return node.IsDefined() && !node.IsNull(); }

  void require_map(std::initializer_list<const char*> allowed) const {
    if (!node.IsMap()) fail("expected a mapping");
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& kv : node) {
      const auto key = kv.first.as<std::string>();
      if (!ok.count(key)) {
        Field f{kv.first, path.empty() ? key : path + "." + key};
        f.fail("unknown key");
      }
    }
  }

  Field required(const std::string& key) const {
    auto f = child(key);
    if (!f.present()) throw ConfigError(f.path, line(), "required field is missing");
    return f;
  }

  double number() const {
    if (!node.IsScalar()) fail("expected a number");
    const auto text = node.Scalar();
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(text, &used);
    } catch (const std::exception&) {
      fail("malformed number '" + text + "'");
    }
    if (used != text.size() || !std::isfinite(v)) fail("malformed number '" + text + "'");
    return v;
  }

  std::uint64_t count() const {
    if (!node.IsScalar()) fail("expected a nonnegative integer");
    const auto text = node.Scalar();
    if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos)
      fail("expected a nonnegative integer, got '" + text + "'");
    try {
      return std::stoull(text);
    } catch (const std::exception&) {
      fail("integer out of range '" + text + "'");
    }
  }

  std::string text() const {
    if (!node.IsScalar()) fail("expected a string");
    return node.Scalar();
  }

  std::vector<double> numbers() const {
    if (!node.IsSequence()) fail("expected a list of numbers");
    std::vector<double> out;
    for (std::size_t k = 0; k < node.size(); ++k) out.push_back(at(k).number());
    return out;
  }
};

template <class Fn>
auto guarded(const Field& f, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    f.fail(e.what());
  }
}

DistParams dist_params(const Field& f, DistFamily family) {
  DistParams p;
  if (family == DistFamily::table) {
    f.require_map({"knots", "cdf"});
    p.values = f.required("knots").numbers();
    p.cdf = f.required("cdf").numbers();
  } else {
    p.values = f.numbers();
  }
  return p;
}

DistFamily dist_family(const Field& f) {
  const auto name = f.text();
  return guarded(f, [&] { return dist_family_from(name); });
}

AgentConfig parse_agent(const Field& f) {
  f.require_map({"type_dist", "income", "audit_cost", "sensitivity"});
  AgentConfig a;
  const auto td = f.required("type_dist");
  td.require_map({"family", "params"});
  a.type_family = dist_family(td.required("family"));
  a.type_params = dist_params(td.required("params"), a.type_family);

  const auto inc = f.required("income");
  inc.require_map({"family", "params"});
  const auto kind = inc.required("family");
  a.income_kind = guarded(kind, [&] { return income_kind_from(kind.text()); });
  const auto ip = inc.required("params");
  ip.require_map({"error", "anchor"});
  const auto err = ip.required("error");
  err.require_map({"family", "params"});
  a.income_params.error_family = dist_family(err.required("family"));
  a.income_params.error = dist_params(err.required("params"), a.income_params.error_family);
  if (ip.child("anchor").present()) a.income_params.anchor = ip.child("anchor").number();

  const auto c = f.required("audit_cost");
  a.audit_cost = c.number();
  if (a.audit_cost < 0.0) c.fail("audit cost must be >= 0, got " + c.text());
  const auto phi = f.required("sensitivity");
  a.sensitivity = phi.number();
  if (a.sensitivity < 0.0 || a.sensitivity > 1.0) phi.fail("sensitivity must lie in [0, 1], got " + phi.text());
  return a;
}

AgentSpec build_agent(const Field& f, const AgentConfig& a) {
  const auto types = guarded(f.child("type_dist"), [&] { return make_type_dist(a.type_family, a.type_params); });
  const auto income =
      guarded(f.child("income"), [&] { return make_income_family(a.income_kind, a.income_params, types); });
  return guarded(f, [&] { return AgentSpec(types, income, a.audit_cost, a.sensitivity); });
}

}  // namespace

InstanceConfig parse_config(std::string_view text) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::Exception& e) {
    throw ConfigError("<document>", e.mark.line >= 0 ? e.mark.line + 1 : 0, e.msg);
  }
  const Field top{root, ""};
  if (!root.IsMap()) throw ConfigError("<document>", 0, "expected a mapping at the top level");
  top.require_map({"v", "agents", "grids", "simulation", "output", "sweep"});
  const auto v = top.required("v");
  if (v.count() != 1) v.fail("unsupported schema version " + v.text() + " (expected 1)");

  InstanceConfig cfg;
  const auto agents = top.required("agents");
  if (!agents.node.IsSequence() || agents.node.size() == 0) agents.fail("expected a nonempty list of agents");
  for (std::size_t k = 0; k < agents.node.size(); ++k) {
    const auto f = agents.at(k);
    cfg.agent_configs.push_back(parse_agent(f));
    cfg.agents.push_back(build_agent(f, cfg.agent_configs.back()));
  }

  if (const auto g = top.child("grids"); g.present()) {
    g.require_map({"theta_points", "pi_points"});
    for (auto [key, dst] : {std::pair{"theta_points", &cfg.grids.theta_points},
                            std::pair{"pi_points", &cfg.grids.pi_points}}) {
      const auto f = g.child(key);
      if (!f.present()) continue;
      *dst = f.count();
      if (*dst < 32) f.fail("grid needs at least 32 points");
    }
  }
  if (const auto s = top.child("simulation"); s.present()) {
    s.require_map({"n_runs", "seed"});
    if (s.child("n_runs").present()) {
      cfg.simulation.n_runs = s.child("n_runs").count();
      if (cfg.simulation.n_runs < 1000) s.child("n_runs").fail("at least 1000 runs required");
    }
    if (s.child("seed").present()) cfg.simulation.seed = s.child("seed").count();
  }
  if (const auto o = top.child("output"); o.present()) {
    o.require_map({"directory", "formats"});
    if (o.child("directory").present()) cfg.output.directory = o.child("directory").text();
    if (const auto f = o.child("formats"); f.present()) {
      if (!f.node.IsSequence()) f.fail("expected a list drawn from {csv, json}");
      cfg.output.csv = cfg.output.json = false;
      for (std::size_t k = 0; k < f.node.size(); ++k) {
        const auto name = f.at(k).text();
        if (name == "csv")
          cfg.output.csv = true;
        else if (name == "json")
          cfg.output.json = true;
        else
          f.at(k).fail("unknown format '" + name + "'");
      }
    }
  }
  if (const auto s = top.child("sweep"); s.present()) {
    s.require_map({"axis", "values", "agent"});
    SweepSpec sw;
    const auto axis = s.required("axis");
    sw.axis = guarded(axis, [&] { return sweep_axis_from(axis.text()); });
    if (s.child("values").present()) sw.values = s.child("values").numbers();
    if (const auto a = s.child("agent"); a.present()) {
      sw.agent = a.count();
      if (*sw.agent >= cfg.agents.size()) a.fail("agent index out of range");
    }
    cfg.sweep = sw;
  }
  return cfg;
}

InstanceConfig load_config(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw ConfigError(file.string(), 0, "cannot open config file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace cpa
