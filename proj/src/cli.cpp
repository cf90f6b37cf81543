#include "cpa/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>

#include <omp.h>

#include <CLI11.hpp>

#include "cpa/config.hpp"
#include "cpa/report.hpp"

namespace cpa {
namespace {

namespace fs = std::filesystem;
using report::Json;
using report::Table;

struct Flags {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed, runs;
  std::optional<std::size_t> grid;
  std::optional<int> threads;
  bool serial = false;
};

struct Artifact {
  Json doc;
  Table table;
  bool ok = true;
};

struct Context {
  InstanceConfig cfg;
  Exec exec;

  ExpectationOptions expectation() const {
    ExpectationOptions o;
    o.seed = cfg.simulation.seed;
    o.exec = exec;
    return o;
  }
};

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = k + 1 == n ? hi : lo + (hi - lo) * static_cast<double>(k) / (n - 1);
  return out;
}

Json header(std::string_view kind, const Context& ctx) {
  return {{"schema", "cpa." + std::string(kind) + "/1"}, {"config", report::config_json(ctx.cfg)}};
}

// The mechanism is only defined under the regularity assumptions; every subcommand but check
// refuses irregular instances.
void require_regular(const Context& ctx) {
  for (std::size_t i = 0; i < ctx.cfg.agents.size(); ++i) {
    const auto rep = check_regularity(ctx.cfg.agents[i], ctx.cfg.grids.theta_points, ctx.cfg.grids.pi_points, ctx.exec);
    if (!rep.all_ok())
      throw RegularityError("agent " + std::to_string(i) + " fails the regularity checks; run `cpa check` for details");
  }
}

Estimate myerson_or_nan(const AuctionInstance& inst, const ExpectationOptions& opts) {
  try {
    return myerson_cash_revenue(inst, opts);
  } catch (const RegularityError&) {
    return {std::nan(""), 0.0, "irregular"};
  }
}

Artifact cmd_check(const Context& ctx) {
  Artifact a;
  a.doc = header("check", ctx);
  a.table.columns = {"agent", "check", "ok", "count", "magnitude", "theta", "pi"};
  Json agents = Json::array();
  for (std::size_t i = 0; i < ctx.cfg.agents.size(); ++i) {
    const auto rep = check_regularity(ctx.cfg.agents[i], ctx.cfg.grids.theta_points, ctx.cfg.grids.pi_points, ctx.exec);
    auto j = report::to_json(rep);
    j["index"] = i;
    agents.push_back(j);
    a.ok = a.ok && rep.all_ok();
    for (auto [name, v] : {std::pair{"normalization", &rep.normalization}, std::pair{"fosd", &rep.fosd},
                           std::pair{"single_crossing_theta", &rep.single_crossing_theta},
                           std::pair{"single_crossing_pi", &rep.single_crossing_pi},
                           std::pair{"psi_increasing", &rep.psi_increasing}})
      a.table.rows.push_back({static_cast<long long>(i), std::string(name), static_cast<long long>(v->ok()),
                              static_cast<long long>(v->count), v->magnitude, v->theta, v->pi});
  }
  a.doc["agents"] = agents;
  a.doc["ok"] = a.ok;
  return a;
}

Artifact cmd_solve(const Context& ctx) {
  Artifact a;
  a.doc = header("solve", ctx);
  a.table.columns = {"agent", "theta", "inv_hazard", "psi_m", "psi", "pi_star", "phi_cap", "audit_prob", "win_prob",
                     "transfer"};
  const auto inst = ctx.cfg.instance();
  const MechanismTables tables(inst, 1025, ctx.exec);
  const auto opts = ctx.expectation();
  Json agents = Json::array();
  for (std::size_t i = 0; i < tables.size(); ++i) {
    const auto& tab = tables.agent(i);
    const InterimSchedule sched(tables, i, rival_law(tables, i, opts));
    const auto& d = tab.spec().types();
    const auto grid = linspace(d.lo(), d.hi(), ctx.cfg.grids.theta_points);
    std::vector<TypePoint> pts(grid.size());
    std::vector<InterimSchedule::Value> vals(grid.size());
    kernels::for_each_index(
        grid.size(),
        [&](std::size_t k) {
          pts[k] = tab.at(grid[k]);
          vals[k] = sched.at(pts[k]);
        },
        ctx.exec);
    Json rows = Json::array();
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const auto& p = pts[k];
      rows.push_back({{"theta", p.theta},
                      {"inv_hazard", p.inv_hazard},
                      {"psi_m", p.psi_m},
                      {"psi", p.psi},
                      {"pi_star", p.pi_star},
                      {"phi_cap", p.phi_cap},
                      {"audit_prob", p.audit_prob},
                      {"win_prob", vals[k].win_prob},
                      {"transfer", vals[k].transfer}});
      a.table.rows.push_back({static_cast<long long>(i), p.theta, p.inv_hazard, p.psi_m, p.psi, p.pi_star, p.phi_cap,
                              p.audit_prob, vals[k].win_prob, vals[k].transfer});
    }
    agents.push_back({{"index", i}, {"rows", rows}});
  }
  a.doc["agents"] = agents;
  a.doc["summary"] = {{"payoff_bound", report::to_json(payoff_bound(inst, opts))},
                      {"myerson_cash_revenue", report::to_json(myerson_or_nan(inst, opts))},
                      {"full_extraction_revenue", report::to_json(full_extraction_revenue(inst, opts))}};
  return a;
}

Artifact cmd_simulate(const Context& ctx) {
  Artifact a;
  const auto inst = ctx.cfg.instance();
  const MechanismTables tables(inst, 1025, ctx.exec);
  SimSettings s;
  s.n_runs = ctx.cfg.simulation.n_runs;
  s.seed = ctx.cfg.simulation.seed;
  const auto rep = estimate_revenue(tables, truthful_profile(inst.size()), s, ctx.exec);
  const auto bound = payoff_bound(inst, ctx.expectation());
  a.doc = header("simulate", ctx);
  a.doc.update(report::to_json(rep));
  a.doc["payoff_bound"] = report::to_json(bound);
  a.table.columns = {"metric", "mean", "se"};
  a.table.rows = {{std::string("revenue"), rep.revenue.mean, rep.revenue.se},
                  {std::string("audit_frequency"), rep.audit_frequency.mean, rep.audit_frequency.se},
                  {std::string("on_path_penalty"), rep.on_path_penalty.mean, rep.on_path_penalty.se},
                  {std::string("abs_penalty"), rep.abs_penalty, std::nan("")},
                  {std::string("payoff_bound"), bound.value, bound.std_error}};
  for (std::size_t i = 0; i < inst.size(); ++i) {
    const auto k = std::to_string(i);
    a.table.rows.push_back({"utility_" + k, rep.agent_utility[i].mean, rep.agent_utility[i].se});
    a.table.rows.push_back({"allocation_frequency_" + k, rep.allocation_frequency[i], std::nan("")});
  }
  return a;
}

Artifact cmd_verify_ic(const Context& ctx) {
  Artifact a;
  a.doc = header("verify-ic", ctx);
  a.table.columns = {"agent", "check", "ok", "max_advantage", "worst_theta", "worst_report"};
  const auto inst = ctx.cfg.instance();
  const MechanismTables tables(inst, 1025, ctx.exec);
  const auto& g = ctx.cfg.grids;
  Json agents = Json::array();
  for (std::size_t i = 0; i < tables.size(); ++i) {
    const TypeDeviationScan scan(tables, i, g.theta_points, g.pi_points, ctx.expectation());
    const auto tp = scan.certify(IncomeStrategy::truthful_projection, ctx.exec);
    const auto gb = scan.certify(IncomeStrategy::grid_best, ctx.exec);
    const auto inc = certify_income_ic(tables, i, g.theta_points, g.pi_points, ctx.exec);
    a.ok = a.ok && tp.ic_ok && tp.ir_ok && gb.ic_ok && gb.ir_ok && inc.ok;
    agents.push_back({{"index", i},
                      {"type_ic", {{"truthful_projection", report::to_json(tp)}, {"grid_best", report::to_json(gb)}}},
                      {"income_ic", report::to_json(inc)}});
    const auto row = static_cast<long long>(i);
    a.table.rows.push_back({row, std::string("type_truthful_projection"), static_cast<long long>(tp.ic_ok && tp.ir_ok),
                            tp.max_advantage, tp.worst_theta, tp.worst_report});
    a.table.rows.push_back({row, std::string("type_grid_best"), static_cast<long long>(gb.ic_ok && gb.ir_ok),
                            gb.max_advantage, gb.worst_theta, gb.worst_report});
    a.table.rows.push_back({row, std::string("income"), static_cast<long long>(inc.ok), inc.max_advantage,
                            inc.worst_theta, inc.worst_pi});
  }
  a.doc["agents"] = agents;
  a.doc["ok"] = a.ok;
  return a;
}

Artifact cmd_sweep(const Context& ctx) {
  if (!ctx.cfg.sweep) throw ConfigError("sweep", 0, "the sweep subcommand needs a sweep section");
  const auto& spec = *ctx.cfg.sweep;
  SweepOptions o;
  o.sim.n_runs = ctx.cfg.simulation.n_runs;
  o.sim.seed = ctx.cfg.simulation.seed;
  o.expectation = ctx.expectation();
  o.exec = ctx.exec;
  const auto rows = sweep(ctx.cfg.instance(), spec, o);
  Artifact a;
  a.doc = header("sweep", ctx);
  a.doc["axis"] = std::string(to_string(spec.axis));
  a.doc["agent"] = spec.agent ? Json(*spec.agent) : Json(nullptr);
  a.doc["n_runs"] = o.sim.n_runs;
  a.doc["seed"] = o.sim.seed;
  a.table.columns = {"value",        "ok",
                     "revenue",      "revenue_se",
                     "audit_frequency", "payoff_bound",
                     "myerson_cash_revenue", "full_extraction_revenue",
                     "mean_pi_star", "error"};
  Json out = Json::array();
  for (const auto& r : rows) {
    out.push_back({{"value", r.value},
                   {"ok", r.ok},
                   {"error", r.error},
                   {"revenue", report::to_json(r.sim.revenue)},
                   {"audit_frequency", report::to_json(r.sim.audit_frequency)},
                   {"payoff_bound", report::to_json(r.payoff_bound)},
                   {"myerson_cash_revenue", report::to_json(r.myerson)},
                   {"full_extraction_revenue", report::to_json(r.full_extraction)},
                   {"mean_pi_star", r.mean_pi_star}});
    const double nan = std::nan("");
    a.table.rows.push_back({r.value, static_cast<long long>(r.ok), r.ok ? r.sim.revenue.mean : nan,
                            r.ok ? r.sim.revenue.se : nan, r.ok ? r.sim.audit_frequency.mean : nan,
                            r.ok ? r.payoff_bound.value : nan, r.ok ? r.myerson.value : nan,
                            r.ok ? r.full_extraction.value : nan, r.ok ? r.mean_pi_star : nan, r.error});
  }
  a.doc["rows"] = out;
  return a;
}

Artifact cmd_menu(const Context& ctx) {
  if (ctx.cfg.agents.size() != 1) throw UnsupportedInstance("the menu subcommand needs a single-agent instance");
  const auto m = binary_menu(ctx.cfg.agents.front());
  Artifact a;
  a.doc = header("menu", ctx);
  a.doc.update(report::to_json(m));
  a.table.columns = {"contract", "upfront_price", "royalty_rate", "audited", "theta_star", "theta_0"};
  for (const auto& c : m.contracts)
    a.table.rows.push_back({std::string(c.kind == ContractKind::lump_sum ? "lump_sum" : "linear_royalty"),
                            c.upfront_price, c.royalty_rate, static_cast<long long>(c.audited), m.theta_star,
                            m.theta_0});
  return a;
}

fs::path output_dir(const Flags& f, const InstanceConfig& cfg) {
  if (!f.out.empty()) return f.out;
  if (const char* env = std::getenv("CPA_OUT_DIR"); env && *env) return env;
  if (cfg.output.directory) return *cfg.output.directory;
  return fs::current_path();
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream os(p, std::ios::binary | std::ios::trunc);
  if (!os) throw Error("cannot write " + p.string());
  os << text;
  if (!os) throw Error("failed writing " + p.string());
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Revenue-optimal contingent-payment auctions with costly audits", "cpa"};
  app.require_subcommand(1);
  app.fallthrough();
  Flags f;
  app.add_option("--config", f.config, "Instance config (YAML)")->required()->check(CLI::ExistingFile);
  app.add_option("--out", f.out, "Output directory (overrides CPA_OUT_DIR and the config)");
  app.add_option("--seed", f.seed, "Simulation seed");
  app.add_option("--runs", f.runs, "Simulation runs")->check(CLI::Range(std::uint64_t{1000}, std::uint64_t{1} << 40));
  app.add_option("--grid", f.grid, "Points for both the type and income grids")
      ->check(CLI::Range(std::size_t{32}, std::size_t{1} << 20));
  app.add_option("--threads", f.threads, "OpenMP threads")->check(CLI::PositiveNumber);
  app.add_flag("--serial", f.serial, "Run every kernel on the serial path");

  using Handler = Artifact (*)(const Context&);
  const std::pair<const char*, Handler> commands[] = {
      {"check", cmd_check},   {"solve", cmd_solve}, {"simulate", cmd_simulate},
      {"verify-ic", cmd_verify_ic}, {"sweep", cmd_sweep}, {"menu", cmd_menu}};
  const char* help[] = {"Regularity checks on type and income grids",
                        "Virtual values, thresholds and transfers on a type grid",
                        "Monte Carlo revenue under truthful play",
                        "Grid certificates for type and income incentive compatibility",
                        "Parameter sweep with simulated and analytic revenue",
                        "Two-contract menu for a single additive-error agent"};
  for (std::size_t k = 0; k < std::size(commands); ++k) app.add_subcommand(commands[k].first, help[k]);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const auto* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  try {
    Context ctx{load_config(f.config), f.serial ? Exec::serial : Exec::parallel};
    if (f.seed) ctx.cfg.simulation.seed = *f.seed;
    if (f.runs) ctx.cfg.simulation.n_runs = *f.runs;
    if (f.grid) ctx.cfg.grids.theta_points = ctx.cfg.grids.pi_points = *f.grid;
    if (f.threads) omp_set_num_threads(*f.threads);

    if (name != "check" && name != "sweep") require_regular(ctx);
    Artifact art;
    for (const auto& [cmd, fn] : commands)
      if (name == cmd) art = fn(ctx);

    const auto dir = output_dir(f, ctx.cfg);
    fs::create_directories(dir);
    if (ctx.cfg.output.json) {
      const auto p = dir / (name + ".json");
      write_file(p, report::dump(art.doc));
      out << "wrote " << p.string() << "\n";
    }
    if (ctx.cfg.output.csv) {
      const auto p = dir / (name + ".csv");
      write_file(p, report::to_csv(art.table));
      out << "wrote " << p.string() << "\n";
    }
    if (!art.ok) {
      err << "cpa " << name << ": verification failed\n";
      return kExitFailed;
    }
    return kExitOk;
  } catch (const RegularityError& e) {
    err << "cpa " << name << ": regularity: " << e.what() << "\n";
    return kExitFailed;
  } catch (const std::exception& e) {
    err << "cpa " << name << ": " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace cpa
