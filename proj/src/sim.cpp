#include "cpa/sim.hpp"

#include <algorithm>
#include <cmath>

namespace cpa {

std::vector<AgentStrategy> truthful_profile(std::size_t n) { return std::vector<AgentStrategy>(n); }

AgentStrategy strategy_from_deviation(const DeviationReport& dev, double theta_true) {
  const double shift = dev.best_type_report - theta_true;
  AgentStrategy s;
  s.type_report = [shift](double t) { return t + shift; };
  return s;
}

double Outcome::revenue() const {
  double r = royalty + penalty - audit_cost_paid;
  for (double t : transfers) r += t;
  return r;
}

double Outcome::utility(std::size_t i) const {
  const double paid = transfers.at(i);
  if (winner != i) return -paid;
  return income - paid - royalty - penalty;
}

Outcome run_auction(const MechanismTables& tables, const std::vector<AgentStrategy>& strategies,
                    const SimSettings& settings, std::uint64_t run) {
  const std::size_t n = tables.size();
  if (strategies.size() != n) throw DomainError("run_auction: one strategy per agent required");
  Stream rng(settings.seed, run);
  Outcome out;
  out.types.resize(n);
  out.type_reports.resize(n);
  out.transfers.assign(n, 0.0);
  std::vector<TypePoint> pts(n);
  std::vector<double> psi(n);
  for (std::size_t i = 0; i < n; ++i) out.types[i] = tables.agent(i).spec().types().quantile(rng.uniform());
  for (std::size_t i = 0; i < n; ++i) {
    const auto& types = tables.agent(i).spec().types();
    double r = out.types[i];
    if (strategies[i].type_report) r = std::clamp(strategies[i].type_report(r), types.lo(), types.hi());
    out.type_reports[i] = r;
    pts[i] = tables.agent(i).at(r);
    psi[i] = pts[i].psi;
  }
  out.winner = winner(psi);
  if (!out.winner) return out;

  const std::size_t w = *out.winner;
  const auto& tab = tables.agent(w);
  const auto& spec = tab.spec();
  const auto& p = pts[w];
  out.transfers[w] = tab.transfer(p, tables.rival_max(w, psi), true);

  out.income = spec.income().sample(out.types[w], rng);
  double report = out.income;
  if (strategies[w].income_report) report = strategies[w].income_report(out.types[w], p.theta, out.income);
  out.income_report = project_to_support(spec.income(), p.theta, report);

  const double phi = spec.sensitivity();
  out.royalty = phi * std::min(out.income_report, p.pi_star);
  const double u_audit = rng.uniform();
  if (settings.audit_probability)
    out.audited = u_audit < settings.audit_probability(w, p.theta, out.income_report);
  else
    out.audited = audits(spec, p, out.income_report);
  if (out.audited) {
    out.penalty = (out.income - out.income_report) * phi;
    out.audit_cost_paid = spec.audit_cost();
  }
  return out;
}

SimReport estimate_revenue(const MechanismTables& tables, const std::vector<AgentStrategy>& strategies,
                           const SimSettings& settings, Exec exec) {
  if (settings.n_runs < 1000) throw DomainError("estimate_revenue: at least 1000 runs required");
  const std::size_t n = tables.size(), runs = settings.n_runs;
  std::vector<double> revenue(runs), audited(runs), penalty(runs);
  std::vector<std::vector<double>> util(n, std::vector<double>(runs));
  std::vector<long> won(runs);
  kernels::for_each_index(
      runs,
      [&](std::size_t k) {
        const auto o = run_auction(tables, strategies, settings, k);
        revenue[k] = o.revenue();
        audited[k] = o.audited ? 1.0 : 0.0;
        penalty[k] = o.penalty;
        for (std::size_t i = 0; i < n; ++i) util[i][k] = o.utility(i);
        won[k] = o.winner ? static_cast<long>(*o.winner) : -1;
      },
      exec);

  SimReport rep;
  rep.n_runs = runs;
  rep.seed = settings.seed;
  rep.revenue = kernels::mean_se(revenue);
  rep.audit_frequency = kernels::mean_se(audited);
  rep.on_path_penalty = kernels::mean_se(penalty);
  for (auto& v : penalty) v = std::abs(v);
  rep.abs_penalty = kernels::pairwise_sum(penalty) / static_cast<double>(runs);
  for (std::size_t i = 0; i < n; ++i) rep.agent_utility.push_back(kernels::mean_se(util[i]));
  rep.allocation_frequency.assign(n, 0.0);
  for (long w : won)
    if (w >= 0) rep.allocation_frequency[static_cast<std::size_t>(w)] += 1.0;
  for (auto& f : rep.allocation_frequency) f /= static_cast<double>(runs);
  return rep;
}

std::string_view to_string(SweepAxis a) { return a == SweepAxis::sensitivity ? "sensitivity" : "audit_cost"; }

SweepAxis sweep_axis_from(std::string_view name) {
  if (name == "audit_cost" || name == "c") return SweepAxis::audit_cost;
  if (name == "sensitivity" || name == "phi") return SweepAxis::sensitivity;
  throw InvalidAxis("unknown sweep axis '" + std::string(name) + "'");
}

double mean_audit_threshold(const AgentSpec& agent, std::size_t panels) {
  const auto& d = agent.types();
  auto breaks = type_breakpoints(agent);
  const auto rule = quad::composite_gauss(d.lo(), d.hi(), panels, breaks);
  double s = 0.0;
  for (std::size_t k = 0; k < rule.nodes.size(); ++k)
    s += rule.weights[k] * d.pdf(rule.nodes[k]) * audit_threshold(agent, rule.nodes[k]);
  return s;
}

std::vector<SweepRow> sweep(const AuctionInstance& base, const SweepSpec& spec, const SweepOptions& opts) {
  if (spec.agent && *spec.agent >= base.size()) throw DomainError("sweep: agent index out of range");
  std::vector<SweepRow> rows;
  for (double v : spec.values) {
    SweepRow row;
    row.value = v;
    try {
      std::vector<AgentSpec> agents;
      for (std::size_t i = 0; i < base.size(); ++i) {
        const auto& a = base.agent(i);
        if (spec.agent && *spec.agent != i)
          agents.push_back(a);
        else
          agents.push_back(spec.axis == SweepAxis::audit_cost ? a.with_audit_cost(v) : a.with_sensitivity(v));
      }
      for (std::size_t i = 0; i < agents.size(); ++i)
        if (!check_regularity(agents[i], 64, 64, opts.exec).all_ok())
          throw RegularityError("agent " + std::to_string(i) + " fails the regularity checks");
      AuctionInstance inst(std::move(agents));
      MechanismTables tables(inst, opts.nodes, opts.exec);
      row.sim = estimate_revenue(tables, truthful_profile(inst.size()), opts.sim, opts.exec);
      row.payoff_bound = payoff_bound(inst, opts.expectation);
      try {
        row.myerson = myerson_cash_revenue(inst, opts.expectation);
      } catch (const RegularityError&) {
        row.myerson = {std::nan(""), 0.0, "irregular"};
      }
      row.full_extraction = full_extraction_revenue(inst, opts.expectation);
      double s = 0.0;
      for (const auto& a : inst.agents()) s += mean_audit_threshold(a);
      row.mean_pi_star = s / static_cast<double>(inst.size());
    } catch (const Error& e) {
      row.ok = false;
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace cpa
