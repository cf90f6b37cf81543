#include "cpa/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cpa {
namespace {

constexpr double kNormTol = 1e-8;
constexpr double kIcTol = 1e-6;
constexpr double kIrTol = 1e-9;
constexpr double kIncomeIcTol = 1e-9;
constexpr double kStaticsTol = 1e-10;

std::vector<double> midpoints(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = lo + (hi - lo) * (k + 0.5) / static_cast<double>(n);
  return out;
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k)
    out[k] = (n == 1 || k + 1 == n) ? hi : lo + (hi - lo) * static_cast<double>(k) / (n - 1);
  if (n) out[0] = lo;
  return out;
}

void merge(Violation& into, const Violation& v) {
  if (v.count == 0) return;
  if (into.count == 0 || v.magnitude > into.magnitude) {
    into.magnitude = v.magnitude;
    into.theta = v.theta;
    into.pi = v.pi;
  }
  into.count += v.count;
}

double rival_psi_max(const MechanismTables& tables, std::size_t i, std::span<const double> others) {
  if (others.size() + 1 != tables.size())
    throw DomainError("rival profile must list every other agent");
  double m = 0.0;
  std::size_t k = 0;
  for (std::size_t j = 0; j < tables.size(); ++j) {
    if (j == i) continue;
    m = std::max(m, tables.agent(j).at(others[k++]).psi);
  }
  return m;
}

// Winner's income-stage payoff before the upfront transfer.
double gross(const AgentSpec& a, const TypePoint& p, double pi, double pi_report) {
  const double phi = a.sensitivity();
  const double pen = audits(a, p, pi_report) ? (pi - pi_report) * phi : 0.0;
  return pi - phi * std::min(pi_report, p.pi_star) - pen;
}

}  // namespace

void Violation::record(double mag, double t, double p) {
  if (count == 0 || mag > magnitude) {
    magnitude = mag;
    theta = t;
    pi = p;
  }
  ++count;
}

bool RegularityReport::all_ok() const {
  return normalization_ok() && fosd_ok() && single_crossing_theta_ok() && single_crossing_pi_ok() &&
         psi_increasing_ok();
}

RegularityReport check_regularity(const AgentSpec& a, std::size_t nt, std::size_t np, Exec exec) {
  if (nt < 32 || np < 32) throw DomainError("check_regularity: grids need at least 32 points");
  const auto& d = a.types();
  const auto& fam = a.income();
  const double phi = a.sensitivity(), c = a.audit_cost();
  const double slack = 1e-12 * std::max(1.0, c);
  const auto th = midpoints(d.lo(), d.hi(), nt);

  double plo = fam.supp_lo(d.lo()), phi_top = fam.supp_hi(d.lo());
  for (double t : {d.hi(), th.front(), th.back()}) {
    plo = std::min(plo, fam.supp_lo(t));
    phi_top = std::max(phi_top, fam.supp_hi(t));
  }
  const auto pg = midpoints(plo, phi_top, np);

  auto excess = [&](double t, double p) { return phi == 0.0 ? -c : phi * mu(a, t, p) - c; };

  struct Row {
    Violation norm, scp;
    double psi = 0.0;
  };
  std::vector<Row> rows(nt);
  kernels::for_each_index(
      nt,
      [&](std::size_t k) {
        const double t = th[k];
        Row& row = rows[k];
        const double lo = fam.supp_lo(t), hi = fam.supp_hi(t);
        if (hi > lo) {
          const auto breaks = fam.kinks(t);
          const double mass = quad::integrate([&](double p) { return fam.pdf(p, t); }, lo, hi, breaks);
          const double mean = quad::integrate([&](double p) { return p * fam.pdf(p, t); }, lo, hi, breaks);
          const double rent = quad::integrate([&](double p) { return -fam.dcdf_dtheta(p, t); }, lo, hi, breaks);
          const double worst = std::max({std::abs(mass - 1.0), std::abs(mean - t) / std::max(1.0, std::abs(t)),
                                         std::abs(rent - 1.0)});
          if (!(worst <= kNormTol)) row.norm.record(worst, t, std::nan(""));
          bool dropped = false;
          for (double p : midpoints(lo, hi, np)) {
            const double e = excess(t, p);
            if (e <= 0.0)
              dropped = true;
            else if (dropped && e > slack)
              row.scp.record(e, t, p);
          }
        }
        try {
          row.psi = virtual_value(a, t);
        } catch (const RegularityError&) {
          row.psi = std::nan("");
        }
      },
      exec);

  struct Col {
    Violation fosd, sct;
  };
  std::vector<Col> cols(np);
  kernels::for_each_index(
      np,
      [&](std::size_t j) {
        const double p = pg[j];
        Col& col = cols[j];
        double prev = std::nan("");
        bool dropped = false;
        for (double t : th) {
          const double g = fam.cdf(p, t);
          if (g > prev + 1e-12) col.fosd.record(g - prev, t, p);
          prev = g;
          if (!(p > fam.supp_lo(t) && p < fam.supp_hi(t))) continue;
          const double g2 = fam.dcdf_dtheta(p, t);
          if (!(g2 < 0.0)) col.fosd.record(std::abs(g2), t, p);
          const double e = excess(t, p);
          if (e <= 0.0)
            dropped = true;
          else if (dropped && e > slack)
            col.sct.record(e, t, p);
        }
      },
      exec);

  RegularityReport rep;
  rep.theta_points = nt;
  rep.pi_points = np;
  for (const auto& r : rows) {
    merge(rep.normalization, r.norm);
    merge(rep.single_crossing_pi, r.scp);
  }
  for (const auto& col : cols) {
    merge(rep.fosd, col.fosd);
    merge(rep.single_crossing_theta, col.sct);
  }
  for (std::size_t k = 0; k + 1 < nt; ++k) {
    const double a0 = rows[k].psi, a1 = rows[k + 1].psi;
    if (std::isnan(a0) || std::isnan(a1)) continue;
    if (!(a1 > a0)) rep.psi_increasing.record(a0 - a1, th[k + 1], std::nan(""));
  }
  return rep;
}

Condition1Report check_condition1(std::span<const double> pi_grid, std::span<const double> pen,
                                  double phi) {
  if (pi_grid.size() != pen.size()) throw DomainError("check_condition1: grid and penalty sizes differ");
  if (!std::is_sorted(pi_grid.begin(), pi_grid.end()))
    throw DomainError("check_condition1: income grid must be sorted");
  Condition1Report rep;
  for (std::size_t a = 0; a < pi_grid.size(); ++a) {
    for (std::size_t b = a + 1; b < pi_grid.size(); ++b) {
      ++rep.pairs;
      const double dp = pen[b] - pen[a];
      const double room = (pi_grid[b] - pi_grid[a]) * phi;
      const double tol = 1e-12 * std::max({1.0, std::abs(pen[a]), std::abs(pen[b])});
      const double v = std::max(-dp, dp - room);
      if (v > tol) {
        rep.ok = false;
        if (v > rep.worst_violation) {
          rep.worst_violation = v;
          rep.worst_lo = pi_grid[a];
          rep.worst_hi = pi_grid[b];
        }
      }
    }
  }
  return rep;
}

std::string_view to_string(IncomeStrategy s) {
  return s == IncomeStrategy::grid_best ? "grid_best" : "truthful_projection";
}

DeviationReport best_response_income(const MechanismTables& tables, std::size_t i, double theta_report,
                                     std::span<const double> others, double pi_true, std::size_t grid) {
  if (grid < 2) throw DomainError("best_response_income: grid needs at least 2 points");
  const auto& tab = tables.agent(i);
  const auto p = tab.at(theta_report);
  if (!(p.psi > rival_psi_max(tables, i, others)))
    throw DomainError("best_response_income: agent does not win at this profile");
  const auto& fam = tab.spec().income();
  const double lo = fam.supp_lo(theta_report), hi = fam.supp_hi(theta_report);

  DeviationReport rep;
  rep.income_strategy = "grid";
  rep.best_type_report = theta_report;
  const double truthful = std::clamp(pi_true, lo, hi);
  rep.truthful_utility = gross(tab.spec(), p, pi_true, truthful);
  auto candidates = linspace(lo, hi, grid);
  if (p.pi_star >= lo && p.pi_star <= hi) candidates.push_back(p.pi_star);
  rep.grid_points = candidates.size();
  rep.best_deviation_utility = -std::numeric_limits<double>::infinity();
  for (double r : candidates) {
    const double u = gross(tab.spec(), p, pi_true, r);
    if (u > rep.best_deviation_utility) {
      rep.best_deviation_utility = u;
      rep.best_income_report = r;
    }
  }
  rep.advantage = rep.best_deviation_utility - rep.truthful_utility;
  return rep;
}

TypeDeviationScan::TypeDeviationScan(const MechanismTables& tables, std::size_t i, std::size_t nt,
                                     std::size_t np, const ExpectationOptions& opts)
    : tables_(&tables), i_(i), pi_points_(np), schedule_(tables, i, rival_law(tables, i, opts)) {
  if (nt < 2 || np < 2) throw DomainError("type deviation scan: grids need at least 2 points");
  const auto& d = tables.agent(i).spec().types();
  const auto grid = linspace(d.lo(), d.hi(), nt);
  reports_.resize(nt);
  kernels::for_each_index(nt, [&](std::size_t k) { reports_[k] = make_report(grid[k]); }, opts.exec);
}

TypeDeviationScan::Report TypeDeviationScan::make_report(double theta) const {
  const auto& tab = tables_->agent(i_);
  Report r;
  r.point = tab.at(theta);
  r.interim = schedule_.at(r.point);
  r.lo = tab.spec().income().supp_lo(theta);
  r.hi = tab.spec().income().supp_hi(theta);
  r.income_grid = linspace(r.lo, r.hi, pi_points_);
  if (r.point.pi_star > r.lo && r.point.pi_star < r.hi) r.income_grid.push_back(r.point.pi_star);
  return r;
}

double TypeDeviationScan::utility(double theta_true, const Report& r, IncomeStrategy s) const {
  if (r.interim.win_prob <= 0.0) return -r.interim.transfer;
  const auto& a = tables_->agent(i_).spec();
  const double ps = r.point.pi_star;
  auto payoff = [&](double pi) {
    const double proj = std::clamp(pi, r.lo, r.hi);
    double best = gross(a, r.point, pi, proj);
    if (s == IncomeStrategy::grid_best)
      for (double rep : r.income_grid) best = std::max(best, gross(a, r.point, pi, rep));
    return best;
  };
  const double breaks[] = {r.lo, r.hi, ps};
  const double e = expect_income(a.income(), theta_true, payoff, breaks);
  return r.interim.win_prob * e - r.interim.transfer;
}

double TypeDeviationScan::utility(double theta_true, double theta_report, IncomeStrategy s) const {
  return utility(theta_true, make_report(theta_report), s);
}

DeviationReport TypeDeviationScan::best_response(double theta_true, IncomeStrategy s) const {
  DeviationReport rep;
  rep.income_strategy = std::string(to_string(s));
  rep.grid_points = reports_.size();
  rep.truthful_utility = utility(theta_true, make_report(theta_true), IncomeStrategy::truthful_projection);
  rep.best_deviation_utility = -std::numeric_limits<double>::infinity();
  for (const auto& r : reports_) {
    const double u = utility(theta_true, r, s);
    if (u > rep.best_deviation_utility) {
      rep.best_deviation_utility = u;
      rep.best_type_report = r.point.theta;
    }
  }
  rep.advantage = rep.best_deviation_utility - rep.truthful_utility;
  rep.ir_ok = rep.truthful_utility >= -kIrTol;
  return rep;
}

IcCertificate TypeDeviationScan::certify(IncomeStrategy s, Exec exec) const {
  const std::size_t n = reports_.size();
  std::vector<DeviationReport> out(n);
  kernels::for_each_index(n, [&](std::size_t k) { out[k] = best_response(reports_[k].point.theta, s); }, exec);
  IcCertificate cert;
  cert.income_strategy = std::string(to_string(s));
  cert.theta_points = n;
  cert.pi_points = pi_points_;
  cert.rival_method = schedule_.law().method;
  cert.max_advantage = -std::numeric_limits<double>::infinity();
  cert.min_truthful_utility = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n; ++k) {
    if (out[k].advantage > cert.max_advantage) {
      cert.max_advantage = out[k].advantage;
      cert.worst_theta = reports_[k].point.theta;
      cert.worst_report = out[k].best_type_report;
    }
    cert.min_truthful_utility = std::min(cert.min_truthful_utility, out[k].truthful_utility);
  }
  cert.utility_at_lo = out.front().truthful_utility;
  cert.ic_ok = cert.max_advantage <= kIcTol;
  cert.ir_ok = cert.min_truthful_utility >= -kIrTol && std::abs(cert.utility_at_lo) <= kIrTol;
  return cert;
}

DeviationReport best_response_type(const MechanismTables& tables, std::size_t i, double theta_true,
                                   std::size_t theta_grid, IncomeStrategy s, std::size_t pi_grid,
                                   const ExpectationOptions& opts) {
  if (theta_grid < 64 || pi_grid < 64) throw DomainError("best_response_type: grids need at least 64 points");
  return TypeDeviationScan(tables, i, theta_grid, pi_grid, opts).best_response(theta_true, s);
}

IncomeIcCertificate certify_income_ic(const MechanismTables& tables, std::size_t i, std::size_t nt,
                                      std::size_t np, Exec exec) {
  const auto& spec = tables.agent(i).spec();
  std::vector<double> others;
  for (std::size_t j = 0; j < tables.size(); ++j)
    if (j != i) others.push_back(tables.agent(j).spec().types().lo());
  const auto th = linspace(spec.types().lo(), spec.types().hi(), nt);
  struct Cell {
    double adv = -std::numeric_limits<double>::infinity();
    double pi = std::nan("");
  };
  std::vector<Cell> cells(nt);
  kernels::for_each_index(
      nt,
      [&](std::size_t k) {
        const double t = th[k];
        if (!(tables.agent(i).at(t).psi > rival_psi_max(tables, i, others))) return;
        for (double p : linspace(spec.income().supp_lo(t), spec.income().supp_hi(t), np)) {
          const auto r = best_response_income(tables, i, t, others, p, np);
          if (r.advantage > cells[k].adv) cells[k] = {r.advantage, p};
        }
      },
      exec);
  IncomeIcCertificate cert;
  cert.theta_points = nt;
  cert.pi_points = np;
  cert.max_advantage = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < nt; ++k) {
    if (cells[k].adv > cert.max_advantage) {
      cert.max_advantage = cells[k].adv;
      cert.worst_theta = th[k];
      cert.worst_pi = cells[k].pi;
    }
  }
  if (std::isinf(cert.max_advantage)) cert.max_advantage = 0.0;
  cert.ok = cert.max_advantage <= kIncomeIcTol;
  return cert;
}

CrossingReport crossing_point(const MechanismTables& tables, std::size_t i, double theta_lo,
                              double theta_hi, std::span<const double> others, std::size_t grid) {
  if (!(theta_lo <= theta_hi)) throw UnsupportedPair("crossing_point: reports must be ordered");
  const auto& tab = tables.agent(i);
  const auto& fam = tab.spec().income();
  const double m = rival_psi_max(tables, i, others);
  const auto pl = tab.at(theta_lo), ph = tab.at(theta_hi);
  if (!(pl.psi > m && ph.psi > m)) throw UnsupportedPair("crossing_point: both reports must win");
  const double lo = std::max(fam.supp_lo(theta_lo), fam.supp_lo(theta_hi));
  const double hi = std::min(fam.supp_hi(theta_lo), fam.supp_hi(theta_hi));
  for (double ps : {pl.pi_star, ph.pi_star})
    if (!(ps >= lo && ps <= hi))
      throw UnsupportedPair("crossing_point: audit thresholds must lie in both income supports");

  const double phi = tab.spec().sensitivity();
  const double tl = tab.transfer(pl, m), th = tab.transfer(ph, m);
  auto diff = [&](double p) {
    return (tl + phi * std::min(p, pl.pi_star)) - (th + phi * std::min(p, ph.pi_star));
  };

  CrossingReport rep;
  rep.bracket_lo = std::min(ph.pi_star, pl.pi_star);
  rep.bracket_hi = std::max(ph.pi_star, pl.pi_star);
  constexpr double tol = 1e-10;
  if (theta_lo == theta_hi) {
    rep.pi0 = rep.bracket_lo;
  } else if (diff(rep.bracket_lo) > tol) {
    rep.pi0 = rep.bracket_lo;
    rep.certified = false;
  } else if (diff(rep.bracket_hi) < -tol) {
    rep.pi0 = rep.bracket_hi;
    rep.certified = false;
  } else {
    rep.pi0 = quad::last_true([&](double p) { return diff(p) <= 0.0; }, rep.bracket_lo, rep.bracket_hi,
                              1e-14 * std::max(1.0, rep.bracket_hi));
  }
  rep.grid_points = grid;
  for (double p : linspace(lo, hi, grid)) {
    const double d = diff(p);
    const double v = p < rep.pi0 ? d : (p > rep.pi0 ? -d : 0.0);
    if (v > tol) {
      rep.certified = false;
      rep.worst_violation = std::max(rep.worst_violation, v);
    }
  }
  return rep;
}

NoisyAuditReport noisy_audit_equivalence(const AgentSpec& a, double theta, double pi_report,
                                         double pi_true, const Dist1D* noise, std::uint64_t n_trials,
                                         std::uint64_t seed, Exec exec) {
  const double phi = a.sensitivity();
  NoisyAuditReport rep;
  rep.n_trials = n_trials;
  rep.seed = seed;
  rep.exact_penalty = (pi_true - pi_report) * phi;
  if (noise) {
    const double width = noise->hi() - noise->lo();
    if (std::abs(noise->mean()) > 1e-9 * std::max(1.0, width))
      throw InvalidNoise("audit signal noise has nonzero mean " + std::to_string(noise->mean()));
    std::vector<double> draws(n_trials);
    kernels::for_each_index(
        n_trials,
        [&](std::size_t k) {
          Stream s(seed, k);
          draws[k] = (pi_true + noise->quantile(s.uniform()) - pi_report) * phi;
        },
        exec);
    const auto ms = kernels::mean_se(draws);
    rep.mc_mean = ms.mean;
    rep.std_error = ms.se;
    rep.within_3se = std::abs(rep.mc_mean - rep.exact_penalty) <= 3.0 * rep.std_error;
  } else {
    rep.mc_mean = rep.exact_penalty;
    rep.within_3se = true;
  }

  // Effective penalty of the clipped signal rule (zeta - pi_report)_+ phi as a function of pi.
  const auto& fam = a.income();
  const auto grid = linspace(fam.supp_lo(theta), fam.supp_hi(theta), 64);
  std::vector<double> eff(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double p = grid[k];
    if (!noise) {
      eff[k] = std::max(0.0, p - pi_report) * phi;
      continue;
    }
    const double brk[] = {pi_report - p};
    eff[k] = phi * quad::integrate(
                       [&](double e) { return std::max(0.0, p + e - pi_report) * noise->pdf(e); },
                       noise->lo(), noise->hi(), brk);
  }
  const auto c1 = check_condition1(grid, eff, phi);
  rep.condition1_ok = c1.ok;
  rep.condition1_worst = c1.worst_violation;
  return rep;
}

std::string_view to_string(StaticsAxis a) {
  switch (a) {
    case StaticsAxis::audit_cost: return "audit_cost";
    case StaticsAxis::sensitivity: return "sensitivity";
    case StaticsAxis::joint: return "joint";
    case StaticsAxis::hazard_family: return "hazard_family";
  }
  return "?";
}

StaticsAxis statics_axis_from(std::string_view name) {
  if (name == "audit_cost" || name == "c") return StaticsAxis::audit_cost;
  if (name == "sensitivity" || name == "phi") return StaticsAxis::sensitivity;
  if (name == "joint") return StaticsAxis::joint;
  if (name == "hazard_family") return StaticsAxis::hazard_family;
  throw InvalidAxis("unknown comparative statics axis '" + std::string(name) + "'");
}

namespace {

// direction: +1 weakly increasing along the axis, -1 weakly decreasing, 0 constant.
void scan_monotone(const std::vector<AgentSpec>& specs, std::size_t nt, int psi_dir, int ps_dir,
                   StaticsReport& rep) {
  const auto& d = specs.front().types();
  const auto th = midpoints(d.lo(), d.hi(), nt);
  std::vector<std::vector<TypePoint>> pts(specs.size(), std::vector<TypePoint>(nt));
  for (std::size_t s = 0; s < specs.size(); ++s)
    kernels::for_each_index(nt, [&](std::size_t k) { pts[s][k] = evaluate(specs[s], th[k]); }, Exec::parallel);
  auto check = [&](Violation& v, double prev, double cur, int dir, double t) {
    const double tol = kStaticsTol * std::max(1.0, std::abs(prev));
    double bad = 0.0;
    if (dir > 0) bad = prev - cur;
    if (dir < 0) bad = cur - prev;
    if (dir == 0) bad = std::abs(cur - prev);
    if (bad > tol) v.record(bad, t, std::nan(""));
  };
  for (std::size_t s = 0; s + 1 < specs.size(); ++s) {
    for (std::size_t k = 0; k < nt; ++k) {
      check(rep.psi, pts[s][k].psi, pts[s + 1][k].psi, psi_dir, th[k]);
      check(rep.pi_star, pts[s][k].pi_star, pts[s + 1][k].pi_star, ps_dir, th[k]);
    }
  }
}

}  // namespace

StaticsReport comparative_statics_scan(const AgentSpec& a, StaticsAxis axis, std::span<const double> values,
                                       std::size_t nt) {
  if (axis == StaticsAxis::hazard_family)
    throw InvalidAxis("hazard_family scans take type distributions, not numbers");
  if (values.size() < 3) throw InvalidAxis("comparative statics needs at least 3 axis values");
  for (std::size_t k = 0; k + 1 < values.size(); ++k)
    if (!(values[k + 1] > values[k])) throw InvalidAxis("axis values must be strictly increasing");
  std::vector<AgentSpec> specs;
  try {
    for (double v : values) {
      switch (axis) {
        case StaticsAxis::audit_cost: specs.push_back(a.with_audit_cost(v)); break;
        case StaticsAxis::sensitivity: specs.push_back(a.with_sensitivity(v)); break;
        default:
          if (!(v > 0.0)) throw InvalidAxis("joint scaling factors must be positive");
          specs.emplace_back(a.types(), a.income_ptr(), a.audit_cost() * v, a.sensitivity() * v);
      }
    }
  } catch (const ConstructionError& e) {
    throw InvalidAxis(std::string("axis value rejected: ") + e.what());
  }
  StaticsReport rep;
  rep.axis = axis;
  rep.values.assign(values.begin(), values.end());
  rep.theta_points = nt;
  switch (axis) {
    case StaticsAxis::audit_cost: scan_monotone(specs, nt, -1, -1, rep); break;
    case StaticsAxis::sensitivity: scan_monotone(specs, nt, +1, +1, rep); break;
    default: scan_monotone(specs, nt, +1, 0, rep); break;
  }
  return rep;
}

StaticsReport comparative_statics_scan(const AgentSpec& a, std::span<const TypeDist> dists, std::size_t nt) {
  if (dists.size() < 2) throw InvalidAxis("hazard_family scan needs at least 2 distributions");
  const double lo = dists.front().lo(), hi = dists.front().hi();
  for (const auto& d : dists)
    if (std::abs(d.lo() - lo) > 1e-12 || std::abs(d.hi() - hi) > 1e-12)
      throw InvalidAxis("hazard_family distributions must share a support");
  const auto grid = midpoints(lo, hi, 256);
  for (std::size_t s = 0; s + 1 < dists.size(); ++s) {
    for (double t : grid) {
      const double a0 = inverse_hazard(dists[s], t), a1 = inverse_hazard(dists[s + 1], t);
      if (a1 < a0 - 1e-12 * std::max(1.0, a0)) {
        std::ostringstream os;
        os << "distributions " << s << " and " << s + 1 << " are not hazard-rate ordered at theta=" << t;
        throw InvalidAxis(os.str());
      }
    }
  }
  std::vector<AgentSpec> specs;
  for (const auto& d : dists) specs.emplace_back(d, a.income_ptr(), a.audit_cost(), a.sensitivity());
  StaticsReport rep;
  rep.axis = StaticsAxis::hazard_family;
  rep.values.resize(dists.size());
  for (std::size_t k = 0; k < dists.size(); ++k) rep.values[k] = static_cast<double>(k);
  rep.theta_points = nt;
  scan_monotone(specs, nt, -1, +1, rep);
  return rep;
}

}  // namespace cpa
