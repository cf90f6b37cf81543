#include "cpa/mech.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/tools/roots.hpp>

namespace cpa {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Absolute accuracy per unit type length for the information rent; 1 - Phi carries bisection noise.
constexpr double kRentTol = 1e-12;

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(10);
  os << x;
  return os.str();
}

double pi_slack(double x) { return 1e-12 * std::max(1.0, std::abs(x)); }

void require_type(const AgentSpec& a, double theta, const char* op) {
  if (!a.types().contains(theta))
    throw DomainError(std::string(op) + ": theta " + fmt(theta) + " outside [" +
                      fmt(a.types().lo()) + ", " + fmt(a.types().hi()) + "]");
}

void require_income(const AgentSpec& a, double theta, double pi, const char* op) {
  const double lo = a.income().supp_lo(theta), hi = a.income().supp_hi(theta);
  if (!(pi >= lo - pi_slack(lo) && pi <= hi + pi_slack(hi)))
    throw DomainError(std::string(op) + ": income " + fmt(pi) + " outside [" + fmt(lo) + ", " +
                      fmt(hi) + "] for type " + fmt(theta));
}

// phi * mu with 0 * inf read as 0.
double phi_mu(const AgentSpec& a, double theta, double pi, double ih) {
  const double phi = a.sensitivity();
  if (phi == 0.0) return 0.0;
  const double r = a.income().rent_ratio(pi, theta);
  if (r == 0.0) return 0.0;
  return phi * r * ih;
}

double threshold(const AgentSpec& a, double theta, double ih) {
  const auto& fam = a.income();
  const double lo = fam.supp_lo(theta), hi = fam.supp_hi(theta), c = a.audit_cost();
  auto excess = [&](double p) { return phi_mu(a, theta, p, ih) - c; };
  if (!(hi > lo)) return excess(lo) >= 0.0 ? lo : 0.0;

  constexpr int kGrid = 32;
  const double slack = 1e-12 * std::max(1.0, c);
  bool dropped = false;
  for (int k = 0; k < kGrid; ++k) {
    const double p = lo + (hi - lo) * k / (kGrid - 1);
    const double e = excess(p);
    if (e <= 0.0) {
      dropped = true;
    } else if (dropped && e > slack) {
      throw RegularityError("audit threshold: phi*mu - c crosses zero more than once in income at type " +
                            fmt(theta));
    }
  }
  if (excess(hi) >= 0.0) return hi;
  if (excess(lo) < 0.0) return 0.0;
  return quad::last_true([&](double p) { return excess(p) >= 0.0; }, lo, hi,
                         1e-13 * std::max(1.0, std::abs(hi)));
}

double cap_mass(const AgentSpec& a, double theta, double pi_star) {
  const double phi = a.sensitivity();
  if (phi == 0.0) return 0.0;
  const auto& fam = a.income();
  const double lo = fam.supp_lo(theta), hi = fam.supp_hi(theta);
  if (pi_star >= hi) return phi;
  if (pi_star <= lo) return 0.0;
  const auto breaks = fam.kinks(theta);
  const double v =
      phi * quad::integrate([&](double p) { return -fam.dcdf_dtheta(p, theta); }, lo, pi_star, breaks);
  return std::clamp(v, 0.0, phi);
}

// E[(phi mu - c)_+ | theta].
double audit_gain(const AgentSpec& a, double theta, double ih, double pi_star) {
  const auto& fam = a.income();
  const double lo = fam.supp_lo(theta), hi = fam.supp_hi(theta), c = a.audit_cost();
  if (!(hi > lo)) return std::max(0.0, phi_mu(a, theta, lo, ih) - c);
  auto breaks = fam.kinks(theta);
  breaks.push_back(pi_star);
  return quad::integrate(
      [&](double p) { return std::max(0.0, phi_mu(a, theta, p, ih) - c) * fam.pdf(p, theta); }, lo,
      hi, breaks);
}

int regime(const AgentSpec& a, double theta) {
  const double ih = inverse_hazard(a.types(), theta);
  const double ps = threshold(a, theta, ih);
  if (ps >= a.income().supp_hi(theta)) return 2;
  if (ps <= a.income().supp_lo(theta)) return 0;
  return 1;
}

std::optional<double> zero_crossing(const std::function<double(double)>& f, double lo, double hi) {
  if (f(lo) > 0.0 || !(f(hi) > 0.0)) return std::nullopt;
  return quad::last_true([&](double t) { return !(f(t) > 0.0); }, lo, hi,
                         1e-14 * std::max(1.0, std::abs(hi)));
}

kernels::WeightedValues weighted_values(const AgentSpec& a, const std::function<double(double)>& v,
                                        const std::vector<double>& breaks, std::size_t panels,
                                        Exec exec) {
  const auto& d = a.types();
  const auto rule = quad::composite_gauss(d.lo(), d.hi(), panels, breaks);
  kernels::WeightedValues out;
  out.values = kernels::tabulate(rule.nodes, v, exec);
  out.weights.resize(rule.nodes.size());
  for (std::size_t k = 0; k < rule.nodes.size(); ++k)
    out.weights[k] = rule.weights[k] * d.pdf(rule.nodes[k]);
  return out;
}

using ValueFn = std::function<double(std::size_t, double)>;
using BreakFn = std::function<std::vector<double>(std::size_t)>;

Estimate expected_max(const AuctionInstance& inst, const ValueFn& value, const BreakFn& breaks,
                      const ExpectationOptions& o) {
  const std::size_t n = inst.size();
  if (n <= o.max_tensor_agents) {
    const std::size_t panels = o.panels ? o.panels : (n == 1 ? 256 : 128);
    std::vector<kernels::WeightedValues> xs;
    for (std::size_t j = 0; j < n; ++j)
      xs.push_back(weighted_values(inst.agent(j), [&](double t) { return value(j, t); }, breaks(j),
                                   panels, o.exec));
    return {kernels::mean(kernels::positive_max_law(xs)), 0.0, "tensor_quadrature"};
  }
  std::vector<double> samples(o.mc_samples);
  kernels::for_each_index(
      samples.size(),
      [&](std::size_t k) {
        Stream s(o.seed, k);
        double m = 0.0;
        for (std::size_t j = 0; j < n; ++j)
          m = std::max(m, value(j, inst.agent(j).types().quantile(s.uniform())));
        samples[k] = m;
      },
      o.exec);
  const auto ms = kernels::mean_se(samples);
  return {ms.mean, ms.se, "monte_carlo"};
}

std::vector<double> with_point(std::vector<double> v, std::optional<double> x) {
  if (x) v.push_back(*x);
  return v;
}

}  // namespace

AuctionInstance::AuctionInstance(std::vector<AgentSpec> agents) : agents_(std::move(agents)) {
  if (agents_.empty()) throw ConstructionError("auction instance needs at least one agent");
}

double mu(const AgentSpec& a, double theta, double pi) {
  require_type(a, theta, "mu");
  require_income(a, theta, pi, "mu");
  const double p = std::clamp(pi, a.income().supp_lo(theta), a.income().supp_hi(theta));
  const double r = a.income().rent_ratio(p, theta);
  if (r == 0.0) return 0.0;
  return r * inverse_hazard(a.types(), theta);
}

double myerson_virtual(const AgentSpec& a, double theta) {
  require_type(a, theta, "myerson_virtual");
  return theta - inverse_hazard(a.types(), theta);
}

double audit_threshold(const AgentSpec& a, double theta) {
  require_type(a, theta, "audit_threshold");
  return threshold(a, theta, inverse_hazard(a.types(), theta));
}

double phi_cap(const AgentSpec& a, double theta) {
  require_type(a, theta, "phi_cap");
  return cap_mass(a, theta, threshold(a, theta, inverse_hazard(a.types(), theta)));
}

TypePoint evaluate(const AgentSpec& a, double theta) {
  require_type(a, theta, "virtual_value");
  const auto& fam = a.income();
  TypePoint p;
  p.theta = theta;
  p.inv_hazard = inverse_hazard(a.types(), theta);
  p.psi_m = theta - p.inv_hazard;
  p.pi_star = threshold(a, theta, p.inv_hazard);
  p.phi_cap = cap_mass(a, theta, p.pi_star);
  p.audit_prob = fam.degenerate(theta) ? 0.0 : fam.cdf(p.pi_star, theta);
  const double phi = a.sensitivity();
  if (phi == 0.0) {
    p.psi = p.psi_m;
  } else if (std::isinf(p.inv_hazard)) {
    p.psi = phi == 1.0 ? theta - a.audit_cost() : -kInf;
  } else {
    p.psi = p.psi_m + audit_gain(a, theta, p.inv_hazard, p.pi_star);
  }
  return p;
}

double virtual_value(const AgentSpec& a, double theta) { return evaluate(a, theta).psi; }

double expected_capped_income(const AgentSpec& a, double theta, double cap) {
  const auto& fam = a.income();
  const double lo = fam.supp_lo(theta), hi = fam.supp_hi(theta);
  if (!(hi > lo)) return std::min(lo, cap);
  if (cap >= hi) return theta;
  if (cap <= lo) return cap;
  const auto breaks = fam.kinks(theta);
  const double below =
      quad::integrate([&](double p) { return p * fam.pdf(p, theta); }, lo, cap, breaks);
  return below + cap * (1.0 - fam.cdf(cap, theta));
}

std::optional<std::size_t> winner(std::span<const double> psi) {
  std::optional<std::size_t> best;
  double top = 0.0;
  bool tie = false;
  for (std::size_t k = 0; k < psi.size(); ++k) {
    if (psi[k] > top) {
      top = psi[k];
      best = k;
      tie = false;
    } else if (best && psi[k] == top) {
      tie = true;
    }
  }
  if (tie) return std::nullopt;
  return best;
}

std::vector<int> allocation(const AuctionInstance& inst, std::span<const double> theta) {
  if (theta.size() != inst.size()) throw DomainError("allocation: profile length mismatch");
  std::vector<double> psi(inst.size());
  for (std::size_t i = 0; i < inst.size(); ++i) psi[i] = virtual_value(inst.agent(i), theta[i]);
  std::vector<int> q(inst.size(), 0);
  if (auto w = winner(psi)) q[*w] = 1;
  return q;
}

double royalty(const AgentSpec& a, double theta_report, double pi_report) {
  require_type(a, theta_report, "royalty");
  require_income(a, theta_report, pi_report, "royalty");
  return std::min(pi_report, audit_threshold(a, theta_report)) * a.sensitivity();
}

bool audits(const AgentSpec& a, const TypePoint& p, double pi_report) {
  if (pi_report < p.pi_star) return true;
  const auto& fam = a.income();
  const double hi = fam.supp_hi(p.theta);
  return hi > fam.supp_lo(p.theta) && p.pi_star >= hi && pi_report <= p.pi_star;
}

int audit_rule(const AgentSpec& a, double theta_report, double pi_report) {
  require_type(a, theta_report, "audit_rule");
  require_income(a, theta_report, pi_report, "audit_rule");
  return audits(a, evaluate(a, theta_report), pi_report) ? 1 : 0;
}

double penalty(const AgentSpec& a, double /*theta_report*/, double pi_report, double pi_true) {
  return (pi_true - pi_report) * a.sensitivity();
}

std::vector<double> type_breakpoints(const AgentSpec& a, std::size_t scan) {
  const double lo = a.types().lo(), hi = a.types().hi();
  std::vector<double> out = a.types().kinks();
  if (a.sensitivity() > 0.0) {
    std::vector<int> reg(scan + 1);
    std::vector<double> grid(scan + 1);
    for (std::size_t k = 0; k <= scan; ++k) {
      grid[k] = k == scan ? hi : lo + (hi - lo) * static_cast<double>(k) / scan;
      reg[k] = regime(a, grid[k]);
    }
    for (std::size_t k = 0; k < scan; ++k) {
      if (reg[k] == reg[k + 1]) continue;
      const int r = reg[k];
      const double b = quad::last_true([&](double t) { return regime(a, t) == r; }, grid[k],
                                       grid[k + 1], 1e-14 * std::max(1.0, std::abs(hi)));
      if (b > lo && b < hi) out.push_back(b);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

AgentTable::AgentTable(AgentSpec spec, std::size_t n, Exec exec)
    : spec_(std::move(spec)), breaks_(type_breakpoints(spec_)) {
  if (n < 2) throw ConstructionError("agent table needs at least 2 nodes");
  const double lo = spec_.types().lo(), hi = spec_.types().hi(), width = hi - lo;
  for (std::size_t k = 0; k < n; ++k) {
    const double t = k + 1 == n ? hi : lo + width * static_cast<double>(k) / (n - 1);
    const bool near_break = std::any_of(breaks_.begin(), breaks_.end(),
                                        [&](double b) { return std::abs(b - t) < 1e-9 * width; });
    if (!near_break) nodes_.push_back(t);
  }
  nodes_.insert(nodes_.end(), breaks_.begin(), breaks_.end());
  std::sort(nodes_.begin(), nodes_.end());

  const std::size_t m = nodes_.size();
  points_.resize(m);
  kernels::for_each_index(m, [&](std::size_t k) { points_[k] = evaluate(spec_, nodes_[k]); }, exec);

  slope_lo_.resize(m);
  slope_hi_.resize(m);
  const double nudge = 1e-10 * width;
  kernels::for_each_index(
      m,
      [&](std::size_t k) {
        const double t = nodes_[k];
        if (std::binary_search(breaks_.begin(), breaks_.end(), t)) {
          slope_lo_[k] = 1.0 - phi_cap(spec_, std::max(lo, t - nudge));
          slope_hi_[k] = 1.0 - phi_cap(spec_, std::min(hi, t + nudge));
        } else {
          slope_lo_[k] = slope_hi_[k] = 1.0 - points_[k].phi_cap;
        }
      },
      exec);

  std::vector<double> cells(m - 1);
  kernels::for_each_index(
      m - 1,
      [&](std::size_t k) {
        cells[k] = quad::integrate([&](double z) { return 1.0 - phi_cap(spec_, z); }, nodes_[k],
                                   nodes_[k + 1], {}, quad::kRelTol, kRentTol * (nodes_[k + 1] - nodes_[k]));
      },
      exec);
  rent_.assign(m, 0.0);
  for (std::size_t k = 0; k + 1 < m; ++k) rent_[k + 1] = rent_[k] + cells[k];
  z0_ = first_winning_type(0.0);
}

std::size_t AgentTable::cell(double theta) const {
  const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), theta);
  const auto k = static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, it - nodes_.begin() - 1));
  return std::min(k, nodes_.size() - 2);
}

double AgentTable::rent(double theta) const {
  require_type(spec_, theta, "rent");
  const std::size_t k = cell(theta);
  if (theta == nodes_[k]) return rent_[k];
  if (theta == nodes_[k + 1]) return rent_[k + 1];
  return rent_[k] +
         quad::integrate([&](double z) { return 1.0 - phi_cap(spec_, z); }, nodes_[k], theta, {},
                         quad::kRelTol, kRentTol * (theta - nodes_[k]));
}

double AgentTable::rent_fast(double theta) const {
  const std::size_t k = cell(theta);
  const double x0 = nodes_[k], h = nodes_[k + 1] - x0;
  const double t = std::clamp((theta - x0) / h, 0.0, 1.0);
  const double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * rent_[k] + (t3 - 2 * t2 + t) * h * slope_hi_[k] +
         (-2 * t3 + 3 * t2) * rent_[k + 1] + (t3 - t2) * h * slope_lo_[k + 1];
}

std::optional<double> AgentTable::first_winning_type(double m) const {
  if (points_.front().psi > m) return nodes_.front();
  if (!(points_.back().psi > m)) return std::nullopt;
  const auto it = std::partition_point(points_.begin(), points_.end(),
                                       [m](const TypePoint& p) { return !(p.psi > m); });
  const auto k = static_cast<std::size_t>(it - points_.begin());
  double a = nodes_[k - 1], b = nodes_[k];
  double fa = points_[k - 1].psi - m, fb = points_[k].psi - m;
  if (fa == 0.0) return a;
  auto f = [&](double z) { return virtual_value(spec_, z) - m; };
  while (!std::isfinite(fa)) {
    const double mid = 0.5 * (a + b);
    if (mid <= a || mid >= b) return b;
    const double fm = f(mid);
    if (fm > 0.0) {
      b = mid;
      fb = fm;
    } else {
      a = mid;
      fa = fm;
    }
  }
  std::uintmax_t iters = 64;
  const auto r = boost::math::tools::toms748_solve(f, a, b, fa, fb,
                                                   boost::math::tools::eps_tolerance<double>(50), iters);
  return r.second;
}

double AgentTable::transfer(const TypePoint& p, double m, bool fast) const {
  if (!(p.psi > m)) return 0.0;
  const auto z = (m == 0.0 && z0_) ? z0_ : first_winning_type(m);
  const double rt = fast ? rent_fast(p.theta) : rent(p.theta);
  const double rz = fast ? rent_fast(*z) : rent(*z);
  return p.theta - spec_.sensitivity() * expected_capped_income(spec_, p.theta, p.pi_star) - (rt - rz);
}

MechanismTables::MechanismTables(AuctionInstance inst, std::size_t nodes, Exec exec)
    : inst_(std::move(inst)) {
  agents_.reserve(inst_.size());
  for (const auto& a : inst_.agents()) agents_.emplace_back(a, nodes, exec);
}

double MechanismTables::rival_max(std::size_t i, std::span<const double> psi) const {
  double m = 0.0;
  for (std::size_t j = 0; j < psi.size(); ++j)
    if (j != i) m = std::max(m, psi[j]);
  return m;
}

double transfer(const MechanismTables& tables, std::size_t i, std::span<const double> theta) {
  if (theta.size() != tables.size()) throw DomainError("transfer: profile length mismatch");
  std::vector<TypePoint> pts;
  std::vector<double> psi;
  for (std::size_t j = 0; j < tables.size(); ++j) {
    pts.push_back(tables.agent(j).at(theta[j]));
    psi.push_back(pts.back().psi);
  }
  return tables.agent(i).transfer(pts[i], tables.rival_max(i, psi));
}

double transfer(const AuctionInstance& inst, std::size_t i, std::span<const double> theta) {
  return transfer(MechanismTables(inst), i, theta);
}

RivalLaw rival_law(const MechanismTables& tables, std::size_t i, const ExpectationOptions& o) {
  const std::size_t n = tables.size();
  if (n == 1) return {{{0.0}, {1.0}}, "exact"};
  auto psi_of = [&](std::size_t j, double t) { return tables.agent(j).at(t).psi; };
  if (n <= o.max_tensor_agents) {
    const std::size_t panels = o.panels ? o.panels : 128;
    std::vector<kernels::WeightedValues> xs;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const auto& tab = tables.agent(j);
      xs.push_back(weighted_values(tab.spec(), [&](double t) { return psi_of(j, t); },
                                   with_point(tab.breakpoints(), tab.first_winning_type(0.0)), panels,
                                   o.exec));
    }
    return {kernels::positive_max_law(xs), "tensor_quadrature"};
  }
  std::vector<double> samples(o.mc_samples);
  kernels::for_each_index(
      samples.size(),
      [&](std::size_t k) {
        Stream s(o.seed, k);
        double m = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
          const double t = tables.agent(j).spec().types().quantile(s.uniform());
          if (j != i) m = std::max(m, psi_of(j, t));
        }
        samples[k] = m;
      },
      o.exec);
  std::sort(samples.begin(), samples.end());
  kernels::Atoms atoms;
  const double w = 1.0 / static_cast<double>(samples.size());
  for (double v : samples) {
    if (!atoms.values.empty() && atoms.values.back() == v)
      atoms.probs.back() += w;
    else {
      atoms.values.push_back(v);
      atoms.probs.push_back(w);
    }
  }
  return {atoms, "monte_carlo"};
}

InterimSchedule::InterimSchedule(const MechanismTables& tables, std::size_t i, RivalLaw law)
    : table_(&tables.agent(i)), law_(std::move(law)) {
  const auto& v = law_.atoms.values;
  const std::size_t n = v.size();
  std::vector<double> rz(n, 0.0);
  kernels::for_each_index(
      n,
      [&](std::size_t k) {
        if (auto z = table_->first_winning_type(v[k])) rz[k] = table_->rent(*z);
      },
      Exec::parallel);
  cum_prob_.assign(n + 1, 0.0);
  cum_rent_.assign(n + 1, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    cum_prob_[k + 1] = cum_prob_[k] + law_.atoms.probs[k];
    cum_rent_[k + 1] = cum_rent_[k] + law_.atoms.probs[k] * rz[k];
  }
}

InterimSchedule::Value InterimSchedule::at(const TypePoint& p) const {
  const auto& v = law_.atoms.values;
  const auto idx = static_cast<std::size_t>(std::lower_bound(v.begin(), v.end(), p.psi) - v.begin());
  const double q = cum_prob_[idx];
  if (q <= 0.0) return {0.0, 0.0};
  const auto& a = table_->spec();
  const double gross = p.theta - a.sensitivity() * expected_capped_income(a, p.theta, p.pi_star);
  return {q, q * (gross - table_->rent(p.theta)) + cum_rent_[idx]};
}

BinaryMenu binary_menu(const AgentSpec& a) {
  const auto* ls = dynamic_cast<const LocationScaleIncome*>(&a.income());
  if (!ls || ls->scale_b() != 0.0 || ls->scale_a() != 1.0)
    throw UnsupportedInstance("binary menu requires an additive-error income family");
  const auto& d = a.types();
  const double lo = d.lo(), hi = d.hi(), phi = a.sensitivity(), c = a.audit_cost();
  const double tol = 1e-14 * std::max(1.0, std::abs(hi));
  auto audits = [&](double t) { return phi > 0.0 && phi * inverse_hazard(d, t) - c >= 0.0; };
  auto psi = [&](double t) { return virtual_value(a, t); };

  BinaryMenu m;
  if (!audits(lo))
    m.theta_star = lo;
  else if (audits(hi))
    m.theta_star = hi;
  else
    m.theta_star = quad::last_true(audits, lo, hi, tol);

  if (psi(lo) > 0.0)
    m.theta_0 = lo;
  else if (!(psi(hi) > 0.0))
    m.theta_0 = hi;
  else
    m.theta_0 = quad::last_true([&](double t) { return !(psi(t) > 0.0); }, lo, hi, tol);

  if (m.theta_0 >= m.theta_star) {
    m.contracts.push_back({ContractKind::lump_sum, m.theta_0, 0.0, false});
  } else {
    m.contracts.push_back({ContractKind::lump_sum, (1.0 - phi) * m.theta_0 + phi * m.theta_star, 0.0, false});
    m.contracts.push_back({ContractKind::linear_royalty, (1.0 - phi) * m.theta_0, phi, true});
  }
  return m;
}

double endogenous_virtual(const AuctionInstance& inst, std::size_t i, std::span<const double> theta,
                          const AuditRule& rule, std::span<const double> breaks) {
  const auto& a = inst.agent(i);
  const double t = theta[i];
  require_type(a, t, "endogenous_virtual");
  const double ih = inverse_hazard(a.types(), t);
  if (std::isinf(ih)) throw DomainError("endogenous_virtual: type density vanishes at " + fmt(t));
  const auto& fam = a.income();
  const double lo = fam.supp_lo(t), hi = fam.supp_hi(t), c = a.audit_cost();
  auto term = [&](double p) { return rule(theta, p) * (phi_mu(a, t, p, ih) - c); };
  if (!(hi > lo)) return t - ih + term(lo);
  auto brks = fam.kinks(t);
  brks.insert(brks.end(), breaks.begin(), breaks.end());
  try {
    brks.push_back(threshold(a, t, ih));
  } catch (const RegularityError&) {
  }
  return t - ih + quad::integrate([&](double p) { return term(p) * fam.pdf(p, t); }, lo, hi, brks);
}

Estimate payoff_bound(const AuctionInstance& inst, const ExpectationOptions& o) {
  return expected_max(
      inst, [&](std::size_t j, double t) { return virtual_value(inst.agent(j), t); },
      [&](std::size_t j) {
        const auto& a = inst.agent(j);
        return with_point(type_breakpoints(a),
                          zero_crossing([&](double t) { return virtual_value(a, t); },
                                        a.types().lo(), a.types().hi()));
      },
      o);
}

Estimate myerson_cash_revenue(const AuctionInstance& inst, const ExpectationOptions& o) {
  constexpr int kCheck = 256;
  for (std::size_t j = 0; j < inst.size(); ++j) {
    const auto& d = inst.agent(j).types();
    double prev = -kInf;
    for (int k = 0; k < kCheck; ++k) {
      const double t = d.lo() + (d.hi() - d.lo()) * (k + 0.5) / kCheck;
      const double v = t - inverse_hazard(d, t);
      if (!(v > prev))
        throw RegularityError("Myerson virtual value of agent " + std::to_string(j) +
                              " is not increasing near " + fmt(t) + "; ironing is not supported");
      prev = v;
    }
  }
  return expected_max(
      inst, [&](std::size_t j, double t) { return myerson_virtual(inst.agent(j), t); },
      [&](std::size_t j) {
        const auto& a = inst.agent(j);
        return with_point(a.types().kinks(),
                          zero_crossing([&](double t) { return myerson_virtual(a, t); },
                                        a.types().lo(), a.types().hi()));
      },
      o);
}

Estimate full_extraction_revenue(const AuctionInstance& inst, const ExpectationOptions& o) {
  return expected_max(
      inst, [](std::size_t, double t) { return t; },
      [&](std::size_t j) { return with_point(inst.agent(j).types().kinks(), 0.0); }, o);
}

}  // namespace cpa
