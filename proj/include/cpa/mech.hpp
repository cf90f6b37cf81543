#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cpa/dist.hpp"
#include "cpa/kernels.hpp"

namespace cpa {

class AuctionInstance {
 public:
  explicit AuctionInstance(std::vector<AgentSpec> agents);

  std::size_t size() const { return agents_.size(); }
  const AgentSpec& agent(std::size_t i) const { return agents_.at(i); }
  const std::vector<AgentSpec>& agents() const { return agents_; }

 private:
  std::vector<AgentSpec> agents_;
};

// -G_theta/g times the inverse hazard. Inputs on the support boundary use one-sided limits.
double mu(const AgentSpec& agent, double theta, double pi);
double myerson_virtual(const AgentSpec& agent, double theta);
double virtual_value(const AgentSpec& agent, double theta);
double audit_threshold(const AgentSpec& agent, double theta);
double phi_cap(const AgentSpec& agent, double theta);

// Everything the mechanism needs about one type, sharing a single threshold solve.
struct TypePoint {
  double theta = 0.0;
  double inv_hazard = 0.0;
  double psi_m = 0.0;
  double psi = 0.0;
  double pi_star = 0.0;
  double phi_cap = 0.0;
  double audit_prob = 0.0;  // P(pi < pi_star | theta)
};

TypePoint evaluate(const AgentSpec& agent, double theta);

// E[min(pi, cap) | theta].
double expected_capped_income(const AgentSpec& agent, double theta, double cap);

// Index of the strict winner: psi_i > max(0, psi_j) for all j != i. Ties allocate to nobody.
std::optional<std::size_t> winner(std::span<const double> psi);
std::vector<int> allocation(const AuctionInstance& inst, std::span<const double> theta);

// Audit decision for a report against the reported type's threshold. When the threshold sits at the
// top of a nondegenerate support the audit region is closed there, so a report projected onto the
// top of the support is audited like every other report.
bool audits(const AgentSpec& agent, const TypePoint& p, double pi_report);

double royalty(const AgentSpec& agent, double theta_report, double pi_report);
int audit_rule(const AgentSpec& agent, double theta_report, double pi_report);
double penalty(const AgentSpec& agent, double theta_report, double pi_report, double pi_true);

// Interior type-space points where pi* changes regime (no audit / partial / full support) plus
// kinks of the type density. Phi may jump at the former.
std::vector<double> type_breakpoints(const AgentSpec& agent, std::size_t scan = 512);

// Per-agent tables on a type grid augmented with breakpoints: evaluated points, cumulative
// information rent R(theta) = int_lo^theta (1 - Phi), and inversion of psi.
class AgentTable {
 public:
  AgentTable(AgentSpec spec, std::size_t nodes = 1025, Exec exec = Exec::parallel);

  const AgentSpec& spec() const { return spec_; }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<TypePoint>& points() const { return points_; }
  const std::vector<double>& breakpoints() const { return breaks_; }

  TypePoint at(double theta) const { return evaluate(spec_, theta); }
  double rent(double theta) const;
  // Cubic Hermite on the node table using R' = 1 - Phi; for Monte Carlo hot paths.
  double rent_fast(double theta) const;
  // inf{z : psi(z) > m}, or nothing when psi never exceeds m.
  std::optional<double> first_winning_type(double m) const;
  // Theorem transfer for a winner against highest rival clipped virtual value m (0 if not winning).
  double transfer(const TypePoint& p, double m, bool fast = false) const;
  double transfer(double theta, double m) const { return transfer(at(theta), m); }

 private:
  std::size_t cell(double theta) const;

  AgentSpec spec_;
  std::vector<double> nodes_, breaks_;
  std::vector<TypePoint> points_;
  std::vector<double> rent_, slope_lo_, slope_hi_;
  std::optional<double> z0_;
};

class MechanismTables {
 public:
  explicit MechanismTables(AuctionInstance inst, std::size_t nodes = 1025,
                           Exec exec = Exec::parallel);

  const AuctionInstance& instance() const { return inst_; }
  std::size_t size() const { return agents_.size(); }
  const AgentTable& agent(std::size_t i) const { return agents_.at(i); }

  // max over j != i of psi_j(theta_j) clipped at 0.
  double rival_max(std::size_t i, std::span<const double> psi) const;

 private:
  AuctionInstance inst_;
  std::vector<AgentTable> agents_;
};

double transfer(const MechanismTables& tables, std::size_t i, std::span<const double> theta);
double transfer(const AuctionInstance& inst, std::size_t i, std::span<const double> theta);

struct ExpectationOptions {
  std::size_t panels = 0;  // Gauss-Legendre panels per agent; 0 picks by agent count
  std::size_t max_tensor_agents = 3;
  std::uint64_t mc_samples = 200000;
  std::uint64_t seed = 0;
  Exec exec = Exec::parallel;
};

// Law of max_{j != i} psi_j(theta_j)_+ for agent i's rivals (a point mass at 0 when N = 1).
struct RivalLaw {
  kernels::Atoms atoms;
  std::string method;
};

RivalLaw rival_law(const MechanismTables& tables, std::size_t i, const ExpectationOptions& opts = {});

// Interim allocation probability and expected transfer of agent i as a function of its report.
class InterimSchedule {
 public:
  InterimSchedule(const MechanismTables& tables, std::size_t i, RivalLaw law);

  struct Value {
    double win_prob;
    double transfer;
  };
  Value at(const TypePoint& p) const;
  Value at(double theta) const { return at(table_->at(theta)); }
  const RivalLaw& law() const { return law_; }

 private:
  const AgentTable* table_;
  RivalLaw law_;
  std::vector<double> cum_prob_, cum_rent_;  // prefix sums over atoms
};

enum class ContractKind { lump_sum, linear_royalty };

struct MenuContract {
  ContractKind kind = ContractKind::lump_sum;
  double upfront_price = 0.0;
  double royalty_rate = 0.0;
  bool audited = false;
};

struct BinaryMenu {
  double theta_star = 0.0;
  double theta_0 = 0.0;
  std::vector<MenuContract> contracts;
};

BinaryMenu binary_menu(const AgentSpec& agent);

// Audit probability as a function of the type profile and agent i's income.
using AuditRule = std::function<double(std::span<const double> theta, double pi)>;

double endogenous_virtual(const AuctionInstance& inst, std::size_t i,
                          std::span<const double> theta, const AuditRule& rule,
                          std::span<const double> breaks = {});

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
  std::string method;
};

Estimate payoff_bound(const AuctionInstance& inst, const ExpectationOptions& opts = {});
Estimate myerson_cash_revenue(const AuctionInstance& inst, const ExpectationOptions& opts = {});
Estimate full_extraction_revenue(const AuctionInstance& inst, const ExpectationOptions& opts = {});

}  // namespace cpa
