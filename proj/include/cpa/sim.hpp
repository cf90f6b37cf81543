#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cpa/kernels.hpp"
#include "cpa/mech.hpp"
#include "cpa/verify.hpp"

namespace cpa {

// Empty maps mean truthful reporting. Income reports are projected onto the reported type's support.
struct AgentStrategy {
  std::function<double(double theta)> type_report;
  std::function<double(double theta, double theta_report, double pi)> income_report;
};

std::vector<AgentStrategy> truthful_profile(std::size_t n);

// Shifts the type report to the best deviation found for the certifying type.
AgentStrategy strategy_from_deviation(const DeviationReport& dev, double theta_true);

// Probability of auditing agent i after reports (theta_report, pi_report). Unset: the optimal rule.
using AuditProbability = std::function<double(std::size_t i, double theta_report, double pi_report)>;

struct Outcome {
  std::optional<std::size_t> winner;
  std::vector<double> types;
  std::vector<double> type_reports;
  std::vector<double> transfers;
  double income = 0.0;
  double income_report = 0.0;
  double royalty = 0.0;
  double penalty = 0.0;
  double audit_cost_paid = 0.0;
  bool audited = false;

  double revenue() const;
  double utility(std::size_t i) const;
};

struct SimSettings {
  std::uint64_t n_runs = 100000;
  std::uint64_t seed = 0;
  AuditProbability audit_probability;
};

// One pass through the protocol for run `run` of the seeded stream family.
Outcome run_auction(const MechanismTables& tables, const std::vector<AgentStrategy>& strategies,
                    const SimSettings& settings, std::uint64_t run);

struct SimReport {
  std::uint64_t n_runs = 0;
  std::uint64_t seed = 0;
  kernels::MeanSe revenue;
  kernels::MeanSe audit_frequency;
  kernels::MeanSe on_path_penalty;
  double abs_penalty = 0.0;
  std::vector<kernels::MeanSe> agent_utility;
  std::vector<double> allocation_frequency;
};

SimReport estimate_revenue(const MechanismTables& tables, const std::vector<AgentStrategy>& strategies,
                           const SimSettings& settings, Exec exec = Exec::parallel);

enum class SweepAxis { audit_cost, sensitivity };
std::string_view to_string(SweepAxis a);
SweepAxis sweep_axis_from(std::string_view name);

struct SweepSpec {
  SweepAxis axis = SweepAxis::audit_cost;
  std::vector<double> values;
  std::optional<std::size_t> agent;  // unset: every agent
};

struct SweepRow {
  double value = 0.0;
  bool ok = true;
  std::string error;
  SimReport sim;
  Estimate payoff_bound;
  Estimate myerson;
  Estimate full_extraction;
  double mean_pi_star = 0.0;
};

struct SweepOptions {
  SimSettings sim;
  std::size_t nodes = 1025;
  ExpectationOptions expectation;
  Exec exec = Exec::parallel;
};

std::vector<SweepRow> sweep(const AuctionInstance& base, const SweepSpec& spec, const SweepOptions& opts);

// E[pi*(theta)] under the type distribution.
double mean_audit_threshold(const AgentSpec& agent, std::size_t panels = 64);

}  // namespace cpa
