#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "cpa/mech.hpp"

namespace cpa {

struct Violation {
  std::size_t count = 0;
  double magnitude = 0.0;
  double theta = std::numeric_limits<double>::quiet_NaN();
  double pi = std::numeric_limits<double>::quiet_NaN();

  bool ok() const { return count == 0; }
  void record(double mag, double t, double p);
};

// Grid evidence for the model's regularity conditions. Types and incomes are sampled at cell
// midpoints so boundary singularities (e.g. a vanishing density at the bottom type) are avoided.
struct RegularityReport {
  std::size_t theta_points = 0;
  std::size_t pi_points = 0;
  Violation normalization;           // |int g - 1|, |E[pi] - theta|, |int -G_theta - 1| above 1e-8
  Violation fosd;                    // G(pi|theta) increasing in theta, or G_theta >= 0 inside
  Violation single_crossing_theta;   // phi*mu - c positive again after turning nonpositive
  Violation single_crossing_pi;
  Violation psi_increasing;

  bool normalization_ok() const { return normalization.ok(); }
  bool fosd_ok() const { return fosd.ok(); }
  bool single_crossing_theta_ok() const { return single_crossing_theta.ok(); }
  bool single_crossing_pi_ok() const { return single_crossing_pi.ok(); }
  bool psi_increasing_ok() const { return psi_increasing.ok(); }
  bool all_ok() const;
};

RegularityReport check_regularity(const AgentSpec& agent, std::size_t theta_points = 128,
                                  std::size_t pi_points = 128, Exec exec = Exec::parallel);

struct Condition1Report {
  bool ok = true;
  double worst_violation = 0.0;
  double worst_lo = std::numeric_limits<double>::quiet_NaN();
  double worst_hi = std::numeric_limits<double>::quiet_NaN();
  std::size_t pairs = 0;
};

// 0 <= p(b) - p(a) <= (b - a) phi for every grid pair a < b.
Condition1Report check_condition1(std::span<const double> pi_grid, std::span<const double> penalty,
                                  double phi);

enum class IncomeStrategy { truthful_projection, grid_best };
std::string_view to_string(IncomeStrategy s);

struct DeviationReport {
  double truthful_utility = 0.0;
  double best_deviation_utility = 0.0;
  double advantage = 0.0;
  double best_type_report = std::numeric_limits<double>::quiet_NaN();
  double best_income_report = std::numeric_limits<double>::quiet_NaN();
  std::string income_strategy;
  std::size_t grid_points = 0;
  bool ir_ok = true;
};

// Income-report deviations of a winning agent that reported theta_report. `others` holds the
// rivals' types in agent order with agent i skipped.
DeviationReport best_response_income(const MechanismTables& tables, std::size_t i, double theta_report,
                                     std::span<const double> others, double pi_true,
                                     std::size_t grid = 256);

struct IcCertificate {
  std::string income_strategy;
  std::size_t theta_points = 0;
  std::size_t pi_points = 0;
  double max_advantage = 0.0;
  double worst_theta = std::numeric_limits<double>::quiet_NaN();
  double worst_report = std::numeric_limits<double>::quiet_NaN();
  double min_truthful_utility = 0.0;
  double utility_at_lo = 0.0;
  bool ic_ok = true;
  bool ir_ok = true;
  std::string rival_method;
};

// Type-report deviations with interim expectations over rivals. Misreports range over a uniform
// grid of the type support; per-report quantities are computed once and shared across true types.
class TypeDeviationScan {
 public:
  TypeDeviationScan(const MechanismTables& tables, std::size_t i, std::size_t theta_points = 128,
                    std::size_t pi_points = 128, const ExpectationOptions& opts = {});

  DeviationReport best_response(double theta_true, IncomeStrategy strategy) const;
  IcCertificate certify(IncomeStrategy strategy, Exec exec = Exec::parallel) const;
  // Expected utility of a type-theta_true agent reporting theta_report and following `strategy`.
  double utility(double theta_true, double theta_report, IncomeStrategy strategy) const;

 private:
  struct Report {
    TypePoint point;
    InterimSchedule::Value interim;
    double lo, hi;
    std::vector<double> income_grid;
  };
  Report make_report(double theta) const;
  double utility(double theta_true, const Report& r, IncomeStrategy strategy) const;

  const MechanismTables* tables_;
  std::size_t i_;
  std::size_t pi_points_;
  InterimSchedule schedule_;
  std::vector<Report> reports_;
};

DeviationReport best_response_type(const MechanismTables& tables, std::size_t i, double theta_true,
                                   std::size_t theta_grid = 128,
                                   IncomeStrategy strategy = IncomeStrategy::truthful_projection,
                                   std::size_t pi_grid = 128, const ExpectationOptions& opts = {});

// Scan of IC for income reports over reported types and incomes in the reported support.
struct IncomeIcCertificate {
  std::size_t theta_points = 0;
  std::size_t pi_points = 0;
  double max_advantage = 0.0;
  double worst_theta = std::numeric_limits<double>::quiet_NaN();
  double worst_pi = std::numeric_limits<double>::quiet_NaN();
  bool ok = true;
};

IncomeIcCertificate certify_income_ic(const MechanismTables& tables, std::size_t i,
                                      std::size_t theta_points = 128, std::size_t pi_points = 128,
                                      Exec exec = Exec::parallel);

struct CrossingReport {
  double pi0 = 0.0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  std::size_t grid_points = 0;
  double worst_violation = 0.0;
  bool certified = true;
};

// Point where the equilibrium payment curves t + r(., pi) of two reports theta_lo < theta_hi cross.
CrossingReport crossing_point(const MechanismTables& tables, std::size_t i, double theta_lo,
                              double theta_hi, std::span<const double> others, std::size_t grid = 256);

struct NoisyAuditReport {
  double exact_penalty = 0.0;
  double mc_mean = 0.0;
  double std_error = 0.0;
  std::uint64_t n_trials = 0;
  std::uint64_t seed = 0;
  bool within_3se = true;
  bool condition1_ok = true;
  double condition1_worst = 0.0;
};

// Penalty (zeta - pi_report) phi on a signal zeta = pi_true + eta with eta ~ noise (null: no noise).
NoisyAuditReport noisy_audit_equivalence(const AgentSpec& agent, double theta, double pi_report,
                                         double pi_true, const Dist1D* noise, std::uint64_t n_trials,
                                         std::uint64_t seed, Exec exec = Exec::parallel);

enum class StaticsAxis { audit_cost, sensitivity, joint, hazard_family };
std::string_view to_string(StaticsAxis a);
StaticsAxis statics_axis_from(std::string_view name);

struct StaticsReport {
  StaticsAxis axis = StaticsAxis::audit_cost;
  std::vector<double> values;
  std::size_t theta_points = 0;
  Violation psi;
  Violation pi_star;
  bool ok() const { return psi.ok() && pi_star.ok(); }
};

// audit_cost / sensitivity: values are the parameter itself, increasing.
// joint: values are factors applied to both c and phi, increasing.
StaticsReport comparative_statics_scan(const AgentSpec& agent, StaticsAxis axis,
                                       std::span<const double> values, std::size_t theta_points = 64);

// Type distributions ordered from largest to smallest hazard rate on a common support.
StaticsReport comparative_statics_scan(const AgentSpec& agent, std::span<const TypeDist> dists,
                                       std::size_t theta_points = 64);

}  // namespace cpa
