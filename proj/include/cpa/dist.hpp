#pragma once

#include <cmath>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cpa/errors.hpp"
#include "cpa/quadrature.hpp"
#include "cpa/rng.hpp"

namespace cpa {

enum class DistFamily { uniform, triangular, table };

std::string_view to_string(DistFamily f);
DistFamily dist_family_from(std::string_view name);

// uniform: values = {lo, hi}; triangular: values = {lo, mode, hi};
// table: knots in `values` with CDF levels in `cdf` (first 0, last 1, both strictly increasing).
struct DistParams {
  std::vector<double> values;
  std::vector<double> cdf;
};

// Continuous distribution on a bounded interval. pdf is inclusive of both endpoints.
class Dist1D {
 public:
  virtual ~Dist1D() = default;
  virtual DistFamily family() const = 0;
  virtual DistParams params() const = 0;
  virtual double lo() const = 0;
  virtual double hi() const = 0;
  virtual double cdf(double x) const = 0;
  virtual double survival(double x) const { return 1.0 - cdf(x); }
  virtual double pdf(double x) const = 0;
  virtual double quantile(double u) const = 0;
  virtual double mean() const = 0;
  // Interior points where the density is not smooth.
  virtual std::vector<double> kinks() const { return {}; }
};

using DistPtr = std::shared_ptr<const Dist1D>;

DistPtr make_dist(DistFamily family, const DistParams& params);

// Type distribution F of one agent.
class TypeDist {
 public:
  explicit TypeDist(DistPtr d);

  const Dist1D& dist() const { return *d_; }
  const DistPtr& ptr() const { return d_; }
  DistFamily family() const { return d_->family(); }
  double lo() const { return d_->lo(); }
  double hi() const { return d_->hi(); }
  double cdf(double t) const { return d_->cdf(t); }
  double pdf(double t) const { return d_->pdf(t); }
  double quantile(double u) const { return d_->quantile(u); }
  double mean() const { return d_->mean(); }
  std::vector<double> kinks() const { return d_->kinks(); }
  bool contains(double t) const { return t >= lo() && t <= hi(); }

 private:
  DistPtr d_;
};

TypeDist make_type_dist(DistFamily family, const DistParams& params);

// (1 - F(theta)) / f(theta); +inf where the density vanishes below the top of the support.
double inverse_hazard(const TypeDist& d, double theta);

enum class IncomeKind { additive_error, scaled_error, table };

std::string_view to_string(IncomeKind k);
IncomeKind income_kind_from(std::string_view name);

// Conditional income law G(pi | theta) with support [supp_lo(theta), supp_hi(theta)].
class IncomeFamily {
 public:
  virtual ~IncomeFamily() = default;
  virtual IncomeKind kind() const = 0;
  virtual double supp_lo(double theta) const = 0;
  virtual double supp_hi(double theta) const = 0;
  virtual double cdf(double pi, double theta) const = 0;
  virtual double pdf(double pi, double theta) const = 0;
  // Partial derivative of G in theta; one-sided limit at the support endpoints.
  virtual double dcdf_dtheta(double pi, double theta) const = 0;
  // -G_theta / g on the support.
  virtual double rent_ratio(double pi, double theta) const = 0;
  virtual double sample(double theta, Stream& rng) const = 0;
  // Interior points of the support where g is not smooth.
  virtual std::vector<double> kinks(double /*theta*/) const { return {}; }

  bool degenerate(double theta) const { return !(supp_hi(theta) > supp_lo(theta)); }
};

using IncomePtr = std::shared_ptr<const IncomeFamily>;

// pi = theta + s(theta) * eps with s(theta) = scale_a + scale_b * theta and eps ~ error.
class LocationScaleIncome final : public IncomeFamily {
 public:
  LocationScaleIncome(IncomeKind kind, DistPtr error, double scale_a, double scale_b);

  IncomeKind kind() const override { return kind_; }
  const Dist1D& error() const { return *error_; }
  double scale_a() const { return a_; }
  double scale_b() const { return b_; }
  double scale(double theta) const { return a_ + b_ * theta; }

  double supp_lo(double theta) const override;
  double supp_hi(double theta) const override;
  double cdf(double pi, double theta) const override;
  double pdf(double pi, double theta) const override;
  double dcdf_dtheta(double pi, double theta) const override;
  double rent_ratio(double pi, double theta) const override;
  double sample(double theta, Stream& rng) const override;
  std::vector<double> kinks(double theta) const override;

 private:
  IncomeKind kind_;
  DistPtr error_;
  double a_, b_;
};

// additive_error: error only. scaled_error: error plus anchor kappa >= type upper bound
// (pi = theta + (kappa - theta) eps). table: tabulated error, optional anchor.
struct IncomeParams {
  DistFamily error_family = DistFamily::uniform;
  DistParams error;
  std::optional<double> anchor;
};

IncomePtr make_income_family(IncomeKind kind, const IncomeParams& params, const TypeDist& types);

double sample_income(const IncomeFamily& fam, double theta, Stream& rng);

// Closest point of [supp_lo(theta_report), supp_hi(theta_report)] to pi_true.
double project_to_support(const IncomeFamily& fam, double theta_report, double pi_true);

// E[h(pi) | theta] by quadrature split at the family's kinks and any extra breakpoints.
template <class H>
double expect_income(const IncomeFamily& fam, double theta, H&& h,
                     std::span<const double> extra = {}) {
  const double lo = fam.supp_lo(theta), hi = fam.supp_hi(theta);
  if (!(hi > lo)) return h(lo);
  auto breaks = fam.kinks(theta);
  breaks.insert(breaks.end(), extra.begin(), extra.end());
  return quad::integrate([&](double p) { return h(p) * fam.pdf(p, theta); }, lo, hi, breaks);
}

class AgentSpec {
 public:
  AgentSpec(TypeDist types, IncomePtr income, double audit_cost, double sensitivity);

  const TypeDist& types() const { return types_; }
  const IncomeFamily& income() const { return *income_; }
  const IncomePtr& income_ptr() const { return income_; }
  double audit_cost() const { return c_; }
  double sensitivity() const { return phi_; }

  AgentSpec with_audit_cost(double c) const { return {types_, income_, c, phi_}; }
  AgentSpec with_sensitivity(double phi) const { return {types_, income_, c_, phi}; }

 private:
  TypeDist types_;
  IncomePtr income_;
  double c_;
  double phi_;
};

}  // namespace cpa
