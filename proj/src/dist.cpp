#include "cpa/dist.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include <boost/math/interpolators/pchip.hpp>

namespace cpa {
namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(10);
  os << x;
  return os.str();
}

void require_finite(std::span<const double> xs, const char* what) {
  for (double x : xs)
    if (!std::isfinite(x)) throw ConstructionError(std::string(what) + ": non-finite parameter");
}

class UniformDist final : public Dist1D {
 public:
  UniformDist(double lo, double hi) : lo_(lo), hi_(hi) {
    if (!(hi > lo)) throw ConstructionError("uniform: need lo < hi, got [" + fmt(lo) + ", " + fmt(hi) + "]");
  }
  DistFamily family() const override { return DistFamily::uniform; }
  DistParams params() const override { return {{lo_, hi_}, {}}; }
  double lo() const override { return lo_; }
  double hi() const override { return hi_; }
  double cdf(double x) const override { return std::clamp((x - lo_) / (hi_ - lo_), 0.0, 1.0); }
  double survival(double x) const override { return std::clamp((hi_ - x) / (hi_ - lo_), 0.0, 1.0); }
  double pdf(double x) const override { return (x >= lo_ && x <= hi_) ? 1.0 / (hi_ - lo_) : 0.0; }
  double quantile(double u) const override { return lo_ + std::clamp(u, 0.0, 1.0) * (hi_ - lo_); }
  double mean() const override { return 0.5 * (lo_ + hi_); }

 private:
  double lo_, hi_;
};

class TriangularDist final : public Dist1D {
 public:
  TriangularDist(double a, double m, double b) : a_(a), m_(m), b_(b) {
    if (!(b > a)) throw ConstructionError("triangular: need lo < hi");
    if (m < a || m > b) throw ConstructionError("triangular: mode " + fmt(m) + " outside [lo, hi]");
  }
  DistFamily family() const override { return DistFamily::triangular; }
  DistParams params() const override { return {{a_, m_, b_}, {}}; }
  double lo() const override { return a_; }
  double hi() const override { return b_; }
  double cdf(double x) const override {
    if (x <= a_) return 0.0;
    if (x >= b_) return 1.0;
    if (x < m_) return (x - a_) * (x - a_) / ((b_ - a_) * (m_ - a_));
    return 1.0 - (b_ - x) * (b_ - x) / ((b_ - a_) * (b_ - m_));
  }
  double survival(double x) const override {
    if (x <= a_) return 1.0;
    if (x >= b_) return 0.0;
    if (x < m_) return 1.0 - (x - a_) * (x - a_) / ((b_ - a_) * (m_ - a_));
    return (b_ - x) * (b_ - x) / ((b_ - a_) * (b_ - m_));
  }
  double pdf(double x) const override {
    if (x < a_ || x > b_) return 0.0;
    if (x < m_ || m_ == b_) return 2.0 * (x - a_) / ((b_ - a_) * (m_ - a_));
    return 2.0 * (b_ - x) / ((b_ - a_) * (b_ - m_));
  }
  double quantile(double u) const override {
    u = std::clamp(u, 0.0, 1.0);
    if (u <= (m_ - a_) / (b_ - a_)) return a_ + std::sqrt(u * (b_ - a_) * (m_ - a_));
    return b_ - std::sqrt((1.0 - u) * (b_ - a_) * (b_ - m_));
  }
  double mean() const override { return (a_ + m_ + b_) / 3.0; }
  std::vector<double> kinks() const override {
    if (m_ > a_ && m_ < b_) return {m_};
    return {};
  }

 private:
  double a_, m_, b_;
};

class TableDist final : public Dist1D {
 public:
  TableDist(std::vector<double> x, std::vector<double> p)
      : x_(x), p_(p), interp_(std::move(x), std::move(p)) {
    mean_ = 0.0;
    for (std::size_t k = 0; k + 1 < x_.size(); ++k)
      mean_ += quad::integrate([this](double t) { return t * pdf(t); }, x_[k], x_[k + 1]);
  }
  DistFamily family() const override { return DistFamily::table; }
  DistParams params() const override { return {x_, p_}; }
  double lo() const override { return x_.front(); }
  double hi() const override { return x_.back(); }
  double cdf(double x) const override {
    if (x <= x_.front()) return 0.0;
    if (x >= x_.back()) return 1.0;
    return std::clamp(interp_(x), 0.0, 1.0);
  }
  double pdf(double x) const override {
    if (x < x_.front() || x > x_.back()) return 0.0;
    return std::max(0.0, interp_.prime(x));
  }
  double quantile(double u) const override {
    u = std::clamp(u, 0.0, 1.0);
    if (u <= 0.0) return x_.front();
    if (u >= 1.0) return x_.back();
    const auto k = static_cast<std::size_t>(std::upper_bound(p_.begin(), p_.end(), u) - p_.begin());
    double lo = x_[k - 1], hi = x_[k];
    for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
      const double mid = 0.5 * (lo + hi);
      if (cdf(mid) < u)
        lo = mid;
      else
        hi = mid;
    }
    return 0.5 * (lo + hi);
  }
  double mean() const override { return mean_; }
  std::vector<double> kinks() const override { return {x_.begin() + 1, x_.end() - 1}; }

 private:
  std::vector<double> x_, p_;
  boost::math::interpolators::pchip<std::vector<double>> interp_;
  double mean_;
};

DistPtr make_table(const DistParams& params) {
  auto x = params.values;
  auto p = params.cdf;
  if (x.size() < 4) throw ConstructionError("table: need at least 4 knots");
  if (x.size() != p.size()) throw ConstructionError("table: knots and cdf lengths differ");
  require_finite(x, "table");
  require_finite(p, "table");
  for (std::size_t k = 1; k < x.size(); ++k) {
    if (!(x[k] > x[k - 1])) throw ConstructionError("table: knots must be strictly increasing");
    if (!(p[k] > p[k - 1])) throw ConstructionError("table: cdf must be strictly increasing");
  }
  if (std::abs(p.front()) > 1e-12 || std::abs(p.back() - 1.0) > 1e-12)
    throw ConstructionError("table: cdf must run from 0 to 1");
  p.front() = 0.0;
  p.back() = 1.0;
  return std::make_shared<TableDist>(std::move(x), std::move(p));
}

}  // namespace

std::string_view to_string(DistFamily f) {
  switch (f) {
    case DistFamily::uniform: return "uniform";
    case DistFamily::triangular: return "triangular";
    case DistFamily::table: return "table";
  }
  return "?";
}

DistFamily dist_family_from(std::string_view name) {
  if (name == "uniform") return DistFamily::uniform;
  if (name == "triangular") return DistFamily::triangular;
  if (name == "table") return DistFamily::table;
  throw ConstructionError("unknown distribution family '" + std::string(name) + "'");
}

std::string_view to_string(IncomeKind k) {
  switch (k) {
    case IncomeKind::additive_error: return "additive_error";
    case IncomeKind::scaled_error: return "scaled_error";
    case IncomeKind::table: return "table";
  }
  return "?";
}

IncomeKind income_kind_from(std::string_view name) {
  if (name == "additive_error") return IncomeKind::additive_error;
  if (name == "scaled_error") return IncomeKind::scaled_error;
  if (name == "table") return IncomeKind::table;
  throw ConstructionError("unknown income family '" + std::string(name) + "'");
}

DistPtr make_dist(DistFamily family, const DistParams& params) {
  const auto& v = params.values;
  switch (family) {
    case DistFamily::uniform:
      if (v.size() != 2) throw ConstructionError("uniform: expected 2 parameters (lo, hi)");
      require_finite(v, "uniform");
      return std::make_shared<UniformDist>(v[0], v[1]);
    case DistFamily::triangular:
      if (v.size() != 3) throw ConstructionError("triangular: expected 3 parameters (lo, mode, hi)");
      require_finite(v, "triangular");
      return std::make_shared<TriangularDist>(v[0], v[1], v[2]);
    case DistFamily::table:
      return make_table(params);
  }
  throw ConstructionError("unknown distribution family");
}

TypeDist::TypeDist(DistPtr d) : d_(std::move(d)) {
  if (!d_) throw ConstructionError("type distribution is null");
}

TypeDist make_type_dist(DistFamily family, const DistParams& params) {
  return TypeDist(make_dist(family, params));
}

double inverse_hazard(const TypeDist& d, double theta) {
  if (!d.contains(theta))
    throw DomainError("inverse_hazard: theta " + fmt(theta) + " outside [" + fmt(d.lo()) + ", " +
                      fmt(d.hi()) + "]");
  if (theta >= d.hi()) return 0.0;
  const double s = d.dist().survival(theta);
  const double f = d.pdf(theta);
  if (f <= 0.0) return std::numeric_limits<double>::infinity();
  return s / f;
}

LocationScaleIncome::LocationScaleIncome(IncomeKind kind, DistPtr error, double scale_a,
                                         double scale_b)
    : kind_(kind), error_(std::move(error)), a_(scale_a), b_(scale_b) {}

double LocationScaleIncome::supp_lo(double theta) const {
  const double s = scale(theta);
  return s > 0.0 ? theta + s * error_->lo() : theta;
}

double LocationScaleIncome::supp_hi(double theta) const {
  const double s = scale(theta);
  return s > 0.0 ? theta + s * error_->hi() : theta;
}

double LocationScaleIncome::cdf(double pi, double theta) const {
  const double s = scale(theta);
  if (s <= 0.0) return pi >= theta ? 1.0 : 0.0;
  return error_->cdf((pi - theta) / s);
}

double LocationScaleIncome::pdf(double pi, double theta) const {
  const double s = scale(theta);
  if (s <= 0.0) return 0.0;
  return error_->pdf((pi - theta) / s) / s;
}

double LocationScaleIncome::dcdf_dtheta(double pi, double theta) const {
  const double s = scale(theta);
  if (s <= 0.0) return 0.0;
  const double e = (pi - theta) / s;
  return -error_->pdf(e) * (1.0 + e * b_) / s;
}

double LocationScaleIncome::rent_ratio(double pi, double theta) const {
  const double s = scale(theta);
  if (s <= 0.0) return 1.0;
  return 1.0 + b_ * (pi - theta) / s;
}

double LocationScaleIncome::sample(double theta, Stream& rng) const {
  const double s = scale(theta);
  if (s <= 0.0) return theta;
  return theta + s * error_->quantile(rng.uniform());
}

std::vector<double> LocationScaleIncome::kinks(double theta) const {
  const double s = scale(theta);
  std::vector<double> out;
  if (s <= 0.0) return out;
  for (double k : error_->kinks()) out.push_back(theta + s * k);
  return out;
}

IncomePtr make_income_family(IncomeKind kind, const IncomeParams& params, const TypeDist& types) {
  if (kind == IncomeKind::table && params.error_family != DistFamily::table)
    throw ConstructionError("table income family needs a tabulated error distribution");
  auto err = make_dist(params.error_family, params.error);
  const double elo = err->lo(), ehi = err->hi();
  if (!(elo < 0.0 && ehi > 0.0))
    throw ConstructionError("income error support must contain 0 in its interior");
  const double m = err->mean();
  if (std::abs(m) > 1e-9 * (ehi - elo))
    throw ConstructionError("income error must have mean zero (mean " + fmt(m) + ")");

  bool scaled = kind == IncomeKind::scaled_error;
  if (kind == IncomeKind::table) scaled = params.anchor.has_value();
  if (kind == IncomeKind::scaled_error && !params.anchor)
    throw ConstructionError("scaled_error income needs an anchor");

  const double tlo = types.lo(), thi = types.hi();
  if (!scaled) {
    if (elo < -tlo - 1e-12)
      throw ConstructionError("additive error lower bound " + fmt(elo) +
                              " would allow negative income (need >= " + fmt(-tlo) + ")");
    return std::make_shared<LocationScaleIncome>(kind, err, 1.0, 0.0);
  }
  const double kappa = *params.anchor;
  if (!std::isfinite(kappa) || kappa < thi)
    throw ConstructionError("scaled error anchor " + fmt(kappa) + " below type upper bound " + fmt(thi));
  if (ehi > 1.0 + 1e-12)
    throw ConstructionError("scaled error upper bound must be <= 1 for stochastic dominance");
  for (double t : {tlo, thi})
    if (t + (kappa - t) * elo < -1e-12)
      throw ConstructionError("scaled error lower bound would allow negative income");
  return std::make_shared<LocationScaleIncome>(kind, err, kappa, -1.0);
}

double sample_income(const IncomeFamily& fam, double theta, Stream& rng) {
  return fam.sample(theta, rng);
}

double project_to_support(const IncomeFamily& fam, double theta_report, double pi_true) {
  return std::clamp(pi_true, fam.supp_lo(theta_report), fam.supp_hi(theta_report));
}

AgentSpec::AgentSpec(TypeDist types, IncomePtr income, double audit_cost, double sensitivity)
    : types_(std::move(types)), income_(std::move(income)), c_(audit_cost), phi_(sensitivity) {
  if (!income_) throw ConstructionError("agent income family is null");
  if (!std::isfinite(c_) || c_ < 0.0) throw ConstructionError("audit_cost must be >= 0, got " + fmt(c_));
  if (!std::isfinite(phi_) || phi_ < 0.0 || phi_ > 1.0)
    throw ConstructionError("sensitivity must be in [0, 1], got " + fmt(phi_));
}

}  // namespace cpa
