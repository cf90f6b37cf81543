#pragma once

#include <string>

#include "cpa/config.hpp"
#include "cpa/dist.hpp"
#include "cpa/mech.hpp"

namespace testing {

using namespace cpa;

// Uniform [1, 2] types with additive uniform [-1, 1] income error.
inline AgentSpec u12_ae(double c = 0.2, double phi = 0.5) {
  const auto t = make_type_dist(DistFamily::uniform, {{1, 2}, {}});
  IncomeParams p;
  p.error = {{-1, 1}, {}};
  return {t, make_income_family(IncomeKind::additive_error, p, t), c, phi};
}

// Types on [0.5, 1] with income theta + (1 - theta) eps, eps ~ uniform [-1, 1].
inline AgentSpec b2_like(DistFamily family, const std::vector<double>& params, double c, double phi) {
  const auto t = make_type_dist(family, {params, {}});
  IncomeParams p;
  p.error = {{-1, 1}, {}};
  p.anchor = 1.0;
  return {t, make_income_family(IncomeKind::scaled_error, p, t), c, phi};
}
inline AgentSpec b2(double c = 0.5, double phi = 1.0) { return b2_like(DistFamily::uniform, {0.5, 1}, c, phi); }
inline AgentSpec b2t(double c = 0.5, double phi = 1.0) {
  return b2_like(DistFamily::triangular, {0.5, 1, 1}, c, phi);
}

inline std::string config_path(const std::string& name) { return std::string(CPA_CONFIG_DIR) + "/" + name; }
inline std::string fixture_path(const std::string& name) { return std::string(CPA_FIXTURE_DIR) + "/" + name; }

inline AuctionInstance load_instance(const std::string& name) { return load_config(config_path(name)).instance(); }

// Composite Simpson rule with n (even) panels; oracle independent of the library quadrature.
template <class F>
double simpson(F&& f, double a, double b, int n = 20000) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int k = 1; k < n; ++k) s += (k % 2 ? 4.0 : 2.0) * f(a + k * h);
  return s * h / 3.0;
}

// Composite midpoint rule; never evaluates the endpoints, where densities may be cut to zero.
template <class F>
double midpoint(F&& f, double a, double b, int n = 20000) {
  const double h = (b - a) / n;
  double s = 0.0;
  for (int k = 0; k < n; ++k) s += f(a + (k + 0.5) * h);
  return s * h;
}

}  // namespace testing
