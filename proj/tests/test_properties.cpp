#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <vector>

#include "cpa/verify.hpp"
#include "instances.hpp"

using namespace cpa;

namespace {

using Rng = std::mt19937_64;

double unif(Rng& rng, double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }

// Random single-agent instance; nothing when the draw is rejected or irregular.
std::optional<AgentSpec> random_agent(Rng& rng) {
  const double lo = unif(rng, 0.5, 2.0), w = unif(rng, 0.3, 1.5);
  TypeDist types = unif(rng, 0, 1) < 0.5
                       ? make_type_dist(DistFamily::uniform, {{lo, lo + w}, {}})
                       : make_type_dist(DistFamily::triangular, {{lo, lo + w * unif(rng, 0.5, 1.0), lo + w}, {}});
  IncomeParams p;
  IncomeKind kind = IncomeKind::additive_error;
  if (unif(rng, 0, 1) < 0.5) {
    const double e = unif(rng, 0.1, 1.0) * lo;
    p.error = {{-e, e}, {}};
  } else {
    kind = IncomeKind::scaled_error;
    p.error = {{-1, 1}, {}};
    p.anchor = lo + w + unif(rng, 0.0, 0.5);
  }
  try {
    AgentSpec a(types, make_income_family(kind, p, types), unif(rng, 0.0, 0.5), unif(rng, 0.0, 1.0));
    if (!check_regularity(a, 32, 32).all_ok()) return std::nullopt;
    return a;
  } catch (const Error&) {
    return std::nullopt;
  }
}

std::vector<AgentSpec> random_agents(std::uint64_t seed, std::size_t n) {
  Rng rng(seed);
  std::vector<AgentSpec> out;
  for (int tries = 0; out.size() < n && tries < 50 * static_cast<int>(n); ++tries)
    if (auto a = random_agent(rng)) out.push_back(*a);
  return out;
}

std::vector<double> interior(const AgentSpec& a, int n) {
  std::vector<double> out;
  const double lo = a.types().lo(), hi = a.types().hi();
  for (int k = 1; k < n; ++k) out.push_back(lo + (hi - lo) * k / n);
  return out;
}

}  // namespace

TEST_CASE("random instances are available") { CHECK(random_agents(1, 24).size() == 24); }

TEST_CASE("income identities hold on every family") {
  for (const auto& a : random_agents(2, 24)) {
    const auto& f = a.income();
    for (double th : interior(a, 8)) {
      const double rent = expect_income(f, th, [&](double pi) { return f.rent_ratio(pi, th); });
      CHECK(rent == doctest::Approx(1.0).epsilon(1e-8));
      const double ih = inverse_hazard(a.types(), th);
      const double gap = expect_income(f, th, [&](double pi) { return pi - mu(a, th, pi); });
      CHECK(gap == doctest::Approx(th - ih).epsilon(1e-8));
      for (double x : {0.2, 0.5, 0.8}) {
        const double pi = f.supp_lo(th) + x * (f.supp_hi(th) - f.supp_lo(th));
        CHECK(f.cdf(pi, th + 1e-3) <= f.cdf(pi, th) + 1e-15);
      }
    }
  }
}

TEST_CASE("virtual value structure") {
  for (const auto& a : random_agents(3, 24)) {
    const auto& f = a.income();
    const double phi = a.sensitivity(), c = a.audit_cost();
    for (double th : interior(a, 12)) {
      const auto p = evaluate(a, th);
      CHECK(p.psi >= p.psi_m - 1e-12);
      CHECK(p.phi_cap >= -1e-12);
      CHECK(p.phi_cap <= phi + 1e-12);
      CHECK(p.audit_prob >= 0.0);
      CHECK(p.audit_prob <= 1.0);
      if (p.pi_star != 0.0) {
        CHECK(p.pi_star >= f.supp_lo(th) - 1e-12);
        CHECK(p.pi_star <= f.supp_hi(th) + 1e-12);
        CHECK(p.audit_prob == doctest::Approx(f.cdf(p.pi_star, th)).epsilon(1e-12));
      } else {
        CHECK(p.audit_prob == 0.0);
      }
      // Independent quadrature of the audit premium.
      const double lo = f.supp_lo(th), hi = f.supp_hi(th);
      const double prem = testing::midpoint(
          [&](double pi) { return std::max(0.0, phi * mu(a, th, pi) - c) * f.pdf(pi, th); }, lo, hi);
      CHECK(p.psi == doctest::Approx(p.psi_m + prem).epsilon(1e-7));
      // Audited reports form a lower interval.
      bool seen_clear = false;
      for (int k = 0; k <= 40; ++k) {
        const bool au = audits(a, p, lo + (hi - lo) * k / 40);
        if (!au) seen_clear = true;
        CHECK_FALSE((au && seen_clear));
      }
    }
  }
}

TEST_CASE("envelope condition for the winner's utility") {
  for (const auto& a : random_agents(4, 16)) {
    const AgentTable t(a);
    const auto z = t.first_winning_type(0.0);
    if (!z) continue;
    const auto bp = t.breakpoints();
    auto utility = [&](double th) {
      const auto p = t.at(th);
      return th - t.transfer(p, 0.0) - a.sensitivity() * expected_capped_income(a, th, p.pi_star);
    };
    for (double th : interior(a, 10)) {
      const double h = 1e-5;
      if (th - h < *z) continue;
      if (std::any_of(bp.begin(), bp.end(), [&](double b) { return std::abs(b - th) < 10 * h; })) continue;
      const double slope = (utility(th + h) - utility(th - h)) / (2 * h);
      CHECK(slope == doctest::Approx(1.0 - phi_cap(a, th)).epsilon(1e-4));
      CHECK(utility(th) >= -1e-9);
    }
  }
}

TEST_CASE("truthful income reports are a best response") {
  Rng rng(5);
  for (const auto& a : random_agents(5, 12)) {
    const MechanismTables tables(AuctionInstance({a}));
    for (double th : interior(a, 5)) {
      const auto& f = a.income();
      const double pi = unif(rng, f.supp_lo(th), f.supp_hi(th));
      CHECK(best_response_income(tables, 0, th, {}, pi, 128).advantage <= 1e-9);
    }
  }
}

TEST_CASE("positive max law equals tensor enumeration") {
  Rng rng(6);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + trial % 4;
    std::vector<kernels::WeightedValues> xs(n);
    for (auto& x : xs) {
      const int m = 1 + static_cast<int>(unif(rng, 0, 12));
      double total = 0.0;
      for (int k = 0; k < m; ++k) {
        x.values.push_back(std::round(unif(rng, -2, 3) * 4) / 4);  // ties across variables
        x.weights.push_back(unif(rng, 0.1, 1.0));
        total += x.weights.back();
      }
      for (auto& w : x.weights) w /= total;
    }
    const auto law = kernels::positive_max_law(xs);
    CHECK(kernels::mean(law) == doctest::Approx(kernels::positive_max_mean_bruteforce(xs)).epsilon(1e-12));
    double mass = 0.0;
    for (double p : law.probs) mass += p;
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::is_sorted(law.values.begin(), law.values.end()));
  }
}

TEST_CASE("summation kernels") {
  Rng rng(7);
  std::vector<double> xs(100001);
  long double exact = 0.0L;
  for (auto& x : xs) {
    x = unif(rng, -1, 1) * std::pow(10.0, unif(rng, -3, 3));
    exact += x;
  }
  CHECK(kernels::pairwise_sum(xs) == doctest::Approx(static_cast<double>(exact)).epsilon(1e-12));
  const auto ms = kernels::mean_se(xs);
  CHECK(ms.mean == doctest::Approx(static_cast<double>(exact / xs.size())).epsilon(1e-10));
  CHECK(ms.se > 0.0);

  const auto serial = kernels::tabulate(xs, [](double x) { return std::sin(x) * x; }, Exec::serial);
  const auto parallel = kernels::tabulate(xs, [](double x) { return std::sin(x) * x; }, Exec::parallel);
  CHECK(serial == parallel);
}

TEST_CASE("table distributions invert their cdf") {
  Rng rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    const int m = 4 + trial % 6;
    std::vector<double> knots{0.0}, cdf{0.0};
    for (int k = 1; k < m; ++k) {
      knots.push_back(knots.back() + unif(rng, 0.1, 1.0));
      cdf.push_back(cdf.back() + unif(rng, 0.05, 1.0));
    }
    for (auto& v : cdf) v /= cdf.back();
    const auto d = make_dist(DistFamily::table, {knots, cdf});
    for (int k = 1; k < 50; ++k) {
      const double u = k / 50.0;
      CHECK(d->cdf(d->quantile(u)) == doctest::Approx(u).epsilon(1e-10));
    }
  }
}

TEST_CASE("multi-agent payoff bound exceeds the cash benchmark") {
  const auto pool = random_agents(9, 12);
  for (std::size_t k = 0; k + 1 < pool.size(); k += 2) {
    const AuctionInstance inst({pool[k], pool[k + 1]});
    const double bound = payoff_bound(inst).value;
    try {
      CHECK(bound >= myerson_cash_revenue(inst).value - 1e-9);
    } catch (const RegularityError&) {
    }
    CHECK(bound <= full_extraction_revenue(inst).value + 1e-9);
  }
}
