#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "cpa/mech.hpp"
#include "instances.hpp"

using namespace cpa;
using testing::b2;
using testing::b2t;
using testing::simpson;
using testing::u12_ae;

namespace {

// E[(k x - c)_+] for x ~ U[0, w].
double ramp_mean(double k, double w, double c) {
  if (!(k * w > c) || w <= 0.0) return 0.0;
  return (k * w - c) * (k * w - c) / (2 * k * w);
}

// Closed forms for types on [0.5, 1] with income theta + (1 - theta) eps, where 1 - pi ~ U[0, 2(1 - theta)].
double b2_psi(double th, double c, double phi) { return 2 * th - 1 + ramp_mean(phi, 2 * (1 - th), c); }

double b2t_ih(double th) { return (1 - 4 * (th - 0.5) * (th - 0.5)) / (8 * (th - 0.5)); }
double b2t_psi(double th, double c, double phi) {
  const double ih = b2t_ih(th);
  return th - ih + ramp_mean(phi * ih / (1 - th), 2 * (1 - th), c);
}

double u12_psi(double th, double c, double phi) { return 2 * th - 2 + std::max(0.0, phi * (2 - th) - c); }

}  // namespace

TEST_CASE("virtual values on the uniform additive instance") {
  const auto a = u12_ae();
  CHECK(virtual_value(a, 1.0) == doctest::Approx(0.3));
  CHECK(virtual_value(a, 1.3) == doctest::Approx(0.75));
  CHECK(virtual_value(a, 1.5) == doctest::Approx(1.05));
  CHECK(virtual_value(a, 1.6) == doctest::Approx(1.2));
  CHECK(virtual_value(a, 2.0) == doctest::Approx(2.0));
  CHECK(myerson_virtual(a, 1.5) == doctest::Approx(1.0));
  for (double c : {0.0, 0.1, 0.35})
    for (double phi : {0.2, 0.5, 1.0})
      for (int k = 0; k <= 20; ++k) {
        const double th = 1.0 + k / 20.0;
        CHECK(virtual_value(u12_ae(c, phi), th) == doctest::Approx(u12_psi(th, c, phi)).epsilon(1e-9));
      }
}

TEST_CASE("audit threshold is all-or-nothing under additive errors") {
  const auto a = u12_ae();
  CHECK(audit_threshold(a, 1.3) == doctest::Approx(2.3));
  CHECK(audit_threshold(a, 1.8) == 0.0);
  CHECK(phi_cap(a, 1.3) == doctest::Approx(0.5));
  CHECK(phi_cap(a, 1.8) == 0.0);
  const auto p = evaluate(a, 1.3);
  CHECK(p.audit_prob == doctest::Approx(1.0));
  const auto bp = type_breakpoints(a);
  CHECK(std::any_of(bp.begin(), bp.end(), [](double t) { return std::abs(t - 1.6) < 1e-9; }));
}

TEST_CASE("scaled-error golden values") {
  const auto a = b2();
  CHECK(virtual_value(a, 0.5) == doctest::Approx(0.125));
  CHECK(virtual_value(a, 0.6) == doctest::Approx(0.25625));
  CHECK(virtual_value(a, 0.75) == doctest::Approx(0.5));
  CHECK(virtual_value(a, 0.9) == doctest::Approx(0.8));
  CHECK(phi_cap(a, 0.6) == doctest::Approx(0.609375));
  CHECK(audit_threshold(a, 0.6) == doctest::Approx(0.5));

  for (int k = 0; k < 32; ++k)
    for (int j = 0; j < 32; ++j) {
      const double th = 0.5 + 0.5 * (k + 0.5) / 32;
      const auto& f = a.income();
      const double pi = f.supp_lo(th) + (f.supp_hi(th) - f.supp_lo(th)) * (j + 0.5) / 32;
      CHECK(mu(a, th, pi) == doctest::Approx(1 - pi).epsilon(1e-12));
    }

  for (double c : {0.1, 0.5, 0.9})
    for (double phi : {0.3, 1.0})
      for (int k = 0; k < 20; ++k) {
        const double th = 0.5 + 0.5 * k / 20;
        CHECK(virtual_value(b2(c, phi), th) == doctest::Approx(b2_psi(th, c, phi)).epsilon(1e-9));
        const double expect = 1 - c / phi;
        const double got = audit_threshold(b2(c, phi), th);
        if (expect > 2 * th - 1 + 1e-9) CHECK(got == doctest::Approx(expect).epsilon(1e-9));
        if (expect < 2 * th - 1 - 1e-9) CHECK(got == 0.0);
      }
}

TEST_CASE("triangular types") {
  const auto a = b2t();
  CHECK(virtual_value(a, 0.75) == doctest::Approx(0.416667).epsilon(1e-6));
  CHECK(audit_threshold(a, 0.75) == doctest::Approx(2.0 / 3.0));
  CHECK(audit_threshold(a, 0.8) == doctest::Approx(0.625));
  for (int k = 1; k < 20; ++k) {
    const double th = 0.5 + 0.5 * k / 20;
    CHECK(virtual_value(a, th) == doctest::Approx(b2t_psi(th, 0.5, 1.0)).epsilon(1e-9));
    const double expect = 1 - 0.5 * (2 * th - 1) / th;
    if (expect > 2 * th - 1 + 1e-9) CHECK(audit_threshold(a, th) == doctest::Approx(expect).epsilon(1e-9));
  }
  CHECK(std::isinf(inverse_hazard(a.types(), 0.5)));
  CHECK(myerson_virtual(a, 0.5) == -std::numeric_limits<double>::infinity());
}

TEST_CASE("winner selection") {
  const std::vector<double> tie{0.3, 0.3}, neg{-1.0, -0.5}, zero{0.0, -0.1}, clear{0.1, 0.4};
  CHECK_FALSE(winner(tie).has_value());
  CHECK_FALSE(winner(neg).has_value());
  CHECK_FALSE(winner(zero).has_value());
  CHECK(winner(clear) == std::optional<std::size_t>(1));

  const AuctionInstance inst({u12_ae(), u12_ae()});
  const std::vector<double> th{1.3, 1.5};
  CHECK(allocation(inst, th) == std::vector<int>{0, 1});

  const AuctionInstance mixed({u12_ae(), b2()});
  const std::vector<double> mt{1.5, 0.75};
  CHECK(allocation(mixed, mt) == std::vector<int>{1, 0});
}

TEST_CASE("royalty, audit and penalty rules") {
  const auto a = u12_ae();
  CHECK(royalty(a, 1.3, 1.1) == doctest::Approx(0.55));
  CHECK(royalty(a, 1.8, 2.5) == doctest::Approx(0.0));
  CHECK(audit_rule(a, 1.3, 1.1) == 1);
  CHECK(audit_rule(a, 1.8, 1.1) == 0);
  CHECK(penalty(a, 1.3, 1.1, 1.1) == 0.0);
  CHECK(penalty(a, 1.3, 0.9, 1.1) == doctest::Approx(0.1));

  // The top of the reported support is inside the audit region.
  const auto p = evaluate(a, 1.3);
  CHECK(audits(a, p, 2.3));
  CHECK(audits(a, p, 0.3));
  const auto b = evaluate(b2(), 0.6);
  CHECK(audits(b2(), b, 0.49));
  CHECK_FALSE(audits(b2(), b, 0.51));
}

TEST_CASE("information rent and transfers") {
  const MechanismTables tables(AuctionInstance({u12_ae()}));
  const auto& tab = tables.agent(0);
  CHECK(tab.transfer(1.3, 0.0) == doctest::Approx(0.5));
  CHECK(tab.transfer(1.8, 0.0) == doctest::Approx(1.3));
  CHECK(tab.first_winning_type(0.0) == std::optional<double>(1.0));
  CHECK_FALSE(tab.first_winning_type(5.0).has_value());

  for (const auto& spec : {u12_ae(), b2(), b2t(), u12_ae(0.05, 0.9)}) {
    const AgentTable t(spec, 257);
    const auto bp = t.breakpoints();
    const double lo = spec.types().lo(), hi = spec.types().hi();
    for (int k = 1; k <= 10; ++k) {
      const double th = lo + (hi - lo) * k / 10;
      std::vector<double> br;
      std::copy_if(bp.begin(), bp.end(), std::back_inserter(br), [&](double b) { return b < th; });
      const double direct = quad::integrate([&](double s) { return 1 - phi_cap(spec, s); }, lo, th, br);
      CHECK(t.rent(th) == doctest::Approx(direct).epsilon(1e-9));
      CHECK(t.rent_fast(th) == doctest::Approx(direct).epsilon(1e-6));
    }
  }
}

TEST_CASE("transfer formula for a single agent") {
  for (const auto& spec : {u12_ae(), b2(), b2t()}) {
    const AgentTable t(spec);
    const auto z = t.first_winning_type(0.0);
    REQUIRE(z.has_value());
    for (int k = 1; k < 10; ++k) {
      const double th = spec.types().lo() + (spec.types().hi() - spec.types().lo()) * k / 10;
      if (th < *z) continue;
      const double ps = audit_threshold(spec, th);
      const double capped = expect_income(spec.income(), th, [&](double pi) { return std::min(pi, ps); },
                                          std::vector<double>{ps});
      const double expect = th - spec.sensitivity() * capped - (t.rent(th) - t.rent(*z));
      CHECK(t.transfer(th, 0.0) == doctest::Approx(expect).epsilon(1e-9));
    }
  }
}

TEST_CASE("two-agent transfer uses the rival's virtual value") {
  const auto inst = testing::load_instance("duo.yaml");
  const MechanismTables tables(inst);
  const std::vector<double> th{1.7, 1.4};
  const double m = tables.rival_max(0, std::vector<double>{virtual_value(inst.agent(0), 1.7),
                                                           virtual_value(inst.agent(1), 1.4)});
  CHECK(m == doctest::Approx(virtual_value(inst.agent(1), 1.4)));
  const auto z = tables.agent(0).first_winning_type(m);
  REQUIRE(z.has_value());
  CHECK(virtual_value(inst.agent(0), *z) == doctest::Approx(m).epsilon(1e-9));
  CHECK(transfer(tables, 0, th) == doctest::Approx(tables.agent(0).transfer(1.7, m)));
  CHECK(transfer(tables, 1, th) == 0.0);
  CHECK(transfer(inst, 0, th) == doctest::Approx(transfer(tables, 0, th)).epsilon(1e-9));
}

TEST_CASE("binary menu") {
  const auto m = binary_menu(u12_ae());
  CHECK(m.theta_star == doctest::Approx(1.6));
  CHECK(m.theta_0 == doctest::Approx(1.0));
  REQUIRE(m.contracts.size() == 2);
  CHECK(m.contracts[0].kind == ContractKind::lump_sum);
  CHECK(m.contracts[0].upfront_price == doctest::Approx(1.3));
  CHECK_FALSE(m.contracts[0].audited);
  CHECK(m.contracts[1].kind == ContractKind::linear_royalty);
  CHECK(m.contracts[1].upfront_price == doctest::Approx(0.5));
  CHECK(m.contracts[1].royalty_rate == doctest::Approx(0.5));
  CHECK(m.contracts[1].audited);

  const AgentTable t(u12_ae());
  CHECK(m.contracts[0].upfront_price == doctest::Approx(t.transfer(1.8, 0.0)).epsilon(1e-8));
  CHECK(m.contracts[1].upfront_price == doctest::Approx(t.transfer(1.3, 0.0)).epsilon(1e-8));

  CHECK(binary_menu(u12_ae(0.2, 0.0)).contracts.size() == 1);
  CHECK_THROWS_AS(binary_menu(b2()), UnsupportedInstance);
}

TEST_CASE("endogenous virtual value under arbitrary audit rules") {
  const AuctionInstance inst({u12_ae()});
  const std::vector<double> th{1.5};
  auto always = [](std::span<const double>, double) { return 1.0; };
  auto never = [](std::span<const double>, double) { return 0.0; };
  auto half = [](std::span<const double>, double) { return 0.5; };
  CHECK(endogenous_virtual(inst, 0, th, always) == doctest::Approx(1.05));
  CHECK(endogenous_virtual(inst, 0, th, never) == doctest::Approx(1.0));
  CHECK(endogenous_virtual(inst, 0, th, half) == doctest::Approx(1.025));

  // The optimal rule attains the maximum over threshold rules.
  const auto a = b2();
  const AuctionInstance ib({a});
  const std::vector<double> t6{0.6};
  const double best = virtual_value(a, 0.6);
  for (double cut : {0.2, 0.4, 0.5, 0.6, 0.8, 1.0}) {
    auto rule = [cut](std::span<const double>, double pi) { return pi < cut ? 1.0 : 0.0; };
    const std::vector<double> br{cut};
    CHECK(endogenous_virtual(ib, 0, t6, rule, br) <= best + 1e-12);
  }
  auto opt = [](std::span<const double>, double pi) { return pi < 0.5 ? 1.0 : 0.0; };
  const std::vector<double> br{0.5};
  CHECK(endogenous_virtual(ib, 0, t6, opt, br) == doctest::Approx(best).epsilon(1e-10));
}

TEST_CASE("revenue benchmarks") {
  const AuctionInstance u({u12_ae()});
  CHECK(payoff_bound(u).value == doctest::Approx(1.09).epsilon(1e-9));
  CHECK(myerson_cash_revenue(u).value == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(full_extraction_revenue(u).value == doctest::Approx(1.5).epsilon(1e-9));

  const AuctionInstance ib({b2()});
  const double b2_oracle = simpson([](double th) { return 2 * std::max(0.0, b2_psi(th, 0.5, 1.0)); }, 0.5, 1.0);
  CHECK(payoff_bound(ib).value == doctest::Approx(b2_oracle).epsilon(1e-8));
  CHECK(payoff_bound(ib).value == doctest::Approx(0.524143).epsilon(1e-6));

  const AuctionInstance it({b2t()});
  const double b2t_oracle = simpson(
      [](double th) { return th <= 0.5 ? 0.0 : 8 * (th - 0.5) * std::max(0.0, b2t_psi(th, 0.5, 1.0)); }, 0.5, 1.0);
  CHECK(payoff_bound(it).value == doctest::Approx(b2t_oracle).epsilon(1e-7));
  CHECK(payoff_bound(it).value == doctest::Approx(0.630581).epsilon(1e-6));
}

TEST_CASE("cash benchmark matches a posted-price search") {
  const auto td = make_type_dist(DistFamily::triangular, {{1, 1, 2}, {}});
  IncomeParams ip;
  ip.error = {{-0.5, 0.5}, {}};
  const AgentSpec tri(td, make_income_family(IncomeKind::additive_error, ip, td), 0.2, 0.5);
  for (const auto& a : {u12_ae(), tri}) {
    const auto& d = a.types();
    double best = 0.0;
    for (int k = 0; k <= 200000; ++k) {
      const double p = d.lo() + (d.hi() - d.lo()) * k / 200000;
      best = std::max(best, p * (1 - d.cdf(p)));
    }
    CHECK(myerson_cash_revenue(AuctionInstance({a})).value == doctest::Approx(best).epsilon(1e-8));
  }
}

TEST_CASE("multi-agent expectations against tensor enumeration") {
  const auto inst = testing::load_instance("duo.yaml");
  CHECK(payoff_bound(inst).value == doctest::Approx(1.30525).epsilon(1e-5));
  CHECK(myerson_cash_revenue(inst).value == doctest::Approx(1.28125).epsilon(1e-5));
  CHECK(full_extraction_revenue(inst).value == doctest::Approx(1.58333).epsilon(1e-5));

  constexpr int n = 2000;
  std::vector<kernels::WeightedValues> psi(2), th(2);
  for (int i = 0; i < 2; ++i) {
    const auto& a = inst.agent(i);
    const auto& d = a.types();
    for (int k = 0; k < n; ++k) {
      const double lo = d.lo() + (d.hi() - d.lo()) * k / n, hi = d.lo() + (d.hi() - d.lo()) * (k + 1) / n;
      const double mid = 0.5 * (lo + hi);
      psi[i].values.push_back(virtual_value(a, mid));
      th[i].values.push_back(mid);
      psi[i].weights.push_back(d.cdf(hi) - d.cdf(lo));
    }
    th[i].weights = psi[i].weights;
  }
  CHECK(payoff_bound(inst).value == doctest::Approx(kernels::positive_max_mean_bruteforce(psi)).epsilon(1e-5));
  CHECK(full_extraction_revenue(inst).value ==
        doctest::Approx(kernels::positive_max_mean_bruteforce(th)).epsilon(1e-5));
}

TEST_CASE("rival laws") {
  const auto inst = testing::load_instance("duo.yaml");
  const MechanismTables tables(inst);
  const auto law = rival_law(tables, 0);
  double total = 0.0;
  for (double p : law.atoms.probs) total += p;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::is_sorted(law.atoms.values.begin(), law.atoms.values.end()));
  CHECK(law.atoms.values.front() >= 0.0);

  const MechanismTables single(AuctionInstance({u12_ae()}));
  const auto l1 = rival_law(single, 0);
  REQUIRE(l1.atoms.values.size() == 1);
  CHECK(l1.atoms.values[0] == 0.0);
  CHECK(l1.atoms.probs[0] == 1.0);
}

TEST_CASE("interim schedule for a single agent is the ex post rule") {
  const MechanismTables tables(AuctionInstance({u12_ae()}));
  const InterimSchedule s(tables, 0, rival_law(tables, 0));
  for (double th : {1.0, 1.3, 1.8}) {
    const auto v = s.at(th);
    CHECK(v.win_prob == 1.0);
    CHECK(v.transfer == doctest::Approx(tables.agent(0).transfer(th, 0.0)).epsilon(1e-10));
  }
}

TEST_CASE("degenerate sensitivity and zero audit cost") {
  const AuctionInstance cash({u12_ae(0.2, 0.0)});
  CHECK(payoff_bound(cash).value == doctest::Approx(1.0).epsilon(1e-9));
  const AuctionInstance fe({u12_ae(0.0, 1.0)});
  CHECK(payoff_bound(fe).value == doctest::Approx(1.5).epsilon(1e-9));
  CHECK_THROWS_AS(AuctionInstance({}), ConstructionError);
}
