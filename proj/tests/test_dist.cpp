#include <doctest.h>

#include <cmath>
#include <vector>

#include "cpa/dist.hpp"
#include "cpa/kernels.hpp"

using namespace cpa;

namespace {

TypeDist uniform12() { return make_type_dist(DistFamily::uniform, {{1, 2}, {}}); }
TypeDist uniform_half() { return make_type_dist(DistFamily::uniform, {{0.5, 1}, {}}); }

IncomePtr additive(const TypeDist& t, double e = 1.0) {
  IncomeParams p;
  p.error = {{-e, e}, {}};
  return make_income_family(IncomeKind::additive_error, p, t);
}

IncomePtr scaled(const TypeDist& t) {
  IncomeParams p;
  p.error = {{-1, 1}, {}};
  p.anchor = 1.0;
  return make_income_family(IncomeKind::scaled_error, p, t);
}

// Central difference in theta, used as an oracle for the analytic derivative.
double fd_theta(const IncomeFamily& fam, double pi, double theta, double h = 1e-6) {
  return (fam.cdf(pi, theta + h) - fam.cdf(pi, theta - h)) / (2 * h);
}

}  // namespace

TEST_CASE("uniform and triangular basics") {
  const auto u = make_dist(DistFamily::uniform, {{1, 2}, {}});
  CHECK(u->cdf(1.25) == doctest::Approx(0.25));
  CHECK(u->pdf(1.0) == doctest::Approx(1.0));
  CHECK(u->pdf(2.0) == doctest::Approx(1.0));
  CHECK(u->pdf(2.5) == 0.0);
  CHECK(u->quantile(0.3) == doctest::Approx(1.3));
  CHECK(u->mean() == doctest::Approx(1.5));

  const auto t = make_dist(DistFamily::triangular, {{0.5, 1, 1}, {}});
  CHECK(t->pdf(0.75) == doctest::Approx(2.0));
  CHECK(t->cdf(0.75) == doctest::Approx(0.25));
  CHECK(t->mean() == doctest::Approx(5.0 / 6.0));
  for (double u01 : {0.01, 0.2, 0.5, 0.9, 0.999}) CHECK(t->cdf(t->quantile(u01)) == doctest::Approx(u01).epsilon(1e-12));
}

TEST_CASE("pdf integrates to the cdf") {
  const std::vector<DistPtr> ds = {
      make_dist(DistFamily::uniform, {{-1, 3}, {}}),
      make_dist(DistFamily::triangular, {{0, 0.3, 2}, {}}),
      make_dist(DistFamily::table, {{1, 1.25, 1.5, 1.75, 2}, {0, 0.4375, 0.75, 0.9375, 1}}),
  };
  for (const auto& d : ds) {
    for (double x : {0.25, 0.5, 0.8}) {
      const double at = d->lo() + x * (d->hi() - d->lo());
      const double mass = quad::integrate([&](double s) { return d->pdf(s); }, d->lo(), at, d->kinks());
      CHECK(mass == doctest::Approx(d->cdf(at)).epsilon(1e-9));
    }
    const double m = quad::integrate([&](double s) { return s * d->pdf(s); }, d->lo(), d->hi(), d->kinks());
    CHECK(d->mean() == doctest::Approx(m).epsilon(1e-9));
  }
}

TEST_CASE("table distribution interpolates the knots monotonically") {
  const auto d = make_dist(DistFamily::table, {{0, 1, 2, 4}, {0, 0.1, 0.7, 1}});
  CHECK(d->cdf(1.0) == doctest::Approx(0.1));
  CHECK(d->cdf(2.0) == doctest::Approx(0.7));
  double prev = 0.0;
  for (int k = 0; k <= 400; ++k) {
    const double x = 4.0 * k / 400;
    CHECK(d->cdf(x) >= prev - 1e-15);
    CHECK(d->pdf(x) >= 0.0);
    prev = d->cdf(x);
  }
  CHECK(d->quantile(0.4) == doctest::Approx(1.5).epsilon(0.2));
  CHECK(d->cdf(d->quantile(0.4)) == doctest::Approx(0.4).epsilon(1e-10));
}

TEST_CASE("construction rejects bad parameters") {
  CHECK_THROWS_AS(make_dist(DistFamily::uniform, {{2, 1}, {}}), ConstructionError);
  CHECK_THROWS_AS(make_dist(DistFamily::uniform, {{1}, {}}), ConstructionError);
  CHECK_THROWS_AS(make_dist(DistFamily::triangular, {{0, 2, 1}, {}}), ConstructionError);
  CHECK_THROWS_AS(make_dist(DistFamily::table, {{0, 1, 2}, {0, 0.5, 0.9}}), ConstructionError);
  CHECK_THROWS_AS(make_dist(DistFamily::table, {{0, 1, 1}, {0, 0.5, 1}}), ConstructionError);
  CHECK_THROWS_AS(make_dist(DistFamily::table, {{0, 1, 2}, {0, 0.6, 0.5}}), ConstructionError);
  CHECK_THROWS_AS(dist_family_from("gamma"), ConstructionError);
}

TEST_CASE("inverse hazard rate") {
  const auto u = uniform12();
  CHECK(inverse_hazard(u, 1.5) == doctest::Approx(0.5));
  CHECK(inverse_hazard(u, 1.0) == doctest::Approx(1.0));
  CHECK(inverse_hazard(u, 2.0) == 0.0);
  CHECK_THROWS_AS(inverse_hazard(u, 2.1), DomainError);
  const auto t = make_type_dist(DistFamily::triangular, {{0.5, 1, 1}, {}});
  CHECK(std::isinf(inverse_hazard(t, 0.5)));
  CHECK(inverse_hazard(t, 0.75) == doctest::Approx(0.375));
}

TEST_CASE("additive errors") {
  const auto t = uniform12();
  const auto fam = additive(t);
  CHECK(fam->supp_lo(1.5) == doctest::Approx(0.5));
  CHECK(fam->supp_hi(1.5) == doctest::Approx(2.5));
  for (double th : {1.1, 1.5, 1.9})
    for (double x : {0.1, 0.5, 0.9}) {
      const double pi = fam->supp_lo(th) + x * (fam->supp_hi(th) - fam->supp_lo(th));
      CHECK(fam->dcdf_dtheta(pi, th) / fam->pdf(pi, th) == doctest::Approx(-1.0));
      CHECK(fam->rent_ratio(pi, th) == doctest::Approx(1.0));
      CHECK(fam->dcdf_dtheta(pi, th) == doctest::Approx(fd_theta(*fam, pi, th)).epsilon(1e-6));
    }
}

TEST_CASE("scaled errors match the closed-form derivative") {
  const auto t = uniform_half();
  const auto fam = scaled(t);
  CHECK(fam->supp_lo(0.75) == doctest::Approx(0.5));
  CHECK(fam->supp_hi(0.75) == doctest::Approx(1.0));
  CHECK(fam->degenerate(1.0));
  for (double th : {0.55, 0.7, 0.9})
    for (double x : {0.1, 0.5, 0.9}) {
      const double pi = fam->supp_lo(th) + x * (fam->supp_hi(th) - fam->supp_lo(th));
      CHECK(fam->dcdf_dtheta(pi, th) == doctest::Approx((pi - 1) / (2 * (1 - th) * (1 - th))));
      CHECK(fam->dcdf_dtheta(pi, th) == doctest::Approx(fd_theta(*fam, pi, th)).epsilon(1e-6));
      CHECK(fam->rent_ratio(pi, th) == doctest::Approx(-fam->dcdf_dtheta(pi, th) / fam->pdf(pi, th)));
    }
}

TEST_CASE("tabulated errors") {
  const auto t = uniform12();
  IncomeParams p;
  p.error_family = DistFamily::table;
  p.error = {{-0.5, -0.25, 0, 0.25, 0.5}, {0, 0.15, 0.5, 0.85, 1}};
  const auto fam = make_income_family(IncomeKind::table, p, t);
  CHECK(fam->kind() == IncomeKind::table);
  for (double th : {1.2, 1.7}) {
    const double mean = expect_income(*fam, th, [](double pi) { return pi; });
    CHECK(mean == doctest::Approx(th).epsilon(1e-10));
    for (double pi : {th - 0.4, th - 0.1, th + 0.3})
      CHECK(fam->dcdf_dtheta(pi, th) == doctest::Approx(fd_theta(*fam, pi, th)).epsilon(1e-5));
  }
}

TEST_CASE("income family validation") {
  const auto t = uniform12();
  IncomeParams wide;
  wide.error = {{-1.5, 1.5}, {}};
  CHECK_THROWS_AS(make_income_family(IncomeKind::additive_error, wide, t), ConstructionError);
  IncomeParams biased;
  biased.error = {{-0.5, 1}, {}};
  CHECK_THROWS_AS(make_income_family(IncomeKind::additive_error, biased, t), ConstructionError);
  IncomeParams low_anchor;
  low_anchor.error = {{-1, 1}, {}};
  low_anchor.anchor = 1.5;
  CHECK_THROWS_AS(make_income_family(IncomeKind::scaled_error, low_anchor, t), ConstructionError);
  IncomeParams no_anchor;
  no_anchor.error = {{-1, 1}, {}};
  CHECK_THROWS_AS(make_income_family(IncomeKind::scaled_error, no_anchor, t), ConstructionError);
  CHECK_THROWS_AS(income_kind_from("lognormal"), ConstructionError);
}

TEST_CASE("sampling respects the normalization") {
  const auto t = uniform12();
  const auto fam = additive(t);
  std::vector<double> xs(1000000);
  for (std::size_t k = 0; k < xs.size(); ++k) {
    Stream s(11, k);
    xs[k] = sample_income(*fam, 1.5, s);
  }
  const auto ms = kernels::mean_se(xs);
  CHECK(std::abs(ms.mean - 1.5) <= 3 * ms.se);
  CHECK(*std::min_element(xs.begin(), xs.end()) >= 0.5);
  CHECK(*std::max_element(xs.begin(), xs.end()) <= 2.5);
}

TEST_CASE("projection onto the reported support") {
  const auto t = uniform12();
  const auto fam = additive(t);
  CHECK(project_to_support(*fam, 1.0, 2.3) == doctest::Approx(2.0));
  CHECK(project_to_support(*fam, 1.5, 0.2) == doctest::Approx(0.5));
  CHECK(project_to_support(*fam, 1.5, 1.7) == 1.7);
}

TEST_CASE("agent validation") {
  const auto t = uniform12();
  const auto fam = additive(t);
  CHECK_THROWS_AS(AgentSpec(t, fam, 0.2, 1.5), ConstructionError);
  CHECK_THROWS_AS(AgentSpec(t, fam, -0.1, 0.5), ConstructionError);
  const AgentSpec a(t, fam, 0.2, 0.5);
  CHECK(a.with_audit_cost(0.3).audit_cost() == 0.3);
  CHECK(a.with_sensitivity(1.0).sensitivity() == 1.0);
}
