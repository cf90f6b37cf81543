#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace cpa::quad {

inline constexpr double kRelTol = 1e-11;
inline constexpr std::size_t kMaxSegments = 256;

// Sorted, deduplicated cut points of [a, b]: a, the breaks strictly inside, b.
inline std::vector<double> cut_points(double a, double b, std::span<const double> breaks) {
  std::vector<double> cuts{a};
  for (double x : breaks)
    if (x > a && x < b) cuts.push_back(x);
  cuts.push_back(b);
  std::sort(cuts.begin() + 1, cuts.end() - 1);
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  return cuts;
}

namespace detail {

struct Segment {
  double a, b, v, err;
};

// Global adaptive bisection: split the segment with the largest error until the summed error
// meets tol or the segment budget runs out. GK error estimates are on [-1, 1] and get rescaled.
template <class G>
double adapt(const G& g, double a, double b, double tol, double v, double err) {
  if (err <= tol) return v;
  using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
  auto by_err = [](const Segment& x, const Segment& y) { return x.err < y.err; };
  std::vector<Segment> heap{{a, b, v, err}};
  double total_err = err;
  while (total_err > tol && heap.size() < kMaxSegments) {
    std::pop_heap(heap.begin(), heap.end(), by_err);
    const Segment s = heap.back();
    heap.pop_back();
    const double mid = 0.5 * (s.a + s.b);
    if (!(mid > s.a && mid < s.b) || s.err == 0.0) {
      total_err -= s.err;
      heap.push_back({s.a, s.b, s.v, 0.0});
      std::push_heap(heap.begin(), heap.end(), by_err);
      if (heap.front().err == 0.0) break;
      continue;
    }
    double el = 0.0, er = 0.0;
    const double vl = GK::integrate(g, s.a, mid, 0, 0.0, &el);
    const double vr = GK::integrate(g, mid, s.b, 0, 0.0, &er);
    el *= 0.5 * (mid - s.a);
    er *= 0.5 * (s.b - mid);
    total_err += el + er - s.err;
    heap.push_back({s.a, mid, vl, el});
    std::push_heap(heap.begin(), heap.end(), by_err);
    heap.push_back({mid, s.b, vr, er});
    std::push_heap(heap.begin(), heap.end(), by_err);
  }
  std::sort(heap.begin(), heap.end(), [](const Segment& x, const Segment& y) { return x.a < y.a; });
  double total = 0.0;
  for (const auto& s : heap) total += s.v;
  return total;
}

}  // namespace detail

// Adaptive Gauss-Kronrod on [a, b], integrating each piece between breakpoints separately.
// Each piece is refined until its error is below rel_tol times its first estimate, abs_tol times
// its share of [a, b], or rounding level, whichever is largest.
template <class F>
double integrate(F&& f, double a, double b, std::span<const double> breaks = {},
                 double rel_tol = kRelTol, double abs_tol = 0.0) {
  if (!(b > a)) return 0.0;
  using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
  auto g = [&f](double x) { return f(x); };
  const auto cuts = cut_points(a, b, breaks);
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double lo = cuts[k], hi = cuts[k + 1];
    double err = 0.0, l1 = 0.0;
    const double v = GK::integrate(g, lo, hi, 0, 0.0, &err, &l1);
    const double tol = std::max({rel_tol * std::abs(v), 64 * std::numeric_limits<double>::epsilon() * l1,
                                 abs_tol * (hi - lo) / (b - a)});
    total += detail::adapt(g, lo, hi, tol, v, err * 0.5 * (hi - lo));
  }
  return total;
}

struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Composite 8-point Gauss-Legendre rule; panels are spread over the pieces between breakpoints
// in proportion to their length, at least one per piece.
inline Rule composite_gauss(double a, double b, std::size_t panels,
                            std::span<const double> breaks = {}) {
  using GL = boost::math::quadrature::gauss<double, 8>;
  std::array<double, 8> x{}, w{};
  for (std::size_t k = 0; k < 4; ++k) {
    x[k] = -GL::abscissa()[3 - k];
    w[k] = GL::weights()[3 - k];
    x[7 - k] = GL::abscissa()[3 - k];
    w[7 - k] = GL::weights()[3 - k];
  }
  Rule rule;
  if (!(b > a)) return rule;
  const auto cuts = cut_points(a, b, breaks);
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double lo = cuts[k], hi = cuts[k + 1];
    const auto n = std::max<std::size_t>(1, std::llround(panels * (hi - lo) / (b - a)));
    const double h = (hi - lo) / static_cast<double>(n);
    for (std::size_t p = 0; p < n; ++p) {
      const double mid = lo + (p + 0.5) * h;
      for (std::size_t j = 0; j < 8; ++j) {
        rule.nodes.push_back(mid + 0.5 * h * x[j]);
        rule.weights.push_back(0.5 * h * w[j]);
      }
    }
  }
  return rule;
}

// Last point of [lo, hi] where pred holds, for pred true on a prefix with pred(lo) true.
template <class P>
double last_true(P&& pred, double lo, double hi, double tol) {
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (pred(mid))
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

}  // namespace cpa::quad
