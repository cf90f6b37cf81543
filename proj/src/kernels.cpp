#include "cpa/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace cpa::kernels {

void for_each_index(std::size_t n, const std::function<void(std::size_t)>& body, Exec exec) {
  if (exec == Exec::serial || n < 2) {
    for (std::size_t k = 0; k < n; ++k) body(k);
    return;
  }
  std::exception_ptr err;
  std::size_t err_at = std::numeric_limits<std::size_t>::max();
  const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static)
  for (std::int64_t k = 0; k < count; ++k) {
    try {
      body(static_cast<std::size_t>(k));
    } catch (...) {
#pragma omp critical(cpa_kernel_error)
      {
        if (static_cast<std::size_t>(k) < err_at) {
          err_at = static_cast<std::size_t>(k);
          err = std::current_exception();
        }
      }
    }
  }
  if (err) std::rethrow_exception(err);
}

Atoms positive_max_law(std::span<const WeightedValues> xs) {
  struct Entry {
    double value;
    std::size_t agent;
    double weight;
  };
  const std::size_t n = xs.size();
  std::vector<double> cdf(n, 0.0);
  std::vector<Entry> pool;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < xs[j].values.size(); ++k) {
      const double v = xs[j].values[k], w = xs[j].weights[k];
      if (v > 0.0)
        pool.push_back({v, j, w});
      else
        cdf[j] += w;
    }
  }
  std::sort(pool.begin(), pool.end(), [](const Entry& a, const Entry& b) {
    return a.value < b.value || (a.value == b.value && a.agent < b.agent);
  });
  auto product = [&] {
    double p = 1.0;
    for (double c : cdf) p *= c;
    return p;
  };
  Atoms out;
  double prev = product();
  out.values.push_back(0.0);
  out.probs.push_back(prev);
  for (const auto& e : pool) {
    cdf[e.agent] += e.weight;
    const double now = product();
    if (e.value == out.values.back()) {
      out.probs.back() += now - prev;
    } else {
      out.values.push_back(e.value);
      out.probs.push_back(now - prev);
    }
    prev = now;
  }
  return out;
}

double positive_max_mean_bruteforce(std::span<const WeightedValues> xs) {
  const std::size_t n = xs.size();
  std::vector<std::size_t> idx(n, 0);
  double total = 0.0;
  if (n == 0) return 0.0;
  for (const auto& x : xs)
    if (x.values.empty()) return 0.0;
  while (true) {
    double w = 1.0, m = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      w *= xs[j].weights[idx[j]];
      m = std::max(m, xs[j].values[idx[j]]);
    }
    total += w * m;
    std::size_t j = 0;
    while (j < n && ++idx[j] == xs[j].values.size()) idx[j++] = 0;
    if (j == n) break;
  }
  return total;
}

double mean(const Atoms& a) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.values.size(); ++k) s += a.values[k] * a.probs[k];
  return s;
}

double pairwise_sum(std::span<const double> xs) {
  if (xs.size() <= 8) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

MeanSe mean_se(std::span<const double> xs) {
  MeanSe r;
  const std::size_t n = xs.size();
  if (n == 0) return r;
  r.mean = pairwise_sum(xs) / static_cast<double>(n);
  if (n < 2) return r;
  std::vector<double> sq(n);
  for (std::size_t k = 0; k < n; ++k) sq[k] = (xs[k] - r.mean) * (xs[k] - r.mean);
  const double var = pairwise_sum(sq) / static_cast<double>(n - 1);
  r.se = std::sqrt(var / static_cast<double>(n));
  return r;
}

}  // namespace cpa::kernels
