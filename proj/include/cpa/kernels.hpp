#pragma once

#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <span>
#include <vector>

namespace cpa {

enum class Exec { serial, parallel };

namespace kernels {

// Calls body(k) for k in [0, n). The parallel variant uses an OpenMP static schedule; the first
// exception (by index) is rethrown after the loop.
void for_each_index(std::size_t n, const std::function<void(std::size_t)>& body, Exec exec);

template <class F>
std::vector<double> tabulate(std::span<const double> xs, F&& f, Exec exec) {
  std::vector<double> out(xs.size());
  for_each_index(xs.size(), [&](std::size_t k) { out[k] = f(xs[k]); }, exec);
  return out;
}

// Discrete law on sorted support points.
struct Atoms {
  std::vector<double> values;
  std::vector<double> probs;
};

// One independent discrete random variable given by (value, weight) pairs. Weights need not be
// normalized exactly; quadrature weights summing to 1 up to rounding are expected.
struct WeightedValues {
  std::vector<double> values;
  std::vector<double> weights;
};

// Law of max(0, X_1, ..., X_N) for independent X_j, merged by sweeping the pooled support in
// increasing order and differencing the product of marginal CDFs. Equals the tensor-product sum.
Atoms positive_max_law(std::span<const WeightedValues> xs);

// Same quantity by explicit enumeration of the tensor grid; reference for small inputs.
double positive_max_mean_bruteforce(std::span<const WeightedValues> xs);

double mean(const Atoms& a);

// Mean and standard error from per-sample values, with pairwise summation.
struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

double pairwise_sum(std::span<const double> xs);
MeanSe mean_se(std::span<const double> xs);

}  // namespace kernels
}  // namespace cpa
