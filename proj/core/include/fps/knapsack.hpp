#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "fps/problem.hpp"
#include "fps/rng.hpp"

namespace fps {

// min -sum q_n x_n  s.t.  sum w_n x_n <= c,  x binary.
struct KnapsackInstance {
  std::vector<double> profit;  // q
  std::vector<double> weight;  // w
  double capacity = 0.0;       // c

  std::size_t size() const { return profit.size(); }
  void validate() const;
};

// Barrier amplitudes k0, k1 and steepnesses b0, b1, b2.
struct BarrierParams {
  double k0 = 0.0;
  double k1 = 0.0;
  double b0 = 0.0;
  double b1 = 0.0;
  double b2 = 0.0;

  void validate() const;
};

// Unconstrained cost on [0,1]^N:
//   -sum q x + k0 sum 1/(1+exp(-b0(x - x^2)))
//            + k1 (exp(b1 s) - 1) / (exp(-b2 s) + 1),   s = sum w x - c
Problem knapsack_transform(const KnapsackInstance& instance, const BarrierParams& params);

// w_n ~ U[1,R], eps_n ~ U[-1,1], q_n = w_n + (eps_n - 1) R/100 + R/10.
// Weights are rounded to `weight_decimals` decimal places so the instance has
// a finite decimal form and an integer-scaled DP oracle exists; pass a
// negative value to keep full precision.
KnapsackInstance generate_instance(std::size_t n, double r, double c, RngStream& rng,
                                   int weight_decimals = 4);

// Decimals that keep four significant digits at the top of [1, R]; this bounds
// the scaled DP capacity at about 1e4 * c / R.
int default_weight_decimals(double r);

struct KnapsackSolution {
  std::vector<int> x;
  double value = 0.0;
};

// Smallest 10^k (k <= max_decimals) making every weight an integer within
// 1e-9. Throws OracleTooLarge when none exists.
std::int64_t choose_weight_scale(const KnapsackInstance& instance, int max_decimals = 9);

// 0/1 dynamic program over the capacity scaled by `weight_scale`. Throws
// OracleTooLarge when N * (scaled capacity + 1) exceeds `max_cells`.
KnapsackSolution solve_knapsack_exact(const KnapsackInstance& instance,
                                      std::int64_t weight_scale,
                                      std::size_t max_cells = std::size_t{1} << 28);

// Nearest integer, ties (x = 0.5) go up.
std::vector<int> round_to_binary(std::span<const double> x);

double knapsack_profit(const KnapsackInstance& instance, std::span<const int> x);
double knapsack_weight(const KnapsackInstance& instance, std::span<const int> x);

// Text format: line "N", line "c", then N lines "q_n w_n". Numbers are
// written as shortest round-trip decimals, so read(write(i)) == i exactly.
void write_instance(std::ostream& out, const KnapsackInstance& instance);
KnapsackInstance read_instance(std::istream& in);

}  // namespace fps
