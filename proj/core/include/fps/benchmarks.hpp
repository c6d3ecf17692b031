#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fps/problem.hpp"

namespace fps {

// Registered test objectives:
//   schwefel           N=6, [-500,500]
//   levy5              N=2, [-10,10]
//   booth              N=2, [-10,10]
//   colville           N=4, [-10,10], squared terms 100(x2-x1)^2 and 90(x4-x3)^2
//   colville-standard  N=4, classical form with 100(x2-x1^2)^2 and 90(x4-x3^2)^2
//   rosenbrock         N=20, [-10,10], sum over n = 1..N-1
//   harmonic           N=1, V = x^2/2 on [-5,5]
//   flat               N=1, V = 0 on [0,1]
// Throws UnknownProblem.
Problem make_benchmark(std::string_view name);

std::vector<std::string> benchmark_names();

// Separable quadratic sum_n x_n^2 / 2 on [lo,hi]^N.
Problem make_harmonic(std::size_t dimension, double lo = -5.0, double hi = 5.0);

// Euclidean distance scaled by the box diagonal. Throws DimensionError.
double normalized_distance(std::span<const double> x, std::span<const double> y,
                           std::span<const Bound> bounds);

// Number of 0<->1 flips a normalized distance implies on the unit box: round(N d^2).
std::size_t flips_from_distance(double distance, std::size_t dimension);

}  // namespace fps
