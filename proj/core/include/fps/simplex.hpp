#pragma once

#include <cstddef>
#include <vector>

#include "fps/problem.hpp"

namespace fps {

struct SimplexConfig {
  double ftol = 1e-4;  // fractional spread between worst and best vertex
  std::size_t max_evals = 50000;

  void validate(std::size_t dimension) const;
};

struct SimplexResult {
  std::vector<double> point;
  double value = 0.0;
  std::size_t evals = 0;
  // Best vertex value after each simplex iteration.
  std::vector<double> best_history;
};

// In place: vertices that coincide with, or lie in the affine span of, the
// earlier ones are pushed 1e-8 of the coordinate range along the axis most
// orthogonal to that span (towards the box interior). Returns the number of
// vertices moved.
std::size_t fix_degenerate_simplex(std::vector<std::vector<double>>& simplex,
                                   std::span<const Bound> bounds);

// Downhill simplex (reflection 1, expansion 2, contraction 0.5, shrink 0.5)
// in the Numerical Recipes arrangement; trial points are clipped to the box.
// Stops when 2|f_worst - f_best| / (|f_worst| + |f_best| + 1e-30) < ftol or
// when max_evals cost calls (the initial vertices included) have been spent.
SimplexResult nelder_mead(const Problem& problem, std::vector<std::vector<double>> simplex,
                          const SimplexConfig& config);

}  // namespace fps
