#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "fps/estimator.hpp"
#include "fps/problem.hpp"
#include "fps/rng.hpp"
#include "fps/simplex.hpp"

namespace fps {

enum class PopulationScheme {
  kUniformAroundBest,  // best, mode, N-1 uniform draws of width sigma_n
  kAxis,               // best, mode, best + sigma_n e_n for n = 1..N-1
};

// kUniform replaces the estimated density by the uniform one over the box:
// no sweeps are run, the "mode" vertex is a uniform draw and the fluctuation
// scale is width/sqrt(12).
enum class DensityGuide { kEstimated, kUniform };

struct HybridOptions {
  std::size_t iterations = 100;
  PopulationScheme scheme = PopulationScheme::kUniformAroundBest;
  DensityGuide guide = DensityGuide::kEstimated;
  double success_gap = 1e-3;
};

struct HybridTraceEntry {
  std::size_t iteration;
  double best_value;
  std::uint64_t evals_used;  // cumulative
};

struct HybridReport {
  std::vector<double> best_point;
  double best_value = 0.0;
  std::vector<HybridTraceEntry> trace;
  std::uint64_t total_evals = 0;
  bool success = false;
  std::optional<std::size_t> success_iteration;
};

// N+1 vertices: best, mode, then N-1 points with coordinate n uniform in
// [best_n - sigma_n/2, best_n + sigma_n/2], clipped to the box.
std::vector<std::vector<double>> build_population(std::span<const double> best,
                                                  std::span<const double> mode_point,
                                                  std::span<const double> sigmas,
                                                  std::span<const Bound> bounds,
                                                  RngStream& rng);

std::vector<std::vector<double>> build_axis_population(std::span<const double> best,
                                                       std::span<const double> mode_point,
                                                       std::span<const double> sigmas,
                                                       std::span<const Bound> bounds);

// Greedy density-guided search:
//   1. one estimation sweep, 2. best := joint mode of the averaged density,
//   3. population around best, 4. downhill simplex from it,
//   5. keep the simplex result on strict improvement, 6. one more sweep,
//   7. back to 3.
// Each iteration is one sweep followed by steps 3-5; in the first iteration
// that sweep is step 1 and its joint mode seeds the best point (step 2).
HybridReport greedy_search(const Problem& problem, const EstimatorConfig& est_config,
                           const SimplexConfig& simplex_config, const HybridOptions& options,
                           RngStream& rng);

}  // namespace fps
