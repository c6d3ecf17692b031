#include "fps/hybrid.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>
#include <utility>

#include "fps/error.hpp"
#include "fps/marginal.hpp"

namespace fps {

std::vector<std::vector<double>> build_population(std::span<const double> best,
                                                  std::span<const double> mode_point,
                                                  std::span<const double> sigmas,
                                                  std::span<const Bound> bounds,
                                                  RngStream& rng) {
  const std::size_t dim = bounds.size();
  if (best.size() != dim || mode_point.size() != dim || sigmas.size() != dim) {
    throw DimensionError("build_population: dimension mismatch");
  }
  std::vector<std::vector<double>> pop;
  pop.reserve(dim + 1);
  pop.emplace_back(best.begin(), best.end());
  pop.emplace_back(mode_point.begin(), mode_point.end());
  for (std::size_t i = 2; i <= dim; ++i) {
    std::vector<double> v(dim);
    for (std::size_t n = 0; n < dim; ++n) {
      const double half = 0.5 * sigmas[n];
      v[n] = std::clamp(rng.uniform(best[n] - half, best[n] + half), bounds[n].lo, bounds[n].hi);
    }
    pop.push_back(std::move(v));
  }
  return pop;
}

std::vector<std::vector<double>> build_axis_population(std::span<const double> best,
                                                       std::span<const double> mode_point,
                                                       std::span<const double> sigmas,
                                                       std::span<const Bound> bounds) {
  const std::size_t dim = bounds.size();
  if (best.size() != dim || mode_point.size() != dim || sigmas.size() != dim) {
    throw DimensionError("build_axis_population: dimension mismatch");
  }
  std::vector<std::vector<double>> pop;
  pop.reserve(dim + 1);
  pop.emplace_back(best.begin(), best.end());
  pop.emplace_back(mode_point.begin(), mode_point.end());
  for (std::size_t n = 0; n + 1 < dim; ++n) {
    std::vector<double> v(best.begin(), best.end());
    // Step towards the interior when the wall is closer than sigma.
    const double up = v[n] + sigmas[n];
    v[n] = up <= bounds[n].hi ? up : std::max(bounds[n].lo, v[n] - sigmas[n]);
    pop.push_back(std::move(v));
  }
  return pop;
}

HybridReport greedy_search(const Problem& problem, const EstimatorConfig& est_config,
                           const SimplexConfig& simplex_config, const HybridOptions& options,
                           RngStream& rng) {
  if (options.iterations < 1) throw ConfigError("iterations: must be >= 1");
  est_config.validate();
  const std::size_t dim = problem.dimension();
  simplex_config.validate(dim);

  auto counter = std::make_shared<EvalCounter>(0);
  const Problem counted = with_eval_counter(problem, counter);
  const auto& bounds = problem.bounds();
  const bool guided = options.guide == DensityGuide::kEstimated;

  MarginalEstimate acc(bounds, est_config.basis_size, est_config.table_size);
  std::optional<SweepState> state;
  if (guided) {
    // The chain gets its own stream, seeded from the caller's.
    state.emplace(SweepState::random_start(counted, RngStream(rng.next_u64(), rng.stream_id())));
  }

  HybridReport report;
  const auto& optimum = problem.known_optimum();
  std::vector<double> mode(dim);
  std::vector<double> sigmas(dim);

  for (std::size_t it = 1; it <= options.iterations; ++it) {
    if (guided) {
      gibbs_sweep(counted, *state, est_config, acc);
      if (acc.samples() > 0) {
        for (std::size_t n = 0; n < dim; ++n) {
          mode[n] = marginal_mode(acc, n);
          sigmas[n] = analytic_moments(acc, n).sigma;
        }
      } else {
        // Still inside burn-in: fall back to the chain's current point.
        mode = state->point;
        for (std::size_t n = 0; n < dim; ++n) sigmas[n] = bounds[n].width() / std::sqrt(12.0);
      }
    } else {
      for (std::size_t n = 0; n < dim; ++n) {
        mode[n] = rng.uniform(bounds[n].lo, bounds[n].hi);
        sigmas[n] = bounds[n].width() / std::sqrt(12.0);
      }
    }

    if (it == 1) {
      report.best_point = mode;
      report.best_value = counted(mode);
    }

    auto population = options.scheme == PopulationScheme::kAxis
                          ? build_axis_population(report.best_point, mode, sigmas, bounds)
                          : build_population(report.best_point, mode, sigmas, bounds, rng);
    SimplexResult local = nelder_mead(counted, std::move(population), simplex_config);
    if (local.value < report.best_value) {
      report.best_value = local.value;
      report.best_point = std::move(local.point);
    }

    report.trace.push_back({it, report.best_value, counter->load()});
    if (optimum && !report.success && report.best_value - optimum->value < options.success_gap) {
      report.success = true;
      report.success_iteration = it;
    }
  }
  report.total_evals = counter->load();
  return report;
}

}  // namespace fps
