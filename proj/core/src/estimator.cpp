#include "fps/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <string>
#include <utility>

#include "fps/error.hpp"
#include "fps/linalg.hpp"
#include "fps/marginal.hpp"

namespace fps {

void EstimatorConfig::validate() const {
  if (basis_size < 2) throw ConfigError("L: basis size must be >= 2");
  if (!(diffusion > 0.0) || !std::isfinite(diffusion)) throw ConfigError("D: must be positive");
  if (max_sweeps < 1) throw ConfigError("M: must be >= 1");
  if (table_size < 64) throw ConfigError("table_size: must be >= 64");
  if (!(conv_tol > 0.0)) throw ConfigError("conv_tol: must be positive");
  if (burn_in >= max_sweeps) throw ConfigError("burn_in: must be smaller than M");
  if (!(interval_mass > 0.0 && interval_mass < 1.0)) {
    throw ConfigError("interval_mass: must be in (0, 1)");
  }
}

SweepState SweepState::random_start(const Problem& problem, RngStream rng) {
  SweepState state{std::vector<double>(problem.dimension()), std::move(rng), 0};
  for (std::size_t n = 0; n < problem.dimension(); ++n) {
    const Bound& b = problem.bound(n);
    state.point[n] = state.rng.uniform(b.lo, b.hi);
  }
  return state;
}

const char* to_string(StopReason reason) {
  switch (reason) {
    case StopReason::kMaxSweeps:
      return "max_sweeps";
    case StopReason::kConverged:
      return "converged";
  }
  return "unknown";
}

MarginalEstimate::MarginalEstimate(std::vector<Bound> bounds, std::size_t basis_size,
                                   std::size_t table_size)
    : bounds_(std::move(bounds)),
      basis_size_(basis_size),
      table_size_(table_size),
      sums_(bounds_.size(), std::vector<double>(basis_size, 0.0)),
      counts_(bounds_.size(), 0) {}

std::size_t MarginalEstimate::samples() const {
  if (counts_.empty()) return 0;
  return *std::min_element(counts_.begin(), counts_.end());
}

void MarginalEstimate::accumulate(std::size_t n, std::span<const double> coeffs) {
  if (n >= sums_.size() || coeffs.size() != basis_size_) {
    throw DimensionError("MarginalEstimate::accumulate: coordinate or basis size mismatch");
  }
  auto& s = sums_[n];
  for (std::size_t l = 0; l < basis_size_; ++l) s[l] += coeffs[l];
  ++counts_[n];
}

std::vector<double> MarginalEstimate::mean_coeffs(std::size_t n) const {
  if (counts_.at(n) == 0) {
    throw InvalidDistribution("coordinate " + std::to_string(n) + " has no accumulated sweeps");
  }
  std::vector<double> mean(sums_[n]);
  const double count = static_cast<double>(counts_[n]);
  for (double& v : mean) v /= count;
  return mean;
}

CdfExpansion MarginalEstimate::mean_expansion(std::size_t n) const {
  return CdfExpansion{mean_coeffs(n), bounds_[n].lo, bounds_[n].hi};
}

CdfExpansion build_conditional_cdf(const Problem& problem, std::span<const double> point,
                                   std::size_t n, const EstimatorConfig& config) {
  if (point.size() != problem.dimension() || n >= point.size()) {
    throw DimensionError("build_conditional_cdf: point/coordinate mismatch");
  }
  const std::size_t basis = config.basis_size;
  if (basis < 2) throw ConfigError("L: basis size must be >= 2");
  const Bound& b = problem.bound(n);
  const double width = b.width();
  const double h = default_gradient_step(b);

  std::vector<double> work(point.begin(), point.end());
  std::vector<double> k(basis);
  for (std::size_t l = 0; l < basis; ++l) k[l] = basis_wavenumber(l + 1, width);
  std::vector<double> sines(basis);
  std::vector<double> cosines(basis);

  DenseSystem system(basis);
  for (std::size_t i = 1; i < basis; ++i) {
    const double t = width * static_cast<double>(i) / static_cast<double>(basis);
    work[n] = b.lo + t;
    const double drift = numerical_partial_inplace(problem, work, n, h) / config.diffusion;
    basis_values(t, width, sines, cosines);
    auto row = system.row(i - 1);
    double scale = 0.0;
    for (std::size_t l = 0; l < basis; ++l) {
      row[l] = -k[l] * k[l] * sines[l] + drift * k[l] * cosines[l];
      scale = std::max(scale, std::abs(row[l]));
    }
    for (double& v : row) v /= scale;
  }
  auto last = system.row(basis - 1);
  for (std::size_t l = 0; l < basis; ++l) last[l] = (l % 2 == 0) ? 1.0 : -1.0;
  system.rhs()[basis - 1] = 1.0;

  return CdfExpansion{solve_dense_linear(std::move(system)), b.lo, b.hi};
}

namespace {

std::string annotate(std::size_t n, const std::exception& e) {
  return "coordinate " + std::to_string(n) + ": " + e.what();
}

}  // namespace

void gibbs_sweep(const Problem& problem, SweepState& state, const EstimatorConfig& config,
                 MarginalEstimate& acc, const SweepObserver& observer) {
  if (state.point.size() != problem.dimension() || acc.dimension() != problem.dimension() ||
      acc.basis_size() != config.basis_size) {
    throw DimensionError("gibbs_sweep: inconsistent dimensions");
  }
  auto counter = std::make_shared<EvalCounter>(0);
  const Problem counted = with_eval_counter(problem, counter);
  const bool keep = state.sweep_index >= config.burn_in;
  auto& stats = acc.stats();

  for (std::size_t n = 0; n < problem.dimension(); ++n) {
    try {
      const CdfExpansion expansion = build_conditional_cdf(counted, state.point, n, config);
      const SampledCdf table = tabulate_and_repair(expansion, config.table_size);
      ++stats.conditionals;
      if (table.max_correction > config.repair_warn_amplitude) ++stats.repaired_conditionals;
      state.point[n] = sample_inverse(table, state.rng);
      if (observer) observer(state.sweep_index, n, expansion);
      if (keep) acc.accumulate(n, expansion.coeffs);
    } catch (const SingularSystem& e) {
      throw SingularSystem(annotate(n, e));
    } catch (const NonFiniteCost& e) {
      throw NonFiniteCost(annotate(n, e));
    } catch (const InvalidDistribution& e) {
      throw InvalidDistribution(annotate(n, e));
    }
  }
  ++state.sweep_index;
  ++stats.sweeps;
  stats.cost_evaluations += counter->load();
}

double update_interval_lengths(MarginalEstimate& acc, double mass) {
  auto& lengths = acc.last_interval_lengths();
  const bool first = lengths.size() != acc.dimension();
  double change = std::numeric_limits<double>::infinity();
  if (!first) change = 0.0;
  std::vector<double> next(acc.dimension());
  for (std::size_t n = 0; n < acc.dimension(); ++n) {
    const Interval iv = probability_interval(acc, n, mass);
    next[n] = iv.length() / acc.bounds()[n].width();
    if (!first) change = std::max(change, std::abs(next[n] - lengths[n]));
  }
  lengths = std::move(next);
  return change;
}

namespace {

void finalize_stats(EstimateStats& stats, const EstimatorConfig& config) {
  if (stats.conditionals == 0) return;
  const double fraction =
      static_cast<double>(stats.repaired_conditionals) / static_cast<double>(stats.conditionals);
  stats.repair_warning = fraction > config.repair_warn_fraction;
  if (stats.repair_warning) {
    stats.warning = std::to_string(stats.repaired_conditionals) + " of " +
                    std::to_string(stats.conditionals) +
                    " conditional CDFs needed monotone repair; increase D or L";
  }
}

}  // namespace

MarginalEstimate estimate_marginals(const Problem& problem, const EstimatorConfig& config,
                                    RngStream rng, const SweepObserver& observer) {
  config.validate();
  MarginalEstimate acc(problem.bounds(), config.basis_size, config.table_size);
  SweepState state = SweepState::random_start(problem, std::move(rng));
  auto& stats = acc.stats();
  stats.stop_reason = StopReason::kMaxSweeps;

  for (std::size_t s = 0; s < config.max_sweeps; ++s) {
    gibbs_sweep(problem, state, config, acc, observer);
    if (acc.samples() == 0) continue;
    const bool last = s + 1 == config.max_sweeps;
    if (!config.early_stop && !last) continue;
    const double change = update_interval_lengths(acc, config.interval_mass);
    if (config.early_stop && change < config.conv_tol) {
      stats.stop_reason = StopReason::kConverged;
      break;
    }
  }
  finalize_stats(stats, config);
  return acc;
}

}  // namespace fps
