#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "fps/expansion.hpp"
#include "fps/problem.hpp"
#include "fps/rng.hpp"

namespace fps {

struct EstimatorConfig {
  std::size_t basis_size = 100;  // L
  double diffusion = 1.0;        // D
  std::size_t max_sweeps = 300;  // M
  std::size_t table_size = 2048;
  double conv_tol = 0.01;        // on the normalized 95% interval length
  bool early_stop = true;
  std::size_t burn_in = 0;       // sweeps discarded before averaging
  double interval_mass = 0.95;
  // A conditional counts as repaired when its table needed a correction
  // above this amplitude; more than repair_warn_fraction of them triggers
  // the L/D warning.
  double repair_warn_amplitude = 1e-3;
  double repair_warn_fraction = 0.2;

  // Throws ConfigError naming the field.
  void validate() const;
};

// One Gibbs chain: the current point and the stream that drives it.
struct SweepState {
  std::vector<double> point;
  RngStream rng;
  std::size_t sweep_index = 0;

  // Point drawn uniformly from the box using `rng`.
  static SweepState random_start(const Problem& problem, RngStream rng);
};

enum class StopReason { kMaxSweeps, kConverged };

const char* to_string(StopReason reason);

struct EstimateStats {
  std::size_t sweeps = 0;
  std::uint64_t cost_evaluations = 0;
  std::size_t conditionals = 0;
  std::size_t repaired_conditionals = 0;  // above repair_warn_amplitude
  StopReason stop_reason = StopReason::kMaxSweeps;
  bool repair_warning = false;
  std::string warning;
};

// Running average of the conditional-CDF coefficients, one vector per
// coordinate. Sums are kept and divided on demand, so mean_coeffs is the
// plain arithmetic mean of the accumulated vectors.
class MarginalEstimate {
 public:
  MarginalEstimate(std::vector<Bound> bounds, std::size_t basis_size,
                   std::size_t table_size = 2048);

  std::size_t dimension() const { return bounds_.size(); }
  std::size_t basis_size() const { return basis_size_; }
  std::size_t table_size() const { return table_size_; }
  const std::vector<Bound>& bounds() const { return bounds_; }

  // Number of vectors averaged (the same for every coordinate once a sweep
  // has completed).
  std::size_t samples() const;
  std::size_t samples(std::size_t n) const { return counts_[n]; }

  void accumulate(std::size_t n, std::span<const double> coeffs);

  std::vector<double> mean_coeffs(std::size_t n) const;
  // Averaged expansion for coordinate n. Throws InvalidDistribution when
  // nothing has been accumulated yet.
  CdfExpansion mean_expansion(std::size_t n) const;

  // Normalized 95% (interval_mass) lengths from the latest convergence check.
  std::vector<double>& last_interval_lengths() { return last_lengths_; }
  const std::vector<double>& last_interval_lengths() const { return last_lengths_; }

  EstimateStats& stats() { return stats_; }
  const EstimateStats& stats() const { return stats_; }

 private:
  std::vector<Bound> bounds_;
  std::size_t basis_size_;
  std::size_t table_size_;
  std::vector<std::vector<double>> sums_;
  std::vector<std::size_t> counts_;
  std::vector<double> last_lengths_;
  EstimateStats stats_;
};

// Solves the collocation system for coordinate n with the other coordinates
// held at `point`:
//   y'' + (1/D) dV/dx_n y' = 0 at x_i = lo + i (hi-lo)/L, i = 1..L-1,
//   y(hi) = 1,
// rows equilibrated by their max entry. Uses exactly 2(L-1) cost calls.
CdfExpansion build_conditional_cdf(const Problem& problem, std::span<const double> point,
                                   std::size_t n, const EstimatorConfig& config);

inline CdfExpansion build_conditional_cdf(const Problem& problem, const SweepState& state,
                                          std::size_t n, const EstimatorConfig& config) {
  return build_conditional_cdf(problem, state.point, n, config);
}

// Called once per coordinate update with (sweep_index, n, fresh expansion).
using SweepObserver = std::function<void(std::size_t, std::size_t, const CdfExpansion&)>;

// One pass over the coordinates in ascending order: build, tabulate, sample
// x_n, accumulate (unless still in burn-in). Errors are rethrown with the
// coordinate index prepended to the message.
void gibbs_sweep(const Problem& problem, SweepState& state, const EstimatorConfig& config,
                 MarginalEstimate& acc, const SweepObserver& observer = {});

// Full estimation: uniform random start, sweeps until max_sweeps or, when
// early_stop is set, until every coordinate's normalized interval length
// moved by less than conv_tol between consecutive sweeps.
MarginalEstimate estimate_marginals(const Problem& problem, const EstimatorConfig& config,
                                    RngStream rng, const SweepObserver& observer = {});

// Updates acc.last_interval_lengths() and returns the largest change from the
// previous values (infinity when there were none).
double update_interval_lengths(MarginalEstimate& acc, double mass);

}  // namespace fps
