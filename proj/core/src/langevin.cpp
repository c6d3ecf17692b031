#include "fps/langevin.hpp"

#include <cmath>
#include <numeric>
#include <vector>

#include "fps/error.hpp"

namespace fps {
namespace {

// Folds x back into [lo, hi] as repeated mirror reflections.
double reflect(double x, const Bound& b) {
  if (b.contains(x)) return x;
  const double width = b.width();
  double y = std::fmod(x - b.lo, 2.0 * width);
  if (y < 0.0) y += 2.0 * width;
  if (y > width) y = 2.0 * width - y;
  return b.lo + y;
}

}  // namespace

std::vector<double> SampleSet::coordinate(std::size_t n) const {
  std::vector<double> out;
  out.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) out.push_back(data_[i * dimension_ + n]);
  return out;
}

SampleSet simulate_langevin(const Problem& problem, const LangevinOptions& options,
                            RngStream& rng) {
  if (!(options.dt > 0.0)) throw DomainError("simulate_langevin: dt must be positive");
  if (!(options.diffusion > 0.0)) throw DomainError("simulate_langevin: D must be positive");
  if (options.thin == 0) throw DomainError("simulate_langevin: thin must be >= 1");
  const std::size_t dim = problem.dimension();
  std::vector<double> x(dim);
  for (std::size_t n = 0; n < dim; ++n) x[n] = rng.uniform(problem.bound(n).lo, problem.bound(n).hi);

  const double noise = std::sqrt(2.0 * options.diffusion * options.dt);
  std::vector<double> grad(dim);
  SampleSet samples(dim);
  if (options.steps > options.burn_in) {
    samples.reserve((options.steps - options.burn_in) / options.thin + 1);
  }
  for (std::size_t step = 0; step < options.steps; ++step) {
    for (std::size_t n = 0; n < dim; ++n) {
      grad[n] = numerical_partial_inplace(problem, x, n, default_gradient_step(problem.bound(n)));
    }
    for (std::size_t n = 0; n < dim; ++n) {
      x[n] = reflect(x[n] - grad[n] * options.dt + noise * rng.normal(), problem.bound(n));
    }
    if (step >= options.burn_in && (step - options.burn_in) % options.thin == 0) samples.push(x);
  }
  return samples;
}

double integrated_autocorrelation_time(std::span<const double> series) {
  const std::size_t n = series.size();
  if (n < 2) return 0.5;
  const double mean = std::accumulate(series.begin(), series.end(), 0.0) / static_cast<double>(n);
  std::vector<double> centered(n);
  for (std::size_t i = 0; i < n; ++i) centered[i] = series[i] - mean;
  double c0 = 0.0;
  for (double v : centered) c0 += v * v;
  if (c0 == 0.0) return 0.5;

  double tau = 0.5;
  for (std::size_t lag = 1; lag < n; ++lag) {
    double c = 0.0;
    for (std::size_t i = 0; i + lag < n; ++i) c += centered[i] * centered[i + lag];
    tau += c / c0;
    if (static_cast<double>(lag) >= 5.0 * tau) break;
  }
  return tau;
}

}  // namespace fps
