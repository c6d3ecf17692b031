#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fps/problem.hpp"
#include "fps/rng.hpp"

namespace fps {

struct LangevinOptions {
  double diffusion = 1.0;
  std::size_t steps = 1'000'000;
  double dt = 1e-3;
  std::size_t burn_in = 100'000;
  std::size_t thin = 1;  // keep every thin-th post-burn-in step
};

// Flat row-major store of sample points.
class SampleSet {
 public:
  explicit SampleSet(std::size_t dimension) : dimension_(dimension) {}

  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return dimension_ == 0 ? 0 : data_.size() / dimension_; }
  std::span<const double> operator[](std::size_t i) const {
    return {data_.data() + i * dimension_, dimension_};
  }
  // Coordinate n of every sample, in order.
  std::vector<double> coordinate(std::size_t n) const;

  void push(std::span<const double> x) { data_.insert(data_.end(), x.begin(), x.end()); }
  void reserve(std::size_t samples) { data_.reserve(samples * dimension_); }

 private:
  std::size_t dimension_;
  std::vector<double> data_;
};

// Euler-Maruyama for dx = -grad V dt + sqrt(2 D) dW with reflecting walls,
// started uniformly in the box. The gradient is the two-evaluation numerical
// partial. Returns the post-burn-in samples.
SampleSet simulate_langevin(const Problem& problem, const LangevinOptions& options,
                            RngStream& rng);

// Integrated autocorrelation time (in steps) of a scalar series, Sokal's
// adaptive window with c = 5.
double integrated_autocorrelation_time(std::span<const double> series);

}  // namespace fps
