#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fps/estimator.hpp"
#include "fps/expansion.hpp"

namespace fps {

struct Interval {
  double lo;
  double hi;

  double length() const { return hi - lo; }
};

struct Moments {
  double mean;
  double sigma;
};

// Argmax of a density sampled at lo + i*dx. Ties go to the lowest index; an
// interior maximum is refined by a 3-point parabola.
double table_mode(std::span<const double> density, double lo, double dx);

double expansion_mode(const CdfExpansion& expansion, std::size_t table_size);
double marginal_mode(const MarginalEstimate& est, std::size_t n);

// Per-coordinate modes concatenated.
std::vector<double> joint_mode(const MarginalEstimate& est);

// Greedy highest-density interval on a table: start at the cell holding
// `start`, keep adding whichever neighbouring cell carries more mass (left on
// ties) until the accumulated mass reaches `mass`. Returns cell boundaries.
Interval highest_density_interval(const SampledCdf& cdf, double start, double mass);

Interval probability_interval(const MarginalEstimate& est, std::size_t n, double mass);

// Mean and standard deviation of the normalized pdf y'/y(hi) in closed form:
//   int_0^H t phi_l' dt   = H s_l - 1/k_l
//   int_0^H t^2 phi_l' dt = H^2 s_l - 2 s_l / k_l^2,   s_l = (-1)^(l+1)
Moments expansion_moments(const CdfExpansion& expansion);
Moments analytic_moments(const MarginalEstimate& est, std::size_t n);

}  // namespace fps
