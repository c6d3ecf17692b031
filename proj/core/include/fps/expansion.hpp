#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fps/rng.hpp"

namespace fps {

// Conditional CDF of one coordinate in the quarter-wave sine basis
//   y(x) = sum_{l=1..L} a_l sin(k_l (x - lo)),   k_l = (2l-1) pi / (2 (hi - lo)).
// Every basis function vanishes at lo and has zero slope at hi.
struct CdfExpansion {
  std::vector<double> coeffs;
  double lo = 0.0;
  double hi = 1.0;

  std::size_t size() const { return coeffs.size(); }
  double width() const { return hi - lo; }
};

// k_l for 1-based l.
double basis_wavenumber(std::size_t l, double width);

// Fills sin(k_l t) and cos(k_l t), l = 1..size, for t = x - lo in [0, width].
// Uses the angle-addition recurrence; either span may be empty.
void basis_values(double t, double width, std::span<double> sines, std::span<double> cosines);

// Throw DomainError when x is outside [lo, hi].
double evaluate_cdf(const CdfExpansion& expansion, double x);
double evaluate_pdf(const CdfExpansion& expansion, double x);

// y(hi) = sum a_l (-1)^(l+1), exact sign pattern.
double upper_value(const CdfExpansion& expansion);

// Monotone lookup table on table_size equally spaced points of [lo, hi].
struct SampledCdf {
  double lo = 0.0;
  double hi = 1.0;
  std::vector<double> values;
  bool repair_applied = false;
  // Largest |repaired - raw| over the table.
  double max_correction = 0.0;

  std::size_t size() const { return values.size(); }
  double spacing() const { return (hi - lo) / static_cast<double>(values.size() - 1); }
  double abscissa(std::size_t i) const;
};

// Samples the expansion on the grid, then repairs: running maximum, clamp to
// [0,1], affine rescale so values.front() == 0 and values.back() == 1.
// Throws InvalidDistribution when the clamped table has no rise.
SampledCdf tabulate_and_repair(const CdfExpansion& expansion, std::size_t table_size);

// The repair step alone, applied to raw table values over [lo, hi].
SampledCdf repair_table(double lo, double hi, std::vector<double> raw);

// Linear interpolation of the inverse table; u <= 0 -> lo, u >= 1 -> hi.
double inverse_cdf(const SampledCdf& cdf, double u);

// Draws u ~ U[0,1) and returns inverse_cdf(cdf, u).
double sample_inverse(const SampledCdf& cdf, RngStream& rng);

}  // namespace fps
