#include "fps/marginal.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "fps/error.hpp"

namespace fps {

double table_mode(std::span<const double> density, double lo, double dx) {
  if (density.empty()) throw DomainError("table_mode: empty table");
  std::size_t best = 0;
  for (std::size_t i = 1; i < density.size(); ++i) {
    if (density[i] > density[best]) best = i;
  }
  double offset = 0.0;
  if (best > 0 && best + 1 < density.size()) {
    const double left = density[best - 1];
    const double mid = density[best];
    const double right = density[best + 1];
    const double curvature = left - 2.0 * mid + right;
    if (curvature < 0.0) offset = std::clamp(0.5 * (left - right) / curvature, -0.5, 0.5);
  }
  return lo + (static_cast<double>(best) + offset) * dx;
}

double expansion_mode(const CdfExpansion& expansion, std::size_t table_size) {
  std::vector<double> pdf(table_size);
  const double dx = expansion.width() / static_cast<double>(table_size - 1);
  for (std::size_t i = 0; i < table_size; ++i) {
    const double x = (i + 1 == table_size) ? expansion.hi : expansion.lo + dx * static_cast<double>(i);
    pdf[i] = evaluate_pdf(expansion, x);
  }
  return std::clamp(table_mode(pdf, expansion.lo, dx), expansion.lo, expansion.hi);
}

double marginal_mode(const MarginalEstimate& est, std::size_t n) {
  return expansion_mode(est.mean_expansion(n), est.table_size());
}

std::vector<double> joint_mode(const MarginalEstimate& est) {
  std::vector<double> mode(est.dimension());
  for (std::size_t n = 0; n < est.dimension(); ++n) mode[n] = marginal_mode(est, n);
  return mode;
}

Interval highest_density_interval(const SampledCdf& cdf, double start, double mass) {
  if (!(mass > 0.0 && mass < 1.0)) throw DomainError("interval mass must be in (0, 1)");
  const std::size_t cells = cdf.size() - 1;
  std::vector<double> m(cells);
  for (std::size_t j = 0; j < cells; ++j) m[j] = cdf.values[j + 1] - cdf.values[j];

  const double pos = std::floor((start - cdf.lo) / cdf.spacing());
  std::size_t left = static_cast<std::size_t>(std::clamp(pos, 0.0, static_cast<double>(cells - 1)));
  std::size_t right = left;
  double acc = m[left];
  while (acc < mass && (left > 0 || right + 1 < cells)) {
    const double l = left > 0 ? m[left - 1] : -1.0;
    const double r = right + 1 < cells ? m[right + 1] : -1.0;
    if (l >= r) {
      --left;
      acc += m[left];
    } else {
      ++right;
      acc += m[right];
    }
  }
  return {cdf.abscissa(left), cdf.abscissa(right + 1)};
}

Interval probability_interval(const MarginalEstimate& est, std::size_t n, double mass) {
  const CdfExpansion expansion = est.mean_expansion(n);
  const SampledCdf table = tabulate_and_repair(expansion, est.table_size());
  return highest_density_interval(table, expansion_mode(expansion, est.table_size()), mass);
}

Moments expansion_moments(const CdfExpansion& expansion) {
  const double width = expansion.width();
  const double z = upper_value(expansion);
  if (!(std::abs(z) > 0.0)) throw InvalidDistribution("expansion has zero total mass");
  // With s_l = (-1)^(l+1): sum a_l H s_l = H z, so
  //   E[t]   = H - A/z,          A = sum a_l / k_l
  //   E[t^2] = H^2 - 2 B/z,      B = sum a_l s_l / k_l^2
  double a_sum = 0.0;
  double b_sum = 0.0;
  for (std::size_t l = 0; l < expansion.size(); ++l) {
    const double k = basis_wavenumber(l + 1, width);
    const double s = (l % 2 == 0) ? 1.0 : -1.0;
    a_sum += expansion.coeffs[l] / k;
    b_sum += expansion.coeffs[l] * s / (k * k);
  }
  const double mean_t = width - a_sum / z;
  const double var = 2.0 * width * a_sum / z - (a_sum / z) * (a_sum / z) - 2.0 * b_sum / z;
  return {expansion.lo + mean_t, std::sqrt(std::max(var, 0.0))};
}

Moments analytic_moments(const MarginalEstimate& est, std::size_t n) {
  return expansion_moments(est.mean_expansion(n));
}

}  // namespace fps
