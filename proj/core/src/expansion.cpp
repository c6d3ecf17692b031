#include "fps/expansion.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fps/error.hpp"

namespace fps {
namespace {

// sum a_l sin(k_l t) or sum a_l k_l cos(k_l t).
double series(const std::vector<double>& a, double t, double width, bool derivative) {
  const double theta = std::numbers::pi * t / (2.0 * width);
  double s = std::sin(theta);
  double c = std::cos(theta);
  const double s2 = std::sin(2.0 * theta);
  const double c2 = std::cos(2.0 * theta);
  double sum = 0.0;
  for (std::size_t l = 0; l < a.size(); ++l) {
    sum += derivative ? a[l] * basis_wavenumber(l + 1, width) * c : a[l] * s;
    const double next_s = s * c2 + c * s2;
    c = c * c2 - s * s2;
    s = next_s;
  }
  return sum;
}

void check_domain(const CdfExpansion& e, double x) {
  if (!(e.lo <= x && x <= e.hi)) {
    throw DomainError("expansion evaluated at " + std::to_string(x) + " outside [" +
                      std::to_string(e.lo) + ", " + std::to_string(e.hi) + "]");
  }
}

}  // namespace

double basis_wavenumber(std::size_t l, double width) {
  return static_cast<double>(2 * l - 1) * std::numbers::pi / (2.0 * width);
}

void basis_values(double t, double width, std::span<double> sines, std::span<double> cosines) {
  const std::size_t count = std::max(sines.size(), cosines.size());
  const double theta = std::numbers::pi * t / (2.0 * width);
  double s = std::sin(theta);
  double c = std::cos(theta);
  const double s2 = std::sin(2.0 * theta);
  const double c2 = std::cos(2.0 * theta);
  for (std::size_t l = 0; l < count; ++l) {
    if (l < sines.size()) sines[l] = s;
    if (l < cosines.size()) cosines[l] = c;
    const double next_s = s * c2 + c * s2;
    c = c * c2 - s * s2;
    s = next_s;
  }
}

double evaluate_cdf(const CdfExpansion& expansion, double x) {
  check_domain(expansion, x);
  if (x == expansion.lo) return 0.0;
  return series(expansion.coeffs, x - expansion.lo, expansion.width(), false);
}

double evaluate_pdf(const CdfExpansion& expansion, double x) {
  check_domain(expansion, x);
  return series(expansion.coeffs, x - expansion.lo, expansion.width(), true);
}

double upper_value(const CdfExpansion& expansion) {
  double sum = 0.0;
  for (std::size_t l = 0; l < expansion.size(); ++l) {
    sum += (l % 2 == 0) ? expansion.coeffs[l] : -expansion.coeffs[l];
  }
  return sum;
}

double SampledCdf::abscissa(std::size_t i) const {
  if (i + 1 == values.size()) return hi;
  return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(values.size() - 1);
}

SampledCdf repair_table(double lo, double hi, std::vector<double> raw) {
  if (raw.size() < 2) throw InvalidDistribution("lookup table needs at least two points");
  for (double v : raw) {
    if (!std::isfinite(v)) throw InvalidDistribution("lookup table has a non-finite value");
  }
  SampledCdf out;
  out.lo = lo;
  out.hi = hi;
  out.values = raw;
  auto& v = out.values;
  double running = v.front();
  for (double& x : v) {
    running = std::max(running, x);
    x = std::clamp(running, 0.0, 1.0);
  }
  const double first = v.front();
  const double last = v.back();
  if (!(last > first)) {
    throw InvalidDistribution("lookup table does not rise (endpoint " + std::to_string(last) +
                              " <= start " + std::to_string(first) + ")");
  }
  const double span = last - first;
  for (double& x : v) x = (x - first) / span;
  v.front() = 0.0;
  v.back() = 1.0;

  for (std::size_t i = 0; i < v.size(); ++i) {
    out.max_correction = std::max(out.max_correction, std::abs(v[i] - raw[i]));
  }
  out.repair_applied = out.max_correction > 1e-9;
  return out;
}

SampledCdf tabulate_and_repair(const CdfExpansion& expansion, std::size_t table_size) {
  if (table_size < 2) throw InvalidDistribution("table_size must be at least 2");
  std::vector<double> raw(table_size);
  const double width = expansion.width();
  for (std::size_t i = 0; i < table_size; ++i) {
    const double t = (i + 1 == table_size)
                         ? width
                         : width * static_cast<double>(i) / static_cast<double>(table_size - 1);
    raw[i] = (i == 0) ? 0.0 : series(expansion.coeffs, t, width, false);
  }
  return repair_table(expansion.lo, expansion.hi, std::move(raw));
}

double inverse_cdf(const SampledCdf& cdf, double u) {
  if (u <= 0.0) return cdf.lo;
  if (u >= 1.0) return cdf.hi;
  const auto it = std::lower_bound(cdf.values.begin(), cdf.values.end(), u);
  const auto j = static_cast<std::size_t>(it - cdf.values.begin());
  const double v0 = cdf.values[j - 1];
  const double v1 = cdf.values[j];
  const double frac = (u - v0) / (v1 - v0);
  const double x = cdf.abscissa(j - 1) + frac * (cdf.abscissa(j) - cdf.abscissa(j - 1));
  return std::clamp(x, cdf.lo, cdf.hi);
}

double sample_inverse(const SampledCdf& cdf, RngStream& rng) {
  return inverse_cdf(cdf, rng.uniform());
}

}  // namespace fps
