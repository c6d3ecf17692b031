#include "fps/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "fps/error.hpp"

namespace fps {

DenseSystem::DenseSystem(std::size_t n, std::vector<double> matrix, std::vector<double> rhs)
    : n_(n), matrix_(std::move(matrix)), rhs_(std::move(rhs)) {
  if (matrix_.size() != n_ * n_ || rhs_.size() != n_) {
    throw DimensionError("DenseSystem: matrix must be n*n and rhs n");
  }
}

std::vector<double> solve_dense_linear(DenseSystem system) {
  const std::size_t n = system.size();
  double scale = 0.0;
  for (double v : system.matrix()) {
    if (!std::isfinite(v)) throw SingularSystem("matrix has a non-finite entry");
    scale = std::max(scale, std::abs(v));
  }
  const double tiny = 1e-12 * scale;
  if (scale == 0.0 && n > 0) throw SingularSystem("zero matrix");

  auto& b = system.rhs();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);

  // Doolittle elimination, multipliers stored below the diagonal.
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    double best = std::abs(system.at(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      const double v = std::abs(system.at(i, k));
      if (v > best) {
        best = v;
        p = i;
      }
    }
    if (best <= tiny) {
      throw SingularSystem("pivot " + std::to_string(k) + " below 1e-12 of max entry");
    }
    if (p != k) {
      std::swap_ranges(system.row(k).begin(), system.row(k).end(), system.row(p).begin());
      std::swap(b[k], b[p]);
      std::swap(perm[k], perm[p]);
    }
    const double pivot = system.at(k, k);
    auto rk = system.row(k);
    for (std::size_t i = k + 1; i < n; ++i) {
      auto ri = system.row(i);
      const double m = ri[k] / pivot;
      if (m == 0.0) continue;
      ri[k] = m;
      for (std::size_t j = k + 1; j < n; ++j) ri[j] -= m * rk[j];
      b[i] -= m * b[k];
    }
  }

  std::vector<double> x(n);
  for (std::size_t ii = n; ii-- > 0;) {
    const auto r = system.row(ii);
    double s = b[ii];
    for (std::size_t j = ii + 1; j < n; ++j) s -= r[j] * x[j];
    x[ii] = s / r[ii];
  }
  return x;
}

double residual_inf_norm(const DenseSystem& system, std::span<const double> x) {
  double worst = 0.0;
  for (std::size_t i = 0; i < system.size(); ++i) {
    const auto r = system.row(i);
    double s = -system.rhs()[i];
    for (std::size_t j = 0; j < system.size(); ++j) s += r[j] * x[j];
    worst = std::max(worst, std::abs(s));
  }
  return worst;
}

}  // namespace fps
