#include "fps/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>

#include "fps/error.hpp"

namespace fps {

void SimplexConfig::validate(std::size_t dimension) const {
  if (!(ftol > 0.0)) throw ConfigError("ftol: must be positive");
  if (max_evals < dimension + 1) throw ConfigError("max_evals: must be >= N+1");
}

std::size_t fix_degenerate_simplex(std::vector<std::vector<double>>& simplex,
                                   std::span<const Bound> bounds) {
  const std::size_t dim = bounds.size();
  std::vector<std::vector<double>> basis;  // orthonormal, in range-scaled units
  auto residual = [&](std::vector<double> e) {
    for (const auto& q : basis) {
      double dot = 0.0;
      for (std::size_t j = 0; j < dim; ++j) dot += q[j] * e[j];
      for (std::size_t j = 0; j < dim; ++j) e[j] -= dot * q[j];
    }
    return e;
  };
  auto norm = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
  };

  std::size_t moved = 0;
  const auto& origin = simplex.front();
  for (std::size_t i = 1; i < simplex.size() && basis.size() < dim; ++i) {
    auto& v = simplex[i];
    std::vector<double> e(dim);
    for (std::size_t j = 0; j < dim; ++j) e[j] = (v[j] - origin[j]) / bounds[j].width();
    auto r = residual(e);
    if (norm(r) < 1e-10) {
      std::size_t axis = 0;
      double best = -1.0;
      for (std::size_t j = 0; j < dim; ++j) {
        std::vector<double> unit(dim, 0.0);
        unit[j] = 1.0;
        const double len = norm(residual(unit));
        if (len > best) {
          best = len;
          axis = j;
        }
      }
      const double step = 1e-8 * bounds[axis].width();
      v[axis] += (v[axis] + step <= bounds[axis].hi) ? step : -step;
      ++moved;
      for (std::size_t j = 0; j < dim; ++j) e[j] = (v[j] - origin[j]) / bounds[j].width();
      r = residual(e);
    }
    const double len = norm(r);
    for (double& x : r) x /= len;
    basis.push_back(std::move(r));
  }
  return moved;
}

SimplexResult nelder_mead(const Problem& problem, std::vector<std::vector<double>> simplex,
                          const SimplexConfig& config) {
  const std::size_t dim = problem.dimension();
  config.validate(dim);
  if (simplex.size() != dim + 1) throw DimensionError("nelder_mead: simplex needs N+1 vertices");
  const auto& bounds = problem.bounds();
  for (auto& v : simplex) {
    if (v.size() != dim) throw DimensionError("nelder_mead: vertex dimension mismatch");
    for (std::size_t j = 0; j < dim; ++j) v[j] = std::clamp(v[j], bounds[j].lo, bounds[j].hi);
  }
  fix_degenerate_simplex(simplex, bounds);

  SimplexResult result;
  auto evaluate = [&](const std::vector<double>& x) -> std::optional<double> {
    if (result.evals >= config.max_evals) return std::nullopt;
    ++result.evals;
    const double f = problem(x);
    return std::isnan(f) ? std::numeric_limits<double>::infinity() : f;
  };

  std::vector<double> y(dim + 1);
  for (std::size_t i = 0; i <= dim; ++i) y[i] = *evaluate(simplex[i]);

  std::vector<double> psum(dim, 0.0);
  auto refresh_psum = [&] {
    std::fill(psum.begin(), psum.end(), 0.0);
    for (const auto& v : simplex)
      for (std::size_t j = 0; j < dim; ++j) psum[j] += v[j];
  };
  refresh_psum();

  std::vector<double> trial(dim);
  bool exhausted = false;
  // Moves the worst vertex through the opposite face by `factor`; keeps the
  // trial point if it beats the worst vertex.
  auto try_move = [&](std::size_t worst, double factor) {
    const double fac1 = (1.0 - factor) / static_cast<double>(dim);
    const double fac2 = fac1 - factor;
    for (std::size_t j = 0; j < dim; ++j) {
      trial[j] = std::clamp(psum[j] * fac1 - simplex[worst][j] * fac2, bounds[j].lo, bounds[j].hi);
    }
    const auto f = evaluate(trial);
    if (!f) {
      exhausted = true;
      return std::numeric_limits<double>::infinity();
    }
    if (*f < y[worst]) {
      y[worst] = *f;
      for (std::size_t j = 0; j < dim; ++j) {
        psum[j] += trial[j] - simplex[worst][j];
        simplex[worst][j] = trial[j];
      }
    }
    return *f;
  };

  auto best_index = [&] {
    return static_cast<std::size_t>(std::min_element(y.begin(), y.end()) - y.begin());
  };

  while (true) {
    std::size_t ilo = 0;
    std::size_t ihi = y[0] > y[1] ? 0 : 1;
    std::size_t inhi = y[0] > y[1] ? 1 : 0;
    for (std::size_t i = 0; i <= dim; ++i) {
      if (y[i] <= y[ilo]) ilo = i;
      if (y[i] > y[ihi]) {
        inhi = ihi;
        ihi = i;
      } else if (y[i] > y[inhi] && i != ihi) {
        inhi = i;
      }
    }
    const double spread =
        2.0 * std::abs(y[ihi] - y[ilo]) / (std::abs(y[ihi]) + std::abs(y[ilo]) + 1e-30);
    if (spread < config.ftol || exhausted || result.evals >= config.max_evals) break;

    const double reflected = try_move(ihi, -1.0);
    if (exhausted) break;
    if (reflected <= y[ilo]) {
      try_move(ihi, 2.0);
    } else if (reflected >= y[inhi]) {
      const double saved = y[ihi];
      const double contracted = try_move(ihi, 0.5);
      if (!exhausted && contracted >= saved) {
        for (std::size_t i = 0; i <= dim && !exhausted; ++i) {
          if (i == ilo) continue;
          for (std::size_t j = 0; j < dim; ++j) {
            simplex[i][j] = 0.5 * (simplex[i][j] + simplex[ilo][j]);
          }
          const auto f = evaluate(simplex[i]);
          if (!f) {
            exhausted = true;
            // Unevaluated shrunk vertex: keep it out of contention.
            y[i] = std::numeric_limits<double>::infinity();
          } else {
            y[i] = *f;
          }
        }
        refresh_psum();
      }
    }
    result.best_history.push_back(y[best_index()]);
  }

  const std::size_t ib = best_index();
  result.point = simplex[ib];
  result.value = y[ib];
  return result;
}

}  // namespace fps
