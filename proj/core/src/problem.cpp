#include "fps/problem.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "fps/error.hpp"

namespace fps {

Problem::Problem(std::string name, std::vector<Bound> bounds, CostFunction cost,
                 std::optional<KnownOptimum> optimum)
    : name_(std::move(name)),
      bounds_(std::move(bounds)),
      cost_(std::move(cost)),
      optimum_(std::move(optimum)) {
  if (bounds_.empty()) throw DimensionError(name_ + ": problem has no coordinates");
  for (std::size_t n = 0; n < bounds_.size(); ++n) {
    const auto& b = bounds_[n];
    if (!std::isfinite(b.lo) || !std::isfinite(b.hi) || !(b.lo < b.hi)) {
      throw DomainError(name_ + ": bound " + std::to_string(n) + " must be finite with lo < hi");
    }
  }
  if (optimum_ && optimum_->point.size() != bounds_.size()) {
    throw DimensionError(name_ + ": known optimum has the wrong dimension");
  }
}

bool Problem::contains(std::span<const double> x) const {
  if (x.size() != bounds_.size()) return false;
  for (std::size_t n = 0; n < x.size(); ++n) {
    if (!bounds_[n].contains(x[n])) return false;
  }
  return true;
}

Problem with_eval_counter(const Problem& problem, std::shared_ptr<EvalCounter> counter) {
  return Problem(
      problem.name(), problem.bounds(),
      [inner = problem, counter = std::move(counter)](std::span<const double> x) {
        counter->fetch_add(1, std::memory_order_relaxed);
        return inner(x);
      },
      problem.known_optimum());
}

double numerical_partial_inplace(const Problem& problem, std::span<double> point,
                                 std::size_t n, double h) {
  if (n >= point.size()) throw DimensionError("numerical_partial: coordinate out of range");
  if (!(h > 0.0)) throw DomainError("numerical_partial: step must be positive");
  const Bound& b = problem.bound(n);
  const double x = point[n];
  const double up = std::min(x + h, b.hi);
  const double down = std::max(x - h, b.lo);
  if (!(up > down)) throw DomainError("numerical_partial: empty stencil");

  point[n] = up;
  const double f_up = problem(point);
  point[n] = down;
  const double f_down = problem(point);
  point[n] = x;

  if (!std::isfinite(f_up) || !std::isfinite(f_down)) {
    throw NonFiniteCost(problem.name() + ": non-finite cost while differentiating coordinate " +
                        std::to_string(n));
  }
  return (f_up - f_down) / (up - down);
}

double numerical_partial(const Problem& problem, std::span<const double> point, std::size_t n,
                         double h) {
  std::vector<double> work(point.begin(), point.end());
  return numerical_partial_inplace(problem, work, n, h);
}

}  // namespace fps
