#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fps {

struct Bound {
  double lo;
  double hi;

  double width() const { return hi - lo; }
  bool contains(double x) const { return lo <= x && x <= hi; }
};

struct KnownOptimum {
  std::vector<double> point;
  double value;
};

using CostFunction = std::function<double(std::span<const double>)>;

// Box-bounded objective. The cost must be a pure function: it may be called
// from several threads at once and must return the same value for the same
// point.
class Problem {
 public:
  Problem(std::string name, std::vector<Bound> bounds, CostFunction cost,
          std::optional<KnownOptimum> optimum = std::nullopt);

  const std::string& name() const { return name_; }
  std::size_t dimension() const { return bounds_.size(); }
  const std::vector<Bound>& bounds() const { return bounds_; }
  const Bound& bound(std::size_t n) const { return bounds_[n]; }
  const std::optional<KnownOptimum>& known_optimum() const { return optimum_; }

  double operator()(std::span<const double> x) const { return cost_(x); }

  bool contains(std::span<const double> x) const;

 private:
  std::string name_;
  std::vector<Bound> bounds_;
  CostFunction cost_;
  std::optional<KnownOptimum> optimum_;
};

using EvalCounter = std::atomic<std::uint64_t>;

// Same problem, but every cost call increments *counter.
Problem with_eval_counter(const Problem& problem, std::shared_ptr<EvalCounter> counter);

// 1e-6 of the coordinate range.
inline double default_gradient_step(const Bound& b) { return 1e-6 * b.width(); }

// d cost / d x_n from exactly two cost evaluations. Central difference while
// x_n +- h stays in the box; near a wall the offending side is clamped to the
// wall, giving a one-sided quotient. Throws NonFiniteCost.
double numerical_partial(const Problem& problem, std::span<const double> point,
                         std::size_t n, double h);

// As above, but perturbs `point` in place and restores it before returning.
double numerical_partial_inplace(const Problem& problem, std::span<double> point,
                                 std::size_t n, double h);

}  // namespace fps
