#include "fps/benchmarks.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "fps/error.hpp"

namespace fps {
namespace {

std::vector<Bound> box(std::size_t n, double lo, double hi) {
  return std::vector<Bound>(n, Bound{lo, hi});
}

Problem schwefel() {
  constexpr std::size_t kN = 6;
  auto cost = [](std::span<const double> x) {
    double s = 418.9829 * static_cast<double>(x.size());
    for (double v : x) s -= v * std::sin(std::sqrt(std::abs(v)));
    return s;
  };
  return Problem("schwefel", box(kN, -500.0, 500.0), cost,
                 KnownOptimum{std::vector<double>(kN, 420.9687), 0.0});
}

Problem levy5() {
  auto cost = [](std::span<const double> x) {
    double s1 = 0.0;
    double s2 = 0.0;
    for (int i = 1; i <= 5; ++i) {
      s1 += i * std::cos((i - 1) * x[0] + i);
      s2 += i * std::cos((i + 1) * x[1] + i);
    }
    const double d1 = x[0] + 1.42513;
    const double d2 = x[1] + 0.80032;
    return s1 * s2 + d1 * d1 + d2 * d2;
  };
  return Problem("levy5", box(2, -10.0, 10.0), cost,
                 KnownOptimum{{-1.3068, -1.4248}, -176.1375});
}

Problem booth() {
  auto cost = [](std::span<const double> x) {
    const double a = x[0] + 2.0 * x[1] - 7.0;
    const double b = 2.0 * x[0] + x[1] - 5.0;
    return a * a + b * b;
  };
  return Problem("booth", box(2, -10.0, 10.0), cost, KnownOptimum{{1.0, 3.0}, 0.0});
}

Problem colville(bool standard) {
  auto cost = [standard](std::span<const double> x) {
    const double t1 = standard ? x[1] - x[0] * x[0] : x[1] - x[0];
    const double t3 = standard ? x[3] - x[2] * x[2] : x[3] - x[2];
    const double a = 1.0 - x[0];
    const double c = 1.0 - x[2];
    const double e2 = x[1] - 1.0;
    const double e4 = x[3] - 1.0;
    return 100.0 * t1 * t1 + a * a + 90.0 * t3 * t3 + c * c + 10.1 * (e2 * e2 + e4 * e4) +
           19.8 * e2 * e4;
  };
  return Problem(standard ? "colville-standard" : "colville", box(4, -10.0, 10.0), cost,
                 KnownOptimum{std::vector<double>(4, 1.0), 0.0});
}

Problem rosenbrock() {
  constexpr std::size_t kN = 20;
  auto cost = [](std::span<const double> x) {
    double s = 0.0;
    for (std::size_t n = 0; n + 1 < x.size(); ++n) {
      const double a = x[n + 1] - x[n] * x[n];
      const double b = x[n] - 1.0;
      s += 100.0 * a * a + b * b;
    }
    return s;
  };
  return Problem("rosenbrock", box(kN, -10.0, 10.0), cost,
                 KnownOptimum{std::vector<double>(kN, 1.0), 0.0});
}

Problem flat() {
  return Problem("flat", box(1, 0.0, 1.0), [](std::span<const double>) { return 0.0; });
}

}  // namespace

Problem make_harmonic(std::size_t dimension, double lo, double hi) {
  auto cost = [](std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += 0.5 * v * v;
    return s;
  };
  std::optional<KnownOptimum> opt;
  if (lo <= 0.0 && 0.0 <= hi) opt = KnownOptimum{std::vector<double>(dimension, 0.0), 0.0};
  return Problem("harmonic", box(dimension, lo, hi), cost, opt);
}

Problem make_benchmark(std::string_view name) {
  if (name == "schwefel") return schwefel();
  if (name == "levy5") return levy5();
  if (name == "booth") return booth();
  if (name == "colville") return colville(false);
  if (name == "colville-standard") return colville(true);
  if (name == "rosenbrock") return rosenbrock();
  if (name == "harmonic") return make_harmonic(1);
  if (name == "flat") return flat();
  throw UnknownProblem("unknown problem '" + std::string(name) + "'");
}

std::vector<std::string> benchmark_names() {
  return {"schwefel", "levy5", "booth", "colville", "colville-standard",
          "rosenbrock", "harmonic", "flat"};
}

double normalized_distance(std::span<const double> x, std::span<const double> y,
                           std::span<const Bound> bounds) {
  if (x.size() != y.size() || x.size() != bounds.size()) {
    throw DimensionError("normalized_distance: dimension mismatch");
  }
  double num = 0.0;
  double den = 0.0;
  for (std::size_t n = 0; n < x.size(); ++n) {
    const double d = x[n] - y[n];
    const double w = bounds[n].lo - bounds[n].hi;
    num += d * d;
    den += w * w;
  }
  return std::sqrt(num / den);
}

std::size_t flips_from_distance(double distance, std::size_t dimension) {
  return static_cast<std::size_t>(std::llround(static_cast<double>(dimension) * distance * distance));
}

}  // namespace fps
