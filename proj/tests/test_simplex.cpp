#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "fps/benchmarks.hpp"
#include "fps/error.hpp"
#include "fps/rng.hpp"
#include "fps/simplex.hpp"

using namespace fps;

namespace {

Problem sphere(std::size_t n, double lo = -10.0, double hi = 10.0) {
  return Problem("sphere", std::vector<Bound>(n, Bound{lo, hi}), [](std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return s;
  });
}

std::vector<std::vector<double>> axis_simplex(std::vector<double> base, double step) {
  std::vector<std::vector<double>> s{base};
  for (std::size_t i = 0; i < base.size(); ++i) {
    auto v = base;
    v[i] += step;
    s.push_back(v);
  }
  return s;
}

// Rank of the edge vectors v_i - v_0 by Gram-Schmidt.
std::size_t edge_rank(const std::vector<std::vector<double>>& s) {
  std::vector<std::vector<double>> basis;
  for (std::size_t i = 1; i < s.size(); ++i) {
    std::vector<double> e(s[0].size());
    for (std::size_t k = 0; k < e.size(); ++k) e[k] = s[i][k] - s[0][k];
    const double norm0 = std::sqrt(std::inner_product(e.begin(), e.end(), e.begin(), 0.0));
    for (const auto& b : basis) {
      const double d = std::inner_product(e.begin(), e.end(), b.begin(), 0.0);
      for (std::size_t k = 0; k < e.size(); ++k) e[k] -= d * b[k];
    }
    const double norm = std::sqrt(std::inner_product(e.begin(), e.end(), e.begin(), 0.0));
    if (norm > 1e-12 * std::max(1.0, norm0) && norm > 0.0) {
      for (auto& v : e) v /= norm;
      basis.push_back(e);
    }
  }
  return basis.size();
}

}  // namespace

TEST_CASE("SimplexConfig::validate") {
  CHECK_NOTHROW(SimplexConfig{}.validate(20));
  CHECK_THROWS_AS((SimplexConfig{0.0, 100}.validate(2)), ConfigError);
  CHECK_THROWS_AS((SimplexConfig{1e-3, 2}.validate(2)), ConfigError);
}

TEST_CASE("nelder_mead: sphere") {
  RngStream rng(1, 0);
  for (std::size_t n : {2, 5, 10}) {
    std::vector<double> start(n);
    for (auto& v : start) v = rng.uniform(-8, 8);
    const auto r = nelder_mead(sphere(n), axis_simplex(start, 1.0), SimplexConfig{});
    CAPTURE(n);
    CHECK(r.value < 1e-6);
  }
}

TEST_CASE("nelder_mead: Booth from a unit simplex at the origin") {
  const auto r = nelder_mead(make_benchmark("booth"), axis_simplex({0.0, 0.0}, 1.0),
                             SimplexConfig{1e-10, 50000});
  CHECK(std::abs(r.point[0] - 1.0) < 1e-3);
  CHECK(std::abs(r.point[1] - 3.0) < 1e-3);
}

TEST_CASE("nelder_mead: evaluation cap") {
  auto counter = std::make_shared<EvalCounter>(0);
  const auto p = with_eval_counter(sphere(3), counter);
  const auto r = nelder_mead(p, axis_simplex({5, 5, 5}, 1.0), SimplexConfig{1e-12, 5});
  CHECK(r.evals <= 5);
  CHECK(counter->load() == r.evals);
  counter->store(0);
  const auto big = nelder_mead(p, axis_simplex({5, 5, 5}, 1.0), SimplexConfig{1e-12, 777});
  CHECK(big.evals <= 777);
  CHECK(counter->load() == big.evals);
}

TEST_CASE("nelder_mead: stays in the box, best never worsens") {
  // Minimum outside the box, so the simplex pushes against the walls.
  Problem p("shifted", std::vector<Bound>(4, Bound{-1, 1}), [](std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += (v - 3.0) * (v - 3.0);
    return s;
  });
  auto start = axis_simplex({0.0, 0.0, 0.0, 0.0}, 0.9);
  const auto r = nelder_mead(p, start, SimplexConfig{1e-8, 5000});
  CHECK(p.contains(r.point));
  CHECK(r.value == doctest::Approx(16.0).epsilon(1e-3));
  CHECK(std::is_sorted(r.best_history.rbegin(), r.best_history.rend()));
  CHECK(r.value == p(r.point));
}

TEST_CASE("nelder_mead: Rosenbrock-20 results stay neat") {
  const auto p = make_benchmark("rosenbrock");
  RngStream rng(2, 0);
  std::vector<double> start(20);
  for (auto& v : start) v = rng.uniform(-2, 2);
  const auto r = nelder_mead(p, axis_simplex(start, 0.5), SimplexConfig{});
  CHECK(p.contains(r.point));
  CHECK(r.value <= p(start));
  CHECK(std::is_sorted(r.best_history.rbegin(), r.best_history.rend()));
}

TEST_CASE("nelder_mead: shape errors") {
  CHECK_THROWS_AS(nelder_mead(sphere(2), {{0, 0}, {1, 0}}, SimplexConfig{}), DimensionError);
  CHECK_THROWS_AS(nelder_mead(sphere(2), {{0, 0}, {1, 0}, {0}}, SimplexConfig{}), DimensionError);
}

TEST_CASE("fix_degenerate_simplex") {
  const std::vector<Bound> box(3, Bound{0, 1});
  std::vector<std::vector<double>> same(4, std::vector<double>{0.5, 0.5, 0.5});
  CHECK(fix_degenerate_simplex(same, box) == 3);
  CHECK(edge_rank(same) == 3);
  for (const auto& v : same) {
    for (std::size_t k = 0; k < 3; ++k) {
      CHECK(v[k] >= 0.0);
      CHECK(v[k] <= 1.0);
      CHECK(std::abs(v[k] - 0.5) <= 1.1e-8);
    }
  }

  // All four vertices lie in the plane z = 1 and the first three on a line;
  // vertex 2 and then vertex 3 need a push, and pushes go inwards.
  std::vector<std::vector<double>> line{{1, 1, 1}, {0.5, 1, 1}, {0.25, 1, 1}, {1, 0, 1}};
  CHECK(fix_degenerate_simplex(line, box) == 2);
  CHECK(edge_rank(line) == 3);
  for (const auto& v : line) CHECK(v[2] <= 1.0);

  auto good = axis_simplex({0.1, 0.2, 0.3}, 0.5);
  const auto copy = good;
  CHECK(fix_degenerate_simplex(good, box) == 0);
  CHECK(good == copy);
}

TEST_CASE("nelder_mead: degenerate start still converges") {
  std::vector<std::vector<double>> same(3, std::vector<double>{4.0, -3.0});
  const auto r = nelder_mead(sphere(2), same, SimplexConfig{1e-12, 20000});
  CHECK(r.value < 1e-6);
}
