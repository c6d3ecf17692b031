#include "fps/knapsack.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <string>
#include <system_error>
#include <vector>

#include "fps/error.hpp"

namespace fps {

void KnapsackInstance::validate() const {
  if (profit.size() != weight.size() || profit.empty()) {
    throw DimensionError("knapsack: profit and weight must be non-empty and equally long");
  }
  for (std::size_t n = 0; n < profit.size(); ++n) {
    if (!(profit[n] > 0.0) || !(weight[n] > 0.0)) {
      throw DomainError("knapsack: item " + std::to_string(n) + " needs q > 0 and w > 0");
    }
  }
  if (!(capacity > 0.0)) throw DomainError("knapsack: capacity must be positive");
}

void BarrierParams::validate() const {
  if (!(k0 > 0.0)) throw ConfigError("k0: must be positive");
  if (!(k1 > 0.0)) throw ConfigError("k1: must be positive");
  if (!(b0 > 0.0)) throw ConfigError("b0: must be positive");
  if (!(b1 > 0.0)) throw ConfigError("b1: must be positive");
  if (!(b2 > 0.0)) throw ConfigError("b2: must be positive");
}

Problem knapsack_transform(const KnapsackInstance& instance, const BarrierParams& params) {
  instance.validate();
  params.validate();
  auto cost = [inst = instance, p = params](std::span<const double> x) {
    double objective = 0.0;
    double binary = 0.0;
    double load = 0.0;
    for (std::size_t n = 0; n < x.size(); ++n) {
      objective -= inst.profit[n] * x[n];
      binary += 1.0 / (1.0 + std::exp(-p.b0 * (x[n] - x[n] * x[n])));
      load += inst.weight[n] * x[n];
    }
    const double slack = load - inst.capacity;
    const double capacity_term =
        (std::exp(p.b1 * slack) - 1.0) / (std::exp(-p.b2 * slack) + 1.0);
    return objective + p.k0 * binary + p.k1 * capacity_term;
  };
  return Problem("knapsack", std::vector<Bound>(instance.size(), Bound{0.0, 1.0}), cost);
}

KnapsackInstance generate_instance(std::size_t n, double r, double c, RngStream& rng,
                                   int weight_decimals) {
  if (n == 0) throw DomainError("generate_instance: N must be positive");
  if (!(r > 1.0)) throw DomainError("generate_instance: R must exceed 1");
  if (!(c > 0.0)) throw DomainError("generate_instance: c must be positive");
  KnapsackInstance inst;
  inst.capacity = c;
  inst.profit.reserve(n);
  inst.weight.reserve(n);
  const double quantum = weight_decimals >= 0 ? std::pow(10.0, weight_decimals) : 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double w = rng.uniform(1.0, r);
    if (quantum > 0.0) w = std::round(w * quantum) / quantum;
    const double eps = rng.uniform(-1.0, 1.0);
    inst.weight.push_back(w);
    inst.profit.push_back(w + (eps - 1.0) * r / 100.0 + r / 10.0);
  }
  return inst;
}

int default_weight_decimals(double r) {
  if (!(r > 1.0)) return 4;
  return std::max(0, 4 - static_cast<int>(std::ceil(std::log10(r) - 1e-12)));
}

std::int64_t choose_weight_scale(const KnapsackInstance& instance, int max_decimals) {
  std::int64_t scale = 1;
  for (int k = 0; k <= max_decimals; ++k, scale *= 10) {
    bool integral = true;
    for (double w : instance.weight) {
      const double s = w * static_cast<double>(scale);
      if (std::abs(s - std::round(s)) > 1e-9 * std::max(1.0, std::abs(s))) {
        integral = false;
        break;
      }
    }
    if (integral) return scale;
  }
  throw OracleTooLarge("choose_weight_scale: weights need more than " +
                       std::to_string(max_decimals) + " decimals");
}

KnapsackSolution solve_knapsack_exact(const KnapsackInstance& instance, std::int64_t weight_scale,
                                      std::size_t max_cells) {
  instance.validate();
  if (weight_scale < 1) throw DomainError("solve_knapsack_exact: weight_scale must be >= 1");
  const std::size_t n = instance.size();
  const double scale = static_cast<double>(weight_scale);
  const double scaled_cap = std::floor(instance.capacity * scale + 1e-9);
  if (scaled_cap > static_cast<double>(max_cells)) {
    throw OracleTooLarge("solve_knapsack_exact: scaled capacity too large");
  }
  const auto cap = static_cast<std::size_t>(scaled_cap);
  if ((cap + 1) > max_cells / n) {
    throw OracleTooLarge("solve_knapsack_exact: N * (capacity + 1) exceeds the cell budget");
  }
  std::vector<std::size_t> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = static_cast<std::size_t>(std::llround(instance.weight[i] * scale));
  }

  // best[c]: max profit with load <= c over the items seen so far;
  // take[i][c]: item i improved best[c].
  std::vector<double> best(cap + 1, 0.0);
  std::vector<std::vector<bool>> take(n, std::vector<bool>(cap + 1, false));
  for (std::size_t i = 0; i < n; ++i) {
    if (w[i] > cap) continue;
    for (std::size_t c = cap + 1; c-- > w[i];) {
      const double with = best[c - w[i]] + instance.profit[i];
      if (with > best[c]) {
        best[c] = with;
        take[i][c] = true;
      }
    }
  }

  KnapsackSolution sol;
  sol.x.assign(n, 0);
  std::size_t c = cap;
  for (std::size_t i = n; i-- > 0;) {
    if (take[i][c]) {
      sol.x[i] = 1;
      c -= w[i];
    }
  }
  sol.value = knapsack_profit(instance, sol.x);
  return sol;
}

std::vector<int> round_to_binary(std::span<const double> x) {
  std::vector<int> out;
  out.reserve(x.size());
  for (double v : x) out.push_back(v >= 0.5 ? 1 : 0);
  return out;
}

double knapsack_profit(const KnapsackInstance& instance, std::span<const int> x) {
  double s = 0.0;
  for (std::size_t n = 0; n < x.size(); ++n) s += x[n] ? instance.profit[n] : 0.0;
  return s;
}

double knapsack_weight(const KnapsackInstance& instance, std::span<const int> x) {
  double s = 0.0;
  for (std::size_t n = 0; n < x.size(); ++n) s += x[n] ? instance.weight[n] : 0.0;
  return s;
}

namespace {

std::string shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& token) {
  double v = 0.0;
  const auto res = std::from_chars(token.data(), token.data() + token.size(), v);
  if (res.ec != std::errc() || res.ptr != token.data() + token.size()) {
    throw IoError("instance: cannot parse number '" + token + "'");
  }
  return v;
}

}  // namespace

void write_instance(std::ostream& out, const KnapsackInstance& instance) {
  out << instance.size() << '\n' << shortest(instance.capacity) << '\n';
  for (std::size_t n = 0; n < instance.size(); ++n) {
    out << shortest(instance.profit[n]) << ' ' << shortest(instance.weight[n]) << '\n';
  }
}

KnapsackInstance read_instance(std::istream& in) {
  std::string token;
  std::size_t n = 0;
  if (!(in >> n) || n == 0) throw IoError("instance: missing item count");
  KnapsackInstance inst;
  if (!(in >> token)) throw IoError("instance: missing capacity");
  inst.capacity = parse_double(token);
  for (std::size_t i = 0; i < n; ++i) {
    std::string q;
    std::string w;
    if (!(in >> q >> w)) throw IoError("instance: missing item " + std::to_string(i));
    inst.profit.push_back(parse_double(q));
    inst.weight.push_back(parse_double(w));
  }
  inst.validate();
  return inst;
}

}  // namespace fps
