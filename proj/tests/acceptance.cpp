// Acceptance suite: one PASS/FAIL line per criterion.
//
//   fps_acceptance          run every criterion
//   fps_acceptance 7 9      run the listed ones
//
// Exit status is 0 only when every selected criterion passes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "fps/benchmarks.hpp"
#include "fps/error.hpp"
#include "fps/estimator.hpp"
#include "fps/experiment.hpp"
#include "fps/expansion.hpp"
#include "fps/knapsack.hpp"
#include "fps/langevin.hpp"
#include "fps/marginal.hpp"
#include "fps/rng.hpp"
#include "json.hpp"
#include "oracles.hpp"

using namespace fps;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Detail {
 public:
  template <typename... Args>
  void add(const char* fmt, Args... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, fmt, args...);
    if (!text_.empty()) text_ += "; ";
    text_ += buf;
  }
  const std::string& str() const { return text_; }

 private:
  std::string text_;
};

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

EstimatorConfig est_config(std::size_t l, double d, std::size_t m = 300, bool early = true) {
  EstimatorConfig c;
  c.basis_size = l;
  c.diffusion = d;
  c.max_sweeps = m;
  c.early_stop = early;
  return c;
}

// Normalized pdf of the averaged expansion of coordinate n.
std::function<double(double)> normalized_pdf(const MarginalEstimate& est, std::size_t n) {
  const CdfExpansion e = est.mean_expansion(n);
  const double z = upper_value(e);
  return [e, z](double x) { return evaluate_pdf(e, x) / z; };
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("fps_acceptance_" + name);
  fs::remove_all(p);
  return p;
}

json read_json(const fs::path& p) {
  std::ifstream in(p);
  return json::parse(in);
}

// ---------------------------------------------------------------------------

Outcome criterion1() {
  Timer timer;
  const auto p = make_harmonic(1);
  const auto est = estimate_marginals(p, est_config(60, 1.0), RngStream(1, 0));
  const auto pdf = normalized_pdf(est, 0);
  const double secs = timer.seconds();
  oracle::Boltzmann ref([](double x) { return 0.5 * x * x; }, 1.0, -5.0, 5.0);
  double sup = 0.0;
  for (int i = 0; i <= 10000; ++i) {
    const double x = -5.0 + 1e-3 * i;
    sup = std::max(sup, std::abs(pdf(x) - ref.pdf(x)));
  }
  Detail d;
  d.add("sup|pdf - Boltzmann| = %.3g (<= 1e-3)", sup);
  d.add("runtime %.3f s (< 1 s)", secs);
  return {sup <= 1e-3 && secs < 1.0, d.str()};
}

Outcome criterion2() {
  Timer timer;
  const auto p = make_harmonic(1);
  const auto est = estimate_marginals(p, est_config(60, 1.0), RngStream(1, 0));
  const CdfExpansion e = est.mean_expansion(0);
  const double z = upper_value(e);

  LangevinOptions opt;  // 1e6 steps, dt 1e-3, burn-in 1e5, D = 1
  RngStream rng(2, 0);
  const auto xs = simulate_langevin(p, opt, rng).coordinate(0);

  const int bins = 50;
  std::vector<double> count(bins, 0.0);
  for (double x : xs) count[std::min(bins - 1, static_cast<int>((x + 5.0) / 10.0 * bins))] += 1;
  const double n = static_cast<double>(xs.size());
  const double tau = integrated_autocorrelation_time(xs);
  const double n_eff = n / (2.0 * tau);
  int outside = 0;
  double worst = 0.0;
  for (int b = 0; b < bins; ++b) {
    const double a = -5.0 + 10.0 * b / bins, c = -5.0 + 10.0 * (b + 1) / bins;
    const double prob = (evaluate_cdf(e, c) - evaluate_cdf(e, a)) / z;
    const double band = 3.0 * std::sqrt(std::max(prob * (1 - prob), 0.0) / n_eff);
    const double dev = std::abs(count[b] / n - prob);
    if (dev > band) ++outside;
    if (band > 0) worst = std::max(worst, dev / band);
  }
  const double secs = timer.seconds();
  Detail d;
  d.add("%d of 50 bins outside 3 sigma (tau %.1f, n_eff %.0f, worst %.2f of band)", outside, tau,
        n_eff, worst);
  d.add("runtime %.1f s (< 30 s)", secs);
  return {outside == 0 && secs < 30.0, d.str()};
}

Outcome criterion3() {
  Timer timer;
  const auto p = make_benchmark("schwefel");
  // D = 100: at smaller D the exp(V/D) weights reach 1e4 and finite
  // differencing alone moves coefficients by ~1e-9.
  const auto cfg = est_config(100, 100.0);
  std::map<std::size_t, std::vector<std::vector<double>>> per_coord;
  const auto observer = [&](std::size_t, std::size_t n, const CdfExpansion& e) {
    per_coord[n].push_back(e.coeffs);
  };
  const auto est = estimate_marginals(p, cfg, RngStream(1, 0), observer);
  double worst = 0.0;
  for (const auto& [n, sweeps] : per_coord) {
    for (const auto& c : sweeps) {
      for (std::size_t l = 0; l < c.size(); ++l) worst = std::max(worst, std::abs(c[l] - sweeps[0][l]));
    }
  }
  const auto& st = est.stats();
  const bool flag = st.stop_reason == StopReason::kConverged && st.sweeps == 2;
  const double secs = timer.seconds();
  Detail d;
  d.add("max coefficient change across sweeps %.2g (<= 1e-10)", worst);
  d.add("stopped %s after %zu sweeps (converged after 2)", to_string(st.stop_reason), st.sweeps);
  d.add("runtime %.2f s (< 10 s)", secs);
  return {worst <= 1e-10 && flag && secs < 10.0, d.str()};
}

Outcome criterion4() {
  Timer timer;
  const auto p = make_benchmark("schwefel");
  const double optimum = 420.9687;
  const double d_small = 50.0, d_large = 200.0;
  const auto small = estimate_marginals(p, est_config(100, d_small), RngStream(1, 0));
  const auto large = estimate_marginals(p, est_config(100, d_large), RngStream(1, 0));
  double worst_mode = 0.0;
  bool shorter = true;
  double max_ratio = 0.0;
  for (std::size_t n = 0; n < p.dimension(); ++n) {
    worst_mode = std::max(worst_mode, std::abs(marginal_mode(small, n) - optimum));
    const double ls = probability_interval(small, n, 0.95).length();
    const double ll = probability_interval(large, n, 0.95).length();
    shorter = shorter && ls < ll;
    max_ratio = std::max(max_ratio, ls / ll);
  }
  const double secs = timer.seconds();
  Detail d;
  d.add("D=%g: worst |mode - 420.9687| = %.3f (<= 1.0)", d_small, worst_mode);
  d.add("interval D=%g / D=%g at most %.3f (< 1 on every coordinate: %s)", d_small, d_large,
        max_ratio, shorter ? "yes" : "no");
  d.add("runtime %.1f s (< 30 s)", secs);
  return {worst_mode <= 1.0 && shorter && secs < 30.0, d.str()};
}

Outcome criterion5() {
  Timer timer;
  const auto p = make_benchmark("levy5");
  const auto est = estimate_marginals(p, est_config(200, 70.0, 300, false), RngStream(1, 0));
  const double target[2] = {-1.3, -1.42};
  double worst = 0.0;
  for (std::size_t n = 0; n < 2; ++n) {
    worst = std::max(worst, std::abs(marginal_mode(est, n) - target[n]));
  }
  const double secs = timer.seconds();
  Detail d;
  d.add("modes (%.4f, %.4f), worst deviation %.4f (<= 0.05)", marginal_mode(est, 0),
        marginal_mode(est, 1), worst);
  d.add("runtime %.1f s (< 300 s)", secs);
  return {worst <= 0.05 && secs < 300.0, d.str()};
}

Outcome criterion6() {
  const auto p = make_benchmark("booth");
  const auto est = estimate_marginals(p, est_config(100, 1e9, 5), RngStream(1, 0));
  double sup = 0.0, at = 0.0, interior = 0.0;
  for (std::size_t n = 0; n < p.dimension(); ++n) {
    const auto pdf = normalized_pdf(est, n);
    const Bound b = p.bound(n);
    for (int i = 0; i <= 2000; ++i) {
      const double x = b.lo + b.width() * i / 2000.0;
      const double dev = std::abs(pdf(x) * b.width() - 1.0);
      if (dev > sup) {
        sup = dev;
        at = x;
      }
      if (i <= 1800) interior = std::max(interior, dev);
    }
  }
  Detail d;
  d.add("sup relative deviation from uniform %.3g at x=%.2f (<= 1e-3)", sup, at);
  d.add("over the lower 90%% of the box %.3g", interior);
  return {sup <= 1e-3, d.str()};
}

Outcome criterion7() {
  struct Case {
    const char* name;
    EstimatorConfig cfg;
  };
  auto colville = est_config(200, 5.0, 300, false);
  colville.burn_in = 20;
  const Case cases[] = {{"booth", est_config(100, 1.0, 300, false)}, {"colville", colville}};
  Outcome out;
  Detail d;
  for (const auto& c : cases) {
    Timer timer;
    const auto p = make_benchmark(c.name);
    const auto est = estimate_marginals(p, c.cfg, RngStream(1, 0));
    const auto& opt = p.known_optimum()->point;
    bool contained = true;
    double worst = 0.0;
    for (std::size_t n = 0; n < p.dimension(); ++n) {
      const Interval iv = probability_interval(est, n, 0.95);
      contained = contained && iv.lo <= opt[n] && opt[n] <= iv.hi;
      worst = std::max(worst, std::abs(marginal_mode(est, n) - opt[n]) / p.bound(n).width());
    }
    const double secs = timer.seconds();
    d.add("%s L=%zu D=%g: optimum in HDI %s, worst mode error %.2f%% of range (<= 5%%), %.1f s",
          c.name, c.cfg.basis_size, c.cfg.diffusion, contained ? "yes" : "no", 100 * worst, secs);
    out.pass = out.pass && contained && worst <= 0.05 && secs < 120.0;
  }
  out.detail = d.str();
  return out;
}

Outcome criterion8() {
  const KnapsackInstance inst{{2.0, 3.0, 5.0}, {3.0, 5.0, 7.0}, 10.0};
  const BarrierParams barrier{10.0, 10.0, 10.0, 1.0, 2.0};
  const auto p = knapsack_transform(inst, barrier);
  const auto est = estimate_marginals(p, est_config(100, 1.0, 300, false),
                                      RngStream(1, stream_id(0, StreamRole::kChain)));
  const auto rounded = round_to_binary(joint_mode(est));
  const auto exact = solve_knapsack_exact(inst, choose_weight_scale(inst));
  const std::vector<int> expected{1, 0, 1};
  Detail d;
  d.add("rounded mode (%d,%d,%d)", rounded[0], rounded[1], rounded[2]);
  d.add("DP (%d,%d,%d) value %g", exact.x[0], exact.x[1], exact.x[2], exact.value);
  d.add("%s", "barrier k1=10 b1=1 b2=2b1, L=100 D=1 M=300");
  return {rounded == expected && exact.x == expected && exact.value == 7.0, d.str()};
}

struct RowResult {
  std::size_t hamming;
  std::size_t gap_flips;
  double interval;
  std::size_t interval_flips;
};

RowResult run_table_row(double r, double c, const BarrierParams& b, double diffusion,
                        std::uint64_t seed) {
  ExperimentConfig cfg;
  cfg.verb = Verb::kKnapsack;
  cfg.knapsack_n = 30;
  cfg.knapsack_r = r;
  cfg.knapsack_c = c;
  cfg.barrier = b;
  cfg.estimator = est_config(100, diffusion, 300, false);
  cfg.seed = seed;
  cfg.out = scratch("row_" + std::to_string(static_cast<int>(r)) + "_" + std::to_string(seed));
  const auto art = run_experiment(cfg);
  if (!art.ok()) throw Error(art.replicates[0].error);
  const json s = read_json(art.replicates[0].directory / "summary.json");
  fs::remove_all(cfg.out);
  return {s["knapsack"]["hamming"].get<std::size_t>(),
          s["knapsack"]["gap_rounded_flips"].get<std::size_t>(),
          s["joint"]["interval_normalized"].get<double>(),
          s["joint"]["interval_flips"].get<std::size_t>()};
}

Outcome criterion9() {
  Timer timer;
  Detail d;
  int passing = 0;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const auto row = run_table_row(10, 100, BarrierParams{10, 7.1, 10, 0.01, 0.02}, 1.0, seed);
    const bool ok = row.hamming <= 2 && std::abs(row.interval - 0.425) <= 0.1;
    passing += ok;
    d.add("row 1 seed %llu: %zu flips from DP (<= 2), interval %.3f/%zu (0.425 +- 0.1) %s",
          static_cast<unsigned long long>(seed), row.hamming, row.interval, row.interval_flips,
          ok ? "ok" : "miss");
  }
  const double secs = timer.seconds();
  d.add("row 1 %d of 3 seeds, %.0f s (< 600 s)", passing, secs);
  bool bands = true;
  struct Row {
    double r, c, d;
    BarrierParams b;
  };
  const Row rows[] = {{100, 500, 15, {100, 37.0, 10, 0.001, 0.003}},
                      {1000, 3000, 100, {1000, 315.0, 10, 0.0001, 0.0003}}};
  int index = 2;
  for (const auto& row : rows) {
    const auto res = run_table_row(row.r, row.c, row.b, row.d, 1);
    bands = bands && res.hamming <= 6;
    d.add("row %d: %zu flips from DP (<= 6), interval %.3f/%zu", index++, res.hamming,
          res.interval, res.interval_flips);
  }
  return {passing >= 2 && secs < 600.0 && bands, d.str()};
}

Outcome criterion10() {
  const std::pair<double, std::size_t> pairs[] = {{0.425, 5}, {0.185, 1}, {0.432, 6},
                                                  {0.363, 4}, {0.433, 6}, {0.257, 2}};
  Outcome out;
  Detail d;
  for (const auto& [dist, flips] : pairs) {
    const std::size_t got = flips_from_distance(dist, 30);
    d.add("%.3f->%zu%s", dist, got, got == flips ? "" : " (wrong)");
    out.pass = out.pass && got == flips;
  }
  out.detail = d.str();
  return out;
}

Outcome criterion11() {
  Timer timer;
  ExperimentConfig cfg;
  cfg.verb = Verb::kHybrid;
  cfg.problem = "rosenbrock";
  cfg.estimator = est_config(30, 10000.0);
  cfg.hybrid.iterations = 100;
  cfg.hybrid.scheme = PopulationScheme::kAxis;
  cfg.ablation = true;
  cfg.replicates = 10;
  cfg.seed = 1;
  cfg.out = scratch("hybrid");
  const auto art = run_experiment(cfg);
  int success = 0, beats = 0;
  for (const auto& rep : art.replicates) {
    if (!rep.ok) continue;
    const json s = read_json(rep.directory / "summary.json");
    success += s["guided"]["success"].get<bool>();
    beats += s["guided_beats_uniform"].get<bool>();
  }
  fs::remove_all(cfg.out);
  const double secs = timer.seconds();
  Detail d;
  d.add("%d of 10 reach gap < 1e-3 (>= 5)", success);
  d.add("%d of 10 beat the uniform ablation (>= 8)", beats);
  d.add("runtime %.0f s (< 1800 s)", secs);
  return {art.ok() && success >= 5 && beats >= 8 && secs < 1800.0, d.str()};
}

// Linear interpolation of a repaired table at x.
double table_cdf(const SampledCdf& t, double x) {
  const double pos = (x - t.lo) / t.spacing();
  const auto i = std::min(static_cast<std::size_t>(std::max(pos, 0.0)), t.size() - 2);
  const double f = std::clamp(pos - static_cast<double>(i), 0.0, 1.0);
  return t.values[i] + f * (t.values[i + 1] - t.values[i]);
}

std::uint64_t fnv1a(const std::string& bytes, std::uint64_t h = 1469598103934665603ULL) {
  for (unsigned char c : bytes) h = (h ^ c) * 1099511628211ULL;
  return h;
}

std::uint64_t tree_hash(const fs::path& root) {
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) files.push_back(fs::relative(e.path(), root));
  }
  std::sort(files.begin(), files.end());
  std::uint64_t h = fnv1a("");
  for (const auto& f : files) {
    std::ifstream in(root / f, std::ios::binary);
    h = fnv1a(f.string(), h);
    h = fnv1a(std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()), h);
  }
  return h;
}

std::string cli_path(const char* argv0) {
  if (const char* env = std::getenv("FPS_CLI")) return env;
  const fs::path guess = fs::absolute(argv0).parent_path().parent_path() / "tools" / "fps";
  return fs::exists(guess) ? guess.string() : std::string();
}

Outcome criterion12(const char* argv0) {
  Outcome out;
  Detail d;

  // Moments against composite Simpson on conditionals of random potentials.
  RngStream rng(2718, 0);
  double worst_moment = 0.0;
  for (int accepted = 0; accepted < 100;) {
    const double lo = rng.uniform(-10.0, 5.0);
    const double hi = lo + rng.uniform(0.5, 20.0);
    const auto l = static_cast<std::size_t>(8 + rng.uniform() * 72);
    const double c1 = rng.uniform(0.0, 3.0), c2 = rng.uniform(-2.0, 2.0);
    const double w = rng.uniform(0.1, 3.0), m0 = rng.uniform(lo, hi);
    Problem p("random", {Bound{lo, hi}}, [=](std::span<const double> x) {
      return c1 * (x[0] - m0) * (x[0] - m0) / (hi - lo) + c2 * std::sin(w * x[0]);
    });
    std::vector<double> x0{lo};
    const auto e = build_conditional_cdf(p, x0, 0, est_config(l, rng.uniform(0.2, 5.0)));
    if (tabulate_and_repair(e, 4096).max_correction > 0.0) continue;  // not a density
    ++accepted;
    const Moments m = expansion_moments(e);
    auto pdf = [&](double t) { return oracle::series_pdf(e.coeffs, lo, hi, t); };
    const double z = oracle::simpson(pdf, lo, hi);
    const double mean = oracle::simpson([&](double t) { return t * pdf(t); }, lo, hi) / z;
    const double var =
        oracle::simpson([&](double t) { return (t - mean) * (t - mean) * pdf(t); }, lo, hi) / z;
    worst_moment = std::max(worst_moment, std::abs(m.mean - mean) / std::max(std::abs(mean), hi - lo));
    worst_moment = std::max(worst_moment, std::abs(m.sigma - std::sqrt(var)) / std::sqrt(var));
  }
  d.add("moments worst relative error %.2g (<= 1e-8)", worst_moment);
  out.pass = out.pass && worst_moment <= 1e-8;

  // Inverse-transform sampler: KS distance of 1e5 draws on 20 tables.
  const double ks_bound = 1.36 / std::sqrt(1e5) * 1.5;
  double worst_ks = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    RngStream gen(seed, 100);
    std::vector<double> raw(64 + seed * 37);
    double acc = 0.0;
    for (std::size_t i = 1; i < raw.size(); ++i) {
      const double u = gen.uniform();
      acc += u < 0.1 ? 0.0 : u * u;
      raw[i] = acc;
    }
    for (auto& r : raw) r /= acc;
    const auto t = repair_table(-1.0, 1.0 + static_cast<double>(seed), raw);
    RngStream srng(seed, 0);
    std::vector<double> draws(100000);
    for (auto& x : draws) x = sample_inverse(t, srng);
    std::sort(draws.begin(), draws.end());
    const double n = static_cast<double>(draws.size());
    for (std::size_t i = 0; i < draws.size(); ++i) {
      const double f = table_cdf(t, draws[i]);
      worst_ks = std::max({worst_ks, std::abs(f - i / n), std::abs((i + 1) / n - f)});
    }
  }
  d.add("KS worst %.4f on 20 tables (< %.4f)", worst_ks, ks_bound);
  out.pass = out.pass && worst_ks < ks_bound;

  // Every estimation run spends exactly 2(L-1)N evaluations per sweep.
  int runs = 0, exact = 0;
  struct Run {
    const char* name;
    std::size_t l;
    double diffusion;
    std::size_t m;
    bool early;
  };
  const Run accounting[] = {{"harmonic", 60, 1.0, 300, true},   {"schwefel", 100, 100.0, 300, true},
                            {"levy5", 50, 70.0, 20, false},     {"booth", 40, 1.0, 10, false},
                            {"colville", 30, 5.0, 10, false},   {"rosenbrock", 20, 1e4, 3, false},
                            {"flat", 10, 1.0, 300, true}};
  for (const auto& r : accounting) {
    auto counter = std::make_shared<EvalCounter>(0);
    const Problem base = make_benchmark(r.name);
    const Problem p = with_eval_counter(base, counter);
    const auto est = estimate_marginals(p, est_config(r.l, r.diffusion, r.m, r.early), RngStream(3, 0));
    const std::uint64_t expected = 2 * (r.l - 1) * base.dimension() * est.stats().sweeps;
    ++runs;
    exact += counter->load() == expected && est.stats().cost_evaluations == expected;
  }
  d.add("evaluation accounting exact on %d of %d runs", exact, runs);
  out.pass = out.pass && exact == runs;

  // Two identical CLI runs hash to the same artifact tree.
  const std::string cli = cli_path(argv0);
  if (cli.empty()) {
    d.add("%s", "CLI not found (set FPS_CLI)");
    out.pass = false;
  } else {
    std::uint64_t hashes[2];
    bool ran = true;
    for (int i = 0; i < 2; ++i) {
      const fs::path dir = scratch("determinism_" + std::to_string(i));
      const std::string cmd = cli + " knapsack --L 30 --D 1 --M 20 --replicates 2 --seed 5 --out " +
                              dir.string() + " >/dev/null 2>&1";
      ran = ran && std::system(cmd.c_str()) == 0;
      hashes[i] = ran ? tree_hash(dir) : i;
      fs::remove_all(dir);
    }
    d.add("CLI artifact hashes %016llx / %016llx", static_cast<unsigned long long>(hashes[0]),
          static_cast<unsigned long long>(hashes[1]));
    out.pass = out.pass && ran && hashes[0] == hashes[1];
  }
  out.detail = d.str();
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  const std::map<int, std::function<Outcome()>> criteria = {
      {1, criterion1},   {2, criterion2},   {3, criterion3},  {4, criterion4},
      {5, criterion5},   {6, criterion6},   {7, criterion7},  {8, criterion8},
      {9, criterion9},   {10, criterion10}, {11, criterion11},
      {12, [&] { return criterion12(argv[0]); }}};

  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    const int id = std::atoi(argv[i]);
    if (!criteria.count(id)) {
      std::fprintf(stderr, "unknown criterion '%s' (1-12)\n", argv[i]);
      return 64;
    }
    selected.push_back(id);
  }
  if (selected.empty()) {
    for (const auto& [id, fn] : criteria) selected.push_back(id);
  }

  int failed = 0;
  for (int id : selected) {
    Outcome o;
    try {
      o = criteria.at(id)();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s criterion %d: %s\n", o.pass ? "PASS" : "FAIL", id, o.detail.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
