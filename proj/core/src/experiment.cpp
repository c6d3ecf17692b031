#include "fps/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <memory>
#include <sstream>
#include <string_view>
#include <system_error>

#include "fps/benchmarks.hpp"
#include "fps/error.hpp"
#include "fps/marginal.hpp"
#include "json.hpp"

namespace fps {

namespace fs = std::filesystem;
using nlohmann::json;

const char* to_string(Verb verb) {
  switch (verb) {
    case Verb::kEstimate:
      return "estimate";
    case Verb::kHybrid:
      return "hybrid";
    case Verb::kKnapsack:
      return "knapsack";
  }
  return "unknown";
}

void ExperimentConfig::validate() const {
  estimator.validate();
  if (replicates < 1) throw ConfigError("replicates: must be >= 1");
  if (verb == Verb::kKnapsack) {
    barrier.validate();
    if (!illustrative && instance_file.empty()) {
      if (knapsack_n < 1) throw ConfigError("N: must be >= 1");
      if (!(knapsack_r > 1.0)) throw ConfigError("R: must exceed 1");
      if (!(knapsack_c > 0.0)) throw ConfigError("c: must be positive");
    }
  }
  if (verb == Verb::kHybrid) {
    if (hybrid.iterations < 1) throw ConfigError("iterations: must be >= 1");
    if (!(simplex.ftol > 0.0)) throw ConfigError("ftol: must be positive");
    if (!(hybrid.success_gap > 0.0)) throw ConfigError("success_gap: must be positive");
  } else if (problem.empty()) {
    throw ConfigError("problem: must not be empty");
  }
}

bool RunArtifacts::ok() const {
  return std::all_of(replicates.begin(), replicates.end(),
                     [](const ReplicateResult& r) { return r.ok; });
}

// ---------------------------------------------------------------------------
// key = value configuration

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::string shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double to_double(const std::string& key, const std::string& value) {
  double v = 0.0;
  const auto res = std::from_chars(value.data(), value.data() + value.size(), v);
  if (value.empty() || res.ec != std::errc() || res.ptr != value.data() + value.size() ||
      !std::isfinite(v)) {
    throw ConfigError(key + ": expected a number, got '" + value + "'");
  }
  return v;
}

template <class Int>
Int to_integer(const std::string& key, const std::string& value) {
  Int v{};
  const auto res = std::from_chars(value.data(), value.data() + value.size(), v);
  if (value.empty() || res.ec != std::errc() || res.ptr != value.data() + value.size()) {
    throw ConfigError(key + ": expected a non-negative integer, got '" + value + "'");
  }
  return v;
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  throw ConfigError(key + ": expected a boolean, got '" + value + "'");
}

}  // namespace

KeyValues parse_key_values(const std::string& text) {
  KeyValues out;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    }
    std::string key = trim(std::string_view(stripped).substr(0, eq));
    std::string value = trim(std::string_view(stripped).substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    if (!out.emplace(key, value).second) throw ConfigError(key + ": given twice");
  }
  return out;
}

KeyValues read_key_values(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_key_values(text.str());
}

void apply_key_values(ExperimentConfig& config, const KeyValues& values) {
  auto& est = config.estimator;
  std::optional<std::string> b2_expr;
  for (const auto& [key, value] : values) {
    if (key == "verb") {
      if (value == "estimate") config.verb = Verb::kEstimate;
      else if (value == "hybrid") config.verb = Verb::kHybrid;
      else if (value == "knapsack") config.verb = Verb::kKnapsack;
      else throw ConfigError("verb: unknown verb '" + value + "'");
    } else if (key == "problem") {
      config.problem = value;
    } else if (key == "N") {
      config.knapsack_n = to_integer<std::size_t>(key, value);
    } else if (key == "R") {
      config.knapsack_r = to_double(key, value);
    } else if (key == "c") {
      config.knapsack_c = to_double(key, value);
    } else if (key == "instance") {
      config.instance_file = value;
    } else if (key == "illustrative") {
      config.illustrative = to_bool(key, value);
    } else if (key == "k0") {
      config.barrier.k0 = to_double(key, value);
    } else if (key == "k1") {
      config.barrier.k1 = to_double(key, value);
    } else if (key == "b0") {
      config.barrier.b0 = to_double(key, value);
    } else if (key == "b1") {
      config.barrier.b1 = to_double(key, value);
    } else if (key == "b2") {
      b2_expr = value;
    } else if (key == "L") {
      est.basis_size = to_integer<std::size_t>(key, value);
    } else if (key == "D") {
      est.diffusion = to_double(key, value);
    } else if (key == "M") {
      est.max_sweeps = to_integer<std::size_t>(key, value);
    } else if (key == "table_size") {
      est.table_size = to_integer<std::size_t>(key, value);
    } else if (key == "conv_tol") {
      est.conv_tol = to_double(key, value);
    } else if (key == "early_stop") {
      est.early_stop = to_bool(key, value);
    } else if (key == "burn_in") {
      est.burn_in = to_integer<std::size_t>(key, value);
    } else if (key == "interval_mass") {
      est.interval_mass = to_double(key, value);
    } else if (key == "ftol") {
      config.simplex.ftol = to_double(key, value);
    } else if (key == "max_evals") {
      config.simplex.max_evals = to_integer<std::size_t>(key, value);
    } else if (key == "iterations") {
      config.hybrid.iterations = to_integer<std::size_t>(key, value);
    } else if (key == "population") {
      if (value == "uniform") config.hybrid.scheme = PopulationScheme::kUniformAroundBest;
      else if (value == "axis") config.hybrid.scheme = PopulationScheme::kAxis;
      else throw ConfigError("population: expected 'uniform' or 'axis'");
    } else if (key == "guide") {
      if (value == "estimated") config.hybrid.guide = DensityGuide::kEstimated;
      else if (value == "uniform") config.hybrid.guide = DensityGuide::kUniform;
      else throw ConfigError("guide: expected 'estimated' or 'uniform'");
    } else if (key == "ablation") {
      config.ablation = to_bool(key, value);
    } else if (key == "success_gap") {
      config.hybrid.success_gap = to_double(key, value);
    } else if (key == "replicates") {
      config.replicates = to_integer<std::size_t>(key, value);
    } else if (key == "seed") {
      config.seed = to_integer<std::uint64_t>(key, value);
    } else if (key == "out") {
      config.out = value;
    } else {
      throw ConfigError(key + ": unknown key");
    }
  }
  if (b2_expr) {
    const std::string& v = *b2_expr;
    if (v.size() >= 2 && v.compare(v.size() - 2, 2, "b1") == 0) {
      const std::string mult = trim(std::string_view(v).substr(0, v.size() - 2));
      const double m = mult.empty() ? 1.0 : to_double("b2", mult);
      config.barrier.b2 = m * config.barrier.b1;
    } else {
      config.barrier.b2 = to_double("b2", v);
    }
  }
}

std::string serialize_config(const ExperimentConfig& config) {
  const auto& est = config.estimator;
  std::ostringstream o;
  auto b = [](bool v) { return v ? "true" : "false"; };
  o << "verb = " << to_string(config.verb) << '\n'
    << "problem = " << config.problem << '\n'
    << "N = " << config.knapsack_n << '\n'
    << "R = " << shortest(config.knapsack_r) << '\n'
    << "c = " << shortest(config.knapsack_c) << '\n';
  if (!config.instance_file.empty()) o << "instance = " << config.instance_file << '\n';
  o << "illustrative = " << b(config.illustrative) << '\n'
    << "k0 = " << shortest(config.barrier.k0) << '\n'
    << "k1 = " << shortest(config.barrier.k1) << '\n'
    << "b0 = " << shortest(config.barrier.b0) << '\n'
    << "b1 = " << shortest(config.barrier.b1) << '\n'
    << "b2 = " << shortest(config.barrier.b2) << '\n'
    << "L = " << est.basis_size << '\n'
    << "D = " << shortest(est.diffusion) << '\n'
    << "M = " << est.max_sweeps << '\n'
    << "table_size = " << est.table_size << '\n'
    << "conv_tol = " << shortest(est.conv_tol) << '\n'
    << "early_stop = " << b(est.early_stop) << '\n'
    << "burn_in = " << est.burn_in << '\n'
    << "interval_mass = " << shortest(est.interval_mass) << '\n'
    << "ftol = " << shortest(config.simplex.ftol) << '\n'
    << "max_evals = " << config.simplex.max_evals << '\n'
    << "iterations = " << config.hybrid.iterations << '\n'
    << "population = "
    << (config.hybrid.scheme == PopulationScheme::kAxis ? "axis" : "uniform") << '\n'
    << "guide = " << (config.hybrid.guide == DensityGuide::kUniform ? "uniform" : "estimated")
    << '\n'
    << "ablation = " << b(config.ablation) << '\n'
    << "success_gap = " << shortest(config.hybrid.success_gap) << '\n'
    << "replicates = " << config.replicates << '\n'
    << "seed = " << config.seed << '\n';
  return o.str();
}

// ---------------------------------------------------------------------------
// artifacts

namespace {

void write_file(const fs::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << contents;
  if (!out) throw IoError("write failed for " + path.string());
}

std::string replicate_dir_name(std::size_t r) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "rep_%03zu", r);
  return buf;
}

json estimator_json(const EstimatorConfig& est) {
  return {{"L", est.basis_size},        {"D", est.diffusion},
          {"M", est.max_sweeps},        {"table_size", est.table_size},
          {"conv_tol", est.conv_tol},   {"early_stop", est.early_stop},
          {"burn_in", est.burn_in},     {"interval_mass", est.interval_mass}};
}

struct DensityReport {
  json body;
  std::vector<double> mode;
  std::vector<double> interval_lo;
  std::vector<double> interval_hi;
};

// Per-variable and joint measures of a finished estimate.
DensityReport density_report(const Problem& problem, const MarginalEstimate& est,
                             const EstimatorConfig& config, std::uint64_t evaluations) {
  DensityReport rep;
  const std::size_t dim = est.dimension();
  const auto& stats = est.stats();
  json vars = json::array();
  for (std::size_t n = 0; n < dim; ++n) {
    const double mode = marginal_mode(est, n);
    const Moments mom = analytic_moments(est, n);
    const Interval iv = probability_interval(est, n, config.interval_mass);
    rep.mode.push_back(mode);
    rep.interval_lo.push_back(iv.lo);
    rep.interval_hi.push_back(iv.hi);
    vars.push_back({{"index", n},
                    {"lo", est.bounds()[n].lo},
                    {"hi", est.bounds()[n].hi},
                    {"mode", mode},
                    {"mean", mom.mean},
                    {"sigma", mom.sigma},
                    {"interval", {iv.lo, iv.hi}},
                    {"interval_length_normalized", iv.length() / est.bounds()[n].width()}});
  }
  const double joint_interval = normalized_distance(rep.interval_lo, rep.interval_hi, est.bounds());
  json joint = {{"mode", rep.mode},
                {"interval_normalized", joint_interval},
                {"interval_flips", flips_from_distance(joint_interval, dim)}};
  if (const auto& opt = problem.known_optimum()) {
    const double d = normalized_distance(rep.mode, opt->point, est.bounds());
    json contained = json::array();
    for (std::size_t n = 0; n < dim; ++n) {
      contained.push_back(rep.interval_lo[n] <= opt->point[n] && opt->point[n] <= rep.interval_hi[n]);
    }
    joint["optimum_distance"] = d;
    joint["optimum_flips"] = flips_from_distance(d, dim);
    joint["optimum_in_interval"] = contained;
  }
  const std::uint64_t per_sweep = 2 * (config.basis_size - 1) * dim;
  rep.body = {{"stop_reason", to_string(stats.stop_reason)},
              {"sweeps", stats.sweeps},
              {"samples", est.samples()},
              {"cost_evaluations", evaluations},
              {"expected_evaluations", per_sweep * stats.sweeps},
              {"repair",
               {{"conditionals", stats.conditionals},
                {"repaired", stats.repaired_conditionals},
                {"warning", stats.repair_warning},
                {"message", stats.warning}}},
              {"variables", vars},
              {"joint", joint}};
  return rep;
}

std::string trace_csv(const HybridReport& report) {
  std::string out = "iteration,best_value,evals\n";
  for (const auto& e : report.trace) {
    out += std::to_string(e.iteration) + ',' + shortest(e.best_value) + ',' +
           std::to_string(e.evals_used) + '\n';
  }
  return out;
}

json hybrid_json(const HybridReport& report, const Problem& problem) {
  json j = {{"best_point", report.best_point},
            {"best_value", report.best_value},
            {"total_evals", report.total_evals},
            {"success", report.success},
            {"success_iteration", report.success_iteration ? json(*report.success_iteration)
                                                          : json(nullptr)}};
  if (const auto& opt = problem.known_optimum()) j["gap"] = report.best_value - opt->value;
  return j;
}

KnapsackInstance illustrative_instance() {
  return KnapsackInstance{{2.0, 3.0, 5.0}, {3.0, 5.0, 7.0}, 10.0};
}

std::string fixed3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

struct ReplicateOutput {
  json summary;
  std::string table_row;
};

ReplicateOutput run_estimate(const ExperimentConfig& config, std::size_t r, const fs::path& dir) {
  const Problem base = make_benchmark(config.problem);
  auto counter = std::make_shared<EvalCounter>(0);
  const Problem problem = with_eval_counter(base, counter);
  const MarginalEstimate est = estimate_marginals(
      problem, config.estimator, RngStream(config.seed, stream_id(r, StreamRole::kChain)));
  export_density_csv(est, dir);
  DensityReport rep = density_report(base, est, config.estimator, counter->load());
  rep.body["problem"] = base.name();
  return {rep.body, {}};
}

ReplicateOutput run_knapsack(const ExperimentConfig& config, std::size_t r, const fs::path& dir) {
  KnapsackInstance inst;
  if (config.illustrative) {
    inst = illustrative_instance();
  } else if (!config.instance_file.empty()) {
    std::ifstream in(config.instance_file);
    if (!in) throw IoError("cannot read instance " + config.instance_file);
    inst = read_instance(in);
  } else {
    RngStream irng(config.seed, stream_id(r, StreamRole::kInstance));
    inst = generate_instance(config.knapsack_n, config.knapsack_r, config.knapsack_c, irng,
                             default_weight_decimals(config.knapsack_r));
  }
  {
    std::ostringstream text;
    write_instance(text, inst);
    write_file(dir / "instance.txt", text.str());
  }

  const Problem base = knapsack_transform(inst, config.barrier);
  auto counter = std::make_shared<EvalCounter>(0);
  const Problem problem = with_eval_counter(base, counter);
  const MarginalEstimate est = estimate_marginals(
      problem, config.estimator, RngStream(config.seed, stream_id(r, StreamRole::kChain)));
  export_density_csv(est, dir);
  DensityReport rep = density_report(base, est, config.estimator, counter->load());

  const std::size_t dim = inst.size();
  const auto rounded = round_to_binary(rep.mode);
  const std::vector<double> rounded_d(rounded.begin(), rounded.end());
  const KnapsackSolution exact = solve_knapsack_exact(inst, choose_weight_scale(inst));
  const std::vector<double> exact_d(exact.x.begin(), exact.x.end());
  const double gap_rounded = normalized_distance(rounded_d, exact_d, base.bounds());
  const double gap_raw = normalized_distance(rep.mode, exact_d, base.bounds());
  const double interval = rep.body["joint"]["interval_normalized"].get<double>();
  std::size_t hamming = 0;
  for (std::size_t n = 0; n < dim; ++n) hamming += rounded[n] != exact.x[n];

  rep.body["problem"] = "knapsack";
  rep.body["knapsack"] = {
      {"N", dim},
      {"capacity", inst.capacity},
      {"barrier",
       {{"k0", config.barrier.k0},
        {"k1", config.barrier.k1},
        {"b0", config.barrier.b0},
        {"b1", config.barrier.b1},
        {"b2", config.barrier.b2}}},
      {"rounded_mode", rounded},
      {"rounded_profit", knapsack_profit(inst, rounded)},
      {"rounded_weight", knapsack_weight(inst, rounded)},
      {"rounded_feasible", knapsack_weight(inst, rounded) <= inst.capacity},
      {"exact", exact.x},
      {"exact_profit", exact.value},
      {"gap_rounded", gap_rounded},
      {"gap_rounded_flips", flips_from_distance(gap_rounded, dim)},
      {"gap_raw", gap_raw},
      {"gap_raw_flips", flips_from_distance(gap_raw, dim)},
      {"hamming", hamming}};

  std::ostringstream row;
  row << shortest(config.knapsack_r) << ' ' << shortest(config.knapsack_c) << ' '
      << shortest(config.barrier.k0) << ' ' << shortest(config.barrier.k1) << ' '
      << shortest(config.barrier.b0) << ' ' << shortest(config.barrier.b1) << ' '
      << shortest(config.barrier.b2) << ' ' << config.estimator.max_sweeps << ' '
      << config.estimator.basis_size << ' ' << shortest(config.estimator.diffusion) << ' '
      << fixed3(interval) << '/' << flips_from_distance(interval, dim) << ' '
      << fixed3(gap_rounded) << '/' << flips_from_distance(gap_rounded, dim) << ' '
      << fixed3(gap_raw) << '/' << flips_from_distance(gap_raw, dim);
  return {rep.body, row.str()};
}

ReplicateOutput run_hybrid(const ExperimentConfig& config, std::size_t r, const fs::path& dir) {
  const Problem problem = make_benchmark(config.problem);
  config.simplex.validate(problem.dimension());
  RngStream rng(config.seed, stream_id(r, StreamRole::kChain));
  const HybridReport guided =
      greedy_search(problem, config.estimator, config.simplex, config.hybrid, rng);
  write_file(dir / "trace.csv", trace_csv(guided));
  json summary = {{"problem", problem.name()}, {"guided", hybrid_json(guided, problem)}};
  if (config.ablation) {
    HybridOptions uniform = config.hybrid;
    uniform.guide = DensityGuide::kUniform;
    RngStream arng(config.seed, stream_id(r, StreamRole::kAblation));
    const HybridReport flat = greedy_search(problem, config.estimator, config.simplex, uniform, arng);
    write_file(dir / "trace_uniform.csv", trace_csv(flat));
    summary["uniform"] = hybrid_json(flat, problem);
    summary["guided_beats_uniform"] = guided.best_value < flat.best_value;
  }
  return {summary, {}};
}

std::vector<fs::path> list_files(const fs::path& root, const std::optional<fs::path>& skip = {}) {
  std::vector<fs::path> files;
  if (!fs::exists(root)) return files;
  for (auto it = fs::recursive_directory_iterator(root); it != fs::recursive_directory_iterator();
       ++it) {
    if (skip && fs::equivalent(it->path(), *skip)) {
      if (it->is_directory()) it.disable_recursion_pending();
      continue;
    }
    if (it->is_regular_file()) files.push_back(fs::relative(it->path(), root));
  }
  std::sort(files.begin(), files.end());
  return files;
}

std::string read_all(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace

std::vector<fs::path> export_density_csv(const MarginalEstimate& est, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  std::vector<fs::path> written;
  for (std::size_t n = 0; n < est.dimension(); ++n) {
    const CdfExpansion expansion = est.mean_expansion(n);
    const double z = upper_value(expansion);
    const SampledCdf table = tabulate_and_repair(expansion, est.table_size());
    std::string out = "x,pdf,cdf\n";
    for (std::size_t i = 0; i < table.size(); ++i) {
      const double x = table.abscissa(i);
      out += shortest(x) + ',' + shortest(evaluate_pdf(expansion, x) / z) + ',' +
             shortest(table.values[i]) + '\n';
    }
    const fs::path path = dir / ("density_x" + std::to_string(n) + ".csv");
    write_file(path, out);
    written.push_back(path);
  }
  return written;
}

RunArtifacts run_experiment(const ExperimentConfig& config) {
  config.validate();
  std::error_code ec;
  fs::create_directories(config.out, ec);
  if (ec) throw IoError("cannot create " + config.out.string() + ": " + ec.message());
  write_file(config.out / "config.txt", serialize_config(config));

  RunArtifacts artifacts;
  artifacts.root = config.out;
  std::string table;
  for (std::size_t r = 0; r < config.replicates; ++r) {
    ReplicateResult res;
    res.index = r;
    res.directory = config.out / replicate_dir_name(r);
    fs::create_directories(res.directory, ec);
    if (ec) throw IoError("cannot create " + res.directory.string());

    json summary;
    try {
      ReplicateOutput output;
      switch (config.verb) {
        case Verb::kEstimate:
          output = run_estimate(config, r, res.directory);
          break;
        case Verb::kKnapsack:
          output = run_knapsack(config, r, res.directory);
          break;
        case Verb::kHybrid:
          output = run_hybrid(config, r, res.directory);
          break;
      }
      summary = std::move(output.summary);
      if (!output.table_row.empty()) table += output.table_row + '\n';
      res.ok = true;
    } catch (const Error& e) {
      res.error = e.what();
      summary = {{"error", res.error}};
    }
    summary["verb"] = to_string(config.verb);
    summary["replicate"] = r;
    summary["seed"] = config.seed;
    summary["stream_id"] = stream_id(r, StreamRole::kChain);
    summary["estimator"] = estimator_json(config.estimator);
    write_file(res.directory / "summary.json", summary.dump(2) + '\n');
    artifacts.replicates.push_back(std::move(res));
  }
  if (config.verb == Verb::kKnapsack) {
    write_file(config.out / "table.txt",
               "# R c k0 k1 b0 b1 b2 M L D interval/flips gap/flips raw_gap/flips\n" + table);
  }
  for (const auto& rel : list_files(config.out)) artifacts.files.push_back(config.out / rel);
  return artifacts;
}

ReplayResult replay_run(const fs::path& run_dir, const fs::path& into) {
  ExperimentConfig config;
  apply_key_values(config, read_key_values(run_dir / "config.txt"));
  config.out = into;
  run_experiment(config);

  ReplayResult result;
  const auto original = list_files(run_dir, fs::exists(into) ? std::optional(into) : std::nullopt);
  const auto replayed = list_files(into);
  for (const auto& rel : original) {
    if (!std::binary_search(replayed.begin(), replayed.end(), rel)) {
      result.differences.push_back("missing in replay: " + rel.string());
    } else if (read_all(run_dir / rel) != read_all(into / rel)) {
      result.differences.push_back("content differs: " + rel.string());
    }
  }
  for (const auto& rel : replayed) {
    if (!std::binary_search(original.begin(), original.end(), rel)) {
      result.differences.push_back("extra in replay: " + rel.string());
    }
  }
  result.identical = result.differences.empty();
  return result;
}

}  // namespace fps
