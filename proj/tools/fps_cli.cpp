// fps: experiment runner for stationary-density estimation.
//
//   fps estimate --problem schwefel --L 100 --D 50 --out runs/schwefel
//   fps knapsack --config table1_row1.cfg --seed 3 --out runs/kp
//   fps hybrid   --problem rosenbrock --L 30 --D 10000 --set ablation=true
//   fps replay   --out runs/schwefel
//
// Values come from --config (key = value file), then the named flags, then
// repeated --set key=value pairs; later sources win.

#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fps/error.hpp"
#include "fps/experiment.hpp"

namespace {

struct CommonFlags {
  std::string config;
  std::optional<std::string> problem;
  std::optional<std::string> basis;
  std::optional<std::string> diffusion;
  std::optional<std::string> sweeps;
  std::optional<std::string> seed;
  std::optional<std::string> replicates;
  std::optional<std::string> out;
  std::vector<std::string> sets;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config, "key = value configuration file");
  cmd->add_option("--problem", f.problem, "benchmark name");
  cmd->add_option("--L", f.basis, "basis size");
  cmd->add_option("--D", f.diffusion, "diffusion constant");
  cmd->add_option("--M", f.sweeps, "maximum number of sweeps");
  cmd->add_option("--seed", f.seed, "top-level seed");
  cmd->add_option("--replicates", f.replicates, "independent replicates");
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_option("--set", f.sets, "extra key=value override (repeatable)");
}

fps::KeyValues merged(const CommonFlags& f, const std::string& verb) {
  fps::KeyValues kv;
  if (!f.config.empty()) kv = fps::read_key_values(f.config);
  auto put = [&kv](const char* key, const std::optional<std::string>& v) {
    if (v) kv[key] = *v;
  };
  put("problem", f.problem);
  put("L", f.basis);
  put("D", f.diffusion);
  put("M", f.sweeps);
  put("seed", f.seed);
  put("replicates", f.replicates);
  put("out", f.out);
  for (const auto& s : f.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw fps::ConfigError("--set: expected key=value, got '" + s + "'");
    }
    kv[s.substr(0, eq)] = s.substr(eq + 1);
  }
  kv["verb"] = verb;
  return kv;
}

int run(const CommonFlags& flags, const std::string& verb) {
  fps::ExperimentConfig config;
  fps::apply_key_values(config, merged(flags, verb));
  const fps::RunArtifacts artifacts = fps::run_experiment(config);
  for (const auto& rep : artifacts.replicates) {
    if (rep.ok) {
      std::cout << rep.directory.string() << ": ok\n";
    } else {
      std::cerr << rep.directory.string() << ": " << rep.error << '\n';
    }
  }
  std::cout << artifacts.files.size() << " files written under " << artifacts.root.string()
            << '\n';
  return artifacts.ok() ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stationary-density estimation for stochastic search"};
  app.require_subcommand(1);

  CommonFlags estimate_flags;
  CommonFlags hybrid_flags;
  CommonFlags knapsack_flags;
  add_common(app.add_subcommand("estimate", "estimate marginal densities of a benchmark"),
             estimate_flags);
  add_common(app.add_subcommand("hybrid", "greedy density-guided simplex search"), hybrid_flags);
  add_common(app.add_subcommand("knapsack", "penalty-transformed knapsack estimation"),
             knapsack_flags);

  auto* replay = app.add_subcommand("replay", "re-run a stored run and compare artifacts");
  std::string replay_dir;
  std::string replay_into;
  replay->add_option("--out", replay_dir, "directory of the run to replay")->required();
  replay->add_option("--into", replay_into, "where to write the replay (default <out>/replay)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Help and version exit 0; every other parse failure is a usage error.
    return app.exit(e) == 0 ? 0 : 64;
  }

  try {
    if (app.got_subcommand("estimate")) return run(estimate_flags, "estimate");
    if (app.got_subcommand("hybrid")) return run(hybrid_flags, "hybrid");
    if (app.got_subcommand("knapsack")) return run(knapsack_flags, "knapsack");
    if (app.got_subcommand("replay")) {
      const std::filesystem::path into =
          replay_into.empty() ? std::filesystem::path(replay_dir) / "replay"
                              : std::filesystem::path(replay_into);
      const fps::ReplayResult result = fps::replay_run(replay_dir, into);
      for (const auto& d : result.differences) std::cout << d << '\n';
      std::cout << (result.identical ? "replay identical" : "replay differs") << '\n';
      return result.identical ? 0 : 1;
    }
  } catch (const fps::ConfigError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 64;
  } catch (const fps::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
