#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fps/estimator.hpp"
#include "fps/hybrid.hpp"
#include "fps/knapsack.hpp"
#include "fps/simplex.hpp"

namespace fps {

enum class Verb { kEstimate, kHybrid, kKnapsack };

const char* to_string(Verb verb);

// Everything a run needs. Field names in config files match the keys below
// (short names: R c k0 k1 b0 b1 b2 M L D ...).
struct ExperimentConfig {
  Verb verb = Verb::kEstimate;
  std::string problem = "schwefel";

  // knapsack
  std::size_t knapsack_n = 30;
  double knapsack_r = 10.0;
  double knapsack_c = 100.0;
  std::string instance_file;  // overrides the generator when set
  bool illustrative = false;  // the 3-item instance q=(2,3,5) w=(3,5,7) c=10
  BarrierParams barrier{10.0, 7.1, 10.0, 0.01, 0.02};

  EstimatorConfig estimator;

  // hybrid
  SimplexConfig simplex;
  HybridOptions hybrid;
  bool ablation = false;  // also run the uniform-density variant per replicate

  std::size_t replicates = 1;
  std::uint64_t seed = 1;
  std::filesystem::path out = "fps_out";

  void validate() const;
};

using KeyValues = std::map<std::string, std::string>;

// Flat "key = value" text, '#' starts a comment. Throws ConfigError / IoError.
KeyValues parse_key_values(const std::string& text);
KeyValues read_key_values(const std::filesystem::path& path);

// Applies known keys onto `config`; unknown keys or unparsable values throw
// ConfigError naming the key. b2 also accepts "<m>b1" (e.g. "2b1").
void apply_key_values(ExperimentConfig& config, const KeyValues& values);

// Canonical key=value dump; parse + apply reproduces the config.
std::string serialize_config(const ExperimentConfig& config);

// Stream ids derived from the top-level seed.
enum class StreamRole : std::uint64_t { kChain = 0, kInstance = 1, kAblation = 2 };
inline std::uint64_t stream_id(std::size_t replicate, StreamRole role) {
  return static_cast<std::uint64_t>(replicate) * 8 + static_cast<std::uint64_t>(role);
}

struct ReplicateResult {
  std::size_t index = 0;
  std::filesystem::path directory;
  bool ok = false;
  std::string error;
};

struct RunArtifacts {
  std::filesystem::path root;
  std::vector<ReplicateResult> replicates;
  std::vector<std::filesystem::path> files;  // every file written, sorted

  bool ok() const;
};

// One file per coordinate, `<dir>/density_x<n>.csv`, header "x,pdf,cdf" and
// table_size rows. pdf is the averaged expansion's derivative normalized by
// its value at hi; cdf is the repaired table. Throws IoError.
std::vector<std::filesystem::path> export_density_csv(const MarginalEstimate& est,
                                                      const std::filesystem::path& dir);

// Runs every replicate, writing into config.out:
//   config.txt                  resolved configuration
//   rep_<r>/summary.json        per-replicate report
//   rep_<r>/density_x<n>.csv    (estimate, knapsack)
//   rep_<r>/instance.txt        (knapsack)
//   rep_<r>/trace.csv           (hybrid)
//   table.txt                   (knapsack) one summary row per replicate
// A failing replicate records its error in its summary and the others go on.
RunArtifacts run_experiment(const ExperimentConfig& config);

struct ReplayResult {
  bool identical = false;
  std::vector<std::string> differences;
};

// Re-runs the config stored in `run_dir`/config.txt into `into` and compares
// every artifact byte for byte.
ReplayResult replay_run(const std::filesystem::path& run_dir, const std::filesystem::path& into);

}  // namespace fps
