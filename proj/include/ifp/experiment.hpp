#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ifp {

enum class Experiment { ProcessEarly, ProcessFull, R0Dist, Matching, Kneser, SamplerOracle };
std::string_view to_string(Experiment e);
Experiment experiment_from_string(std::string_view s);

inline constexpr std::string_view kVersion = "1.0.0";
inline constexpr std::uint64_t kDefaultSeed = 12345;
inline constexpr std::uint64_t kDefaultTrials = 1000;

struct ExperimentConfig {
  Experiment experiment = Experiment::ProcessEarly;
  std::optional<int> n;
  std::optional<int> k;
  std::optional<double> c;
  std::optional<double> w;
  int b = 10;
  std::optional<int> t;
  std::uint64_t trials = kDefaultTrials;
  std::uint64_t seed = kDefaultSeed;
  unsigned workers = 1;
  std::string out;
  bool exact = false;
  std::optional<double> tolerance;
  /// Minimum sandwich rate for process-full.
  std::optional<double> threshold;
  /// Fixed hypergraph for sampler-oracle, edges separated by ';'.
  std::string edges = "1,2,3;1,4,5";

  /// Key=value pairs of the resolved configuration (no worker count or output path).
  std::vector<std::pair<std::string, std::string>> resolved() const;
};

struct Setting {
  std::string key;
  std::string value;
  std::string origin;  // "line 3", "flag --n", ...: used in error messages
};
using KeyValues = std::vector<Setting>;

/// Flat "key=value" text; '#' starts a comment.
KeyValues parse_key_values(std::string_view text);

/// File values first, then flag values on top. Unknown keys are rejected;
/// k and c together are a conflict.
ExperimentConfig parse_config(const KeyValues& file_values, const KeyValues& flag_values);
ExperimentConfig parse_config_file(const std::string& path, const KeyValues& flag_values = {});

struct Verdict {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ExperimentResult {
  std::string summary_json;  // deterministic given the configuration
  std::string trials_csv;
  std::map<std::string, std::string> extra_files;
  std::vector<Verdict> verdicts;

  bool passed() const;
};

/// Runs the experiment; writes trials.csv, summary.json and extra files under
/// config.out when it is nonempty.
ExperimentResult run_experiment(const ExperimentConfig& config);

}  // namespace ifp
