#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wsnd/montecarlo.hpp"
#include "wsnd/scenario.hpp"

namespace wsnd {

/// Parsed experiment file. Text format: one `key = value` per line, `#`
/// starts a comment, lists are comma separated. See README for the schema.
struct ExperimentConfig {
  int schema_version = 1;
  std::string name = "scenario";
  std::uint64_t seed = 1;

  // Population
  int sensors = 0;
  int samples = 0;
  double U = 0.0;
  double Pt = 0.0;
  double Pfa = 0.0;
  double xi_a_db = 0.0;
  double signal_amplitude = 0.2;
  double zeta = 0.1;
  double sigma2_min = 0.5;
  double sigma2_max = 2.0;
  ChannelModel channel = ChannelModel::kRayleigh;

  // Topology
  double topology_radius = 0.5;
  std::string topology_file; ///< edge list; overrides the geometric draw

  SolverConfig solver;

  // Detection experiments
  std::vector<Scheme> schemes;
  std::vector<double> sweep_pt;
  std::vector<double> sweep_pfa;
  std::vector<int> sweep_n;
  long trials = 10000;
  ThresholdSource threshold = ThresholdSource::kAnalytic;
  std::string power_method = "central"; ///< powers used by the *_opt_power schemes
};

/// Throws ConfigError with "<source>:<line>: ..." or "missing required field 'X'".
ExperimentConfig parse_config(std::string_view text, std::string_view source = "config");
ExperimentConfig load_config(const std::filesystem::path& path);

/// Every key in a fixed order with shortest round-trip numbers.
std::string serialize_config(const ExperimentConfig& cfg);

/// FNV-1a 64 of the canonical serialization, as 16 hex digits.
std::string config_digest(const ExperimentConfig& cfg);

/// Draw sensors and topology from the config seed. `samples_override`
/// rebuilds the same population with a different N.
Scenario build_scenario(const ExperimentConfig& cfg, std::optional<int> samples_override = {},
                        std::optional<double> pt_override = {});

} // namespace wsnd
