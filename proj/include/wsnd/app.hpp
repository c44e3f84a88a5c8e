#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "wsnd/config.hpp"

namespace wsnd::app {

namespace fs = std::filesystem;

enum class Method { kCentral, kDistributed, kBoth };
enum class Sweep { kPt, kPfa, kN };

Method parse_method(const std::string& s);
Sweep parse_sweep(const std::string& s);

/// Stable process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitConvergence = 3;

struct RunOutput {
  std::vector<fs::path> files;
  std::string summary;
};

/// allocation.csv: i, h_i, sigma2_i, xi_i, p_central, p_distributed,
/// bits_real, bits_int, censored. On distributed non-convergence the trace is
/// written to trace_failed.csv and DistributedConvergenceError propagates.
RunOutput run_allocate(const ExperimentConfig& cfg, Method method, const fs::path& out_dir);

/// detect_<sweep>.csv plus detect_<sweep>_diagnostics.csv.
RunOutput run_detect(const ExperimentConfig& cfg, Sweep sweep, std::optional<long> trials,
                     int workers, const fs::path& out_dir);

/// trace.csv and trace_summary.txt.
RunOutput run_trace(const ExperimentConfig& cfg, const fs::path& out_dir);

/// manifest.json: digest, versions, output files, timings.
fs::path write_manifest(const ExperimentConfig& cfg, const std::string& command,
                        const std::vector<fs::path>& files, double seconds,
                        const fs::path& out_dir);

/// Full command-line entry point; returns the process exit code.
int main(int argc, char** argv);

} // namespace wsnd::app
