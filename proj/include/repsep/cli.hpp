#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "repsep/metrics.hpp"

namespace repsep::cli {

struct ExportFlags {
  bool json = true;
  bool csv = true;
  bool svg = false;
};

struct RunConfig {
  std::filesystem::path manifest;
  std::vector<Metric> metrics{std::begin(kAllMetrics), std::end(kAllMetrics)};
  MetricConfig metric_config;
  std::filesystem::path output_dir = "results";
  unsigned jobs = 1;
  std::uint64_t seed = 0;  // reserved
  ExportFlags exports;
};

/// Reads a run config JSON (same dialect as the manifest). Relative paths
/// resolve against the config file's directory.
RunConfig load_run_config(const std::filesystem::path& path);

int cmd_validate(const std::filesystem::path& manifest, std::ostream& out, std::ostream& err);
int cmd_similarity(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_separability(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Full command-line entry point; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace repsep::cli
