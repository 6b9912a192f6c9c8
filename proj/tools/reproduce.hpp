#pragma once

#include "report_json.hpp"

#include <cstdint>
#include <string>

namespace korenblum::cli {

struct ReproduceConfig {
  std::string target;
  std::string out_dir;
  std::uint64_t seed = 20240101;
  double alpha0 = 0.5;
  int K = 4096;
  std::string majorant = "logpow:p=0.5,c=2";
  int trials = 1000;
};

struct ReproduceResult {
  int exit_code = 0;
  std::string summary;
};

inline const char* const kReproduceTargets[] = {"example1", "example2", "poisson-bound", "feasibility-oracle"};

/// Writes the bundle into cfg.out_dir (created if missing).
ReproduceResult reproduce(const ReproduceConfig& cfg, const ordered_json& config);

}  // namespace korenblum::cli
