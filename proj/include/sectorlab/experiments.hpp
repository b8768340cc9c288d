// Experiment runner and report layer. Each experiment is a pure function of
// (kind, config, seed); re-running with the same triple reproduces every
// scalar bit for bit.
#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "sectorlab/models.hpp"

namespace sectorlab {

struct ExperimentReport {
  std::string kind;
  nlohmann::json config;  // fully resolved config echo
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, double>> scalars;
  std::vector<std::string> columns;
  std::vector<std::vector<nlohmann::json>> rows;
  std::vector<std::pair<std::string, bool>> verdicts;
  double runtime_seconds = 0.0;
  std::string timestamp;

  double scalar(const std::string& name) const;
  bool all_passed() const;
};

enum class ReportFormat { csv, json };

ExperimentReport run_experiment(const std::string& kind, const nlohmann::json& config,
                                std::uint64_t seed);

void emit_report(const ExperimentReport& report, ReportFormat format, const std::string& path);

nlohmann::json report_to_json(const ExperimentReport& report);
ExperimentReport report_from_json(const nlohmann::json& j);
std::string report_to_csv(const ExperimentReport& report);

// kind -> one-line description
std::vector<std::pair<std::string, std::string>> experiment_catalog();

// SECTOR_LAB_THREADS cap (>= 1); 1 when unset
unsigned experiment_threads();

// resolved per-kind defaults (documents the config schema)
nlohmann::json default_config(const std::string& kind);

ModelSpec model_spec_from_json(const nlohmann::json& j);

}  // namespace sectorlab
