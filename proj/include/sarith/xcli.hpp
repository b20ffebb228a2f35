// Experiment drivers: TOML config in, report and CSV out.
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "sarith/core.hpp"

namespace sarith {

struct ExperimentReport {
  std::string experiment;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::pair<std::string, std::string>> summary;
  bool pass = true;
};

std::vector<std::string> experiment_names();

// Throws ConfigError for unknown names or bad configs.
ExperimentReport run_experiment(const std::string& name, const std::string& toml_text, u64 seed, int threads = 1);

std::string report_csv(const ExperimentReport& r);
std::string report_summary(const ExperimentReport& r);

std::string format_num(double x);  // 12 significant digits

}  // namespace sarith
