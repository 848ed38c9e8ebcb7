#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace sl {

struct ScenarioOptions {
  std::string out_dir = ".";
  bool strict = false;                 // report-only findings also fail the run
  std::optional<std::uint64_t> seed;   // overrides the config seed
  int threads = 1;
  std::string timestamp;               // manifest metadata; empty means now (UTC)
};

struct ScenarioOutcome {
  int exit_code = 0;  // 0 ok, 1 invariant or integration failure, 2 usage or config error
  std::string message;
  std::vector<std::string> files;
  int hard_failures = 0;
  int soft_failures = 0;
};

ScenarioOutcome run_scenario(const nlohmann::json& config, const ScenarioOptions& opts);
ScenarioOutcome run_scenario_text(const std::string& text, const ScenarioOptions& opts);
ScenarioOutcome run_scenario_file(const std::string& path, const ScenarioOptions& opts);

}  // namespace sl
