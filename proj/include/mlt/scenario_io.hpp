#ifndef MLT_SCENARIO_IO_HPP
#define MLT_SCENARIO_IO_HPP

#include "mlt/evaluation.hpp"
#include "mlt/simulator.hpp"

#include <json.hpp>

#include <filesystem>

namespace mlt {

inline constexpr int kScenarioSchemaVersion = 1;

struct ScenarioFile {
    Scenario scenario;
    ExperimentSpec experiment;  // defaults when the file has no "experiment" block
};

/// Builds a scenario from its JSON document. Structural problems (wrong
/// types, missing or unknown keys, bad enum names, wrong schema_version)
/// raise ConfigError; model invariant violations raise ValidationError with
/// every problem found.
ScenarioFile parse_scenario(const nlohmann::json& doc);

/// Reads and parses a scenario file. A missing or unreadable file or invalid
/// JSON raises ConfigError.
ScenarioFile load_scenario(const std::filesystem::path& path);

}  // namespace mlt

#endif  // MLT_SCENARIO_IO_HPP
