#ifndef MLT_CLI_HPP
#define MLT_CLI_HPP

#include "mlt/evaluation.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace mlt::cli {

enum ExitCode : int {
    kOk = 0,
    kFailure = 1,
    kConfigError = 2,
    kValidationError = 3,
    kIoError = 4,
};

enum class OutputFormat { csv, json, table };

std::optional<OutputFormat> parse_format(const std::string& name);

struct RunConfig {
    std::filesystem::path scenario;
    ExperimentKind experiment = ExperimentKind::full;
    std::optional<std::size_t> replications;  // falls back to the scenario file
    OutputFormat format = OutputFormat::csv;
    std::optional<std::filesystem::path> out;  // stdout when empty
    std::optional<std::uint64_t> seed;         // flag, else MLT_SEED, else the file
    unsigned jobs = 0;
};

/// Parses a decimal u64 seed; nullopt when malformed.
std::optional<std::uint64_t> parse_seed(const std::string& text);

/// MLT_SEED, when set and well formed.
std::optional<std::uint64_t> seed_from_env();

int cmd_run(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_validate(const std::filesystem::path& scenario, std::ostream& out, std::ostream& err);

struct PaperExampleOptions {
    /// Test-only negative control: shifts the expected constant of the named
    /// example ("instantaneous", "freshness", "coverage", "credibility").
    std::optional<std::string> perturb;
};

int cmd_paper_examples(const PaperExampleOptions& options, std::ostream& out);

/// Column header of the CSV emitted for `kind`.
std::string csv_header(ExperimentKind kind);

std::string render_csv(ExperimentKind kind, const std::vector<ExperimentResult>& results);
std::string render_json(ExperimentKind kind, const ExperimentSpec& spec, std::uint64_t seed,
                        const std::vector<ExperimentResult>& results);
std::string render_table(ExperimentKind kind, const std::vector<ExperimentResult>& results);

}  // namespace mlt::cli

#endif  // MLT_CLI_HPP
