#pragma once

#include "scour/workbench.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace scour::cli {

enum ExitCode : int {
    kSuccess = 0,
    kUsage = 1,
    kDataValidation = 2,
    kNumericalFailure = 3,
};

/// Fully resolved settings of one command invocation. Every seed is explicit, so the
/// echo written next to the outputs replays the run.
struct RunConfig {
    std::string command;
    Scale scale = Scale::Laboratory;
    std::string data;
    std::vector<std::string> spec_ids;
    SwarmConfig swarm;
    CoefficientBounds bounds;
    double split_ratio = 0.7;
    std::uint64_t split_seed = 42;
    std::string output_dir;
    bool strict = false;
    bool hancu_squared = false;
    MetricUnits units = MetricUnits::Meters;
    unsigned workers = 1;
    std::vector<std::string> models;
    std::vector<std::string> baselines;
    std::size_t repeats = 1; // sensitivity: consecutive split seeds

    WorkbenchOptions workbench_options() const;
    bool operator==(const RunConfig&) const = default;
};

void write_config(std::ostream& out, const RunConfig& config);
RunConfig read_config(std::istream& in);
RunConfig load_config(const std::filesystem::path& path);

/// Seed used when neither --seed nor a config file provides one and SCOUR_SEED is unset.
inline constexpr std::uint64_t kDefaultSeed = 42;

/// Runs the command line `args` (args[0] is the program name). Returns an ExitCode.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace scour::cli
