// commands.hpp: sweep subcommands: fan kernels out over reservoirs and
// seeds, write CSVs and a manifest into config.output.

#pragma once

#include "qrc/config.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace qrc {

inline constexpr const char* kSoftwareVersion = "0.1.0";

enum ExitCode : int {
    kExitClean = 0,
    kExitFatal = 1,
    kExitPartial = 2,
};

struct SweepReport {
    int exit_code = kExitClean;
    std::size_t jobs = 0;
    std::size_t failed = 0;
    std::vector<std::filesystem::path> outputs;
    nlohmann::json manifest;
};

std::vector<std::string> sweep_commands();

// SHA-256 of the configuration with run-only settings (threads, output) removed.
std::string config_hash(const ExperimentConfig& config);

// Throws ConfigError for an unknown command; I/O and budget errors propagate.
SweepReport run_sweep(const std::string& command, const ExperimentConfig& config);

}  // namespace qrc
