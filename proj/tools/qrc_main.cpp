// qrc: command-line front end for the reservoir sweeps.

#include "qrc/commands.hpp"
#include "qrc/config.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"Quantum reservoir computing sweeps"};
    app.set_version_flag("--version", qrc::kSoftwareVersion);
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::string out_dir;
    std::string seeds;
    int threads = 0;
    std::vector<std::string> overrides;
    app.add_option("--config", config_path, "JSON configuration file")->check(CLI::ExistingFile);
    app.add_option("--out", out_dir, "output directory (overrides 'output')");
    app.add_option("--seeds", seeds, "seed range A..B or list A,B,C");
    app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    app.add_option("--override", overrides, "config override key=value (repeatable)");

    const std::vector<std::pair<std::string, std::string>> descriptions{
        {"cutoff", "boson level occupations after driving"},
        {"converge", "Frobenius distance between two initial states"},
        {"mc", "linear memory capacity"},
        {"nmc", "nonlinear memory capacity"},
        {"ipc", "information processing capacity with Legendre targets"},
        {"spread-chain", "hopping correlations along a homogeneous chain"},
        {"spread-all", "sums of off-diagonal and diagonal observables"},
        {"trace", "observable time series per substep"},
        {"spectrum", "transfer-matrix spectrum at fixed inputs"},
    };
    for (const auto& [name, text] : descriptions) app.add_subcommand(name, text);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? qrc::kExitClean : qrc::kExitFatal;
    }
    const std::string command = app.get_subcommands().front()->get_name();

    try {
        nlohmann::json j = config_path.empty() ? nlohmann::json::object() : qrc::read_json_file(config_path);
        for (const auto& o : overrides) qrc::apply_override(j, o);
        if (!seeds.empty()) j["seeds"] = seeds;
        if (threads > 0) j["threads"] = threads;
        if (!out_dir.empty()) j["output"] = out_dir;
        const qrc::ExperimentConfig config = qrc::config_from_json(j);

        const qrc::SweepReport report = qrc::run_sweep(command, config);
        std::cerr << command << ": " << (report.jobs - report.failed) << "/" << report.jobs << " jobs ok, outputs in "
                  << config.output << "\n";
        if (report.failed > 0) {
            for (const auto& entry : report.manifest.at("seeds")) {
                if (entry.at("status") == "failed") {
                    std::cerr << "  failed " << entry.at("reservoir").get<std::string>() << " seed "
                              << entry.at("seed").get<std::uint64_t>() << ": " << entry.at("error").get<std::string>()
                              << "\n";
                }
            }
        }
        return report.exit_code;
    } catch (const qrc::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
    } catch (const qrc::BudgetError& e) {
        std::cerr << "memory budget exceeded: " << e.what() << "\n";
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
    }
    return qrc::kExitFatal;
}
