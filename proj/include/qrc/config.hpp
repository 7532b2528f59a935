// config.hpp: experiment configuration: defaults, validation, overrides.

#pragma once

#include "qrc/dynamics.hpp"
#include "qrc/operator_algebra.hpp"
#include "qrc/tasks.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qrc {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ReservoirSpec {
    Statistics statistics = Statistics::qubit();
    int excitation = 1;

    // "qubit", "fermion", "boson_c5_e1"
    std::string label() const;
};

struct ExperimentConfig {
    std::vector<ReservoirSpec> reservoirs{ReservoirSpec{}};
    int n_sites = 4;
    double dt = 10.0;
    int virtual_nodes = 1;
    std::vector<ObservableKind> observables{ObservableKind::CrossReal};
    bool include_diagonal = true;
    Encoding encoding = Encoding::UnitInterval;

    // Negative values select the defaults below.
    int train_length = -1;  // 1200, or 2000 when V >= 3
    int test_length = -1;   // 300, or 500 when V >= 3
    int washout = -1;       // 3000 for fermions, 1000 otherwise

    std::vector<std::uint64_t> seeds;
    std::vector<int> delays{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    std::vector<int> degrees{2, 3, 4, 5};
    double ridge = 0.0;

    std::string output = "results";
    int threads = 1;
    bool allow_low_cutoff = false;

    // cutoff / converge / trace / spread-chain
    int steps = 1000;
    // converge: occupation patterns of rho_A and rho_B
    std::vector<int> converge_a{0, 1, 0, 0};
    std::vector<int> converge_b{0, 0, 1, 0};
    // spread-chain
    int chain_sites = 5;
    std::vector<std::pair<int, int>> chain_pairs{{1, 2}, {1, 3}, {1, 4}, {1, 5}};  // 1-based
    // spread-all
    int spread_step = 3000;
    // ipc
    int ipc_length = 10000;
    IpcOptions ipc;
    // spectrum
    std::vector<double> spectrum_inputs{0.1, 0.3, 0.5, 0.7, 0.9};
    bool spectrum_moduli = false;
    bool spectrum_full = false;  // full D^2 transfer matrix instead of the reduced one
    // trace
    std::vector<ObservableKind> trace_observables{ObservableKind::CrossReal, ObservableKind::QuadraturePlus};

    // Seeds whose readout is poisoned with a NaN, to exercise failure handling.
    std::vector<std::uint64_t> debug_fail_seeds;

    int washout_for(const ReservoirSpec& r) const;
    int train_for() const;
    int test_for() const;
};

// Smallest boson cutoff accepted for excitation level e without
// allow_low_cutoff.
inline int recommended_cutoff(int excitation) { return excitation + 4; }

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& c);
ExperimentConfig load_config(const std::filesystem::path& path);
nlohmann::json read_json_file(const std::filesystem::path& path);

// Throws ConfigError with an actionable message.
void validate(const ExperimentConfig& c);

// "A..B" (inclusive) or "A,B,C".
std::vector<std::uint64_t> parse_seeds(const std::string& text);

// key=value; value parsed as JSON when possible, otherwise taken as a string.
// Dotted keys address nested objects ("ipc.window=10").
void apply_override(nlohmann::json& j, const std::string& assignment);

}  // namespace qrc
