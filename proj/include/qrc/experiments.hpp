// experiments.hpp: per-seed experiment kernels. Each kernel is a pure
// function of (config, reservoir, seed); the sweep layer fans them out and
// the acceptance suite calls them directly.

#pragma once

#include "qrc/config.hpp"
#include "qrc/kraus_spectral.hpp"
#include "qrc/operator_algebra.hpp"
#include "qrc/reservoir.hpp"
#include "qrc/tasks.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace qrc {

// Observables of several kinds measured together; `offsets[k]` is the first
// column of kind k inside one substep block.
struct CombinedObservables {
    ObservableSet set;
    std::vector<ObservableKind> kinds;
    std::vector<int> offsets;
    std::vector<int> counts;
};

CombinedObservables combine_observables(const std::vector<ObservableKind>& kinds, const OperatorSet& ops);

// Columns of `features` (substep-major, `total` observables per substep)
// belonging to one kind.
RealMatrix select_kind(const RealMatrix& features, const CombinedObservables& obs, std::size_t kind, int substeps);

struct SeedSystem {
    OperatorSet ops;
    CouplingMatrix couplings;
    SparseOp hamiltonian;
};

// All-to-all random couplings for `seed` on config.n_sites sites.
SeedSystem make_system(const ExperimentConfig& config, const ReservoirSpec& reservoir, std::uint64_t seed);

// ------------------------------- memory capacity -----------------------------

struct McSeedResult {
    std::vector<ObservableKind> kinds;
    std::vector<TaskSpec> tasks;
    std::vector<std::vector<TaskScore>> scores;  // [kind][task]
};

std::vector<TaskSpec> linear_tasks(const ExperimentConfig& config);
std::vector<TaskSpec> power_tasks(const ExperimentConfig& config);

McSeedResult memory_capacity_seed(const ExperimentConfig& config, const ReservoirSpec& reservoir, std::uint64_t seed,
                                  const std::vector<TaskSpec>& tasks);

// ------------------------------- convergence ---------------------------------

// ||rho_A(k) - rho_B(k)||_F for k = 0 .. config.steps, both copies driven by
// the same inputs.
std::vector<double> convergence_seed(const ExperimentConfig& config, const ReservoirSpec& reservoir,
                                     std::uint64_t seed);

// ------------------------------- cutoff --------------------------------------

// Level histogram P(n) per site (rows) after config.steps injections from
// vacuum. Boson reservoirs only.
RealMatrix cutoff_seed(const ExperimentConfig& config, const ReservoirSpec& reservoir, std::uint64_t seed);

// ------------------------------- spreading -----------------------------------

struct ChainSeries {
    std::vector<std::string> labels;
    RealMatrix values;  // (steps + 1) × pairs; row 0 is the vacuum before any input
};

ChainSeries spread_chain_seed(const ExperimentConfig& config, const ReservoirSpec& reservoir, std::uint64_t seed);

struct SpreadSums {
    double nondiagonal = 0.0;  // sum_{i<j} |Re<a_i† a_j>|
    double diagonal = 0.0;     // sum_i <a_i† a_i>
};

SpreadSums spread_all_seed(const ExperimentConfig& config, const ReservoirSpec& reservoir, std::uint64_t seed);

// ------------------------------- trace ---------------------------------------

struct TraceSeries {
    std::vector<double> inputs;       // u_k, k = 1..steps
    std::vector<std::string> labels;
    RealMatrix values;                // (steps·V) × observables
};

TraceSeries trace_seed(const ExperimentConfig& config, const ReservoirSpec& reservoir, std::uint64_t seed);

// ------------------------------- IPC -----------------------------------------

IpcResult ipc_seed(const ExperimentConfig& config, const ReservoirSpec& reservoir, std::uint64_t seed);

// ------------------------------- spectrum ------------------------------------

// Spectrum of the channel at fixed input u. The reduced form uses the
// (D/d)^2 transfer matrix of sigma -> sum_n W_n sigma W_n†, which shares every
// nonzero eigenvalue with the full D^2 one.
TransferSpectrum spectrum_seed(const ExperimentConfig& config, const ReservoirSpec& reservoir, std::uint64_t seed,
                               double u);

}  // namespace qrc
