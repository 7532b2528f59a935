#include "qrc/experiments.hpp"

#include <algorithm>
#include <cmath>

namespace qrc {

namespace {

bool forced_failure(const ExperimentConfig& config, std::uint64_t seed) {
    return std::find(config.debug_fail_seeds.begin(), config.debug_fail_seeds.end(), seed) !=
           config.debug_fail_seeds.end();
}

// Stands in for a trajectory that blew up: the NaN reaches the same checks a
// genuine overflow would.
void poison(const ExperimentConfig& config, std::uint64_t seed, RealMatrix& m) {
    if (forced_failure(config, seed) && m.size() > 0) m(0, 0) = std::numeric_limits<double>::quiet_NaN();
}

void require_finite(const RealMatrix& m, const char* what) {
    if (!m.allFinite()) throw NumericalError(std::string(what) + ": non-finite values");
}

InputSpec input_spec(const ReservoirSpec& reservoir, Encoding encoding) {
    return InputSpec{reservoir.excitation, encoding};
}

}  // namespace

CombinedObservables combine_observables(const std::vector<ObservableKind>& kinds, const OperatorSet& ops) {
    CombinedObservables out;
    out.kinds = kinds;
    for (ObservableKind kind : kinds) {
        ObservableSet part = build_observables(kind, ops);
        out.offsets.push_back(out.set.size());
        out.counts.push_back(part.size());
        for (int j = 0; j < part.size(); ++j) {
            out.set.matrices.push_back(std::move(part.matrices[static_cast<std::size_t>(j)]));
            out.set.labels.push_back(std::move(part.labels[static_cast<std::size_t>(j)]));
            out.set.sites.push_back(part.sites[static_cast<std::size_t>(j)]);
        }
    }
    if (!kinds.empty()) out.set.kind = kinds.front();
    return out;
}

RealMatrix select_kind(const RealMatrix& features, const CombinedObservables& obs, std::size_t kind, int substeps) {
    const int total = obs.set.size();
    const int count = obs.counts.at(kind);
    const int offset = obs.offsets.at(kind);
    RealMatrix out(features.rows(), static_cast<Index>(count) * substeps);
    for (int v = 0; v < substeps; ++v) {
        out.middleCols(static_cast<Index>(v) * count, count) = features.middleCols(static_cast<Index>(v) * total + offset, count);
    }
    return out;
}

SeedSystem make_system(const ExperimentConfig& config, const ReservoirSpec& reservoir, std::uint64_t seed) {
    SeedSystem sys{build_ladder_ops(reservoir.statistics, config.n_sites),
                   sample_couplings(config.n_sites, seed, config.include_diagonal), {}};
    sys.hamiltonian = build_hamiltonian(sys.couplings, sys.ops);
    return sys;
}

// ------------------------------- memory capacity -----------------------------

std::vector<TaskSpec> linear_tasks(const ExperimentConfig& config) {
    std::vector<TaskSpec> tasks;
    for (int d : config.delays) tasks.push_back(TaskSpec::linear(d));
    return tasks;
}

std::vector<TaskSpec> power_tasks(const ExperimentConfig& config) {
    std::vector<TaskSpec> tasks;
    for (int d : config.delays) {
        for (int q : config.degrees) tasks.push_back(TaskSpec::power(d, q));
    }
    return tasks;
}

McSeedResult memory_capacity_seed(const ExperimentConfig& config, const ReservoirSpec& reservoir, std::uint64_t seed,
                                  const std::vector<TaskSpec>& tasks) {
    const SeedSystem sys = make_system(config, reservoir, seed);
    const CombinedObservables obs = combine_observables(config.observables, sys.ops);
    const Propagator prop(sys.hamiltonian, sys.ops.basis, config.dt, config.virtual_nodes);
    ReservoirEngine engine(sys.ops, prop, input_spec(reservoir, config.encoding), &obs.set);

    const int washout = config.washout_for(reservoir);
    const int n_train = config.train_for();
    const int n_test = config.test_for();
    int max_delay = 0;
    for (const TaskSpec& t : tasks) max_delay = std::max(max_delay, t.max_delay());
    if (washout < max_delay) throw std::invalid_argument("memory capacity: washout shorter than the largest delay");

    const std::vector<double> inputs =
        generate_inputs(static_cast<std::size_t>(washout + n_train + n_test), config.encoding, seed);
    RealMatrix features = run_reservoir(engine, inputs, washout);
    poison(config, seed, features);

    McSeedResult result;
    result.kinds = config.observables;
    result.tasks = tasks;
    for (std::size_t k = 0; k < obs.kinds.size(); ++k) {
        const RealMatrix x = select_kind(features, obs, k, config.virtual_nodes);
        result.scores.push_back(score_tasks(x, inputs, washout, n_train, n_test, tasks, config.ridge));
    }
    return result;
}

// ------------------------------- convergence ---------------------------------

std::vector<double> convergence_seed(const ExperimentConfig& config, const ReservoirSpec& reservoir,
                                     std::uint64_t seed) {
    const SeedSystem sys = make_system(config, reservoir, seed);
    const Propagator prop(sys.hamiltonian, sys.ops.basis, config.dt, 1);
    ReservoirEngine engine(sys.ops, prop, input_spec(reservoir, config.encoding));

    // The map is linear and W is an isometry, so ||rho_A(k) - rho_B(k)||_F =
    // ||W (sigma_A - sigma_B) W†||_F = ||sigma_A(k-1) - sigma_B(k-1)||_F: one
    // trajectory of the difference suffices.
    const FockBasis rest(config.n_sites - 1, sys.ops.local_dim());
    auto tail = [](const std::vector<int>& occ) { return std::vector<int>(occ.begin() + 1, occ.end()); };
    const DensityMatrix full_a = DensityMatrix::product(sys.ops.basis, config.converge_a);
    const DensityMatrix full_b = DensityMatrix::product(sys.ops.basis, config.converge_b);
    const Matrix delta =
        DensityMatrix::product(rest, tail(config.converge_a)).data - DensityMatrix::product(rest, tail(config.converge_b)).data;
    engine.set_reduced(delta);

    const std::vector<double> inputs = generate_inputs(static_cast<std::size_t>(config.steps), config.encoding, seed);
    std::vector<double> distance;
    distance.reserve(inputs.size() + 1);
    distance.push_back((full_a.data - full_b.data).norm());
    for (std::size_t k = 0; k < inputs.size(); ++k) {
        distance.push_back(engine.reduced().norm());
        if (k + 1 < inputs.size()) engine.step(inputs[k]);
    }
    if (forced_failure(config, seed)) distance.back() = std::numeric_limits<double>::quiet_NaN();
    for (double d : distance) {
        if (!std::isfinite(d)) throw NumericalError("convergence: non-finite distance");
    }
    return distance;
}

// ------------------------------- cutoff --------------------------------------

RealMatrix cutoff_seed(const ExperimentConfig& config, const ReservoirSpec& reservoir, std::uint64_t seed) {
    if (!reservoir.statistics.is_boson()) throw std::invalid_argument("cutoff: only boson reservoirs have a Fock cutoff");
    const SeedSystem sys = make_system(config, reservoir, seed);
    const Propagator prop(sys.hamiltonian, sys.ops.basis, config.dt, 1);
    ReservoirEngine engine(sys.ops, prop, input_spec(reservoir, config.encoding));
    const std::vector<double> inputs = generate_inputs(static_cast<std::size_t>(config.steps), config.encoding, seed);
    for (double u : inputs) engine.step(u);
    const RealVector pops = engine.full_populations();
    RealMatrix hist(config.n_sites, sys.ops.local_dim());
    for (int site = 0; site < config.n_sites; ++site) {
        hist.row(site) = level_histogram_from_populations(pops, sys.ops.basis, site).transpose();
    }
    poison(config, seed, hist);
    require_finite(hist, "cutoff");
    return hist;
}

// ------------------------------- spreading -----------------------------------

ChainSeries spread_chain_seed(const ExperimentConfig& config, const ReservoirSpec& reservoir, std::uint64_t seed) {
    const OperatorSet ops = build_ladder_ops(reservoir.statistics, config.chain_sites);
    const SparseOp h = build_chain_hamiltonian(config.chain_sites, ops);
    std::vector<std::pair<int, int>> pairs;
    for (const auto& [i, j] : config.chain_pairs) pairs.emplace_back(i - 1, j - 1);
    const ObservableSet obs = hopping_observables(ops, pairs);
    const Propagator prop(h, ops.basis, config.dt, 1);
    ReservoirEngine engine(ops, prop, input_spec(reservoir, config.encoding), &obs);

    ChainSeries series;
    series.labels = obs.labels;
    series.values.resize(config.steps + 1, obs.size());
    series.values.row(0) = measure(obs, DensityMatrix::vacuum(ops.basis)).transpose();
    const std::vector<double> inputs = generate_inputs(static_cast<std::size_t>(config.steps), config.encoding, seed);
    std::vector<double> row(static_cast<std::size_t>(obs.size()));
    for (std::size_t k = 0; k < inputs.size(); ++k) {
        engine.step(inputs[k], row);
        for (int j = 0; j < obs.size(); ++j) series.values(static_cast<Index>(k) + 1, j) = row[static_cast<std::size_t>(j)];
    }
    poison(config, seed, series.values);
    require_finite(series.values, "spread-chain");
    return series;
}

SpreadSums spread_all_seed(const ExperimentConfig& config, const ReservoirSpec& reservoir, std::uint64_t seed) {
    const SeedSystem sys = make_system(config, reservoir, seed);
    const ObservableSet obs = build_observables(ObservableKind::CrossReal, sys.ops);
    const Propagator prop(sys.hamiltonian, sys.ops.basis, config.dt, 1);
    ReservoirEngine engine(sys.ops, prop, input_spec(reservoir, config.encoding), &obs);
    const std::vector<double> inputs =
        generate_inputs(static_cast<std::size_t>(config.spread_step), config.encoding, seed);
    std::vector<double> row(static_cast<std::size_t>(obs.size()));
    for (std::size_t k = 0; k < inputs.size(); ++k) {
        const bool last = k + 1 == inputs.size();
        engine.step(inputs[k], last ? std::span<double>(row) : std::span<double>());
    }
    SpreadSums sums;
    for (int j = 0; j < obs.size(); ++j) {
        const auto [a, b] = obs.sites[static_cast<std::size_t>(j)];
        const double v = std::abs(row[static_cast<std::size_t>(j)]);
        (a == b ? sums.diagonal : sums.nondiagonal) += v;
    }
    if (forced_failure(config, seed)) sums.nondiagonal = std::numeric_limits<double>::quiet_NaN();
    if (!std::isfinite(sums.nondiagonal) || !std::isfinite(sums.diagonal)) {
        throw NumericalError("spread-all: non-finite observable sum");
    }
    return sums;
}

// ------------------------------- trace ---------------------------------------

TraceSeries trace_seed(const ExperimentConfig& config, const ReservoirSpec& reservoir, std::uint64_t seed) {
    const SeedSystem sys = make_system(config, reservoir, seed);
    const CombinedObservables obs = combine_observables(config.trace_observables, sys.ops);
    const Propagator prop(sys.hamiltonian, sys.ops.basis, config.dt, config.virtual_nodes);
    ReservoirEngine engine(sys.ops, prop, input_spec(reservoir, config.encoding), &obs.set);

    TraceSeries series;
    series.inputs = generate_inputs(static_cast<std::size_t>(config.steps), config.encoding, seed);
    series.labels = obs.set.labels;
    const int m = obs.set.size();
    const int v_count = config.virtual_nodes;
    series.values.resize(static_cast<Index>(config.steps) * v_count, m);
    std::vector<double> row(static_cast<std::size_t>(engine.n_features()));
    for (std::size_t k = 0; k < series.inputs.size(); ++k) {
        engine.step(series.inputs[k], row);
        for (int v = 0; v < v_count; ++v) {
            for (int j = 0; j < m; ++j) {
                series.values(static_cast<Index>(k) * v_count + v, j) = row[static_cast<std::size_t>(v * m + j)];
            }
        }
    }
    poison(config, seed, series.values);
    require_finite(series.values, "trace");
    return series;
}

// ------------------------------- IPC -----------------------------------------

IpcResult ipc_seed(const ExperimentConfig& config, const ReservoirSpec& reservoir, std::uint64_t seed) {
    const SeedSystem sys = make_system(config, reservoir, seed);
    const CombinedObservables obs = combine_observables(config.observables, sys.ops);
    const Propagator prop(sys.hamiltonian, sys.ops.basis, config.dt, config.virtual_nodes);
    ReservoirEngine engine(sys.ops, prop, input_spec(reservoir, Encoding::Symmetric), &obs.set);
    const int washout = std::max(config.washout_for(reservoir), config.ipc.window - 1);
    const std::vector<double> inputs =
        generate_inputs(static_cast<std::size_t>(washout + config.ipc_length), Encoding::Symmetric, seed);
    RealMatrix features = run_reservoir(engine, inputs, washout);
    poison(config, seed, features);
    return information_processing_capacity(features, inputs, washout, config.ipc, seed);
}

// ------------------------------- spectrum ------------------------------------

TransferSpectrum spectrum_seed(const ExperimentConfig& config, const ReservoirSpec& reservoir, std::uint64_t seed,
                               double u) {
    const SeedSystem sys = make_system(config, reservoir, seed);
    const Propagator prop(sys.hamiltonian, sys.ops.basis, config.dt, 1);
    const InputSpec spec = input_spec(reservoir, Encoding::UnitInterval);
    Matrix t;
    if (config.spectrum_full) {
        t = transfer_matrix(kraus_family(prop.unitary(), u, spec, sys.ops.basis));
    } else {
        const ReservoirEngine engine(sys.ops, prop, spec);
        t = transfer_matrix(engine.reduced_kraus(u));
    }
    if (forced_failure(config, seed)) t(0, 0) = std::numeric_limits<double>::quiet_NaN();
    return spectrum(t);
}

}  // namespace qrc
