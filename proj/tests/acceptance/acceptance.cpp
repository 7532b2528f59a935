// Acceptance suite: one PASS/FAIL line per criterion. Pass criterion numbers
// as arguments to run a subset (e.g. `acceptance 1 2 14`).

#include "../unit/oracles.hpp"

#include "qrc/commands.hpp"
#include "qrc/experiments.hpp"
#include "qrc/kraus_spectral.hpp"
#include "qrc/sweep.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

using namespace qrc;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

int worker_count() { return std::max(1u, std::thread::hardware_concurrency()); }

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

double median(const std::vector<double>& v) { return quantile(v, 0.5); }

// Runs fn(seed) for every seed; any failed job aborts the criterion.
template <typename R, typename Fn>
std::vector<R> over_seeds(const std::vector<std::uint64_t>& seeds, Fn fn) {
    auto outcomes = run_jobs<R>(seeds.size(), worker_count(), [&](std::size_t i) { return fn(seeds[i]); });
    std::vector<R> out;
    out.reserve(outcomes.size());
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        if (!outcomes[i].ok()) throw std::runtime_error("seed " + std::to_string(seeds[i]) + ": " + outcomes[i].error);
        out.push_back(std::move(*outcomes[i].value));
    }
    return out;
}

std::vector<std::uint64_t> seed_range(std::uint64_t n) {
    std::vector<std::uint64_t> s(n);
    for (std::uint64_t i = 0; i < n; ++i) s[i] = i + 1;
    return s;
}

ReservoirSpec reservoir(const Statistics& s, int e = 1) { return ReservoirSpec{s, e}; }

double dense_norm(const SparseOp& op) { return Matrix(op).norm(); }

// ------------------------------------------------------------------ 1

Verdict algebra_identities() {
    double worst = 0.0;
    int systems = 0;
    std::vector<Statistics> stats{Statistics::qubit(), Statistics::fermion()};
    for (int c = 1; c <= 3; ++c) stats.push_back(Statistics::boson(c));
    for (const Statistics& s : stats) {
        for (int n = 1; n <= 4; ++n) {
            const OperatorSet ops = build_ladder_ops(s, n);
            const SparseOp id = ops.identity();
            for (int i = 0; i < n; ++i) {
                const SparseOp& a = ops.lowering[static_cast<std::size_t>(i)];
                const SparseOp& ad = ops.raising[static_cast<std::size_t>(i)];
                for (int j = 0; j < n; ++j) {
                    const SparseOp& b = ops.lowering[static_cast<std::size_t>(j)];
                    const SparseOp& bd = ops.raising[static_cast<std::size_t>(j)];
                    double r1 = 0.0, r2 = 0.0;
                    if (s.is_fermion()) {
                        const SparseOp expect = (i == j) ? id : SparseOp(id.rows(), id.cols());
                        r1 = dense_norm(a * bd + bd * a - expect);
                        r2 = dense_norm(a * b + b * a);
                    } else if (s.is_qubit() && i == j) {
                        r1 = dense_norm(a * ad + ad * a - id);
                        r2 = dense_norm(a * a);
                    } else if (i == j) {
                        // Exact truncated form: I - (n_co+1) P(n_co).
                        const SparseOp expect = id - cplx(s.cutoff + 1.0, 0.0) * ops.level_projector(i, s.cutoff);
                        r1 = dense_norm(a * ad - ad * a - expect);
                    } else {
                        r1 = dense_norm(a * bd - bd * a);
                        r2 = dense_norm(a * b - b * a);
                    }
                    worst = std::max({worst, r1, r2});
                }
            }
            ++systems;
        }
    }
    return {worst < 1e-12, std::to_string(systems) + " systems, max residual " + fmt(worst)};
}

// ------------------------------------------------------------------ 2

Verdict kraus_equivalence() {
    const int n = 3;
    const OperatorSet ops = build_ladder_ops(Statistics::qubit(), n);
    double worst_complete = 0.0, worst_map = 0.0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        std::mt19937_64 gen(seed * 7919);
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        const double u = unif(gen);
        const Propagator prop(build_hamiltonian(sample_couplings(n, seed), ops), ops.basis, 10.0);
        const KrausFamily k = kraus_pair(prop.unitary(), u, InputSpec{}, ops.basis);
        worst_complete = std::max(worst_complete, completeness_residual(k.operators));
        DensityMatrix rho{oracle::random_density(ops.total_dim(), gen), ops.basis};
        const Matrix via_kraus = apply_kraus(k.operators, rho.data);
        const DensityMatrix direct = inject_and_evolve(rho, u, InputSpec{}, prop);
        worst_map = std::max(worst_map, (via_kraus - direct.data).norm());
    }
    return {worst_complete < 1e-10 && worst_map < 1e-10,
            "completeness " + fmt(worst_complete) + ", map discrepancy " + fmt(worst_map) + " over 100 triples"};
}

// ------------------------------------------------------------------ 3

Verdict spectral_radius() {
    double worst_radius = 0.0, worst_second = 0.0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const int n = seed % 2 == 0 ? 2 : 3;
        const OperatorSet ops = build_ladder_ops(Statistics::qubit(), n);
        std::mt19937_64 gen(seed);
        const double u = std::uniform_real_distribution<double>(0.05, 0.95)(gen);
        const Propagator prop(build_hamiltonian(sample_couplings(n, seed), ops), ops.basis, 10.0);
        const TransferSpectrum sp = spectrum(transfer_matrix(kraus_pair(prop.unitary(), u, InputSpec{}, ops.basis)));
        worst_radius = std::max(worst_radius, std::abs(sp.spectral_radius - 1.0));
        worst_second = std::max(worst_second, sp.second_modulus);
    }
    return {worst_radius < 1e-8 && worst_second < 1.0,
            "max |radius-1| " + fmt(worst_radius) + ", max second modulus " + fmt(worst_second)};
}

// ------------------------------------------------------------------ 4

Verdict rabi_oracle() {
    double worst = 0.0;
    for (const Statistics& s : {Statistics::qubit(), Statistics::fermion(), Statistics::boson(5)}) {
        const OperatorSet ops = build_ladder_ops(s, 2);
        const SparseOp h = build_chain_hamiltonian(2, ops);
        const ObservableSet occ = build_observables(ObservableKind::Occupations, ops);
        for (int k = 1; k <= 400; ++k) {
            const double t = 0.025 * k;
            const Propagator prop(h, ops.basis, t);
            const DensityMatrix rho = inject_and_evolve(DensityMatrix::vacuum(ops.basis), 0.0, InputSpec{}, prop);
            worst = std::max(worst, std::abs(measure(occ, rho)(1) - std::pow(std::sin(t), 2)));
        }
    }
    return {worst < 1e-9, "max |<n2>-sin^2 t| " + fmt(worst) + " on t in (0,10]"};
}

// ------------------------------------------------------------------ 5

Verdict long_run_invariants() {
    struct Case {
        Statistics s;
        int e;
    };
    double worst_number = 0.0, worst_purity = 0.0;
    std::string failure;
    for (const Case& c : {Case{Statistics::qubit(), 1}, Case{Statistics::fermion(), 1}, Case{Statistics::boson(4), 1},
                          Case{Statistics::boson(4), 2}}) {
        const int n = 3;
        const OperatorSet ops = build_ladder_ops(c.s, n);
        const Propagator prop(build_hamiltonian(sample_couplings(n, 3), ops), ops.basis, 10.0);
        const Matrix u = prop.unitary();
        const Matrix id = Matrix::Identity(ops.total_dim(), ops.total_dim());
        const Matrix ntot(ops.total_number());
        const InputSpec spec{c.e, Encoding::UnitInterval};
        const auto inputs = generate_inputs(2000, Encoding::UnitInterval, 3);
        DensityMatrix rho = DensityMatrix::vacuum(ops.basis);
        try {
            for (double x : inputs) {
                const DensityMatrix injected = inject_and_evolve(rho, x, spec, id);
                rho.data = u * injected.data * u.adjoint();
                rho.check_valid();
                const double before = (ntot * injected.data).trace().real();
                const double after = (ntot * rho.data).trace().real();
                worst_number = std::max(worst_number, std::abs(after - before));
                worst_purity = std::max(worst_purity, rho.purity() - 1.0);
            }
        } catch (const std::exception& e) {
            failure = c.s.name() + ": " + e.what();
            break;
        }
    }
    const bool ok = failure.empty() && worst_number < 1e-10 && worst_purity <= 1e-10;
    return {ok, (failure.empty() ? std::string("trace/Hermitian/PSD held") : failure) + ", number drift " +
                    fmt(worst_number) + ", purity excess " + fmt(worst_purity) + " over 2000 steps"};
}

// ------------------------------------------------------------------ 6

Verdict cutoff_validation() {
    // Truncate at or above the tested level so P(n >= threshold) is observable.
    struct Case {
        int e;
        int cutoff;
        int threshold;
    };
    std::string detail;
    bool ok = true;
    for (const Case& c : {Case{1, 7, 6}, Case{2, 7, 7}}) {
        ExperimentConfig config = config_from_json(json{{"n_sites", 4}, {"dt", 10.0}, {"steps", 300}});
        const ReservoirSpec r = reservoir(Statistics::boson(c.cutoff), c.e);
        const auto hists = over_seeds<RealMatrix>(seed_range(50), [&](std::uint64_t s) { return cutoff_seed(config, r, s); });
        double tail = 0.0;
        for (const RealMatrix& h : hists) tail += h.rightCols(c.cutoff + 1 - c.threshold).sum() / static_cast<double>(h.rows());
        tail /= static_cast<double>(hists.size());
        ok = ok && tail < 0.01;
        detail += "e=" + std::to_string(c.e) + " P(n>=" + std::to_string(c.threshold) + ")=" + fmt(tail) + " ";
    }
    return {ok, detail + "(50 seeds, 300 steps)"};
}

// ------------------------------------------------------------------ 7

Verdict convergence() {
    ExperimentConfig config = config_from_json(json{{"n_sites", 4}, {"dt", 10.0}, {"steps", 1000}});
    const auto seeds = seed_range(100);
    auto median_at = [&](const ReservoirSpec& r, int steps, std::vector<int> at) {
        ExperimentConfig c = config;
        c.steps = steps;
        const auto runs = over_seeds<std::vector<double>>(seeds, [&](std::uint64_t s) { return convergence_seed(c, r, s); });
        std::vector<double> out;
        for (int k : at) {
            std::vector<double> col;
            for (const auto& d : runs) col.push_back(d[static_cast<std::size_t>(k)]);
            out.push_back(median(col));
        }
        return out;
    };
    const auto qubit = median_at(reservoir(Statistics::qubit()), 1000, {300, 1000});
    const auto boson = median_at(reservoir(Statistics::boson(5)), 1000, {1000});
    const auto fermion = median_at(reservoir(Statistics::fermion()), 300, {300});
    const bool ok = qubit[1] < 1e-3 && boson[0] < 1e-3 && fermion[0] > qubit[0];
    return {ok, "median@1000 qubit " + fmt(qubit[1]) + " boson " + fmt(boson[0]) + "; median@300 fermion " +
                    fmt(fermion[0]) + " vs qubit " + fmt(qubit[0])};
}

// ------------------------------------------------------------------ 8, 10, 11

// Capacities per [kind][task] across seeds, from one trajectory per seed.
struct McTable {
    std::vector<ObservableKind> kinds;
    std::vector<TaskSpec> tasks;
    std::vector<std::vector<std::vector<double>>> values;  // [kind][task][seed]

    std::vector<double> at(ObservableKind kind, const TaskSpec& t) const {
        const auto k = static_cast<std::size_t>(std::find(kinds.begin(), kinds.end(), kind) - kinds.begin());
        for (std::size_t i = 0; i < tasks.size(); ++i) {
            if (tasks[i].kind == t.kind && tasks[i].delay == t.delay && tasks[i].degree == t.degree) return values[k][i];
        }
        throw std::logic_error("task not in table");
    }
};

McTable mc_table(const ExperimentConfig& config, const ReservoirSpec& r, std::uint64_t n_seeds,
                 const std::vector<TaskSpec>& tasks) {
    const auto results = over_seeds<McSeedResult>(seed_range(n_seeds), [&](std::uint64_t s) {
        return memory_capacity_seed(config, r, s, tasks);
    });
    McTable t{config.observables, tasks, {}};
    t.values.assign(config.observables.size(), std::vector<std::vector<double>>(tasks.size()));
    for (const McSeedResult& res : results) {
        for (std::size_t k = 0; k < res.scores.size(); ++k) {
            for (std::size_t i = 0; i < tasks.size(); ++i) t.values[k][i].push_back(res.scores[k][i].test.value);
        }
    }
    return t;
}

struct McCache {
    std::map<std::string, McTable> tables;
    bool ready = false;
};

McCache& mc_cache() {
    static McCache cache;
    if (cache.ready) return cache;
    std::vector<TaskSpec> tasks;
    for (int tau = 0; tau <= 4; ++tau) tasks.push_back(TaskSpec::linear(tau));
    for (int q = 2; q <= 5; ++q) tasks.push_back(TaskSpec::power(1, q));
    ExperimentConfig base = config_from_json(json{{"n_sites", 4}, {"dt", 10.0}, {"virtual_nodes", 1}});
    cache.tables["qubit"] = mc_table(base, reservoir(Statistics::qubit()), 100, tasks);
    cache.tables["boson"] = mc_table(base, reservoir(Statistics::boson(5)), 100, tasks);
    ExperimentConfig fermion = base;
    fermion.observables = {ObservableKind::CrossReal, ObservableKind::QuadraturePlus, ObservableKind::QuadratureMinus,
                           ObservableKind::QuadratureSqPlus, ObservableKind::QuadratureSqMinus};
    cache.tables["fermion"] = mc_table(fermion, reservoir(Statistics::fermion()), 100, tasks);
    cache.ready = true;
    return cache;
}

Verdict linear_mc_ordering() {
    const auto& t = mc_cache().tables;
    const auto cr = ObservableKind::CrossReal;
    const Quartiles q = quartiles(t.at("qubit").at(cr, TaskSpec::linear(4)));
    const double f4 = median(t.at("fermion").at(cr, TaskSpec::linear(4)));
    const double b4 = median(t.at("boson").at(cr, TaskSpec::linear(4)));
    bool ok = f4 > q.median && b4 >= q.q25 && b4 <= q.q75;
    double low = 1.0;
    for (const char* name : {"qubit", "fermion", "boson"}) {
        for (int tau : {0, 1}) low = std::min(low, median(t.at(name).at(cr, TaskSpec::linear(tau))));
    }
    ok = ok && low > 0.9;
    return {ok, "tau=4 medians fermion " + fmt(f4) + " qubit " + fmt(q.median) + " [IQR " + fmt(q.q25) + ", " +
                    fmt(q.q75) + "] boson " + fmt(b4) + "; min median tau<=1 " + fmt(low)};
}

Verdict boson_encoding() {
    const auto& e1 = mc_cache().tables.at("boson");
    std::vector<TaskSpec> tasks{TaskSpec::linear(2), TaskSpec::linear(3), TaskSpec::linear(4)};
    ExperimentConfig config = config_from_json(json{{"n_sites", 4}, {"dt", 10.0}, {"virtual_nodes", 1}});
    const McTable e2 = mc_table(config, reservoir(Statistics::boson(6), 2), 50, tasks);
    bool ok = true;
    std::string detail;
    for (const TaskSpec& task : tasks) {
        auto v1 = e1.at(ObservableKind::CrossReal, task);
        v1.resize(50);  // paired seeds 1..50
        const double m1 = median(v1), m2 = median(e2.at(ObservableKind::CrossReal, task));
        ok = ok && m2 > m1;
        detail += "tau=" + std::to_string(task.delay) + " e2 " + fmt(m2) + " vs e1 " + fmt(m1) + "; ";
    }
    return {ok, detail + "50 paired seeds"};
}

Verdict observable_study() {
    const McTable& f = mc_cache().tables.at("fermion");
    const TaskSpec t1 = TaskSpec::linear(1);
    const double cross = median(f.at(ObservableKind::CrossReal, t1));
    const double sq_plus = median(f.at(ObservableKind::QuadratureSqPlus, t1));
    const double sq_minus = median(f.at(ObservableKind::QuadratureSqMinus, t1));
    const double plus = median(f.at(ObservableKind::QuadraturePlus, t1));
    const double minus = median(f.at(ObservableKind::QuadratureMinus, t1));
    const bool ok = sq_plus < 0.05 && sq_minus < 0.05 && cross > 0.8;
    return {ok, "fermion tau=1 medians: cross_real " + fmt(cross) + ", quadrature_sq_plus " + fmt(sq_plus) +
                    ", quadrature_sq_minus " + fmt(sq_minus) + " (linear quadratures, reported only: " + fmt(plus) +
                    ", " + fmt(minus) + ")"};
}

Verdict nonlinear_monotonicity() {
    bool ok = true;
    std::string detail;
    for (const char* name : {"qubit", "fermion", "boson"}) {
        const McTable& t = mc_cache().tables.at(name);
        detail += std::string(name) + " [";
        double prev = 2.0;
        for (int q = 2; q <= 5; ++q) {
            const double m = median(t.at(ObservableKind::CrossReal, TaskSpec::power(1, q)));
            ok = ok && m <= prev;
            prev = m;
            detail += fmt(m) + (q < 5 ? " " : "] ");
        }
    }
    return {ok, detail + "median C(tau=1, q=2..5)"};
}

// ------------------------------------------------------------------ 12

Verdict ipc() {
    ExperimentConfig config = config_from_json(json{{"n_sites", 4}, {"dt", 10.0}, {"ipc_length", 10000}});
    const auto seeds = seed_range(10);
    const auto qubit =
        over_seeds<IpcResult>(seeds, [&](std::uint64_t s) { return ipc_seed(config, reservoir(Statistics::qubit()), s); });
    const auto fermion = over_seeds<IpcResult>(
        seeds, [&](std::uint64_t s) { return ipc_seed(config, reservoir(Statistics::fermion()), s); });
    const double bound = 10.0 + 1e-6;
    double worst = 0.0;
    std::vector<double> qubit_totals;
    for (const auto& r : qubit) {
        qubit_totals.push_back(r.total);
        worst = std::max(worst, r.total);
    }
    double even = 0.0, total = 0.0;
    for (const auto& r : fermion) {
        worst = std::max(worst, r.total);
        for (std::size_t q = 1; q < r.per_degree.size(); q += 2) even += r.per_degree[q];
        total += r.total;
    }
    const double share = total > 0.0 ? even / total : 0.0;
    const double qmed = median(qubit_totals);
    const bool ok = worst <= bound && qmed >= 9.0 && share < 0.10;
    return {ok, "max total " + fmt(worst) + " (bound 10), qubit median total " + fmt(qmed) +
                    ", fermion even-degree share " + fmt(share)};
}

// ------------------------------------------------------------------ 13

Verdict spreading() {
    ExperimentConfig config = config_from_json(json{{"chain_sites", 5}, {"steps", 1000}, {"dt", 10.0}});
    const auto seeds = seed_range(10);
    double odd = 0.0;
    std::map<std::string, double> far;
    for (const Statistics& s : {Statistics::qubit(), Statistics::fermion()}) {
        const auto runs =
            over_seeds<ChainSeries>(seeds, [&](std::uint64_t seed) { return spread_chain_seed(config, reservoir(s), seed); });
        double acc = 0.0;
        for (const ChainSeries& c : runs) {
            // Pairs (1,2), (1,3), (1,4), (1,5): columns 0 and 2 are odd distance.
            odd = std::max({odd, c.values.col(0).cwiseAbs().maxCoeff(), c.values.col(2).cwiseAbs().maxCoeff()});
            acc += c.values.col(3).bottomRows(config.steps).cwiseAbs().mean();
        }
        far[s.name()] = acc / static_cast<double>(runs.size());
    }
    ExperimentConfig all = config_from_json(json{{"n_sites", 4}, {"dt", 10.0}, {"spread_step", 3000}});
    std::map<std::string, double> nondiag;
    for (const Statistics& s : {Statistics::qubit(), Statistics::fermion()}) {
        const auto sums =
            over_seeds<SpreadSums>(seed_range(200), [&](std::uint64_t seed) { return spread_all_seed(all, reservoir(s), seed); });
        std::vector<double> v;
        for (const auto& x : sums) v.push_back(x.nondiagonal);
        nondiag[s.name()] = median(v);
    }
    const bool ok = odd < 1e-9 && far["fermion"] > far["qubit"] && nondiag["fermion"] > nondiag["qubit"];
    return {ok, "max odd-distance " + fmt(odd) + "; mean |hop1_5| fermion " + fmt(far["fermion"]) + " qubit " +
                    fmt(far["qubit"]) + "; median non-diagonal sum fermion " + fmt(nondiag["fermion"]) + " qubit " +
                    fmt(nondiag["qubit"])};
}

// ------------------------------------------------------------------ 14

std::map<std::string, std::string> csv_files(const fs::path& dir) {
    std::map<std::string, std::string> out;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (e.path().extension() != ".csv") continue;
        std::ifstream in(e.path(), std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        out[e.path().filename().string()] = ss.str();
    }
    return out;
}

Verdict determinism() {
    const fs::path root = fs::temp_directory_path() / "qrc_acceptance_determinism";
    fs::remove_all(root);
    int compared = 0;
    std::string mismatch;
    for (const std::string& cmd : sweep_commands()) {
        ExperimentConfig base = config_from_json(json::parse(R"({
            "statistics": ["qubit", "fermion", {"statistics": "boson", "cutoff": 3, "excitation": 1}],
            "allow_low_cutoff": true, "n_sites": 3, "dt": 10.0, "virtual_nodes": 2,
            "train_length": 200, "test_length": 100, "washout": 100, "seeds": "1..8",
            "steps": 100, "spread_step": 100, "ipc_length": 1000,
            "ipc": {"max_degree": 3, "window": 6, "surrogates": 50}
        })"));
        if (cmd == "cutoff") base.reservoirs.erase(base.reservoirs.begin(), base.reservoirs.begin() + 2);
        std::vector<std::map<std::string, std::string>> runs;
        for (const auto& [threads, tag] : std::vector<std::pair<int, std::string>>{{1, "a"}, {8, "b"}, {1, "c"}}) {
            ExperimentConfig c = base;
            c.threads = threads;
            c.output = (root / (cmd + "_" + tag)).string();
            const SweepReport rep = run_sweep(cmd, c);
            if (rep.exit_code != kExitClean) mismatch += cmd + " exit " + std::to_string(rep.exit_code) + "; ";
            runs.push_back(csv_files(c.output));
        }
        if (runs[0].empty() || runs[0] != runs[1] || runs[0] != runs[2]) mismatch += cmd + " differs; ";
        compared += static_cast<int>(runs[0].size());
    }
    fs::remove_all(root);
    return {mismatch.empty(), std::to_string(compared) + " CSVs identical across threads 1/8 and reruns" +
                                  (mismatch.empty() ? std::string() : ": " + mismatch)};
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
        {"algebra identities", algebra_identities},
        {"kraus completeness and map equivalence", kraus_equivalence},
        {"transfer-matrix spectral radius", spectral_radius},
        {"two-site analytic oracle", rabi_oracle},
        {"long-run state invariants", long_run_invariants},
        {"boson cutoff validation", cutoff_validation},
        {"convergence", convergence},
        {"linear memory capacity ordering", linear_mc_ordering},
        {"boson encoding boost", boson_encoding},
        {"observable study", observable_study},
        {"nonlinear memory capacity monotonicity", nonlinear_monotonicity},
        {"information processing capacity", ipc},
        {"information spreading", spreading},
        {"determinism", determinism},
    };
    std::set<int> selected;
    for (int i = 1; i < argc; ++i) selected.insert(std::stoi(argv[i]));

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        if (!selected.empty() && !selected.contains(id)) continue;
        const auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = criteria[i].second();
        } catch (const std::exception& e) {
            v = {false, std::string("error: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("criterion %2d %-40s %s | %s | %.1f s\n", id, criteria[i].first.c_str(), v.pass ? "PASS" : "FAIL",
                    v.detail.c_str(), secs);
        std::fflush(stdout);
        failures += v.pass ? 0 : 1;
    }
    return failures == 0 ? 0 : 1;
}
