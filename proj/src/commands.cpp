#include "qrc/commands.hpp"

#include "qrc/experiments.hpp"
#include "qrc/io.hpp"
#include "qrc/sweep.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <map>

namespace qrc {

using nlohmann::json;

namespace {

struct Job {
    std::size_t reservoir;
    std::uint64_t seed;
    double u = 0.0;
};

std::vector<Job> reservoir_seed_jobs(const ExperimentConfig& c) {
    std::vector<Job> jobs;
    for (std::size_t r = 0; r < c.reservoirs.size(); ++r) {
        for (std::uint64_t s : c.seeds) jobs.push_back({r, s});
    }
    return jobs;
}

class SweepContext {
public:
    SweepContext(std::string command, const ExperimentConfig& config)
        : command_(std::move(command)), config_(config), start_(std::chrono::steady_clock::now()) {
        dir_ = config.output;
        std::filesystem::create_directories(dir_);
    }

    template <typename Result>
    void record(const std::vector<Job>& jobs, const std::vector<JobOutcome<Result>>& outcomes) {
        for (std::size_t i = 0; i < jobs.size(); ++i) {
            json entry{{"reservoir", config_.reservoirs[jobs[i].reservoir].label()},
                       {"seed", jobs[i].seed},
                       {"status", outcomes[i].ok() ? "ok" : "failed"}};
            if (command_ == "spectrum") entry["u"] = jobs[i].u;
            if (!outcomes[i].ok()) {
                entry["error"] = outcomes[i].error;
                ++failed_;
            }
            seeds_.push_back(std::move(entry));
        }
        jobs_ += jobs.size();
    }

    CsvWriter open(const std::string& name, const std::vector<std::string>& header) {
        return CsvWriter(dir_ / name, header);
    }

    void finish(CsvWriter& w) {
        w.close();
        files_.push_back({w.path(), w.rows()});
    }

    SweepReport report() {
        SweepReport rep;
        rep.jobs = jobs_;
        rep.failed = failed_;
        if (failed_ == 0) {
            rep.exit_code = kExitClean;
        } else if (failed_ < jobs_) {
            rep.exit_code = kExitPartial;
        } else {
            rep.exit_code = kExitFatal;
        }
        json outputs = json::array();
        for (const auto& [path, rows] : files_) {
            outputs.push_back({{"file", path.filename().string()}, {"rows", rows}, {"sha256", sha256_file(path)}});
            rep.outputs.push_back(path);
        }
        const double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        rep.manifest = {{"software", "qrc"},
                        {"version", kSoftwareVersion},
                        {"command", command_},
                        {"config_hash", config_hash(config_)},
                        {"config", config_to_json(config_)},
                        {"status", failed_ == 0 ? "clean" : (failed_ < jobs_ ? "partial" : "failed")},
                        {"jobs", jobs_},
                        {"failed", failed_},
                        {"seeds", seeds_},
                        {"wall_clock_seconds", wall},
                        {"outputs", outputs}};
        std::ofstream out(dir_ / "manifest.json", std::ios::binary | std::ios::trunc);
        out << rep.manifest.dump(2) << '\n';
        if (!out) throw std::runtime_error("cannot write manifest in " + dir_.string());
        return rep;
    }

    const ExperimentConfig& config() const { return config_; }

private:
    std::string command_;
    const ExperimentConfig& config_;
    std::filesystem::path dir_;
    std::chrono::steady_clock::time_point start_;
    json seeds_ = json::array();
    std::vector<std::pair<std::filesystem::path, std::size_t>> files_;
    std::size_t jobs_ = 0;
    std::size_t failed_ = 0;
};

std::vector<CsvField> reservoir_fields(const ReservoirSpec& r) {
    return {r.statistics.name(), std::int64_t{r.excitation}, std::int64_t{r.statistics.cutoff}};
}

template <typename T>
std::vector<T> concat(std::vector<T> a, const std::vector<T>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

std::string flags_of(const TaskScore& s) {
    std::string f;
    if (s.test.degenerate) f += "degenerate_test";
    if (s.train.degenerate) f += std::string(f.empty() ? "" : "|") + "degenerate_train";
    return f;
}

// ------------------------------- mc / nmc ------------------------------------

SweepReport run_capacity(const std::string& command, const ExperimentConfig& c, bool nonlinear) {
    SweepContext ctx(command, c);
    const std::vector<TaskSpec> tasks = nonlinear ? power_tasks(c) : linear_tasks(c);
    const auto jobs = reservoir_seed_jobs(c);
    const auto outcomes = run_jobs<McSeedResult>(jobs.size(), c.threads, [&](std::size_t i) {
        return memory_capacity_seed(c, c.reservoirs[jobs[i].reservoir], jobs[i].seed, tasks);
    });
    ctx.record(jobs, outcomes);

    const std::vector<std::string> lead{"statistics", "e", "cutoff", "N", "dt", "V", "observables", "task_kind", "tau", "q"};
    CsvWriter raw = ctx.open(command + ".csv", concat<std::string>(lead, std::vector<std::string>{"seed", "C", "C_train", "flags"}));
    CsvWriter summary = ctx.open(command + "_summary.csv",
                                 concat<std::string>(lead, std::vector<std::string>{"n_seeds", "n_failed", "median", "q25", "q75",
                                                                                    "n_train", "n_test", "washout"}));
    for (std::size_t r = 0; r < c.reservoirs.size(); ++r) {
        const ReservoirSpec& res = c.reservoirs[r];
        for (std::size_t k = 0; k < c.observables.size(); ++k) {
            for (std::size_t t = 0; t < tasks.size(); ++t) {
                std::vector<CsvField> head = reservoir_fields(res);
                head.insert(head.end(), {std::int64_t{c.n_sites}, c.dt, std::int64_t{c.virtual_nodes},
                                         observable_kind_name(c.observables[k]), tasks[t].kind_name(),
                                         std::int64_t{tasks[t].delay}, std::int64_t{tasks[t].total_degree()}});
                std::vector<double> values;
                std::int64_t failed = 0;
                for (std::size_t i = 0; i < jobs.size(); ++i) {
                    if (jobs[i].reservoir != r) continue;
                    if (!outcomes[i].ok()) {
                        ++failed;
                        continue;
                    }
                    const TaskScore& s = outcomes[i].value->scores[k][t];
                    values.push_back(s.test.value);
                    raw.row(concat<CsvField>(head, std::vector<CsvField>{static_cast<std::int64_t>(jobs[i].seed), s.test.value,
                                                                         s.train.value, flags_of(s)}));
                }
                if (values.empty()) continue;
                const Quartiles q = quartiles(values);
                summary.row(concat<CsvField>(
                    head, std::vector<CsvField>{static_cast<std::int64_t>(values.size()), failed, q.median, q.q25, q.q75,
                                                std::int64_t{c.train_for()}, std::int64_t{c.test_for()},
                                                std::int64_t{c.washout_for(res)}}));
            }
        }
    }
    ctx.finish(raw);
    ctx.finish(summary);
    return ctx.report();
}

// ------------------------------- converge ------------------------------------

SweepReport run_converge(const ExperimentConfig& c) {
    SweepContext ctx("converge", c);
    const auto jobs = reservoir_seed_jobs(c);
    const auto outcomes = run_jobs<std::vector<double>>(jobs.size(), c.threads, [&](std::size_t i) {
        return convergence_seed(c, c.reservoirs[jobs[i].reservoir], jobs[i].seed);
    });
    ctx.record(jobs, outcomes);
    CsvWriter out = ctx.open("converge.csv", {"statistics", "e", "cutoff", "step", "quantile", "distance"});
    for (std::size_t r = 0; r < c.reservoirs.size(); ++r) {
        std::vector<const std::vector<double>*> traces;
        for (std::size_t i = 0; i < jobs.size(); ++i) {
            if (jobs[i].reservoir == r && outcomes[i].ok()) traces.push_back(&*outcomes[i].value);
        }
        if (traces.empty()) continue;
        const std::size_t n_steps = traces.front()->size();
        std::vector<double> column(traces.size());
        for (std::size_t k = 0; k < n_steps; ++k) {
            for (std::size_t s = 0; s < traces.size(); ++s) column[s] = (*traces[s])[k];
            const Quartiles q = quartiles(column);
            const std::vector<std::pair<const char*, double>> rows{{"q25", q.q25}, {"median", q.median}, {"q75", q.q75}};
            for (const auto& [name, v] : rows) {
                out.row(concat<CsvField>(reservoir_fields(c.reservoirs[r]),
                                         std::vector<CsvField>{static_cast<std::int64_t>(k), std::string(name), v}));
            }
        }
    }
    ctx.finish(out);
    return ctx.report();
}

// ------------------------------- cutoff --------------------------------------

SweepReport run_cutoff(const ExperimentConfig& c) {
    for (const ReservoirSpec& r : c.reservoirs) {
        if (!r.statistics.is_boson()) throw ConfigError("cutoff: every reservoir must be a boson reservoir");
    }
    SweepContext ctx("cutoff", c);
    const auto jobs = reservoir_seed_jobs(c);
    const auto outcomes = run_jobs<RealMatrix>(jobs.size(), c.threads, [&](std::size_t i) {
        return cutoff_seed(c, c.reservoirs[jobs[i].reservoir], jobs[i].seed);
    });
    ctx.record(jobs, outcomes);
    CsvWriter raw = ctx.open("cutoff.csv", {"statistics", "e", "cutoff", "seed", "site", "level", "probability"});
    CsvWriter summary =
        ctx.open("cutoff_summary.csv", {"statistics", "e", "cutoff", "level", "n_samples", "mean", "std", "median", "q25", "q75"});
    for (std::size_t r = 0; r < c.reservoirs.size(); ++r) {
        const int levels = c.reservoirs[r].statistics.local_dim();
        std::vector<std::vector<double>> pooled(static_cast<std::size_t>(levels));
        for (std::size_t i = 0; i < jobs.size(); ++i) {
            if (jobs[i].reservoir != r || !outcomes[i].ok()) continue;
            const RealMatrix& h = *outcomes[i].value;
            for (Index site = 0; site < h.rows(); ++site) {
                for (int n = 0; n < levels; ++n) {
                    raw.row(concat<CsvField>(reservoir_fields(c.reservoirs[r]),
                                             std::vector<CsvField>{static_cast<std::int64_t>(jobs[i].seed),
                                                                   static_cast<std::int64_t>(site + 1), std::int64_t{n}, h(site, n)}));
                    pooled[static_cast<std::size_t>(n)].push_back(h(site, n));
                }
            }
        }
        for (int n = 0; n < levels; ++n) {
            const auto& v = pooled[static_cast<std::size_t>(n)];
            if (v.empty()) continue;
            double mean = 0.0;
            for (double x : v) mean += x;
            mean /= static_cast<double>(v.size());
            double var = 0.0;
            for (double x : v) var += (x - mean) * (x - mean);
            const double sd = v.size() > 1 ? std::sqrt(var / static_cast<double>(v.size() - 1)) : 0.0;
            const Quartiles q = quartiles(v);
            summary.row(concat<CsvField>(reservoir_fields(c.reservoirs[r]),
                                         std::vector<CsvField>{std::int64_t{n}, static_cast<std::int64_t>(v.size()), mean, sd,
                                                               q.median, q.q25, q.q75}));
        }
    }
    ctx.finish(raw);
    ctx.finish(summary);
    return ctx.report();
}

// ------------------------------- ipc -----------------------------------------

SweepReport run_ipc(const ExperimentConfig& c) {
    SweepContext ctx("ipc", c);
    const auto jobs = reservoir_seed_jobs(c);
    const auto outcomes = run_jobs<IpcResult>(jobs.size(), c.threads, [&](std::size_t i) {
        return ipc_seed(c, c.reservoirs[jobs[i].reservoir], jobs[i].seed);
    });
    ctx.record(jobs, outcomes);
    CsvWriter terms = ctx.open("ipc.csv", {"statistics", "e", "cutoff", "seed", "degree", "delay_profile", "capacity", "threshold"});
    CsvWriter totals = ctx.open("ipc_totals.csv", {"statistics", "e", "cutoff", "seed", "degree", "capacity", "feature_rank",
                                                   "targets_evaluated"});
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        if (!outcomes[i].ok()) continue;
        const IpcResult& res = *outcomes[i].value;
        const auto head = concat<CsvField>(reservoir_fields(c.reservoirs[jobs[i].reservoir]),
                                           std::vector<CsvField>{static_cast<std::int64_t>(jobs[i].seed)});
        for (const IpcTerm& t : res.terms) {
            terms.row(concat<CsvField>(head, std::vector<CsvField>{std::int64_t{t.degree},
                                                                   TaskSpec::legendre(t.profile).profile_string(),
                                                                   t.capacity, t.threshold}));
        }
        const auto tail = std::vector<CsvField>{static_cast<std::int64_t>(res.feature_rank),
                                                static_cast<std::int64_t>(res.evaluated)};
        for (std::size_t q = 0; q < res.per_degree.size(); ++q) {
            totals.row(concat<CsvField>(concat<CsvField>(head, std::vector<CsvField>{std::to_string(q + 1), res.per_degree[q]}), tail));
        }
        totals.row(concat<CsvField>(concat<CsvField>(head, std::vector<CsvField>{std::string("total"), res.total}), tail));
    }
    ctx.finish(terms);
    ctx.finish(totals);
    return ctx.report();
}

// ------------------------------- spreading -----------------------------------

SweepReport run_spread_chain(const ExperimentConfig& c) {
    SweepContext ctx("spread-chain", c);
    const auto jobs = reservoir_seed_jobs(c);
    const auto outcomes = run_jobs<ChainSeries>(jobs.size(), c.threads, [&](std::size_t i) {
        return spread_chain_seed(c, c.reservoirs[jobs[i].reservoir], jobs[i].seed);
    });
    ctx.record(jobs, outcomes);
    CsvWriter out = ctx.open("spread_chain.csv", {"statistics", "e", "cutoff", "seed", "step", "observable", "value"});
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        if (!outcomes[i].ok()) continue;
        const ChainSeries& s = *outcomes[i].value;
        const auto head = reservoir_fields(c.reservoirs[jobs[i].reservoir]);
        for (Index k = 0; k < s.values.rows(); ++k) {
            for (Index j = 0; j < s.values.cols(); ++j) {
                out.row(concat<CsvField>(head, std::vector<CsvField>{static_cast<std::int64_t>(jobs[i].seed), static_cast<std::int64_t>(k),
                                                                     s.labels[static_cast<std::size_t>(j)], s.values(k, j)}));
            }
        }
    }
    ctx.finish(out);
    return ctx.report();
}

SweepReport run_spread_all(const ExperimentConfig& c) {
    SweepContext ctx("spread-all", c);
    const auto jobs = reservoir_seed_jobs(c);
    const auto outcomes = run_jobs<SpreadSums>(jobs.size(), c.threads, [&](std::size_t i) {
        return spread_all_seed(c, c.reservoirs[jobs[i].reservoir], jobs[i].seed);
    });
    ctx.record(jobs, outcomes);
    CsvWriter raw = ctx.open("spread_all.csv", {"statistics", "e", "cutoff", "seed", "step", "nondiagonal_sum", "diagonal_sum"});
    CsvWriter summary = ctx.open("spread_all_summary.csv", {"statistics", "e", "cutoff", "step", "quantity", "n_seeds", "median", "q25", "q75"});
    for (std::size_t r = 0; r < c.reservoirs.size(); ++r) {
        std::vector<double> nd, dg;
        const auto head = reservoir_fields(c.reservoirs[r]);
        for (std::size_t i = 0; i < jobs.size(); ++i) {
            if (jobs[i].reservoir != r || !outcomes[i].ok()) continue;
            const SpreadSums& s = *outcomes[i].value;
            nd.push_back(s.nondiagonal);
            dg.push_back(s.diagonal);
            raw.row(concat<CsvField>(head, std::vector<CsvField>{static_cast<std::int64_t>(jobs[i].seed), std::int64_t{c.spread_step},
                                                                 s.nondiagonal, s.diagonal}));
        }
        if (nd.empty()) continue;
        for (const auto& [name, values] : {std::pair<const char*, const std::vector<double>*>{"nondiagonal_sum", &nd},
                                           std::pair<const char*, const std::vector<double>*>{"diagonal_sum", &dg}}) {
            const Quartiles q = quartiles(*values);
            summary.row(concat<CsvField>(head, std::vector<CsvField>{std::int64_t{c.spread_step}, std::string(name),
                                                                     static_cast<std::int64_t>(values->size()), q.median, q.q25, q.q75}));
        }
    }
    ctx.finish(raw);
    ctx.finish(summary);
    return ctx.report();
}

// ------------------------------- trace ---------------------------------------

SweepReport run_trace(const ExperimentConfig& c) {
    SweepContext ctx("trace", c);
    const auto jobs = reservoir_seed_jobs(c);
    const auto outcomes = run_jobs<TraceSeries>(jobs.size(), c.threads, [&](std::size_t i) {
        return trace_seed(c, c.reservoirs[jobs[i].reservoir], jobs[i].seed);
    });
    ctx.record(jobs, outcomes);
    CsvWriter out = ctx.open("trace.csv", {"statistics", "e", "cutoff", "seed", "step", "substep", "time", "observable", "value"});
    const int v_count = c.virtual_nodes;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        if (!outcomes[i].ok()) continue;
        const TraceSeries& s = *outcomes[i].value;
        const auto head = concat<CsvField>(reservoir_fields(c.reservoirs[jobs[i].reservoir]),
                                           std::vector<CsvField>{static_cast<std::int64_t>(jobs[i].seed)});
        for (std::size_t k = 0; k < s.inputs.size(); ++k) {
            const auto step = static_cast<std::int64_t>(k + 1);
            const double t0 = static_cast<double>(k) * c.dt;
            out.row(concat<CsvField>(head, std::vector<CsvField>{step, std::int64_t{0}, t0, std::string("input"), s.inputs[k]}));
            for (int v = 0; v < v_count; ++v) {
                const double t = t0 + c.dt * (v + 1) / v_count;
                const Index row = static_cast<Index>(k) * v_count + v;
                for (std::size_t j = 0; j < s.labels.size(); ++j) {
                    out.row(concat<CsvField>(head, std::vector<CsvField>{step, std::int64_t{v + 1}, t, s.labels[j],
                                                                         s.values(row, static_cast<Index>(j))}));
                }
            }
        }
    }
    ctx.finish(out);
    return ctx.report();
}

// ------------------------------- spectrum ------------------------------------

SweepReport run_spectrum(const ExperimentConfig& c) {
    SweepContext ctx("spectrum", c);
    std::vector<Job> jobs;
    for (std::size_t r = 0; r < c.reservoirs.size(); ++r) {
        for (std::uint64_t s : c.seeds) {
            for (double u : c.spectrum_inputs) jobs.push_back({r, s, u});
        }
    }
    const auto outcomes = run_jobs<TransferSpectrum>(jobs.size(), c.threads, [&](std::size_t i) {
        return spectrum_seed(c, c.reservoirs[jobs[i].reservoir], jobs[i].seed, jobs[i].u);
    });
    ctx.record(jobs, outcomes);
    std::vector<std::string> header{"statistics", "e", "cutoff", "N", "seed", "u", "spectral_radius", "second_modulus"};
    if (c.spectrum_moduli) header.push_back("moduli");
    CsvWriter raw = ctx.open("spectrum.csv", header);
    CsvWriter summary = ctx.open("spectrum_summary.csv", {"statistics", "e", "cutoff", "N", "u", "n_seeds", "median_second_modulus",
                                                          "q25_second_modulus", "q75_second_modulus"});
    for (std::size_t r = 0; r < c.reservoirs.size(); ++r) {
        const auto head = concat<CsvField>(reservoir_fields(c.reservoirs[r]), std::vector<CsvField>{std::int64_t{c.n_sites}});
        std::map<double, std::vector<double>> by_u;
        for (std::size_t i = 0; i < jobs.size(); ++i) {
            if (jobs[i].reservoir != r || !outcomes[i].ok()) continue;
            const TransferSpectrum& s = *outcomes[i].value;
            std::vector<CsvField> row = concat<CsvField>(
                head, std::vector<CsvField>{static_cast<std::int64_t>(jobs[i].seed), jobs[i].u, s.spectral_radius, s.second_modulus});
            if (c.spectrum_moduli) {
                std::string moduli;
                for (Index k = 0; k < s.eigenvalues.size(); ++k) {
                    if (k) moduli += ';';
                    moduli += CsvWriter::format(std::abs(s.eigenvalues(k)));
                }
                row.emplace_back(moduli);
            }
            raw.row(row);
            by_u[jobs[i].u].push_back(s.second_modulus);
        }
        for (double u : c.spectrum_inputs) {
            const auto it = by_u.find(u);
            if (it == by_u.end() || it->second.empty()) continue;
            const Quartiles q = quartiles(it->second);
            summary.row(concat<CsvField>(head, std::vector<CsvField>{u, static_cast<std::int64_t>(it->second.size()), q.median, q.q25, q.q75}));
            by_u.erase(it);
        }
    }
    ctx.finish(raw);
    ctx.finish(summary);
    return ctx.report();
}

}  // namespace

std::vector<std::string> sweep_commands() {
    return {"cutoff", "converge", "mc", "nmc", "ipc", "spread-chain", "spread-all", "trace", "spectrum"};
}

std::string config_hash(const ExperimentConfig& config) {
    json j = config_to_json(config);
    j.erase("threads");
    j.erase("output");
    return sha256_hex(j.dump());
}

SweepReport run_sweep(const std::string& command, const ExperimentConfig& config) {
    validate(config);
    if (command == "mc") return run_capacity("mc", config, false);
    if (command == "nmc") return run_capacity("nmc", config, true);
    if (command == "converge") return run_converge(config);
    if (command == "cutoff") return run_cutoff(config);
    if (command == "ipc") return run_ipc(config);
    if (command == "spread-chain") return run_spread_chain(config);
    if (command == "spread-all") return run_spread_all(config);
    if (command == "trace") return run_trace(config);
    if (command == "spectrum") return run_spectrum(config);
    throw ConfigError("unknown command '" + command + "'");
}

}  // namespace qrc
