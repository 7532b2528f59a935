#include "qrc/tasks.hpp"

#include "qrc/rng.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace qrc {

std::vector<double> generate_inputs(std::size_t length, Encoding encoding, std::uint64_t seed) {
    auto gen = make_stream(seed, Stream::Inputs);
    const double lo = encoding == Encoding::UnitInterval ? 0.0 : -1.0;
    std::uniform_real_distribution<double> dist(lo, 1.0);
    std::vector<double> out(length);
    for (double& v : out) v = dist(gen);
    return out;
}

double legendre_normalized(int degree, double s) {
    if (degree < 0) throw std::invalid_argument("legendre_normalized: negative degree");
    return std::sqrt(2.0 * degree + 1.0) * std::legendre(static_cast<unsigned>(degree), s);
}

// ------------------------------- TaskSpec ------------------------------------

TaskSpec TaskSpec::linear(int delay) {
    if (delay < 0) throw std::invalid_argument("TaskSpec: delay must be >= 0");
    TaskSpec t;
    t.kind = Kind::LinearDelay;
    t.delay = delay;
    return t;
}

TaskSpec TaskSpec::power(int delay, int degree) {
    if (delay < 0) throw std::invalid_argument("TaskSpec: delay must be >= 0");
    if (degree < 1) throw std::invalid_argument("TaskSpec: degree must be >= 1");
    TaskSpec t;
    t.kind = Kind::PowerDelay;
    t.delay = delay;
    t.degree = degree;
    return t;
}

TaskSpec TaskSpec::legendre(std::vector<std::pair<int, int>> profile) {
    if (profile.empty()) throw std::invalid_argument("TaskSpec: empty Legendre profile");
    std::vector<int> delays;
    for (const auto& [d, q] : profile) {
        if (d < 0 || q < 1) throw std::invalid_argument("TaskSpec: Legendre factors need delay >= 0, degree >= 1");
        delays.push_back(d);
    }
    std::sort(delays.begin(), delays.end());
    if (std::adjacent_find(delays.begin(), delays.end()) != delays.end()) {
        throw std::invalid_argument("TaskSpec: repeated delay in Legendre profile");
    }
    TaskSpec t;
    t.kind = Kind::LegendreProduct;
    t.profile = std::move(profile);
    t.delay = delays.back();
    t.degree = t.total_degree();
    return t;
}

int TaskSpec::max_delay() const {
    if (kind != Kind::LegendreProduct) return delay;
    int m = 0;
    for (const auto& f : profile) m = std::max(m, f.first);
    return m;
}

int TaskSpec::total_degree() const {
    if (kind == Kind::LinearDelay) return 1;
    if (kind == Kind::PowerDelay) return degree;
    int q = 0;
    for (const auto& f : profile) q += f.second;
    return q;
}

std::string TaskSpec::kind_name() const {
    switch (kind) {
        case Kind::LinearDelay: return "linear_delay";
        case Kind::PowerDelay: return "power_delay";
        case Kind::LegendreProduct: return "legendre_product";
    }
    return "unknown";
}

std::string TaskSpec::profile_string() const {
    std::string out;
    for (const auto& [d, q] : profile) {
        if (!out.empty()) out += ';';
        out += std::to_string(d) + ":" + std::to_string(q);
    }
    return out;
}

RealVector make_target(const TaskSpec& task, std::span<const double> inputs, Index first, Index count) {
    if (first < task.max_delay()) throw std::invalid_argument("make_target: first index precedes the delay");
    if (first + count > static_cast<Index>(inputs.size())) {
        throw std::invalid_argument("make_target: target window exceeds the input sequence");
    }
    RealVector y(count);
    for (Index r = 0; r < count; ++r) {
        const Index k = first + r;
        switch (task.kind) {
            case TaskSpec::Kind::LinearDelay:
                y(r) = inputs[static_cast<std::size_t>(k - task.delay)];
                break;
            case TaskSpec::Kind::PowerDelay:
                y(r) = std::pow(inputs[static_cast<std::size_t>(k - task.delay)], task.degree);
                break;
            case TaskSpec::Kind::LegendreProduct: {
                double v = 1.0;
                for (const auto& [d, q] : task.profile) v *= legendre_normalized(q, inputs[static_cast<std::size_t>(k - d)]);
                y(r) = v;
                break;
            }
        }
    }
    return y;
}

// ------------------------------- readout -------------------------------------

RealVector ReadoutModel::predict(const RealMatrix& features) const {
    if (features.cols() != weights.size()) throw std::invalid_argument("predict: feature count mismatch");
    RealVector out = features * weights;
    out.array() += bias;
    return out;
}

namespace {

constexpr double kPinvCutoff = 1e-12;

bool is_constant(const RealVector& y) {
    if (y.size() == 0) return true;
    const double scale = std::max(1.0, y.cwiseAbs().maxCoeff());
    return (y.maxCoeff() - y.minCoeff()) <= 1e-14 * scale;
}

}  // namespace

ReadoutSolver::ReadoutSolver(const RealMatrix& features, double ridge)
    : rows_(features.rows()), cols_(features.cols()), ridge_(ridge) {
    if (rows_ == 0 || cols_ == 0) throw std::invalid_argument("train_readout: empty design matrix");
    if (ridge < 0.0) throw std::invalid_argument("train_readout: ridge must be >= 0");
    if (!features.allFinite()) throw NumericalError("train_readout: non-finite features");

    RealMatrix design;
    if (ridge == 0.0) {
        design.resize(rows_, cols_ + 1);
        design.leftCols(cols_) = features;
        design.col(cols_).setOnes();
    } else {
        column_mean_ = features.colwise().mean().transpose();
        design = features.rowwise() - column_mean_.transpose();
    }
    Eigen::JacobiSVD<RealMatrix> svd(design, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const RealVector& s = svd.singularValues();
    const double cut = s.size() > 0 ? s(0) * kPinvCutoff : 0.0;
    inv_s_.resize(s.size());
    for (Index i = 0; i < s.size(); ++i) {
        if (s(i) > cut && s(i) > 0.0) {
            ++rank_;
            inv_s_(i) = ridge == 0.0 ? 1.0 / s(i) : s(i) / (s(i) * s(i) + ridge);
        } else {
            inv_s_(i) = 0.0;
        }
    }
    u_ = svd.matrixU();
    v_ = svd.matrixV();
}

ReadoutModel ReadoutSolver::fit(const RealVector& target) const {
    if (target.size() != rows_) throw std::invalid_argument("train_readout: target length does not match rows");
    if (!target.allFinite()) throw NumericalError("train_readout: non-finite target");
    ReadoutModel model;
    if (is_constant(target)) {
        model.weights = RealVector::Zero(cols_);
        model.bias = target.size() > 0 ? target.mean() : 0.0;
        model.degenerate = true;
        return model;
    }
    if (ridge_ == 0.0) {
        const RealVector coef = v_ * (inv_s_.asDiagonal() * (u_.transpose() * target));
        model.weights = coef.head(cols_);
        model.bias = coef(cols_);
    } else {
        const double mean = target.mean();
        const RealVector centred = target.array() - mean;
        model.weights = v_ * (inv_s_.asDiagonal() * (u_.transpose() * centred));
        model.bias = mean - column_mean_.dot(model.weights);
    }
    if (!model.weights.allFinite() || !std::isfinite(model.bias)) {
        throw NumericalError("train_readout: non-finite readout weights");
    }
    return model;
}

ReadoutModel train_readout(const RealMatrix& features, const RealVector& target, double ridge) {
    return ReadoutSolver(features, ridge).fit(target);
}

// ------------------------------- capacity ------------------------------------

Capacity capacity(std::span<const double> predictions, std::span<const double> targets) {
    if (predictions.size() != targets.size()) throw std::invalid_argument("capacity: length mismatch");
    if (predictions.size() < 2) throw std::invalid_argument("capacity: need at least two samples");
    const double n = static_cast<double>(predictions.size());
    const double mp = std::accumulate(predictions.begin(), predictions.end(), 0.0) / n;
    const double mt = std::accumulate(targets.begin(), targets.end(), 0.0) / n;
    double cov = 0.0, vp = 0.0, vt = 0.0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        const double dp = predictions[i] - mp;
        const double dt = targets[i] - mt;
        cov += dp * dt;
        vp += dp * dp;
        vt += dt * dt;
    }
    if (!std::isfinite(cov) || !std::isfinite(vp) || !std::isfinite(vt)) {
        throw NumericalError("capacity: non-finite sequence");
    }
    // Spread below rounding level of the mean counts as constant.
    const double sp = std::sqrt(vp / n), st = std::sqrt(vt / n);
    if (sp <= 1e-10 * std::max(std::abs(mp), 1e-300) || st <= 1e-10 * std::max(std::abs(mt), 1e-300) || vp == 0.0 ||
        vt == 0.0) {
        return {0.0, true};
    }
    const double c = (cov * cov) / (vp * vt);
    return {std::clamp(c, 0.0, 1.0), false};
}

Capacity capacity(const RealVector& predictions, const RealVector& targets) {
    return capacity(std::span<const double>(predictions.data(), static_cast<std::size_t>(predictions.size())),
                    std::span<const double>(targets.data(), static_cast<std::size_t>(targets.size())));
}

std::vector<TaskScore> score_tasks(const RealMatrix& features, std::span<const double> inputs, Index first,
                                   Index n_train, Index n_test, const std::vector<TaskSpec>& tasks, double ridge) {
    if (n_train < 2 || n_test < 2) throw std::invalid_argument("score_tasks: train and test need >= 2 rows each");
    if (features.rows() < n_train + n_test) throw std::invalid_argument("score_tasks: not enough feature rows");
    const RealMatrix train = features.topRows(n_train);
    const RealMatrix test = features.middleRows(n_train, n_test);
    const ReadoutSolver solver(train, ridge);

    std::vector<TaskScore> out;
    out.reserve(tasks.size());
    for (const TaskSpec& task : tasks) {
        const RealVector y_train = make_target(task, inputs, first, n_train);
        const RealVector y_test = make_target(task, inputs, first + n_train, n_test);
        const ReadoutModel model = solver.fit(y_train);
        TaskScore score;
        score.train = capacity(model.predict(train), y_train);
        score.test = capacity(model.predict(test), y_test);
        out.push_back(score);
    }
    return out;
}

// ------------------------------- statistics ----------------------------------

double quantile(std::vector<double> values, double p) {
    if (values.empty()) throw std::invalid_argument("quantile: empty sample");
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("quantile: p outside [0,1]");
    std::sort(values.begin(), values.end());
    const double pos = p * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, values.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return values[lo] + frac * (values[hi] - values[lo]);
}

Quartiles quartiles(const std::vector<double>& values) {
    return {quantile(values, 0.25), quantile(values, 0.5), quantile(values, 0.75)};
}

// ------------------------------- IPC -----------------------------------------

namespace {

void shell_rec(int delay, int remaining, std::vector<std::pair<int, int>>& current,
               std::vector<std::vector<std::pair<int, int>>>& out) {
    if (remaining == 0) {
        out.push_back(current);
        return;
    }
    if (delay < 0) return;
    for (int q = remaining; q >= 1; --q) {
        current.emplace_back(delay, q);
        shell_rec(delay - 1, remaining - q, current, out);
        current.pop_back();
    }
    shell_rec(delay - 1, remaining, current, out);
}

}  // namespace

std::vector<std::vector<std::pair<int, int>>> legendre_shell(int degree, int max_delay) {
    std::vector<std::vector<std::pair<int, int>>> out;
    if (degree < 1 || max_delay < 0) return out;
    std::vector<std::pair<int, int>> current;
    for (int q_top = degree; q_top >= 1; --q_top) {
        current.assign(1, {max_delay, q_top});
        shell_rec(max_delay - 1, degree - q_top, current, out);
    }
    return out;
}

IpcResult information_processing_capacity(const RealMatrix& features, std::span<const double> inputs, Index first,
                                          const IpcOptions& options, std::uint64_t seed) {
    if (options.max_degree < 1 || options.window < 1) throw std::invalid_argument("ipc: max_degree and window must be >= 1");
    if (options.surrogates < 1) throw std::invalid_argument("ipc: at least one surrogate is required");
    if (first < options.window - 1) throw std::invalid_argument("ipc: washout shorter than the delay window");
    const Index rows = features.rows();
    if (rows < 2 || first + rows > static_cast<Index>(inputs.size())) {
        throw std::invalid_argument("ipc: features do not match the input sequence");
    }
    for (double s : inputs) {
        if (s < -1.0 || s > 1.0) throw std::invalid_argument("ipc: inputs must lie in [-1,1]");
    }
    if (!features.allFinite()) throw NumericalError("ipc: non-finite features");

    // Orthonormal basis of the centred feature space. The bias direction is
    // handled analytically: projecting y onto span{1, X} gives L·mean^2 + |Q^T y|^2.
    const RealMatrix centred = features.rowwise() - features.colwise().mean();
    Eigen::JacobiSVD<RealMatrix> svd(centred, Eigen::ComputeThinU);
    const RealVector& s = svd.singularValues();
    Index rank = 0;
    const double cut = s.size() > 0 ? s(0) * kPinvCutoff : 0.0;
    for (Index i = 0; i < s.size(); ++i) rank += (s(i) > cut && s(i) > 0.0) ? 1 : 0;
    const RealMatrix q_basis = svd.matrixU().leftCols(rank);

    // Shuffled copies of the basis, packed in chunks of bounded size.
    auto gen = make_stream(seed, Stream::Surrogates);
    std::vector<Index> perm(static_cast<std::size_t>(rows));
    const Index per_chunk = std::max<Index>(1, (Index{8} << 20) / std::max<Index>(1, rows * std::max<Index>(rank, 1)));
    std::vector<RealMatrix> chunks;
    for (int done = 0; done < options.surrogates;) {
        const int take = static_cast<int>(std::min<Index>(per_chunk, options.surrogates - done));
        RealMatrix chunk(rows, rank * take);
        for (int c = 0; c < take; ++c) {
            std::iota(perm.begin(), perm.end(), Index{0});
            std::shuffle(perm.begin(), perm.end(), gen);
            for (Index r = 0; r < rows; ++r) {
                chunk.block(r, rank * c, 1, rank) = q_basis.row(perm[static_cast<std::size_t>(r)]);
            }
        }
        chunks.push_back(std::move(chunk));
        done += take;
    }

    // Legendre tables over the whole input sequence.
    const std::size_t n_in = inputs.size();
    std::vector<std::vector<double>> table(static_cast<std::size_t>(options.max_degree) + 1,
                                           std::vector<double>(n_in));
    for (int q = 1; q <= options.max_degree; ++q) {
        for (std::size_t k = 0; k < n_in; ++k) table[static_cast<std::size_t>(q)][k] = legendre_normalized(q, inputs[k]);
    }

    IpcResult result;
    result.feature_rank = rank;
    result.per_degree.assign(static_cast<std::size_t>(options.max_degree), 0.0);
    const double p = options.percentile / 100.0;
    const double n = static_cast<double>(rows);

    auto evaluate = [&](const std::vector<std::vector<std::pair<int, int>>>& profiles, std::size_t begin,
                        std::size_t end, std::vector<IpcTerm>& accepted) {
        const Index k = static_cast<Index>(end - begin);
        RealMatrix y(rows, k);
        for (Index t = 0; t < k; ++t) {
            const auto& prof = profiles[begin + static_cast<std::size_t>(t)];
            for (Index r = 0; r < rows; ++r) {
                double v = 1.0;
                for (const auto& [d, q] : prof) {
                    v *= table[static_cast<std::size_t>(q)][static_cast<std::size_t>(first + r - d)];
                }
                y(r, t) = v;
            }
        }
        const RealVector sq = y.colwise().squaredNorm().transpose();
        const RealVector mean = y.colwise().mean().transpose();
        const RealMatrix proj = rank > 0 ? RealMatrix(q_basis.transpose() * y) : RealMatrix::Zero(0, k);
        std::vector<std::vector<double>> surrogate(static_cast<std::size_t>(k));
        for (const RealMatrix& chunk : chunks) {
            const RealMatrix z = chunk.transpose() * y;
            const Index per = rank > 0 ? z.rows() / rank : 0;
            for (Index t = 0; t < k; ++t) {
                const double base = n * mean(t) * mean(t);
                for (Index c = 0; c < per; ++c) {
                    const double v = (base + z.block(c * rank, t, rank, 1).squaredNorm()) / sq(t);
                    surrogate[static_cast<std::size_t>(t)].push_back(v);
                }
                if (rank == 0) surrogate[static_cast<std::size_t>(t)].push_back(base / sq(t));
            }
        }
        for (Index t = 0; t < k; ++t) {
            const double c = (n * mean(t) * mean(t) + (rank > 0 ? proj.col(t).squaredNorm() : 0.0)) / sq(t);
            const double threshold = quantile(surrogate[static_cast<std::size_t>(t)], p);
            ++result.evaluated;
            if (c > threshold) {
                IpcTerm term;
                term.profile = profiles[begin + static_cast<std::size_t>(t)];
                term.degree = 0;
                for (const auto& f : term.profile) term.degree += f.second;
                term.capacity = std::min(c, 1.0);
                term.threshold = threshold;
                accepted.push_back(std::move(term));
            }
        }
    };

    for (int q = 1; q <= options.max_degree; ++q) {
        int empty_run = 0;
        for (int top = 0; top < options.window; ++top) {
            const auto profiles = legendre_shell(q, top);
            std::vector<IpcTerm> accepted;
            for (std::size_t b = 0; b < profiles.size(); b += options.batch) {
                evaluate(profiles, b, std::min(profiles.size(), b + options.batch), accepted);
            }
            if (accepted.empty()) {
                if (++empty_run >= options.stop_after) break;
            } else {
                empty_run = 0;
            }
            for (IpcTerm& term : accepted) {
                result.per_degree[static_cast<std::size_t>(q - 1)] += term.capacity;
                result.total += term.capacity;
                result.terms.push_back(std::move(term));
            }
        }
    }
    return result;
}

}  // namespace qrc
