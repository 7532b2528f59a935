#include "qrc/reservoir.hpp"

#include <cmath>
#include <string>

namespace qrc {

namespace {

// Column `col` of exp(-iHt), written into `dest` (length D) in natural order.
class EvolutionColumns {
public:
    EvolutionColumns(const Propagator& prop, double t) : prop_(prop) {
        const SectorLayout& layout = prop.layout();
        blocks_.reserve(static_cast<std::size_t>(layout.n_sectors()));
        for (int s = 0; s < layout.n_sectors(); ++s) blocks_.push_back(prop.sector_evolution(s, t));
    }

    const Matrix& sector(int s) const { return blocks_[static_cast<std::size_t>(s)]; }

    void column(Index col, Eigen::Ref<Vector> dest) const {
        const SectorLayout& layout = prop_.layout();
        const int s = layout.sector_of[static_cast<std::size_t>(col)];
        const Index off = layout.offset[static_cast<std::size_t>(s)];
        const Index j = layout.position[static_cast<std::size_t>(col)] - off;
        const Matrix& block = blocks_[static_cast<std::size_t>(s)];
        dest.setZero();
        for (Index i = 0; i < block.rows(); ++i) dest(layout.order[static_cast<std::size_t>(off + i)]) = block(i, j);
    }

private:
    const Propagator& prop_;
    std::vector<Matrix> blocks_;
};

}  // namespace

ReservoirEngine::ReservoirEngine(const OperatorSet& ops, const Propagator& prop, const InputSpec& spec,
                                 const ObservableSet* observables)
    : basis_(ops.basis), spec_(spec), substeps_(prop.substeps()), excitation_(spec.excitation) {
    if (basis_.n_sites() < 2) throw std::invalid_argument("ReservoirEngine: need at least two sites");
    if (prop.dim() != basis_.dim()) throw std::invalid_argument("ReservoirEngine: propagator dimension mismatch");
    if (!prop.number_conserving()) {
        throw std::invalid_argument("ReservoirEngine: Hamiltonian must conserve the total excitation number");
    }
    if (spec.excitation < 1 || spec.excitation >= basis_.local_dim()) {
        throw std::invalid_argument("ReservoirEngine: excitation level " + std::to_string(spec.excitation) +
                                    " not representable with local dimension " + std::to_string(basis_.local_dim()));
    }
    rest_basis_ = FockBasis(basis_.n_sites() - 1, basis_.local_dim());
    rest_layout_ = SectorLayout::by_excitations(rest_basis_);

    const int d = basis_.local_dim();
    const int n_rest = rest_layout_.n_sectors();
    const Index rest = rest_basis_.dim();
    const SectorLayout& full = prop.layout();

    std::vector<Matrix> sector_u;
    for (int s = 0; s < full.n_sectors(); ++s) sector_u.push_back(prop.sector_evolution(s, prop.dt()));

    // Gathers U[(n, rest sector t), (m, rest sector src)] from the sector block.
    auto gather = [&](int n, int t, int m, int src) {
        const Index rows = rest_layout_.size[static_cast<std::size_t>(t)];
        const Index cols = rest_layout_.size[static_cast<std::size_t>(src)];
        const Index roff = rest_layout_.offset[static_cast<std::size_t>(t)];
        const Index coff = rest_layout_.offset[static_cast<std::size_t>(src)];
        const int sector = n + t;
        const Matrix& u = sector_u[static_cast<std::size_t>(sector)];
        const Index base = full.offset[static_cast<std::size_t>(sector)];
        Matrix block(rows, cols);
        for (Index j = 0; j < cols; ++j) {
            const Index g = m * rest + rest_layout_.order[static_cast<std::size_t>(coff + j)];
            const Index pj = full.position[static_cast<std::size_t>(g)] - base;
            for (Index i = 0; i < rows; ++i) {
                const Index f = n * rest + rest_layout_.order[static_cast<std::size_t>(roff + i)];
                block(i, j) = u(full.position[static_cast<std::size_t>(f)] - base, pj);
            }
        }
        return block;
    };

    blocks_.ground.assign(static_cast<std::size_t>(d), std::vector<Matrix>(static_cast<std::size_t>(n_rest)));
    blocks_.excited.assign(static_cast<std::size_t>(d), std::vector<Matrix>(static_cast<std::size_t>(n_rest)));
    for (int n = 0; n < d; ++n) {
        for (int t = 0; t < n_rest; ++t) {
            if (const int src = source_sector(t, n, 0); src >= 0) {
                blocks_.ground[static_cast<std::size_t>(n)][static_cast<std::size_t>(t)] = gather(n, t, 0, src);
            }
            if (const int src = source_sector(t, n, excitation_); src >= 0) {
                blocks_.excited[static_cast<std::size_t>(n)][static_cast<std::size_t>(t)] = gather(n, t, excitation_, src);
            }
        }
    }

    if (observables != nullptr && observables->size() > 0) {
        n_obs_ = observables->size();
        for (const SparseOp& o : observables->matrices) {
            if (o.rows() != basis_.dim()) throw std::invalid_argument("ReservoirEngine: observable dimension mismatch");
        }
        gram_.resize(static_cast<std::size_t>(substeps_));
        for (int v = 1; v <= substeps_; ++v) {
            const EvolutionColumns cols(prop, prop.dt() * v / substeps_);
            Matrix w0(basis_.dim(), rest);
            Matrix we(basis_.dim(), rest);
            for (Index k = 0; k < rest; ++k) {
                const Index r = rest_layout_.order[static_cast<std::size_t>(k)];
                cols.column(r, w0.col(k));
                cols.column(excitation_ * rest + r, we.col(k));
            }
            auto& per_obs = gram_[static_cast<std::size_t>(v - 1)];
            per_obs.resize(static_cast<std::size_t>(n_obs_));
            for (int j = 0; j < n_obs_; ++j) {
                const SparseOp& o = observables->matrices[static_cast<std::size_t>(j)];
                const Matrix ow0 = o * w0;
                const Matrix owe = o * we;
                // Stored transposed so that Tr[G sigma] = sum(G^T .* sigma).
                per_obs[static_cast<std::size_t>(j)] = {Matrix((w0.adjoint() * ow0).transpose()),
                                                        Matrix((we.adjoint() * owe).transpose()),
                                                        Matrix((w0.adjoint() * owe).transpose())};
            }
        }
    }
    reset_vacuum();
}

int ReservoirEngine::source_sector(int target, int n, int m) const {
    const int src = target + n - m;
    return (src >= 0 && src < rest_layout_.n_sectors()) ? src : -1;
}

void ReservoirEngine::reset_vacuum() {
    const Index rest = rest_basis_.dim();
    sigma_ = Matrix::Zero(rest, rest);
    // The vacuum is the first state of sector 0.
    sigma_(0, 0) = 1.0;
    prev_sigma_.resize(0, 0);
    stepped_ = false;
}

Matrix ReservoirEngine::to_permuted(const Matrix& natural) const {
    const Index rest = rest_basis_.dim();
    Matrix out(rest, rest);
    for (Index j = 0; j < rest; ++j) {
        const Index cj = rest_layout_.order[static_cast<std::size_t>(j)];
        for (Index i = 0; i < rest; ++i) out(i, j) = natural(rest_layout_.order[static_cast<std::size_t>(i)], cj);
    }
    return out;
}

Matrix ReservoirEngine::to_natural(const Matrix& permuted) const {
    const Index rest = rest_basis_.dim();
    Matrix out(rest, rest);
    for (Index j = 0; j < rest; ++j) {
        const Index cj = rest_layout_.order[static_cast<std::size_t>(j)];
        for (Index i = 0; i < rest; ++i) out(rest_layout_.order[static_cast<std::size_t>(i)], cj) = permuted(i, j);
    }
    return out;
}

void ReservoirEngine::set_state(const DensityMatrix& rho) {
    if (rho.dim() != basis_.dim()) throw std::invalid_argument("ReservoirEngine::set_state: dimension mismatch");
    set_reduced(partial_trace_first(rho).data);
}

void ReservoirEngine::set_reduced(const Matrix& sigma) {
    if (sigma.rows() != rest_basis_.dim() || sigma.cols() != rest_basis_.dim()) {
        throw std::invalid_argument("ReservoirEngine::set_reduced: dimension mismatch");
    }
    sigma_ = to_permuted(sigma);
    prev_sigma_.resize(0, 0);
    stepped_ = false;
}

Matrix ReservoirEngine::reduced() const { return to_natural(sigma_); }

void ReservoirEngine::left_multiply(int n, double c0, double ce, const Matrix& sigma, Matrix& out) const {
    const int n_rest = rest_layout_.n_sectors();
    const auto& ground = blocks_.ground[static_cast<std::size_t>(n)];
    const auto& excited = blocks_.excited[static_cast<std::size_t>(n)];
    for (int t = 0; t < n_rest; ++t) {
        const Index off = rest_layout_.offset[static_cast<std::size_t>(t)];
        const Index size = rest_layout_.size[static_cast<std::size_t>(t)];
        auto rows = out.middleRows(off, size);
        bool written = false;
        if (const int src = source_sector(t, n, 0); src >= 0 && c0 != 0.0) {
            rows.noalias() = c0 * ground[static_cast<std::size_t>(t)] *
                             sigma.middleRows(rest_layout_.offset[static_cast<std::size_t>(src)],
                                              rest_layout_.size[static_cast<std::size_t>(src)]);
            written = true;
        }
        if (const int src = source_sector(t, n, excitation_); src >= 0 && ce != 0.0) {
            const auto part = sigma.middleRows(rest_layout_.offset[static_cast<std::size_t>(src)],
                                               rest_layout_.size[static_cast<std::size_t>(src)]);
            if (written) {
                rows.noalias() += ce * excited[static_cast<std::size_t>(t)] * part;
            } else {
                rows.noalias() = ce * excited[static_cast<std::size_t>(t)] * part;
                written = true;
            }
        }
        if (!written) rows.setZero();
    }
}

void ReservoirEngine::accumulate_right(int n, double c0, double ce, const Matrix& y, Matrix& out) const {
    // Only the lower block triangle (rows from the target block down) is
    // accumulated; step() mirrors it afterwards.
    const int n_rest = rest_layout_.n_sectors();
    const Index rest = rest_basis_.dim();
    const auto& ground = blocks_.ground[static_cast<std::size_t>(n)];
    const auto& excited = blocks_.excited[static_cast<std::size_t>(n)];
    for (int t = 0; t < n_rest; ++t) {
        const Index off = rest_layout_.offset[static_cast<std::size_t>(t)];
        const Index height = rest - off;
        auto cols = out.block(off, off, height, rest_layout_.size[static_cast<std::size_t>(t)]);
        if (const int src = source_sector(t, n, 0); src >= 0 && c0 != 0.0) {
            cols.noalias() += c0 * y.block(off, rest_layout_.offset[static_cast<std::size_t>(src)], height,
                                            rest_layout_.size[static_cast<std::size_t>(src)]) *
                              ground[static_cast<std::size_t>(t)].adjoint();
        }
        if (const int src = source_sector(t, n, excitation_); src >= 0 && ce != 0.0) {
            cols.noalias() += ce * y.block(off, rest_layout_.offset[static_cast<std::size_t>(src)], height,
                                            rest_layout_.size[static_cast<std::size_t>(src)]) *
                              excited[static_cast<std::size_t>(t)].adjoint();
        }
    }
}

void ReservoirEngine::mirror_lower(Matrix& m) const {
    const int n_rest = rest_layout_.n_sectors();
    for (int t = 1; t < n_rest; ++t) {
        const Index off = rest_layout_.offset[static_cast<std::size_t>(t)];
        const Index size = rest_layout_.size[static_cast<std::size_t>(t)];
        m.block(0, off, off, size) = m.block(off, 0, size, off).adjoint();
    }
}

void ReservoirEngine::step(double value, std::span<double> features) {
    const auto [c0, ce] = spec_.amplitudes(value);

    if (!features.empty()) {
        if (static_cast<int>(features.size()) != n_features()) {
            throw std::invalid_argument("ReservoirEngine::step: feature buffer has wrong size");
        }
        const double w00 = c0 * c0;
        const double wee = ce * ce;
        const double w0e = 2.0 * c0 * ce;
        for (int v = 0; v < substeps_; ++v) {
            const auto& per_obs = gram_[static_cast<std::size_t>(v)];
            for (int j = 0; j < n_obs_; ++j) {
                const auto& g = per_obs[static_cast<std::size_t>(j)];
                double x = 0.0;
                if (w00 != 0.0) x += w00 * g[0].cwiseProduct(sigma_).sum().real();
                if (wee != 0.0) x += wee * g[1].cwiseProduct(sigma_).sum().real();
                if (w0e != 0.0) x += w0e * g[2].cwiseProduct(sigma_).sum().real();
                if (!std::isfinite(x)) throw NumericalError("reservoir readout produced a non-finite value");
                features[static_cast<std::size_t>(v * n_obs_ + j)] = x;
            }
        }
    }

    const Index rest = rest_basis_.dim();
    Matrix next = Matrix::Zero(rest, rest);
    scratch_.resize(rest, rest);
    for (int n = 0; n < basis_.local_dim(); ++n) {
        left_multiply(n, c0, ce, sigma_, scratch_);
        accumulate_right(n, c0, ce, scratch_, next);
    }
    mirror_lower(next);
    if (!std::isfinite(std::abs(next.trace()))) throw NumericalError("reservoir state became non-finite");
    prev_sigma_ = std::move(sigma_);
    sigma_ = std::move(next);
    c0_last_ = c0;
    ce_last_ = ce;
    stepped_ = true;
}

Matrix ReservoirEngine::dense_isometry(double c0, double ce) const {
    // Rebuilt from scratch; only used for diagnostics on small systems.
    const Index rest = rest_basis_.dim();
    Matrix w = Matrix::Zero(basis_.dim(), rest);
    const int n_rest = rest_layout_.n_sectors();
    for (int n = 0; n < basis_.local_dim(); ++n) {
        for (int t = 0; t < n_rest; ++t) {
            const Index roff = rest_layout_.offset[static_cast<std::size_t>(t)];
            const Index rows = rest_layout_.size[static_cast<std::size_t>(t)];
            for (int m : {0, excitation_}) {
                const int src = source_sector(t, n, m);
                if (src < 0) continue;
                const double c = (m == 0) ? c0 : ce;
                const Matrix& blk = (m == 0) ? blocks_.ground[static_cast<std::size_t>(n)][static_cast<std::size_t>(t)]
                                             : blocks_.excited[static_cast<std::size_t>(n)][static_cast<std::size_t>(t)];
                const Index coff = rest_layout_.offset[static_cast<std::size_t>(src)];
                for (Index i = 0; i < rows; ++i) {
                    const Index f = n * rest + rest_layout_.order[static_cast<std::size_t>(roff + i)];
                    w.row(f).segment(coff, blk.cols()) += c * blk.row(i);
                }
            }
        }
    }
    return w;
}

DensityMatrix ReservoirEngine::full_state() const {
    if (!stepped_) throw std::logic_error("ReservoirEngine::full_state: no step taken yet");
    require_dense_budget(basis_.dim(), "ReservoirEngine::full_state");
    const Matrix w = dense_isometry(c0_last_, ce_last_);
    return {w * prev_sigma_ * w.adjoint(), basis_};
}

RealVector ReservoirEngine::full_populations() const {
    if (!stepped_) throw std::logic_error("ReservoirEngine::full_populations: no step taken yet");
    const Index rest = rest_basis_.dim();
    const int n_rest = rest_layout_.n_sectors();
    RealVector pops = RealVector::Zero(basis_.dim());
    Matrix y(rest, rest);
    for (int n = 0; n < basis_.local_dim(); ++n) {
        left_multiply(n, c0_last_, ce_last_, prev_sigma_, y);
        for (int t = 0; t < n_rest; ++t) {
            const Index roff = rest_layout_.offset[static_cast<std::size_t>(t)];
            const Index rows = rest_layout_.size[static_cast<std::size_t>(t)];
            RealVector diag = RealVector::Zero(rows);
            for (int m : {0, excitation_}) {
                const int src = source_sector(t, n, m);
                const double c = (m == 0) ? c0_last_ : ce_last_;
                if (src < 0 || c == 0.0) continue;
                const Matrix& blk = (m == 0) ? blocks_.ground[static_cast<std::size_t>(n)][static_cast<std::size_t>(t)]
                                             : blocks_.excited[static_cast<std::size_t>(n)][static_cast<std::size_t>(t)];
                const auto ypart = y.block(roff, rest_layout_.offset[static_cast<std::size_t>(src)], rows, blk.cols());
                diag += c * ypart.cwiseProduct(blk.conjugate()).rowwise().sum().real();
            }
            for (Index i = 0; i < rows; ++i) {
                pops(n * rest + rest_layout_.order[static_cast<std::size_t>(roff + i)]) = diag(i);
            }
        }
    }
    return pops;
}

std::vector<Matrix> ReservoirEngine::reduced_kraus(double value) const {
    const auto [c0, ce] = spec_.amplitudes(value);
    const Matrix w = dense_isometry(c0, ce);
    const Index rest = rest_basis_.dim();
    std::vector<Matrix> kraus;
    for (int n = 0; n < basis_.local_dim(); ++n) {
        Matrix k(rest, rest);
        for (Index j = 0; j < rest; ++j) {
            k.col(rest_layout_.order[static_cast<std::size_t>(j)]) = w.block(n * rest, j, rest, 1);
        }
        kraus.push_back(std::move(k));
    }
    return kraus;
}

RealMatrix run_reservoir(ReservoirEngine& engine, std::span<const double> inputs, int washout) {
    if (washout < 0) throw std::invalid_argument("run_reservoir: washout must be >= 0");
    if (static_cast<std::size_t>(washout) > inputs.size()) {
        throw std::invalid_argument("run_reservoir: washout longer than the input sequence");
    }
    const Index rows = static_cast<Index>(inputs.size()) - washout;
    const int width = engine.n_features();
    RealMatrix features(rows, width);
    std::vector<double> row(static_cast<std::size_t>(width));
    for (std::size_t k = 0; k < inputs.size(); ++k) {
        const bool keep = static_cast<int>(k) >= washout;
        engine.step(inputs[k], keep ? std::span<double>(row) : std::span<double>());
        if (keep) {
            const Index r = static_cast<Index>(k) - washout;
            for (int c = 0; c < width; ++c) features(r, c) = row[static_cast<std::size_t>(c)];
        }
    }
    return features;
}

}  // namespace qrc
