#include "qrc/dynamics.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>
#include <sstream>

namespace qrc {

// ------------------------------- states --------------------------------------

double DensityMatrix::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(data, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw NumericalError("DensityMatrix: eigensolver failed");
    return solver.eigenvalues().minCoeff();
}

void DensityMatrix::check_valid(double herm_tol, double trace_tol, double psd_tol) const {
    if (!data.allFinite()) throw NumericalError("density matrix has non-finite entries");
    const double herm = hermiticity_residual();
    if (herm > herm_tol) {
        throw NumericalError("density matrix not Hermitian (residual " + std::to_string(herm) + ")");
    }
    const double tr_err = std::abs(trace() - cplx(1.0, 0.0));
    if (tr_err > trace_tol) {
        throw NumericalError("density matrix trace deviates from 1 by " + std::to_string(tr_err));
    }
    const double lmin = min_eigenvalue();
    if (lmin < -psd_tol) {
        throw NumericalError("density matrix not positive semidefinite (min eigenvalue " + std::to_string(lmin) + ")");
    }
}

DensityMatrix DensityMatrix::vacuum(const FockBasis& basis) {
    return product(basis, std::vector<int>(static_cast<std::size_t>(basis.n_sites()), 0));
}

DensityMatrix DensityMatrix::product(const FockBasis& basis, const std::vector<int>& occupations) {
    if (static_cast<int>(occupations.size()) != basis.n_sites()) {
        throw std::invalid_argument("DensityMatrix::product: need one occupation per site");
    }
    require_dense_budget(basis.dim(), "DensityMatrix");
    Index state = 0;
    for (int s = 0; s < basis.n_sites(); ++s) {
        const int n = occupations[static_cast<std::size_t>(s)];
        if (n < 0 || n >= basis.local_dim()) throw std::invalid_argument("DensityMatrix::product: occupation out of range");
        state += n * basis.stride(s);
    }
    DensityMatrix rho{Matrix::Zero(basis.dim(), basis.dim()), basis};
    rho.data(state, state) = 1.0;
    return rho;
}

DensityMatrix DensityMatrix::maximally_mixed(const FockBasis& basis) {
    require_dense_budget(basis.dim(), "DensityMatrix");
    return {Matrix::Identity(basis.dim(), basis.dim()) / static_cast<double>(basis.dim()), basis};
}

DensityMatrix DensityMatrix::pure(const FockBasis& basis, const Vector& psi) {
    if (psi.size() != basis.dim()) throw std::invalid_argument("DensityMatrix::pure: dimension mismatch");
    return {psi * psi.adjoint(), basis};
}

// ------------------------------- inputs --------------------------------------

std::string encoding_name(Encoding e) {
    return e == Encoding::UnitInterval ? "unit_interval" : "symmetric";
}

Encoding parse_encoding(const std::string& name) {
    if (name == "unit_interval" || name == "unit") return Encoding::UnitInterval;
    if (name == "symmetric") return Encoding::Symmetric;
    throw std::invalid_argument("unknown encoding '" + name + "' (expected unit_interval or symmetric)");
}

std::pair<double, double> InputSpec::amplitudes(double value) const {
    if (!(value >= lower() && value <= upper())) {
        std::ostringstream msg;
        msg << "input value " << value << " outside [" << lower() << ", " << upper() << "] for "
            << encoding_name(encoding) << " encoding";
        throw std::invalid_argument(msg.str());
    }
    const double p0 = encoding == Encoding::UnitInterval ? value : 0.5 * (1.0 + value);
    return {std::sqrt(p0), std::sqrt(std::max(0.0, 1.0 - p0))};
}

Vector input_state(double value, const InputSpec& spec, int local_dim) {
    if (spec.excitation < 1) throw std::invalid_argument("input_state: excitation level must be >= 1");
    if (spec.excitation >= local_dim) {
        throw std::invalid_argument("input_state: excitation level " + std::to_string(spec.excitation) +
                                    " not representable with local dimension " + std::to_string(local_dim));
    }
    const auto [a0, ae] = spec.amplitudes(value);
    Vector psi = Vector::Zero(local_dim);
    psi(0) = a0;
    psi(spec.excitation) = ae;
    return psi;
}

// ------------------------------- maps ----------------------------------------

DensityMatrix partial_trace_first(const DensityMatrix& rho) {
    const FockBasis& basis = rho.basis;
    if (basis.n_sites() < 2) throw std::invalid_argument("partial_trace_first: need at least two sites");
    if (rho.data.rows() != basis.dim() || rho.data.cols() != basis.dim()) {
        throw std::invalid_argument("partial_trace_first: matrix does not match its basis");
    }
    const Index rest = basis.rest_dim();
    Matrix reduced = Matrix::Zero(rest, rest);
    for (int n = 0; n < basis.local_dim(); ++n) reduced += rho.data.block(n * rest, n * rest, rest, rest);
    return {std::move(reduced), FockBasis(basis.n_sites() - 1, basis.local_dim())};
}

Propagator::Propagator(const SparseOp& hamiltonian, const FockBasis& basis, double dt, int substeps)
    : basis_(basis), dt_(dt), substeps_(substeps) {
    if (hamiltonian.rows() != basis.dim() || hamiltonian.cols() != basis.dim()) {
        throw std::invalid_argument("Propagator: Hamiltonian does not match basis dimension");
    }
    if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("Propagator: dt must be positive");
    if (substeps < 1) throw std::invalid_argument("Propagator: need at least one substep");

    layout_ = SectorLayout::by_excitations(basis);
    for (Index col = 0; col < hamiltonian.outerSize() && conserving_; ++col) {
        for (SparseOp::InnerIterator it(hamiltonian, col); it; ++it) {
            if (std::abs(it.value()) != 0.0 &&
                layout_.sector_of[static_cast<std::size_t>(it.row())] != layout_.sector_of[static_cast<std::size_t>(col)]) {
                conserving_ = false;
                break;
            }
        }
    }
    if (!conserving_) {
        // One sector holding every state.
        SectorLayout flat;
        const auto dim = static_cast<std::size_t>(basis.dim());
        flat.order.resize(dim);
        flat.position.resize(dim);
        flat.sector_of.assign(dim, 0);
        for (std::size_t i = 0; i < dim; ++i) flat.order[i] = flat.position[i] = static_cast<Index>(i);
        flat.offset = {0};
        flat.size = {basis.dim()};
        layout_ = std::move(flat);
        require_dense_budget(basis.dim(), "Propagator");
    }

    sectors_.resize(static_cast<std::size_t>(layout_.n_sectors()));
    std::vector<Matrix> blocks(static_cast<std::size_t>(layout_.n_sectors()));
    for (int s = 0; s < layout_.n_sectors(); ++s) {
        const Index size = layout_.size[static_cast<std::size_t>(s)];
        blocks[static_cast<std::size_t>(s)] = Matrix::Zero(size, size);
    }
    for (Index col = 0; col < hamiltonian.outerSize(); ++col) {
        const auto c = static_cast<std::size_t>(col);
        const int s = layout_.sector_of[c];
        const Index off = layout_.offset[static_cast<std::size_t>(s)];
        for (SparseOp::InnerIterator it(hamiltonian, col); it; ++it) {
            blocks[static_cast<std::size_t>(s)](layout_.position[static_cast<std::size_t>(it.row())] - off,
                                                layout_.position[c] - off) += it.value();
        }
    }
    for (int s = 0; s < layout_.n_sectors(); ++s) {
        const Matrix& block = blocks[static_cast<std::size_t>(s)];
        if ((block - block.adjoint()).norm() > 1e-12 * std::max(1.0, block.norm())) {
            throw std::invalid_argument("Propagator: Hamiltonian is not Hermitian");
        }
        Eigen::SelfAdjointEigenSolver<Matrix> solver(block);
        if (solver.info() != Eigen::Success) throw NumericalError("Propagator: eigendecomposition failed");
        sectors_[static_cast<std::size_t>(s)] = {solver.eigenvalues(), solver.eigenvectors()};
    }
}

Matrix Propagator::sector_evolution(int sector, double t) const {
    const Sector& sec = sectors_.at(static_cast<std::size_t>(sector));
    Vector phases(sec.energies.size());
    for (Index k = 0; k < phases.size(); ++k) phases(k) = std::exp(-kI * sec.energies(k) * t);
    return sec.vectors * phases.asDiagonal() * sec.vectors.adjoint();
}

Matrix Propagator::evolution(double t) const {
    require_dense_budget(dim(), "Propagator::evolution");
    Matrix u = Matrix::Zero(dim(), dim());
    for (int s = 0; s < layout_.n_sectors(); ++s) {
        const Matrix block = sector_evolution(s, t);
        const Index off = layout_.offset[static_cast<std::size_t>(s)];
        for (Index j = 0; j < block.cols(); ++j) {
            const Index col = layout_.order[static_cast<std::size_t>(off + j)];
            for (Index i = 0; i < block.rows(); ++i) {
                u(layout_.order[static_cast<std::size_t>(off + i)], col) = block(i, j);
            }
        }
    }
    return u;
}

DensityMatrix inject_and_evolve(const DensityMatrix& rho, double value, const InputSpec& spec,
                                const Matrix& unitary) {
    const DensityMatrix rest = partial_trace_first(rho);
    const Vector psi = input_state(value, spec, rho.basis.local_dim());
    const Matrix injected = Eigen::kroneckerProduct(Matrix(psi * psi.adjoint()), rest.data).eval();
    if (unitary.rows() != injected.rows()) throw std::invalid_argument("inject_and_evolve: unitary dimension mismatch");
    return {unitary * injected * unitary.adjoint(), rho.basis};
}

DensityMatrix inject_and_evolve(const DensityMatrix& rho, double value, const InputSpec& spec,
                                const Propagator& prop) {
    return inject_and_evolve(rho, value, spec, prop.unitary());
}

// ------------------------------- observables ---------------------------------

namespace {

struct KindName {
    ObservableKind kind;
    const char* name;
};

constexpr KindName kKindNames[] = {
    {ObservableKind::CrossReal, "cross_real"},
    {ObservableKind::Occupations, "occupations"},
    {ObservableKind::CrossOffdiag, "cross_offdiag"},
    {ObservableKind::DensityDensity, "density_density"},
    {ObservableKind::QuadraturePlus, "quadrature_plus"},
    {ObservableKind::QuadratureMinus, "quadrature_minus"},
    {ObservableKind::QuadratureSqPlus, "quadrature_sq_plus"},
    {ObservableKind::QuadratureSqMinus, "quadrature_sq_minus"},
};

}  // namespace

std::string observable_kind_name(ObservableKind kind) {
    for (const auto& kn : kKindNames) {
        if (kn.kind == kind) return kn.name;
    }
    return "unknown";
}

ObservableKind parse_observable_kind(const std::string& name) {
    for (const auto& kn : kKindNames) {
        if (name == kn.name) return kn.kind;
    }
    throw std::invalid_argument("unknown observable kind '" + name + "'");
}

std::vector<ObservableKind> all_observable_kinds() {
    std::vector<ObservableKind> kinds;
    for (const auto& kn : kKindNames) kinds.push_back(kn.kind);
    return kinds;
}

ObservableSet build_observables(ObservableKind kind, const OperatorSet& ops) {
    ObservableSet obs;
    obs.kind = kind;
    const int n = ops.n_sites();
    auto add = [&](SparseOp m, std::string label, int i, int j) {
        m.prune(cplx(0.0, 0.0));
        m.makeCompressed();
        obs.matrices.push_back(std::move(m));
        obs.labels.push_back(std::move(label));
        obs.sites.emplace_back(i, j);
    };
    auto site_label = [](const char* prefix, int i, int j) {
        return std::string(prefix) + std::to_string(i + 1) + "_" + std::to_string(j + 1);
    };
    const auto& a = ops.lowering;
    const auto& ad = ops.raising;
    auto at = [](const std::vector<SparseOp>& v, int i) -> const SparseOp& { return v[static_cast<std::size_t>(i)]; };

    switch (kind) {
        case ObservableKind::CrossReal:
        case ObservableKind::CrossOffdiag:
            for (int i = 0; i < n; ++i) {
                for (int j = i; j < n; ++j) {
                    if (kind == ObservableKind::CrossOffdiag && i == j) continue;
                    SparseOp hop = at(ad, i) * at(a, j);
                    SparseOp herm = 0.5 * (hop + SparseOp(hop.adjoint()));
                    add(std::move(herm), site_label("re_ad", i, j), i, j);
                }
            }
            break;
        case ObservableKind::Occupations:
            for (int i = 0; i < n; ++i) add(ops.number(i), "n" + std::to_string(i + 1), i, i);
            break;
        case ObservableKind::DensityDensity:
            for (int i = 0; i < n; ++i) {
                for (int j = i; j < n; ++j) add(ops.number(i) * ops.number(j), site_label("nn", i, j), i, j);
            }
            break;
        case ObservableKind::QuadraturePlus:
            for (int i = 0; i < n; ++i) add(at(ad, i) + at(a, i), "xp" + std::to_string(i + 1), i, i);
            break;
        case ObservableKind::QuadratureMinus:
            for (int i = 0; i < n; ++i) add(kI * (at(ad, i) - at(a, i)), "xm" + std::to_string(i + 1), i, i);
            break;
        case ObservableKind::QuadratureSqPlus:
            for (int i = 0; i < n; ++i) {
                SparseOp x = at(ad, i) + at(a, i);
                add(x * x, "xp2_" + std::to_string(i + 1), i, i);
            }
            break;
        case ObservableKind::QuadratureSqMinus:
            for (int i = 0; i < n; ++i) {
                SparseOp x = at(ad, i) - at(a, i);
                add(x * x, "xm2_" + std::to_string(i + 1), i, i);
            }
            break;
    }
    return obs;
}

ObservableSet hopping_observables(const OperatorSet& ops, const std::vector<std::pair<int, int>>& pairs) {
    ObservableSet obs;
    obs.kind = ObservableKind::CrossOffdiag;
    for (const auto& [i, j] : pairs) {
        if (i < 0 || j < 0 || i >= ops.n_sites() || j >= ops.n_sites()) {
            throw std::invalid_argument("hopping_observables: site pair out of range");
        }
        SparseOp hop = ops.raising[static_cast<std::size_t>(i)] * ops.lowering[static_cast<std::size_t>(j)];
        SparseOp herm = hop + SparseOp(hop.adjoint());
        herm.prune(cplx(0.0, 0.0));
        herm.makeCompressed();
        obs.matrices.push_back(std::move(herm));
        obs.labels.push_back("hop" + std::to_string(i + 1) + "_" + std::to_string(j + 1));
        obs.sites.emplace_back(i, j);
    }
    return obs;
}

RealVector measure(const ObservableSet& obs, const DensityMatrix& rho) {
    RealVector x(obs.size());
    for (int j = 0; j < obs.size(); ++j) {
        const SparseOp& o = obs.matrices[static_cast<std::size_t>(j)];
        if (o.rows() != rho.dim()) throw std::invalid_argument("measure: observable dimension mismatch");
        const cplx value = (o * rho.data).trace();
        if (!std::isfinite(value.real()) || !std::isfinite(value.imag())) {
            throw NumericalError("measure: non-finite expectation value for " + obs.labels[static_cast<std::size_t>(j)]);
        }
        if (std::abs(value.imag()) > 1e-10) {
            throw NumericalError("measure: expectation of " + obs.labels[static_cast<std::size_t>(j)] +
                                 " has imaginary part " + std::to_string(value.imag()));
        }
        x(j) = value.real();
    }
    return x;
}

RealVector level_histogram_from_populations(const RealVector& populations, const FockBasis& basis, int site) {
    if (site < 0 || site >= basis.n_sites()) throw std::out_of_range("level histogram: site out of range");
    RealVector hist = RealVector::Zero(basis.local_dim());
    for (Index s = 0; s < basis.dim(); ++s) hist(basis.occupation(s, site)) += populations(s);
    return hist;
}

RealVector level_occupation_histogram(const DensityMatrix& rho, int site, const Statistics& stat) {
    if (!stat.is_boson()) throw std::invalid_argument("level_occupation_histogram: only defined for bosonic reservoirs");
    if (rho.basis.local_dim() != stat.local_dim()) throw std::invalid_argument("level_occupation_histogram: cutoff mismatch");
    return level_histogram_from_populations(rho.data.diagonal().real(), rho.basis, site);
}

}  // namespace qrc
