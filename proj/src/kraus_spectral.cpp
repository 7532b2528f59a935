#include "qrc/kraus_spectral.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <numeric>

namespace qrc {

Vector orthogonal_input_state(double value, const InputSpec& spec, int local_dim) {
    const Vector psi = input_state(value, spec, local_dim);
    Vector perp = Vector::Zero(local_dim);
    perp(spec.excitation) = psi(0);
    perp(0) = -psi(spec.excitation);
    return perp;
}

namespace {

KrausFamily build_family(const Matrix& unitary, double value, const InputSpec& spec, const FockBasis& basis,
                         bool pair_only) {
    const int d = basis.local_dim();
    if (unitary.rows() != basis.dim() || unitary.cols() != basis.dim()) {
        throw std::invalid_argument("kraus: unitary does not match the basis dimension");
    }
    KrausFamily family;
    family.input_value = value;
    family.psi = input_state(value, spec, d);
    family.psi_perp = orthogonal_input_state(value, spec, d);

    std::vector<Vector> local_basis{family.psi, family.psi_perp};
    if (!pair_only) {
        for (int n = 0; n < d; ++n) {
            if (n == 0 || n == spec.excitation) continue;
            Vector e = Vector::Zero(d);
            e(n) = 1.0;
            local_basis.push_back(std::move(e));
        }
    }
    const Index rest = basis.rest_dim();
    const Matrix id = Matrix::Identity(rest, rest);
    for (const Vector& b : local_basis) {
        const Matrix local = family.psi * b.adjoint();
        family.operators.push_back(unitary * Eigen::kroneckerProduct(local, id).eval());
    }
    return family;
}

}  // namespace

KrausFamily kraus_pair(const Matrix& unitary, double value, const InputSpec& spec, const FockBasis& basis) {
    if (spec.excitation != 1 || basis.local_dim() != 2) {
        throw std::invalid_argument(
            "kraus_pair: the two-operator form needs e = 1 on a two-level site; use kraus_family");
    }
    return build_family(unitary, value, spec, basis, true);
}

KrausFamily kraus_family(const Matrix& unitary, double value, const InputSpec& spec, const FockBasis& basis) {
    return build_family(unitary, value, spec, basis, false);
}

double completeness_residual(const std::vector<Matrix>& kraus) {
    if (kraus.empty()) throw std::invalid_argument("completeness_residual: empty Kraus family");
    const Index dim = kraus.front().cols();
    Matrix sum = Matrix::Zero(dim, dim);
    for (const Matrix& k : kraus) sum.noalias() += k.adjoint() * k;
    return (sum - Matrix::Identity(dim, dim)).norm();
}

Matrix apply_kraus(const std::vector<Matrix>& kraus, const Matrix& rho) {
    Matrix out = Matrix::Zero(rho.rows(), rho.cols());
    for (const Matrix& k : kraus) out.noalias() += k * rho * k.adjoint();
    return out;
}

Matrix transfer_matrix(const std::vector<Matrix>& kraus) {
    if (kraus.empty()) throw std::invalid_argument("transfer_matrix: empty Kraus family");
    const Index dim = kraus.front().rows();
    const Index big = dim * dim;
    if (big > kMaxTransferDim) {
        throw BudgetError("transfer_matrix: D^2 = " + std::to_string(big) + " exceeds the spectral limit of " +
                          std::to_string(kMaxTransferDim));
    }
    require_dense_budget(big, "transfer_matrix");
    Matrix t = Matrix::Zero(big, big);
    for (const Matrix& k : kraus) t += Eigen::kroneckerProduct(k, Matrix(k.conjugate())).eval();
    return t;
}

Vector vectorize(const Matrix& rho) {
    Vector v(rho.size());
    for (Index i = 0; i < rho.rows(); ++i) {
        for (Index j = 0; j < rho.cols(); ++j) v(i * rho.cols() + j) = rho(i, j);
    }
    return v;
}

Matrix unvectorize(const Vector& v, Index dim) {
    if (v.size() != dim * dim) throw std::invalid_argument("unvectorize: length is not dim^2");
    Matrix rho(dim, dim);
    for (Index i = 0; i < dim; ++i) {
        for (Index j = 0; j < dim; ++j) rho(i, j) = v(i * dim + j);
    }
    return rho;
}

TransferSpectrum spectrum(const Matrix& transfer) {
    if (transfer.rows() != transfer.cols()) throw std::invalid_argument("spectrum: transfer matrix must be square");
    if (!transfer.allFinite()) throw NumericalError("spectrum: transfer matrix has non-finite entries");
    Eigen::ComplexEigenSolver<Matrix> solver(transfer, false);
    if (solver.info() != Eigen::Success) throw NumericalError("spectrum: eigensolver failed");
    const Vector& ev = solver.eigenvalues();
    std::vector<Index> idx(static_cast<std::size_t>(ev.size()));
    std::iota(idx.begin(), idx.end(), Index{0});
    std::stable_sort(idx.begin(), idx.end(), [&](Index a, Index b) { return std::abs(ev(a)) > std::abs(ev(b)); });

    TransferSpectrum out;
    out.eigenvalues.resize(ev.size());
    for (std::size_t i = 0; i < idx.size(); ++i) out.eigenvalues(static_cast<Index>(i)) = ev(idx[i]);
    out.spectral_radius = ev.size() > 0 ? std::abs(out.eigenvalues(0)) : 0.0;
    out.second_modulus = ev.size() > 1 ? std::abs(out.eigenvalues(1)) : 0.0;
    return out;
}

}  // namespace qrc
