// kraus_spectral.hpp: Kraus form of the injection channel and the spectrum
// of its transfer matrix.

#pragma once

#include "qrc/basis.hpp"
#include "qrc/dynamics.hpp"
#include "qrc/types.hpp"

#include <vector>

namespace qrc {

// K_m = U (|psi><b_m| ⊗ I) for an orthonormal local basis {b_m} with
// b_0 = psi and b_1 = psi_perp. For a two-level site this is exactly the pair
// K_1 = U(|psi><psi| ⊗ I), K_2 = U(|psi><psi_perp| ⊗ I); larger local spaces
// add one operator per remaining basis state |n>, n not in {0, e}.
struct KrausFamily {
    std::vector<Matrix> operators;
    double input_value = 0.0;
    Vector psi;
    Vector psi_perp;

    const Matrix& k1() const { return operators.at(0); }
    const Matrix& k2() const { return operators.at(1); }
};

// psi_perp = a|e> - b|0> for psi = a|0> + b|e>.
Vector orthogonal_input_state(double value, const InputSpec& spec, int local_dim);

// Two-operator form; requires e = 1 and a two-level site.
KrausFamily kraus_pair(const Matrix& unitary, double value, const InputSpec& spec, const FockBasis& basis);

// Complete family of local_dim operators; valid for any e and cutoff.
KrausFamily kraus_family(const Matrix& unitary, double value, const InputSpec& spec, const FockBasis& basis);

// || sum_m K_m† K_m - I ||_F
double completeness_residual(const std::vector<Matrix>& kraus);

Matrix apply_kraus(const std::vector<Matrix>& kraus, const Matrix& rho);

// T = sum_m K_m ⊗ conj(K_m). With row-stacking vec(rho)[i*D + j] = rho(i, j)
// this satisfies vec(sum_m K_m rho K_m†) = T vec(rho).
Matrix transfer_matrix(const std::vector<Matrix>& kraus);
inline Matrix transfer_matrix(const KrausFamily& family) { return transfer_matrix(family.operators); }

Vector vectorize(const Matrix& rho);
Matrix unvectorize(const Vector& v, Index dim);

struct TransferSpectrum {
    Vector eigenvalues;  // sorted by decreasing modulus
    double spectral_radius = 0.0;
    double second_modulus = 0.0;
};

// Largest transfer-matrix dimension D^2 accepted by spectrum().
inline constexpr Index kMaxTransferDim = 65536;

TransferSpectrum spectrum(const Matrix& transfer);

}  // namespace qrc
