// dynamics.hpp: input injection, partial trace, unitary propagation and
// observable readout on the full Hilbert space.
//
// These are the direct, full-dimension forms of the reservoir map. Long
// trajectories go through ReservoirEngine (reservoir.hpp), which evaluates the
// same map on the reduced state of sites 2..N and is checked against the
// functions here.

#pragma once

#include "qrc/basis.hpp"
#include "qrc/operator_algebra.hpp"
#include "qrc/types.hpp"

#include <string>
#include <utility>
#include <vector>

namespace qrc {

// ------------------------------- states --------------------------------------

struct DensityMatrix {
    Matrix data;
    FockBasis basis;

    Index dim() const { return data.rows(); }

    cplx trace() const { return data.trace(); }
    double purity() const { return (data * data).trace().real(); }
    double hermiticity_residual() const { return (data - data.adjoint()).norm(); }
    double min_eigenvalue() const;

    // Throws NumericalError if any invariant is violated beyond tolerance:
    // Hermitian (1e-10), unit trace (1e-10), PSD (min eigenvalue > -1e-9).
    void check_valid(double herm_tol = 1e-10, double trace_tol = 1e-10, double psd_tol = 1e-9) const;

    static DensityMatrix vacuum(const FockBasis& basis);
    // Product of computational basis states |n_1 ... n_N>.
    static DensityMatrix product(const FockBasis& basis, const std::vector<int>& occupations);
    static DensityMatrix maximally_mixed(const FockBasis& basis);
    static DensityMatrix pure(const FockBasis& basis, const Vector& psi);
};

// ------------------------------- inputs --------------------------------------

enum class Encoding {
    UnitInterval,  // u in [0,1]:  sqrt(u)|0> + sqrt(1-u)|e>
    Symmetric,     // s in [-1,1]: sqrt((1+s)/2)|0> + sqrt((1-s)/2)|e>
};

std::string encoding_name(Encoding e);
Encoding parse_encoding(const std::string& name);

struct InputSpec {
    int excitation = 1;
    Encoding encoding = Encoding::UnitInterval;

    // (amplitude on |0>, amplitude on |e>); throws on out-of-range values.
    std::pair<double, double> amplitudes(double value) const;

    double lower() const { return encoding == Encoding::UnitInterval ? 0.0 : -1.0; }
    double upper() const { return 1.0; }
};

// Local state injected into site 1.
Vector input_state(double value, const InputSpec& spec, int local_dim);

// ------------------------------- maps ----------------------------------------

// Tr_1: trace out site 1 (the most significant tensor factor).
DensityMatrix partial_trace_first(const DensityMatrix& rho);

class Propagator {
public:
    struct Sector {
        RealVector energies;
        Matrix vectors;
    };

    // H must be Hermitian. When it conserves the total excitation number the
    // eigendecomposition is done sector by sector.
    Propagator(const SparseOp& hamiltonian, const FockBasis& basis, double dt, int substeps = 1);

    double dt() const { return dt_; }
    int substeps() const { return substeps_; }
    Index dim() const { return basis_.dim(); }
    const FockBasis& basis() const { return basis_; }
    bool number_conserving() const { return conserving_; }
    const SectorLayout& layout() const { return layout_; }

    // exp(-iHt) restricted to one sector, in layout order.
    Matrix sector_evolution(int sector, double t) const;

    // Dense exp(-iHt) in the computational basis.
    Matrix evolution(double t) const;
    Matrix unitary() const { return evolution(dt_); }
    Matrix substep_unitary() const { return evolution(dt_ / substeps_); }

private:
    FockBasis basis_;
    double dt_;
    int substeps_;
    bool conserving_ = true;
    SectorLayout layout_;
    std::vector<Sector> sectors_;
};

// rho' = U (|psi><psi| ⊗ Tr_1 rho) U†.
DensityMatrix inject_and_evolve(const DensityMatrix& rho, double value, const InputSpec& spec,
                                const Matrix& unitary);
DensityMatrix inject_and_evolve(const DensityMatrix& rho, double value, const InputSpec& spec,
                                const Propagator& prop);

// ------------------------------- observables ---------------------------------

enum class ObservableKind {
    CrossReal,          // Re<a_i† a_j>, i <= j
    Occupations,        // <a_i† a_i>
    CrossOffdiag,       // Re<a_i† a_j>, i < j
    DensityDensity,     // <a_i† a_i a_j† a_j>, i <= j
    QuadraturePlus,     // <a_i† + a_i>
    QuadratureMinus,    // <i(a_i† - a_i)>
    QuadratureSqPlus,   // <(a_i† + a_i)^2>
    QuadratureSqMinus,  // <(a_i† - a_i)^2>
};

std::string observable_kind_name(ObservableKind kind);
ObservableKind parse_observable_kind(const std::string& name);
std::vector<ObservableKind> all_observable_kinds();

struct ObservableSet {
    ObservableKind kind = ObservableKind::CrossReal;
    std::vector<SparseOp> matrices;
    std::vector<std::string> labels;
    // Site pairs (i, j) behind each observable; j == i for single-site terms.
    std::vector<std::pair<int, int>> sites;

    int size() const { return static_cast<int>(matrices.size()); }
};

// Observables ordered lexicographically in (i, j).
ObservableSet build_observables(ObservableKind kind, const OperatorSet& ops);

// a_i† a_j + a_j† a_i for each listed (i, j), 0-based, in the given order.
ObservableSet hopping_observables(const OperatorSet& ops, const std::vector<std::pair<int, int>>& pairs);

// x_j = Tr[O_j rho]; throws NumericalError if an imaginary part exceeds 1e-10.
RealVector measure(const ObservableSet& obs, const DensityMatrix& rho);

// P(n) = Tr[|n><n|_site rho] for n = 0..cutoff.
RealVector level_occupation_histogram(const DensityMatrix& rho, int site, const Statistics& stat);

// Same marginal from the diagonal of rho alone.
RealVector level_histogram_from_populations(const RealVector& populations, const FockBasis& basis, int site);

}  // namespace qrc
