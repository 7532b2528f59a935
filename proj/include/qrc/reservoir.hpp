// reservoir.hpp: trajectory engine for the inject / evolve / trace map.
//
// The map rho -> U (|psi><psi| ⊗ Tr_1 rho) U† only ever needs sigma = Tr_1 rho.
// Writing W = U (|psi> ⊗ I), an isometry from sites 2..N into the full space,
// one step is
//
//     sigma' = Tr_1[W sigma W†] = sum_n W_n sigma W_n†,
//
// where W_n is the block of W whose site-1 output level is n. The engine keeps
// sigma (dimension D/d) instead of rho (dimension D). Because H conserves the
// total excitation number, each W_n only connects excitation sectors of the
// rest space that differ by a fixed shift, so the products run block by block.
// Observables use Tr[O W sigma W†] = Tr[(W† O W) sigma] with W† O W
// precomputed per sampling time.

#pragma once

#include "qrc/basis.hpp"
#include "qrc/dynamics.hpp"
#include "qrc/operator_algebra.hpp"
#include "qrc/types.hpp"

#include <array>
#include <optional>
#include <span>
#include <vector>

namespace qrc {

class ReservoirEngine {
public:
    // `observables` may be null when only the state is of interest. Samples are
    // taken at t_v = v·dt/V for v = 1..V, V = prop.substeps().
    ReservoirEngine(const OperatorSet& ops, const Propagator& prop, const InputSpec& spec,
                    const ObservableSet* observables = nullptr);

    int n_sites() const { return basis_.n_sites(); }
    int local_dim() const { return basis_.local_dim(); }
    Index rest_dim() const { return rest_basis_.dim(); }
    int n_observables() const { return n_obs_; }
    int substeps() const { return substeps_; }
    int n_features() const { return n_obs_ * substeps_; }

    // Resets to |0...0><0...0|.
    void reset_vacuum();
    // Starts from rho; only Tr_1 rho is retained.
    void set_state(const DensityMatrix& rho);
    // Sets the reduced operator on sites 2..N directly (computational order).
    // It must be Hermitian but need not be a state: the step is linear, so
    // differences of states propagate too.
    void set_reduced(const Matrix& sigma);
    Matrix reduced() const;

    // Injects `value`, evolves for dt and records observables. `features` must
    // hold n_features() entries, laid out substep-major (v outer, observable
    // inner); pass an empty span to skip readout.
    void step(double value, std::span<double> features = {});

    // The full state after the last step, rho(k) = W sigma(k-1) W†.
    DensityMatrix full_state() const;
    // Diagonal of full_state() without forming it.
    RealVector full_populations() const;

    // Reduced-space Kraus operators W_n (computational order) for one input.
    std::vector<Matrix> reduced_kraus(double value) const;

private:
    struct ShiftBlocks {
        // ground[n][t]: site-1 |0> -> |n>, rest sector t+n -> t.
        // excited[n][t]: site-1 |e> -> |n>, rest sector t+n-e -> t.
        std::vector<std::vector<Matrix>> ground;
        std::vector<std::vector<Matrix>> excited;
    };

    int source_sector(int target, int n, int m) const;
    void left_multiply(int n, double c0, double ce, const Matrix& sigma, Matrix& out) const;
    void accumulate_right(int n, double c0, double ce, const Matrix& y, Matrix& out) const;
    void mirror_lower(Matrix& m) const;
    Matrix dense_isometry(double c0, double ce) const;  // W in (full natural, rest permuted) coordinates
    Matrix to_permuted(const Matrix& natural) const;
    Matrix to_natural(const Matrix& permuted) const;

    FockBasis basis_;
    FockBasis rest_basis_;
    SectorLayout rest_layout_;
    InputSpec spec_;
    int substeps_ = 1;
    int n_obs_ = 0;
    int excitation_ = 1;
    ShiftBlocks blocks_;

    // gram_[v][j] = {W_0† O_j W_0, W_e† O_j W_e, W_0† O_j W_e} at time t_{v+1}.
    std::vector<std::vector<std::array<Matrix, 3>>> gram_;

    Matrix sigma_;       // rest-permuted order
    Matrix prev_sigma_;  // sigma before the last step
    double c0_last_ = 1.0;
    double ce_last_ = 0.0;
    bool stepped_ = false;
    Matrix scratch_;
};

// Drives the engine with `inputs`, dropping the first `washout` rows.
// Returns a (inputs.size() - washout) × n_features() design matrix. Throws
// NumericalError on non-finite readouts.
RealMatrix run_reservoir(ReservoirEngine& engine, std::span<const double> inputs, int washout);

}  // namespace qrc
