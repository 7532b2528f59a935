#include "oracles.hpp"
#include "qrc/dynamics.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace qrc;

namespace {

std::vector<Statistics> all_three() { return {Statistics::qubit(), Statistics::fermion(), Statistics::boson(2)}; }

DensityMatrix random_state(const FockBasis& basis, std::mt19937_64& gen) {
    return {oracle::random_density(basis.dim(), gen), basis};
}

}  // namespace

TEST(InputState, UnitIntervalExamples) {
    const InputSpec spec{1, Encoding::UnitInterval};
    Vector v = input_state(1.0, spec, 2);
    EXPECT_EQ(v(0), cplx(1.0));
    EXPECT_EQ(v(1), cplx(0.0));
    v = input_state(0.5, spec, 2);
    EXPECT_NEAR(v(0).real(), 1.0 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(v(1).real(), 1.0 / std::sqrt(2.0), 1e-15);
}

TEST(InputState, SymmetricExcitationTwo) {
    const Vector v = input_state(0.0, InputSpec{2, Encoding::Symmetric}, 6);
    ASSERT_EQ(v.size(), 6);
    EXPECT_NEAR(v(0).real(), 1.0 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(v(2).real(), 1.0 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(v.norm(), 1.0, 1e-15);
    EXPECT_EQ(v(1), cplx(0.0));
}

TEST(InputState, Errors) {
    EXPECT_THROW(input_state(1.5, InputSpec{1, Encoding::UnitInterval}, 2), std::invalid_argument);
    EXPECT_THROW(input_state(-0.5, InputSpec{1, Encoding::UnitInterval}, 2), std::invalid_argument);
    EXPECT_THROW(input_state(-1.5, InputSpec{1, Encoding::Symmetric}, 2), std::invalid_argument);
    EXPECT_THROW(input_state(std::nan(""), InputSpec{1, Encoding::UnitInterval}, 2), std::invalid_argument);
    EXPECT_THROW(input_state(0.5, InputSpec{2, Encoding::UnitInterval}, 2), std::invalid_argument);
    EXPECT_NO_THROW(input_state(-0.5, InputSpec{1, Encoding::Symmetric}, 2));
}

TEST(PartialTrace, ProductState) {
    std::mt19937_64 gen(1);
    const Matrix s1 = oracle::random_density(3, gen), rest = oracle::random_density(9, gen);
    const DensityMatrix rho{Eigen::kroneckerProduct(s1, rest).eval(), FockBasis(3, 3)};
    EXPECT_LT((partial_trace_first(rho).data - rest).norm(), 1e-14);
}

TEST(PartialTrace, MaximallyMixed) {
    const DensityMatrix rho = DensityMatrix::maximally_mixed(FockBasis(3, 2));
    const Matrix expected = Matrix::Identity(4, 4) / 4.0;
    EXPECT_LT((partial_trace_first(rho).data - expected).norm(), 1e-15);
}

TEST(PartialTrace, BellStateGivesMixedReducedState) {
    const FockBasis b(2, 2);
    Vector psi = Vector::Zero(4);
    psi(0) = psi(3) = 1.0 / std::sqrt(2.0);
    const DensityMatrix rho = DensityMatrix::pure(b, psi);
    EXPECT_LT((partial_trace_first(rho).data - Matrix::Identity(2, 2) / 2.0).norm(), 1e-15);
}

TEST(PartialTrace, MatchesOracleAndPreservesTrace) {
    std::mt19937_64 gen(2);
    const FockBasis b(3, 3);
    for (int trial = 0; trial < 10; ++trial) {
        const DensityMatrix rho = random_state(b, gen);
        const DensityMatrix red = partial_trace_first(rho);
        EXPECT_LT((red.data - oracle::partial_trace_first(rho.data, 3)).norm(), 1e-14);
        EXPECT_NEAR(red.trace().real(), 1.0, 1e-12);
        EXPECT_LT(red.hermiticity_residual(), 1e-12);
    }
}

TEST(PartialTrace, SingleSiteRejected) {
    EXPECT_THROW(partial_trace_first(DensityMatrix::vacuum(FockBasis(1, 2))), std::invalid_argument);
}

TEST(Propagator, UnitaryAndSubstepConsistency) {
    for (const Statistics& s : all_three()) {
        const OperatorSet ops = build_ladder_ops(s, 3);
        const SparseOp h = build_hamiltonian(sample_couplings(3, 4), ops);
        const Propagator prop(h, ops.basis, 10.0, 4);
        const Matrix u = prop.unitary();
        const Index d = u.rows();
        EXPECT_LT((u.adjoint() * u - Matrix::Identity(d, d)).norm(), 1e-10);
        Matrix pow = Matrix::Identity(d, d);
        const Matrix uv = prop.substep_unitary();
        for (int v = 0; v < 4; ++v) pow = pow * uv;
        EXPECT_LT((pow - u).norm(), 1e-9);
        EXPECT_LT((u - oracle::expm_hermitian(Matrix(h), 10.0)).norm(), 1e-9) << s.name();
        EXPECT_TRUE(prop.number_conserving());
    }
}

TEST(Propagator, NonConservingHamiltonianFallsBackToDense) {
    const OperatorSet ops = build_ladder_ops(Statistics::qubit(), 2);
    const SparseOp h = ops.lowering[0] + ops.raising[0] + build_hamiltonian(sample_couplings(2, 1), ops);
    const Propagator prop(h, ops.basis, 1.3);
    EXPECT_FALSE(prop.number_conserving());
    EXPECT_LT((prop.unitary() - oracle::expm_hermitian(Matrix(h), 1.3)).norm(), 1e-10);
}

TEST(Propagator, NonHermitianRejected) {
    const OperatorSet ops = build_ladder_ops(Statistics::qubit(), 2);
    const SparseOp h = ops.raising[0] * ops.lowering[1];
    EXPECT_THROW(Propagator(h, ops.basis, 1.0), std::invalid_argument);
    EXPECT_THROW(Propagator(build_hamiltonian(sample_couplings(2, 1), ops), ops.basis, 0.0), std::invalid_argument);
}

TEST(InjectAndEvolve, IdentityUnitaryResetsFirstSite) {
    std::mt19937_64 gen(3);
    const FockBasis b(3, 2);
    const DensityMatrix rho = random_state(b, gen);
    const DensityMatrix out = inject_and_evolve(rho, 1.0, InputSpec{}, Matrix(Matrix::Identity(8, 8)));
    Matrix zero = Matrix::Zero(2, 2);
    zero(0, 0) = 1.0;
    const Matrix expected = Eigen::kroneckerProduct(zero, oracle::partial_trace_first(rho.data, 2)).eval();
    EXPECT_LT((out.data - expected).norm(), 1e-14);
}

TEST(InjectAndEvolve, MatchesOracleAndPreservesInvariants) {
    std::mt19937_64 gen(4);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (const Statistics& s : all_three()) {
        const OperatorSet ops = build_ladder_ops(s, 3);
        const SparseOp h = build_hamiltonian(sample_couplings(3, 11), ops);
        const Propagator prop(h, ops.basis, 10.0);
        const Matrix u = prop.unitary();
        DensityMatrix rho = random_state(ops.basis, gen);
        for (int k = 0; k < 20; ++k) {
            const double x = unif(gen);
            const DensityMatrix next = inject_and_evolve(rho, x, InputSpec{}, prop);
            const Matrix ref = oracle::inject(rho.data, input_state(x, InputSpec{}, s.local_dim()), u);
            EXPECT_LT((next.data - ref).norm(), 1e-10);
            EXPECT_NEAR(next.trace().real(), 1.0, 1e-12);
            EXPECT_NO_THROW(next.check_valid());
            rho = next;
        }
    }
}

TEST(InjectAndEvolve, InvariantsOverManySteps) {
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (const Statistics& s : all_three()) {
        const OperatorSet ops = build_ladder_ops(s, 3);
        const SparseOp h = build_hamiltonian(sample_couplings(3, 12), ops);
        const Propagator prop(h, ops.basis, 10.0);
        const Matrix u = prop.unitary();
        const Matrix ntot = Matrix(ops.total_number());
        DensityMatrix rho = DensityMatrix::vacuum(ops.basis);
        for (int k = 0; k < 500; ++k) {
            const double x = unif(gen);
            // Number is conserved by the unitary part.
            const DensityMatrix injected = inject_and_evolve(rho, x, InputSpec{}, Matrix(Matrix::Identity(u.rows(), u.cols())));
            rho = inject_and_evolve(rho, x, InputSpec{}, u);
            EXPECT_NEAR((ntot * rho.data).trace().real(), (ntot * injected.data).trace().real(), 1e-10);
            ASSERT_NO_THROW(rho.check_valid());
            EXPECT_LE(rho.purity(), 1.0 + 1e-10);
        }
    }
}

TEST(Observables, CountsOrderingAndHermiticity) {
    const OperatorSet ops = build_ladder_ops(Statistics::boson(2), 4);
    for (ObservableKind kind : all_observable_kinds()) {
        const ObservableSet obs = build_observables(kind, ops);
        for (const SparseOp& m : obs.matrices) EXPECT_LT((Matrix(m) - Matrix(m).adjoint()).norm(), 1e-12);
        for (std::size_t i = 1; i < obs.sites.size(); ++i) EXPECT_LT(obs.sites[i - 1], obs.sites[i]);
    }
    EXPECT_EQ(build_observables(ObservableKind::CrossReal, ops).size(), 10);
    EXPECT_EQ(build_observables(ObservableKind::CrossOffdiag, ops).size(), 6);
    EXPECT_EQ(build_observables(ObservableKind::Occupations, ops).size(), 4);
    EXPECT_EQ(build_observables(ObservableKind::DensityDensity, ops).size(), 10);
    EXPECT_EQ(parse_observable_kind(observable_kind_name(ObservableKind::QuadratureSqMinus)), ObservableKind::QuadratureSqMinus);
    EXPECT_THROW(parse_observable_kind("spin_z"), std::invalid_argument);
}

TEST(Observables, IdentityMeasuresOne) {
    std::mt19937_64 gen(6);
    const OperatorSet ops = build_ladder_ops(Statistics::qubit(), 2);
    ObservableSet obs;
    obs.matrices.push_back(ops.identity());
    obs.labels.push_back("id");
    obs.sites.emplace_back(0, 0);
    EXPECT_NEAR(measure(obs, random_state(ops.basis, gen))(0), 1.0, 1e-12);
}

TEST(Observables, FermionSquaredQuadraturesAreConstant) {
    std::mt19937_64 gen(7);
    const OperatorSet ops = build_ladder_ops(Statistics::fermion(), 3);
    const ObservableSet plus = build_observables(ObservableKind::QuadratureSqPlus, ops);
    const ObservableSet minus = build_observables(ObservableKind::QuadratureSqMinus, ops);
    for (int t = 0; t < 5; ++t) {
        const DensityMatrix rho = random_state(ops.basis, gen);
        for (double x : measure(plus, rho)) EXPECT_NEAR(x, 1.0, 1e-12);
        for (double x : measure(minus, rho)) EXPECT_NEAR(x, -1.0, 1e-12);
    }
}

TEST(Observables, OccupationOfMixedQubit) {
    const OperatorSet ops = build_ladder_ops(Statistics::qubit(), 1);
    const ObservableSet obs = build_observables(ObservableKind::Occupations, ops);
    EXPECT_NEAR(measure(obs, DensityMatrix::maximally_mixed(ops.basis))(0), 0.5, 1e-15);
}

TEST(Observables, ImaginaryExpectationRejected) {
    const OperatorSet ops = build_ladder_ops(Statistics::qubit(), 2);
    ObservableSet obs;
    obs.matrices.push_back(SparseOp(ops.lowering[0]));
    obs.labels.push_back("a1");
    obs.sites.emplace_back(0, 0);
    Vector psi = Vector::Zero(4);
    psi(0) = 1.0 / std::sqrt(2.0);
    psi(2) = cplx(0.0, 1.0 / std::sqrt(2.0));
    EXPECT_THROW(measure(obs, DensityMatrix::pure(ops.basis, psi)), NumericalError);
}

TEST(Observables, HoppingPairs) {
    const OperatorSet ops = build_ladder_ops(Statistics::fermion(), 3);
    const ObservableSet obs = hopping_observables(ops, {{0, 2}});
    const Matrix expected = Matrix(ops.raising[0] * ops.lowering[2]) + Matrix(ops.raising[2] * ops.lowering[0]);
    EXPECT_LT((Matrix(obs.matrices[0]) - expected).norm(), 1e-15);
    EXPECT_THROW(hopping_observables(ops, {{0, 3}}), std::invalid_argument);
}

TEST(LevelHistogram, VacuumAndFockStates) {
    const Statistics s = Statistics::boson(3);
    const OperatorSet ops = build_ladder_ops(s, 2);
    RealVector h = level_occupation_histogram(DensityMatrix::vacuum(ops.basis), 0, s);
    EXPECT_EQ(h(0), 1.0);
    EXPECT_EQ(h.sum(), 1.0);
    h = level_occupation_histogram(DensityMatrix::product(ops.basis, {0, 2}), 1, s);
    EXPECT_EQ(h(2), 1.0);
    EXPECT_NEAR(h.sum(), 1.0, 1e-15);
    const OperatorSet q = build_ladder_ops(Statistics::qubit(), 2);
    EXPECT_THROW(level_occupation_histogram(DensityMatrix::vacuum(q.basis), 0, Statistics::qubit()), std::invalid_argument);
}

TEST(LevelHistogram, MatchesProjectorExpectation) {
    std::mt19937_64 gen(8);
    const Statistics s = Statistics::boson(2);
    const OperatorSet ops = build_ladder_ops(s, 3);
    const DensityMatrix rho = random_state(ops.basis, gen);
    for (int site = 0; site < 3; ++site) {
        const RealVector h = level_occupation_histogram(rho, site, s);
        EXPECT_NEAR(h.sum(), 1.0, 1e-10);
        for (int n = 0; n <= 2; ++n) {
            EXPECT_NEAR(h(n), (Matrix(ops.level_projector(site, n)) * rho.data).trace().real(), 1e-14);
        }
    }
}

// Two sites, J_12 = 1: a single excitation injected into site 1 Rabi-oscillates
// to site 2 as sin^2(t) for every statistics.
TEST(AnalyticOracle, TwoSiteChainRabi) {
    for (const Statistics& s : all_three()) {
        const OperatorSet ops = build_ladder_ops(s, 2);
        const SparseOp h = build_chain_hamiltonian(2, ops);
        const ObservableSet occ = build_observables(ObservableKind::Occupations, ops);
        for (double t : {0.3, 1.0, 2.5, 10.0}) {
            const Propagator prop(h, ops.basis, t);
            const DensityMatrix rho = inject_and_evolve(DensityMatrix::vacuum(ops.basis), 0.0, InputSpec{}, prop);
            EXPECT_NEAR(measure(occ, rho)(1), std::pow(std::sin(t), 2), 1e-9) << s.name() << " t=" << t;
            const DensityMatrix idle = inject_and_evolve(DensityMatrix::vacuum(ops.basis), 1.0, InputSpec{}, prop);
            EXPECT_NEAR(measure(occ, idle).cwiseAbs().sum(), 0.0, 1e-15);
        }
    }
}
