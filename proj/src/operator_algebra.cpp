#include "qrc/operator_algebra.hpp"

#include "qrc/rng.hpp"

#include <cmath>
#include <random>

namespace qrc {

std::string Statistics::name() const {
    switch (kind) {
        case Kind::Boson: return "boson";
        case Kind::Fermion: return "fermion";
        case Kind::Qubit: return "qubit";
    }
    return "unknown";
}

Statistics Statistics::parse(const std::string& name, int cutoff) {
    if (name == "boson" || name == "bosons") {
        if (cutoff < 1) throw std::invalid_argument("boson cutoff must be >= 1");
        return boson(cutoff);
    }
    if (name == "fermion" || name == "fermions") return fermion();
    if (name == "qubit" || name == "qubits" || name == "spin" || name == "spins") return qubit();
    throw std::invalid_argument("unknown statistics '" + name + "' (expected boson, fermion or qubit)");
}

SparseOp OperatorSet::total_number() const {
    SparseOp n(total_dim(), total_dim());
    for (int i = 0; i < n_sites(); ++i) n += number(i);
    return n;
}

SparseOp OperatorSet::identity() const {
    SparseOp id(total_dim(), total_dim());
    id.setIdentity();
    return id;
}

SparseOp OperatorSet::level_projector(int site, int level) const {
    std::vector<Eigen::Triplet<cplx>> entries;
    for (Index s = 0; s < total_dim(); ++s) {
        if (basis.occupation(s, site) == level) entries.emplace_back(s, s, 1.0);
    }
    SparseOp p(total_dim(), total_dim());
    p.setFromTriplets(entries.begin(), entries.end());
    return p;
}

OperatorSet build_ladder_ops(const Statistics& stat, int n_sites) {
    if (n_sites < 1) throw std::invalid_argument("build_ladder_ops: n_sites must be >= 1");
    if (stat.is_boson() && stat.cutoff < 1) throw std::invalid_argument("build_ladder_ops: boson cutoff must be >= 1");

    OperatorSet ops;
    ops.statistics = stat;
    ops.basis = FockBasis(n_sites, stat.local_dim());
    const Index dim = ops.basis.dim();
    // Ladder matrices are stored sparse, but every consumer eventually needs
    // dense D×D propagators and states.
    require_dense_budget(dim, "build_ladder_ops");

    for (int site = 0; site < n_sites; ++site) {
        std::vector<Eigen::Triplet<cplx>> entries;
        entries.reserve(static_cast<std::size_t>(dim));
        const Index stride = ops.basis.stride(site);
        for (Index col = 0; col < dim; ++col) {
            const int n = ops.basis.occupation(col, site);
            if (n == 0) continue;
            double value = 1.0;
            if (stat.is_boson()) {
                value = std::sqrt(static_cast<double>(n));
            } else if (stat.is_fermion()) {
                // Jordan–Wigner string over the sites preceding `site`.
                int parity = 0;
                for (int prev = 0; prev < site; ++prev) parity += ops.basis.occupation(col, prev);
                value = (parity % 2 == 0) ? 1.0 : -1.0;
            }
            entries.emplace_back(col - stride, col, value);
        }
        SparseOp a(dim, dim);
        a.setFromTriplets(entries.begin(), entries.end());
        a.makeCompressed();
        ops.raising.push_back(SparseOp(a.adjoint()));
        ops.lowering.push_back(std::move(a));
    }
    return ops;
}

CouplingMatrix sample_couplings(int n_sites, std::uint64_t seed, bool include_diagonal) {
    if (n_sites < 1) throw std::invalid_argument("sample_couplings: n_sites must be >= 1");
    auto gen = make_stream(seed, Stream::Couplings);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    CouplingMatrix J;
    J.seed = seed;
    J.entries = RealMatrix::Zero(n_sites, n_sites);
    for (int i = 0; i < n_sites; ++i) {
        for (int j = i; j < n_sites; ++j) {
            // Always draw the diagonal so include_diagonal does not shift the
            // off-diagonal values.
            const double v = uniform(gen);
            if (i == j) {
                J.entries(i, i) = include_diagonal ? v : 0.0;
            } else {
                J.entries(i, j) = v;
                J.entries(j, i) = v;
            }
        }
    }
    return J;
}

CouplingMatrix chain_couplings(int n_sites) {
    if (n_sites < 2) throw std::invalid_argument("chain_couplings: a chain needs at least two sites");
    CouplingMatrix J;
    J.entries = RealMatrix::Zero(n_sites, n_sites);
    for (int i = 0; i + 1 < n_sites; ++i) {
        J.entries(i, i + 1) = 1.0;
        J.entries(i + 1, i) = 1.0;
    }
    return J;
}

SparseOp build_hamiltonian(const CouplingMatrix& couplings, const OperatorSet& ops) {
    const int n = ops.n_sites();
    if (couplings.entries.rows() != n || couplings.entries.cols() != n) {
        throw std::invalid_argument("build_hamiltonian: coupling matrix is " +
                                    std::to_string(couplings.entries.rows()) + "x" +
                                    std::to_string(couplings.entries.cols()) + " but the operator set has " +
                                    std::to_string(n) + " sites");
    }
    SparseOp h(ops.total_dim(), ops.total_dim());
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double jij = couplings.entries(i, j);
            if (jij == 0.0) continue;
            SparseOp term = ops.raising[static_cast<std::size_t>(i)] * ops.lowering[static_cast<std::size_t>(j)];
            h += cplx(jij, 0.0) * term;
        }
    }
    h.prune(cplx(0.0, 0.0));
    h.makeCompressed();
    return h;
}

SparseOp build_chain_hamiltonian(int n_sites, const OperatorSet& ops) {
    if (n_sites < 2) throw std::invalid_argument("build_chain_hamiltonian: n_sites must be >= 2");
    if (n_sites != ops.n_sites()) throw std::invalid_argument("build_chain_hamiltonian: site count mismatch");
    return build_hamiltonian(chain_couplings(n_sites), ops);
}

}  // namespace qrc
