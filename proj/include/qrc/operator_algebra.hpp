// operator_algebra.hpp: ladder operators and quadratic hopping Hamiltonians
// for bosons (truncated Fock space), fermions (Jordan–Wigner) and qubits.

#pragma once

#include "qrc/basis.hpp"
#include "qrc/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace qrc {

struct Statistics {
    enum class Kind { Boson, Fermion, Qubit };

    Kind kind = Kind::Qubit;
    int cutoff = 1;  // highest retained Fock level; only meaningful for bosons

    static Statistics boson(int cutoff) { return {Kind::Boson, cutoff}; }
    static Statistics fermion() { return {Kind::Fermion, 1}; }
    static Statistics qubit() { return {Kind::Qubit, 1}; }

    int local_dim() const { return kind == Kind::Boson ? cutoff + 1 : 2; }
    bool is_boson() const { return kind == Kind::Boson; }
    bool is_fermion() const { return kind == Kind::Fermion; }
    bool is_qubit() const { return kind == Kind::Qubit; }

    std::string name() const;
    static Statistics parse(const std::string& name, int cutoff = 1);

    friend bool operator==(const Statistics&, const Statistics&) = default;
};

struct OperatorSet {
    Statistics statistics;
    FockBasis basis;
    std::vector<SparseOp> lowering;  // a_i
    std::vector<SparseOp> raising;   // a_i†

    int n_sites() const { return basis.n_sites(); }
    int local_dim() const { return basis.local_dim(); }
    Index total_dim() const { return basis.dim(); }

    SparseOp number(int site) const { return raising[static_cast<std::size_t>(site)] * lowering[static_cast<std::size_t>(site)]; }
    SparseOp total_number() const;
    SparseOp identity() const;

    // Projector onto |level> of one site (diagonal in the occupation basis).
    SparseOp level_projector(int site, int level) const;
};

// Real symmetric coupling matrix J. Entries are uniform in [0, 1].
struct CouplingMatrix {
    RealMatrix entries;
    std::uint64_t seed = 0;

    int n_sites() const { return static_cast<int>(entries.rows()); }
};

OperatorSet build_ladder_ops(const Statistics& stat, int n_sites);

// J_ij = J_ji ~ U[0,1]. With include_diagonal=false the on-site terms are zero.
CouplingMatrix sample_couplings(int n_sites, std::uint64_t seed, bool include_diagonal = true);

// Homogeneous nearest-neighbour chain: J_{i,i+1} = J_{i+1,i} = 1, zero elsewhere.
CouplingMatrix chain_couplings(int n_sites);

// H = sum_ij J_ij a_i† a_j.
SparseOp build_hamiltonian(const CouplingMatrix& couplings, const OperatorSet& ops);

// H = sum_{i<N} (a_i† a_{i+1} + a_{i+1}† a_i).
SparseOp build_chain_hamiltonian(int n_sites, const OperatorSet& ops);

}  // namespace qrc
