// types.hpp: numeric aliases shared across the reservoir library

#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace qrc {

using cplx = std::complex<double>;
using Index = Eigen::Index;

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using SparseOp = Eigen::SparseMatrix<cplx, Eigen::ColMajor>;

inline constexpr cplx kI{0.0, 1.0};

// Raised when a trajectory produces NaN/Inf or leaves the physical state space.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Raised when a configuration would exceed the dense-matrix memory budget.
class BudgetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Upper bound (bytes) for a single dense D×D complex matrix. Defaults to
// 1 GiB; QRC_MEMORY_BUDGET_MB overrides it.
std::uint64_t memory_budget_bytes();

// Throws BudgetError when a dense dim×dim complex matrix would not fit.
void require_dense_budget(Index dim, const std::string& what);

inline double frobenius(const Matrix& m) { return m.norm(); }

}  // namespace qrc
