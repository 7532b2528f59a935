// tasks.hpp: benchmark targets, linear readout and capacity measures.

#pragma once

#include "qrc/dynamics.hpp"
#include "qrc/types.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace qrc {

// ------------------------------- inputs --------------------------------------

// i.i.d. uniform on [0,1] (unit interval) or [-1,1] (symmetric), drawn from
// the Inputs stream of `seed`.
std::vector<double> generate_inputs(std::size_t length, Encoding encoding, std::uint64_t seed);

// ------------------------------- targets -------------------------------------

// sqrt(2q+1) P_q(s): orthonormal under the uniform measure on [-1,1].
double legendre_normalized(int degree, double s);

struct TaskSpec {
    enum class Kind { LinearDelay, PowerDelay, LegendreProduct };

    Kind kind = Kind::LinearDelay;
    int delay = 0;
    int degree = 1;
    // (delay, degree) factors of a Legendre product, delays distinct.
    std::vector<std::pair<int, int>> profile;

    static TaskSpec linear(int delay);
    static TaskSpec power(int delay, int degree);
    static TaskSpec legendre(std::vector<std::pair<int, int>> profile);

    int max_delay() const;
    int total_degree() const;
    std::string kind_name() const;
    // "3:1;0:2" style rendering of a Legendre profile.
    std::string profile_string() const;
};

// y_k for input indices k = first .. first+count-1. Requires first >= max_delay.
RealVector make_target(const TaskSpec& task, std::span<const double> inputs, Index first, Index count);

// ------------------------------- readout -------------------------------------

struct ReadoutModel {
    RealVector weights;
    double bias = 0.0;
    bool degenerate = false;  // constant target: only the bias was fitted

    RealVector predict(const RealMatrix& features) const;
};

// Least-squares readout y ≈ X w + b. With ridge = 0 the augmented design
// [X 1] is pseudo-inverted through an SVD (singular values below
// sigma_max·1e-12 dropped), giving the minimum-norm solution. With ridge > 0
// the penalty lambda·|w|^2 applies to the weights only. The factorization is
// reused across targets.
class ReadoutSolver {
public:
    explicit ReadoutSolver(const RealMatrix& features, double ridge = 0.0);

    ReadoutModel fit(const RealVector& target) const;
    Index rank() const { return rank_; }

private:
    Index rows_;
    Index cols_;
    double ridge_;
    RealMatrix u_;
    RealVector inv_s_;
    RealMatrix v_;
    RealVector column_mean_;
    Index rank_ = 0;
};

ReadoutModel train_readout(const RealMatrix& features, const RealVector& target, double ridge = 0.0);

// ------------------------------- capacity ------------------------------------

struct Capacity {
    double value = 0.0;
    bool degenerate = false;  // zero variance in predictions or targets
};

// Squared Pearson correlation, clamped to [0,1].
Capacity capacity(std::span<const double> predictions, std::span<const double> targets);
Capacity capacity(const RealVector& predictions, const RealVector& targets);

struct TaskScore {
    Capacity test;
    Capacity train;
};

// `features` row r belongs to input index first + r. The first n_train rows
// train the readout and the next n_test rows score it, for every task.
std::vector<TaskScore> score_tasks(const RealMatrix& features, std::span<const double> inputs, Index first,
                                   Index n_train, Index n_test, const std::vector<TaskSpec>& tasks,
                                   double ridge = 0.0);

// ------------------------------- statistics ----------------------------------

// Linear interpolation between order statistics (p in [0,1]).
double quantile(std::vector<double> values, double p);

struct Quartiles {
    double q25 = 0.0;
    double median = 0.0;
    double q75 = 0.0;
};

Quartiles quartiles(const std::vector<double>& values);

// ------------------------------- IPC -----------------------------------------

struct IpcOptions {
    int max_degree = 6;
    int window = 20;        // delays 0 .. window-1
    int surrogates = 200;
    double percentile = 99.9;
    int stop_after = 3;     // empty delay shells before a degree is abandoned
    std::size_t batch = 256;
};

struct IpcTerm {
    std::vector<std::pair<int, int>> profile;
    int degree = 0;
    double capacity = 0.0;
    double threshold = 0.0;
};

struct IpcResult {
    std::vector<IpcTerm> terms;     // targets that cleared their threshold
    std::vector<double> per_degree; // index q-1
    double total = 0.0;
    std::size_t evaluated = 0;
    Index feature_rank = 0;
};

// C(y) = 1 - min MSE / <y^2> for Legendre-product targets on the symmetric
// inputs, with a bias fitted. Each target is compared with `surrogates`
// row-shuffled copies of itself and zeroed unless it exceeds their
// `percentile`. For each total degree q the delay window is explored shell by
// shell (largest delay T = 0, 1, ...) and abandoned after `stop_after`
// consecutive shells contribute nothing.
IpcResult information_processing_capacity(const RealMatrix& features, std::span<const double> inputs, Index first,
                                          const IpcOptions& options, std::uint64_t seed);

// All (delay, degree) profiles with total degree q whose largest delay is T.
std::vector<std::vector<std::pair<int, int>>> legendre_shell(int degree, int max_delay);

}  // namespace qrc
