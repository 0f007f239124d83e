#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "freqtrack/signal.hpp"

namespace freqtrack::refine {

/// D(x) in [-1/2, 1/2), equal to x on that interval and 1-periodic.
double decimal_part(double x);

/// Rewraps a track so that every step lies in [-1/2, 1/2): nu~_1 = nu_1 and
/// nu~_{t+1} = nu~_t + D(nu_{t+1} - nu~_t). Each output value is the input
/// value plus an integer.
FrequencyTrack canonicalize(const FrequencyTrack& track);

/// True iff |nu_{t+1} - nu_t| <= 1/2 for every t.
bool check_proposition1(const FrequencyTrack& track);

/// Gradient of CLPL: -P'_t(nu_t) + 2 lambda (D^T D nu)_t. Throws
/// std::invalid_argument when nu_1 is outside (-K/2, K/2].
std::vector<double> clpl_gradient(const DataSet& data, const FrequencyTrack& track, const Hyperparameters& hyper,
                                  int period_count = 1);
std::vector<double> clpl_gradient(const DataSet& data, const FrequencyTrack& track, double lambda,
                                  int period_count = 1);

struct TridiagonalMatrix {
    std::vector<double> diagonal;
    std::vector<double> off_diagonal;  ///< size T-1, symmetric
};

/// Hessian of CLPL: diag(-P''_t) + 2 lambda D^T D.
TridiagonalMatrix clpl_hessian(const DataSet& data, const FrequencyTrack& track, double lambda);

/// Solves A x = rhs by LDL^T. Returns nullopt when A is not positive definite.
std::optional<std::vector<double>> solve_tridiagonal_spd(const TridiagonalMatrix& matrix,
                                                         std::span<const double> rhs);

enum class Method { gradient, newton };

struct RefineOptions {
    Method method = Method::newton;
    std::size_t max_iterations = 100;
    double gradient_tolerance = 1e-8;  ///< on the infinity norm
    int period_count = 1;
};

struct RefinementResult {
    FrequencyTrack track;
    std::vector<double> clpl_trace;  ///< starting value first
    std::size_t iterations = 0;
    bool converged = false;
};

/// Local descent on CLPL from init. Steps that raise CLPL or move nu_1 out of
/// (-K/2, K/2] are halved; Newton falls back to a gradient step when the
/// Hessian is not positive definite or its step cannot decrease CLPL. The
/// track is canonicalized before and after descent. Throws
/// std::invalid_argument when init is infeasible.
RefinementResult refine_map(const DataSet& data, const FrequencyTrack& init, const Hyperparameters& hyper,
                            const RefineOptions& options = {});
RefinementResult refine_map(const DataSet& data, const FrequencyTrack& init, double lambda,
                            const RefineOptions& options = {});

}  // namespace freqtrack::refine
