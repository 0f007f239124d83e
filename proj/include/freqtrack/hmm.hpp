#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "freqtrack/markov.hpp"
#include "freqtrack/matrix.hpp"
#include "freqtrack/signal.hpp"

namespace freqtrack::hmm {

/// Per-bin observation log-probabilities log f(y_t | nu_t = state p).
///
/// Each row is shifted by its maximum before exponentiation; scaled(t, p) =
/// exp(log_obs(t, p) - row_shift[t]) is what the recursions consume, and the
/// shifts are added back into the likelihood.
struct ObservationTable {
    Matrix log_obs;
    Matrix scaled;
    std::vector<double> row_shift;
    /// P_t(state p). Empty when the table was built from raw log values.
    Matrix periodogram;

    std::size_t bins() const { return log_obs.rows(); }
    std::size_t states() const { return log_obs.cols(); }

    /// Builds the shifted representation from raw log-probabilities.
    static ObservationTable from_log(Matrix log_obs, Matrix periodogram = {});
};

/// P_t(state p) for every bin and grid state.
Matrix periodogram_table(const DataSet& data, const markov::FrequencyGrid& grid);

ObservationTable observation_table(const DataSet& data, const markov::FrequencyGrid& grid,
                                   const Hyperparameters& hyper);

/// Same table from precomputed periodograms and record energies y^H y.
ObservationTable observation_table(const Matrix& periodograms, std::span<const double> energies,
                                   std::size_t samples_per_bin, const Hyperparameters& hyper);

struct ViterbiResult {
    std::vector<std::size_t> path;  ///< zero-based state per bin
    double cost = 0.0;
};

/// Minimizes sum_t cost(t, p_t) + lambda sum_t (nu_{p_{t+1}} - nu_{p_t})^2
/// over state paths whose first state lies in (-K/2, K/2]. Ties go to the
/// lowest state index. Throws std::invalid_argument if lambda <= 0 or no
/// state is admissible.
ViterbiResult viterbi(const Matrix& data_cost, const markov::FrequencyGrid& grid, double lambda,
                      int period_count = 1);

/// Uses -P_t(state p) as the data cost.
ViterbiResult viterbi(const ObservationTable& obs, const markov::FrequencyGrid& grid, double lambda,
                      int period_count = 1);

FrequencyTrack path_to_track(std::span<const std::size_t> path, const markov::FrequencyGrid& grid);

/// Normalized forward-backward quantities.
///
/// normalizers[t] is the per-step normalizer computed from the shifted
/// observations, so log_likelihood = sum log normalizers + sum row shifts.
struct ForwardBackwardResult {
    Matrix forward;
    Matrix backward;
    std::vector<double> normalizers;
    double log_likelihood = 0.0;
};

/// Forward pass; the backward member is left empty. Throws NumericalError
/// if a normalizer underflows to zero or is not finite.
ForwardBackwardResult forward(const ObservationTable& obs, const markov::TransitionMatrix& trans,
                              const markov::InitialDistribution& init);

Matrix backward(const ObservationTable& obs, const markov::TransitionMatrix& trans,
                std::span<const double> normalizers);

ForwardBackwardResult forward_backward(const ObservationTable& obs, const markov::TransitionMatrix& trans,
                                       const markov::InitialDistribution& init);

struct PosteriorMarginals {
    Matrix singles;              ///< T x P, Pr[nu_t = p | Y]
    std::vector<Matrix> pairs;   ///< T-1 matrices, pairs[t-1](q, p) = Pr[nu_{t-1} = q, nu_t = p | Y]
};

PosteriorMarginals posterior_marginals(const ForwardBackwardResult& fb, const ObservationTable& obs,
                                       const markov::TransitionMatrix& trans);

/// Pr[nu_t = p | Y] only.
Matrix posterior_singles(const ForwardBackwardResult& fb);

/// sum over t of the pair marginals, without storing them individually.
Matrix expected_transitions(const ForwardBackwardResult& fb, const ObservationTable& obs,
                            const markov::TransitionMatrix& trans);

}  // namespace freqtrack::hmm
