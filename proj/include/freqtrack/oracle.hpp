#pragma once

#include <vector>

#include "freqtrack/hmm.hpp"

// Exhaustive enumeration over all P^T state paths. Only meant for checking the
// recursions on tiny instances.

namespace freqtrack::hmm {

struct BruteForceResult {
    double log_likelihood = 0.0;
    Matrix singles;
    std::vector<Matrix> pairs;
    /// Path maximizing the joint probability init * transitions * observations.
    std::vector<std::size_t> best_path;
};

/// Throws std::invalid_argument when P^T exceeds 10^6.
BruteForceResult brute_force_joint(const ObservationTable& obs, const markov::TransitionMatrix& trans,
                                   const markov::InitialDistribution& init);

/// Exhaustive minimizer of the Viterbi cost. Among equal costs the path with
/// the smallest last state wins, then the smallest second-to-last, and so on,
/// which is what lowest-index backtracking produces.
ViterbiResult brute_force_viterbi(const Matrix& data_cost, const markov::FrequencyGrid& grid, double lambda,
                                  int period_count = 1);

}  // namespace freqtrack::hmm
