#pragma once

#include <cstddef>
#include <vector>

#include "freqtrack/matrix.hpp"

namespace freqtrack::markov {

/// P equally spaced states on the closed interval [nu_min, nu_max].
class FrequencyGrid {
public:
    FrequencyGrid(double nu_min, double nu_max, std::size_t size);

    double nu_min() const { return nu_min_; }
    double nu_max() const { return nu_max_; }
    std::size_t size() const { return size_; }
    double spacing() const { return spacing_; }

    /// State p, zero-based. The last state is exactly nu_max.
    double state(std::size_t p) const;
    std::vector<double> states() const;

    /// Index of the state closest to nu (clamped to the grid).
    std::size_t nearest(double nu) const;

private:
    double nu_min_;
    double nu_max_;
    std::size_t size_;
    double spacing_;
};

/// Throws std::invalid_argument if size < 2 or nu_min >= nu_max.
FrequencyGrid make_grid(double nu_min, double nu_max, std::size_t size);

/// Row-stochastic matrix, entry (q, p) = Pr[next = state p | current = state q],
/// proportional to exp(-(nu_p - nu_q)^2 / (2 r_nu)) along each row.
struct TransitionMatrix {
    Matrix probabilities;
    /// (nu_p - nu_q)^2 for the same (q, p) layout.
    Matrix squared_distances;
    double r_nu = 0.0;

    std::size_t size() const { return probabilities.rows(); }
    double operator()(std::size_t q, std::size_t p) const { return probabilities(q, p); }
};

TransitionMatrix transition_matrix(const FrequencyGrid& grid, double r_nu);

/// Uniform over the states inside (-K/2, K/2], zero elsewhere.
struct InitialDistribution {
    std::vector<double> probabilities;
};

/// Throws std::invalid_argument when no grid state is admissible.
InitialDistribution initial_distribution(const FrequencyGrid& grid, int period_count);

/// Indices of the states inside (-K/2, K/2].
std::vector<std::size_t> admissible_states(const FrequencyGrid& grid, int period_count);

}  // namespace freqtrack::markov
