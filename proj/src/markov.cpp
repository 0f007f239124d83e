#include "freqtrack/markov.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "freqtrack/likelihood.hpp"

namespace freqtrack::markov {

FrequencyGrid::FrequencyGrid(double nu_min, double nu_max, std::size_t size)
    : nu_min_(nu_min), nu_max_(nu_max), size_(size), spacing_(0.0)
{
    if (size < 2)
        throw std::invalid_argument("FrequencyGrid: at least two states are required");
    if (!std::isfinite(nu_min) || !std::isfinite(nu_max) || !(nu_min < nu_max))
        throw std::invalid_argument("FrequencyGrid: nu_min must be below nu_max");
    spacing_ = (nu_max - nu_min) / static_cast<double>(size - 1);
}

double FrequencyGrid::state(std::size_t p) const
{
    if (p + 1 == size_)
        return nu_max_;
    return nu_min_ + static_cast<double>(p) * spacing_;
}

std::vector<double> FrequencyGrid::states() const
{
    std::vector<double> s(size_);
    for (std::size_t p = 0; p < size_; ++p)
        s[p] = state(p);
    return s;
}

std::size_t FrequencyGrid::nearest(double nu) const
{
    const double pos = std::round((nu - nu_min_) / spacing_);
    if (pos <= 0.0)
        return 0;
    return std::min(static_cast<std::size_t>(pos), size_ - 1);
}

FrequencyGrid make_grid(double nu_min, double nu_max, std::size_t size)
{
    return FrequencyGrid(nu_min, nu_max, size);
}

TransitionMatrix transition_matrix(const FrequencyGrid& grid, double r_nu)
{
    if (!(r_nu > 0.0) || !std::isfinite(r_nu))
        throw std::invalid_argument("transition_matrix: r_nu must be positive");
    const std::size_t n = grid.size();

    // The grid is uniform, so the unnormalized kernel depends on |p - q| only.
    std::vector<double> offset_sq(n), kernel(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double d = static_cast<double>(k) * grid.spacing();
        offset_sq[k] = d * d;
        kernel[k] = std::exp(-offset_sq[k] / (2.0 * r_nu));  // log-domain max is 0 at k = 0
    }

    TransitionMatrix trans;
    trans.r_nu = r_nu;
    trans.probabilities = Matrix(n, n);
    trans.squared_distances = Matrix(n, n);
    for (std::size_t q = 0; q < n; ++q) {
        double z = 0.0;
        for (std::size_t p = 0; p < n; ++p) {
            const std::size_t k = p > q ? p - q : q - p;
            trans.squared_distances(q, p) = offset_sq[k];
            z += kernel[k];
        }
        for (std::size_t p = 0; p < n; ++p) {
            const std::size_t k = p > q ? p - q : q - p;
            trans.probabilities(q, p) = kernel[k] / z;
        }
    }
    return trans;
}

std::vector<std::size_t> admissible_states(const FrequencyGrid& grid, int period_count)
{
    std::vector<std::size_t> idx;
    for (std::size_t p = 0; p < grid.size(); ++p) {
        if (likelihood::in_admissible_set(grid.state(p), period_count))
            idx.push_back(p);
    }
    return idx;
}

InitialDistribution initial_distribution(const FrequencyGrid& grid, int period_count)
{
    const auto idx = admissible_states(grid, period_count);
    if (idx.empty())
        throw std::invalid_argument("initial_distribution: no grid state lies in (-K/2, K/2]");
    InitialDistribution init;
    init.probabilities.assign(grid.size(), 0.0);
    const double w = 1.0 / static_cast<double>(idx.size());
    for (std::size_t p : idx)
        init.probabilities[p] = w;
    return init;
}

}  // namespace freqtrack::markov
