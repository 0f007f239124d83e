#include "freqtrack/oracle.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "freqtrack/likelihood.hpp"

namespace freqtrack::hmm {

namespace {

// Calls fn(path) for every path in lexicographic order, first bin most significant.
template <typename Fn>
void enumerate_paths(std::size_t bins, std::size_t states, Fn&& fn)
{
    double count = std::pow(static_cast<double>(states), static_cast<double>(bins));
    if (count > 1e6)
        throw std::invalid_argument("brute force: P^T exceeds 10^6");
    std::vector<std::size_t> path(bins, 0);
    while (true) {
        fn(path);
        std::size_t t = bins;
        while (t > 0) {
            --t;
            if (++path[t] < states)
                break;
            path[t] = 0;
            if (t == 0)
                return;
        }
    }
}

}  // namespace

BruteForceResult brute_force_joint(const ObservationTable& obs, const markov::TransitionMatrix& trans,
                                   const markov::InitialDistribution& init)
{
    const std::size_t bins = obs.bins();
    const std::size_t states = obs.states();
    if (bins == 0 || trans.size() != states || init.probabilities.size() != states)
        throw std::invalid_argument("brute_force_joint: dimension mismatch");

    std::vector<std::vector<std::size_t>> paths;
    std::vector<double> log_joint;
    enumerate_paths(bins, states, [&](const std::vector<std::size_t>& path) {
        double lj = std::log(init.probabilities[path[0]]) + obs.log_obs(0, path[0]);
        for (std::size_t t = 1; t < bins; ++t)
            lj += std::log(trans(path[t - 1], path[t])) + obs.log_obs(t, path[t]);
        paths.push_back(path);
        log_joint.push_back(lj);
    });

    double peak = -std::numeric_limits<double>::infinity();
    std::size_t best = 0;
    for (std::size_t i = 0; i < log_joint.size(); ++i) {
        if (log_joint[i] > peak) {
            peak = log_joint[i];
            best = i;
        }
    }
    double total = 0.0;
    for (double lj : log_joint)
        total += std::exp(lj - peak);

    BruteForceResult r;
    r.log_likelihood = peak + std::log(total);
    r.best_path = paths[best];
    r.singles = Matrix(bins, states);
    r.pairs.assign(bins - 1, Matrix(states, states));
    for (std::size_t i = 0; i < paths.size(); ++i) {
        const double w = std::exp(log_joint[i] - peak) / total;
        const auto& path = paths[i];
        for (std::size_t t = 0; t < bins; ++t) {
            r.singles(t, path[t]) += w;
            if (t > 0)
                r.pairs[t - 1](path[t - 1], path[t]) += w;
        }
    }
    return r;
}

ViterbiResult brute_force_viterbi(const Matrix& data_cost, const markov::FrequencyGrid& grid, double lambda,
                                  int period_count)
{
    const std::size_t bins = data_cost.rows();
    const std::size_t states = grid.size();
    if (bins == 0 || data_cost.cols() != states)
        throw std::invalid_argument("brute_force_viterbi: cost table does not match the grid");

    auto reverse_less = [](const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
        for (std::size_t t = a.size(); t > 0; --t) {
            if (a[t - 1] != b[t - 1])
                return a[t - 1] < b[t - 1];
        }
        return false;
    };

    ViterbiResult best;
    best.cost = std::numeric_limits<double>::infinity();
    enumerate_paths(bins, states, [&](const std::vector<std::size_t>& path) {
        if (!likelihood::in_admissible_set(grid.state(path[0]), period_count))
            return;
        // Same summation order as the recursion so that ties compare exactly.
        double c = data_cost(0, path[0]);
        for (std::size_t t = 1; t < bins; ++t) {
            const std::size_t k = path[t] > path[t - 1] ? path[t] - path[t - 1] : path[t - 1] - path[t];
            const double d = static_cast<double>(k) * grid.spacing();
            c = (c + lambda * d * d) + data_cost(t, path[t]);
        }
        if (c < best.cost || (c == best.cost && reverse_less(path, best.path))) {
            best.cost = c;
            best.path = path;
        }
    });
    if (best.path.empty())
        throw std::invalid_argument("brute_force_viterbi: no admissible initial state");
    return best;
}

}  // namespace freqtrack::hmm
