#include "freqtrack/hmm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "freqtrack/errors.hpp"
#include "freqtrack/likelihood.hpp"
#include "freqtrack/spectral.hpp"

namespace freqtrack::hmm {

ObservationTable ObservationTable::from_log(Matrix log_obs, Matrix periodogram)
{
    ObservationTable obs;
    const std::size_t bins = log_obs.rows();
    const std::size_t states = log_obs.cols();
    obs.scaled = Matrix(bins, states);
    obs.row_shift.assign(bins, 0.0);
    for (std::size_t t = 0; t < bins; ++t) {
        const auto row = log_obs.row(t);
        const double shift = *std::max_element(row.begin(), row.end());
        if (!std::isfinite(shift))
            throw NumericalError("observation table: non-finite row maximum at bin " + std::to_string(t + 1));
        obs.row_shift[t] = shift;
        for (std::size_t p = 0; p < states; ++p)
            obs.scaled(t, p) = std::exp(row[p] - shift);
    }
    obs.log_obs = std::move(log_obs);
    obs.periodogram = std::move(periodogram);
    return obs;
}

Matrix periodogram_table(const DataSet& data, const markov::FrequencyGrid& grid)
{
    Matrix table(data.bins(), grid.size());
    for (std::size_t t = 0; t < data.bins(); ++t) {
        for (std::size_t p = 0; p < grid.size(); ++p)
            table(t, p) = spectral::periodogram(data[t], grid.state(p));
    }
    return table;
}

ObservationTable observation_table(const Matrix& periodograms, std::span<const double> energies,
                                   std::size_t samples_per_bin, const Hyperparameters& hyper)
{
    if (energies.size() != periodograms.rows())
        throw std::invalid_argument("observation_table: one energy per bin is required");
    const auto c = likelihood::LikelihoodCoefficients::from(hyper, samples_per_bin);
    Matrix log_obs(periodograms.rows(), periodograms.cols());
    for (std::size_t t = 0; t < periodograms.rows(); ++t) {
        const double base = c.log_beta - energies[t] / hyper.r_b;
        for (std::size_t p = 0; p < periodograms.cols(); ++p)
            log_obs(t, p) = base + c.alpha * periodograms(t, p);
    }
    return ObservationTable::from_log(std::move(log_obs), periodograms);
}

ObservationTable observation_table(const DataSet& data, const markov::FrequencyGrid& grid,
                                   const Hyperparameters& hyper)
{
    std::vector<double> energies(data.bins());
    for (std::size_t t = 0; t < data.bins(); ++t)
        energies[t] = data[t].energy();
    return observation_table(periodogram_table(data, grid), energies, data.samples_per_bin(), hyper);
}

ViterbiResult viterbi(const Matrix& data_cost, const markov::FrequencyGrid& grid, double lambda, int period_count)
{
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw std::invalid_argument("viterbi: lambda must be positive");
    const std::size_t bins = data_cost.rows();
    const std::size_t states = grid.size();
    if (bins == 0 || data_cost.cols() != states)
        throw std::invalid_argument("viterbi: cost table does not match the grid");
    const auto admissible = markov::admissible_states(grid, period_count);
    if (admissible.empty())
        throw std::invalid_argument("viterbi: no admissible initial state");

    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> jump(states);
    for (std::size_t k = 0; k < states; ++k) {
        const double d = static_cast<double>(k) * grid.spacing();
        jump[k] = lambda * d * d;
    }

    std::vector<double> cost(states, inf), next(states);
    for (std::size_t p : admissible)
        cost[p] = data_cost(0, p);
    std::vector<std::vector<std::size_t>> back(bins, std::vector<std::size_t>(states, 0));

    for (std::size_t t = 1; t < bins; ++t) {
        for (std::size_t p = 0; p < states; ++p) {
            double best = inf;
            std::size_t arg = 0;
            for (std::size_t q = 0; q < states; ++q) {
                const double c = cost[q] + jump[p > q ? p - q : q - p];
                if (c < best) {
                    best = c;
                    arg = q;
                }
            }
            next[p] = best + data_cost(t, p);
            back[t][p] = arg;
        }
        cost.swap(next);
    }

    ViterbiResult result;
    result.path.assign(bins, 0);
    std::size_t last = 0;
    for (std::size_t p = 1; p < states; ++p) {
        if (cost[p] < cost[last])
            last = p;
    }
    if (!std::isfinite(cost[last]))
        throw NumericalError("viterbi: no finite-cost path");
    result.cost = cost[last];
    result.path[bins - 1] = last;
    for (std::size_t t = bins - 1; t > 0; --t)
        result.path[t - 1] = back[t][result.path[t]];
    return result;
}

ViterbiResult viterbi(const ObservationTable& obs, const markov::FrequencyGrid& grid, double lambda, int period_count)
{
    if (obs.periodogram.rows() != obs.bins())
        throw std::invalid_argument("viterbi: observation table carries no periodogram values");
    Matrix cost(obs.bins(), obs.states());
    for (std::size_t t = 0; t < obs.bins(); ++t) {
        for (std::size_t p = 0; p < obs.states(); ++p)
            cost(t, p) = -obs.periodogram(t, p);
    }
    return viterbi(cost, grid, lambda, period_count);
}

FrequencyTrack path_to_track(std::span<const std::size_t> path, const markov::FrequencyGrid& grid)
{
    FrequencyTrack track;
    track.values.reserve(path.size());
    for (std::size_t p : path)
        track.values.push_back(grid.state(p));
    return track;
}

namespace {

void check_dimensions(const ObservationTable& obs, const markov::TransitionMatrix& trans)
{
    if (obs.bins() == 0 || obs.states() != trans.size())
        throw std::invalid_argument("forward-backward: observation table and transition matrix disagree");
}

double normalize_row(std::span<double> row, std::size_t t)
{
    double sum = 0.0;
    for (double v : row)
        sum += v;
    if (!(sum > 0.0) || !std::isfinite(sum))
        throw NumericalError("forward: total probability underflowed at bin " + std::to_string(t + 1));
    for (double& v : row)
        v /= sum;
    return sum;
}

}  // namespace

ForwardBackwardResult forward(const ObservationTable& obs, const markov::TransitionMatrix& trans,
                              const markov::InitialDistribution& init)
{
    check_dimensions(obs, trans);
    const std::size_t bins = obs.bins();
    const std::size_t states = obs.states();
    if (init.probabilities.size() != states)
        throw std::invalid_argument("forward: initial distribution has the wrong size");

    ForwardBackwardResult fb;
    fb.forward = Matrix(bins, states);
    fb.normalizers.assign(bins, 0.0);

    auto first = fb.forward.row(0);
    for (std::size_t p = 0; p < states; ++p)
        first[p] = obs.scaled(0, p) * init.probabilities[p];
    fb.normalizers[0] = normalize_row(first, 0);

    std::vector<double> predicted(states);
    for (std::size_t t = 1; t < bins; ++t) {
        std::fill(predicted.begin(), predicted.end(), 0.0);
        const auto prev = fb.forward.row(t - 1);
        for (std::size_t q = 0; q < states; ++q) {
            const double w = prev[q];
            if (w == 0.0)
                continue;
            const auto trans_row = trans.probabilities.row(q);
            for (std::size_t p = 0; p < states; ++p)
                predicted[p] += w * trans_row[p];
        }
        auto row = fb.forward.row(t);
        for (std::size_t p = 0; p < states; ++p)
            row[p] = obs.scaled(t, p) * predicted[p];
        fb.normalizers[t] = normalize_row(row, t);
    }

    double log_lik = 0.0;
    for (std::size_t t = 0; t < bins; ++t)
        log_lik += std::log(fb.normalizers[t]) + obs.row_shift[t];
    fb.log_likelihood = log_lik;
    return fb;
}

Matrix backward(const ObservationTable& obs, const markov::TransitionMatrix& trans,
                std::span<const double> normalizers)
{
    check_dimensions(obs, trans);
    const std::size_t bins = obs.bins();
    const std::size_t states = obs.states();
    if (normalizers.size() != bins)
        throw std::invalid_argument("backward: one normalizer per bin is required");

    Matrix b(bins, states, 0.0);
    auto last = b.row(bins - 1);
    std::fill(last.begin(), last.end(), 1.0);

    std::vector<double> weighted(states);
    for (std::size_t t = bins - 1; t > 0; --t) {
        const auto next = b.row(t);
        for (std::size_t q = 0; q < states; ++q)
            weighted[q] = obs.scaled(t, q) * next[q];
        auto row = b.row(t - 1);
        for (std::size_t p = 0; p < states; ++p) {
            const auto trans_row = trans.probabilities.row(p);
            double sum = 0.0;
            for (std::size_t q = 0; q < states; ++q)
                sum += trans_row[q] * weighted[q];
            row[p] = sum / normalizers[t];
        }
    }
    return b;
}

ForwardBackwardResult forward_backward(const ObservationTable& obs, const markov::TransitionMatrix& trans,
                                       const markov::InitialDistribution& init)
{
    ForwardBackwardResult fb = forward(obs, trans, init);
    fb.backward = backward(obs, trans, fb.normalizers);
    return fb;
}

Matrix posterior_singles(const ForwardBackwardResult& fb)
{
    if (fb.backward.rows() != fb.forward.rows())
        throw std::invalid_argument("posterior_singles: backward pass missing");
    Matrix singles(fb.forward.rows(), fb.forward.cols());
    for (std::size_t t = 0; t < singles.rows(); ++t) {
        for (std::size_t p = 0; p < singles.cols(); ++p)
            singles(t, p) = fb.forward(t, p) * fb.backward(t, p);
    }
    return singles;
}

namespace {

// pair(q, p) = F_{t-1}(q) P(q, p) O_t(p) B_t(p) / N_t
template <typename Sink>
void for_each_pair(const ForwardBackwardResult& fb, const ObservationTable& obs,
                   const markov::TransitionMatrix& trans, Sink&& sink)
{
    check_dimensions(obs, trans);
    if (fb.backward.rows() != fb.forward.rows())
        throw std::invalid_argument("posterior_marginals: backward pass missing");
    const std::size_t states = obs.states();
    std::vector<double> emit(states);
    for (std::size_t t = 1; t < obs.bins(); ++t) {
        for (std::size_t p = 0; p < states; ++p)
            emit[p] = obs.scaled(t, p) * fb.backward(t, p) / fb.normalizers[t];
        for (std::size_t q = 0; q < states; ++q) {
            const double f = fb.forward(t - 1, q);
            const auto trans_row = trans.probabilities.row(q);
            for (std::size_t p = 0; p < states; ++p)
                sink(t, q, p, f * trans_row[p] * emit[p]);
        }
    }
}

}  // namespace

PosteriorMarginals posterior_marginals(const ForwardBackwardResult& fb, const ObservationTable& obs,
                                       const markov::TransitionMatrix& trans)
{
    PosteriorMarginals pm;
    pm.singles = posterior_singles(fb);
    const std::size_t states = obs.states();
    pm.pairs.assign(obs.bins() > 0 ? obs.bins() - 1 : 0, Matrix(states, states));
    for_each_pair(fb, obs, trans,
                  [&](std::size_t t, std::size_t q, std::size_t p, double v) { pm.pairs[t - 1](q, p) = v; });
    return pm;
}

Matrix expected_transitions(const ForwardBackwardResult& fb, const ObservationTable& obs,
                            const markov::TransitionMatrix& trans)
{
    Matrix counts(obs.states(), obs.states());
    for_each_pair(fb, obs, trans, [&](std::size_t, std::size_t q, std::size_t p, double v) { counts(q, p) += v; });
    return counts;
}

}  // namespace freqtrack::hmm
