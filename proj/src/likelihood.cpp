#include "freqtrack/likelihood.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "freqtrack/spectral.hpp"

namespace freqtrack::likelihood {

LikelihoodCoefficients LikelihoodCoefficients::from(const Hyperparameters& hyper, std::size_t samples_per_bin)
{
    hyper.validate();
    const double n = static_cast<double>(samples_per_bin);
    const double total = n * hyper.r_a + hyper.r_b;
    LikelihoodCoefficients c;
    c.alpha = n * hyper.r_a / (hyper.r_b * total);
    c.log_beta = -n * std::log(std::numbers::pi) + (1.0 - n) * std::log(hyper.r_b) - std::log(total);
    return c;
}

double LikelihoodCoefficients::gamma(const ComplexRecord& record, const Hyperparameters& hyper)
{
    return record.energy() / hyper.r_b;
}

double regularization(const Hyperparameters& hyper, std::size_t samples_per_bin)
{
    const auto c = LikelihoodCoefficients::from(hyper, samples_per_bin);
    return 1.0 / (2.0 * c.alpha * hyper.r_nu);
}

bool in_admissible_set(double nu, int period_count)
{
    if (period_count < 1)
        throw std::invalid_argument("K must be a positive integer");
    const double half = 0.5 * period_count;
    return nu > -half && nu <= half;
}

double log_marginal_likelihood(const ComplexRecord& record, double nu, const Hyperparameters& hyper)
{
    const auto c = LikelihoodCoefficients::from(hyper, record.size());
    return c.log_beta - LikelihoodCoefficients::gamma(record, hyper) + c.alpha * spectral::periodogram(record, nu);
}

namespace {

void check_lengths(const DataSet& data, const FrequencyTrack& track)
{
    if (track.size() != data.bins())
        throw std::invalid_argument("track length does not match the number of bins");
}

double squared_increments(const FrequencyTrack& track)
{
    double sum = 0.0;
    for (std::size_t t = 0; t + 1 < track.size(); ++t) {
        const double d = track[t + 1] - track[t];
        sum += d * d;
    }
    return sum;
}

}  // namespace

double clml(const DataSet& data, const FrequencyTrack& track)
{
    check_lengths(data, track);
    double sum = 0.0;
    for (std::size_t t = 0; t < data.bins(); ++t)
        sum += spectral::periodogram(data[t], track[t]);
    return -sum;
}

double clp(const FrequencyTrack& track, double r_nu, int period_count)
{
    if (!(r_nu > 0.0) || !std::isfinite(r_nu))
        throw std::invalid_argument("clp: r_nu must be positive");
    if (track.size() == 0)
        throw std::invalid_argument("clp: empty track");
    if (!in_admissible_set(track[0], period_count))
        return std::numeric_limits<double>::infinity();
    const double k_tilde = 2.0 * r_nu * std::log(static_cast<double>(period_count));
    return k_tilde + squared_increments(track);
}

double clpl_value(const DataSet& data, const FrequencyTrack& track, double lambda, int period_count)
{
    check_lengths(data, track);
    if (!in_admissible_set(track[0], period_count))
        return std::numeric_limits<double>::infinity();
    return clml(data, track) + lambda * squared_increments(track);
}

CriterionValue clpl(const DataSet& data, const FrequencyTrack& track, const Hyperparameters& hyper,
                    int period_count)
{
    CriterionValue v;
    v.lambda = regularization(hyper, data.samples_per_bin());
    v.value = clpl_value(data, track, v.lambda, period_count);
    return v;
}

}  // namespace freqtrack::likelihood
