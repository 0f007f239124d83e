#include "freqtrack/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "freqtrack/hmm.hpp"
#include "freqtrack/likelihood.hpp"

namespace freqtrack {

markov::FrequencyGrid default_grid()
{
    return markov::make_grid(-ExperimentDefaults::grid_half_span, ExperimentDefaults::grid_half_span,
                             ExperimentDefaults::grid_size);
}

DataSet standard_simulation(std::uint64_t seed, std::size_t bins, std::size_t samples_per_bin)
{
    const FrequencyTrack truth = make_test_track(TrackProfile::sine, bins, -1.5, 1.5);
    const Hyperparameters hyper{2.0, 0.2, std::max(mean_squared_increment(truth), 1e-8)};
    return synthesize_dataset(truth, hyper, samples_per_bin, seed);
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

TrackingResult track_frequencies(const DataSet& data, const Hyperparameters& hyper, const markov::FrequencyGrid& grid,
                                 int period_count, refine::Method method)
{
    hyper.validate();
    TrackingResult r;
    r.lambda = likelihood::regularization(hyper, data.samples_per_bin());

    auto start = Clock::now();
    const auto ml = baseline::ml_periodogram_argmax(data);
    r.ml = ml.track;
    r.unwrapped_ml = baseline::unwrap_track(ml).track;
    r.times.ml_seconds = seconds_since(start);

    start = Clock::now();
    const Matrix periodograms = hmm::periodogram_table(data, grid);
    Matrix cost(periodograms.rows(), periodograms.cols());
    for (std::size_t t = 0; t < cost.rows(); ++t) {
        for (std::size_t p = 0; p < cost.cols(); ++p)
            cost(t, p) = -periodograms(t, p);
    }
    const auto vit = hmm::viterbi(cost, grid, r.lambda, period_count);
    r.viterbi_map = hmm::path_to_track(vit.path, grid);
    r.times.viterbi_seconds = seconds_since(start);
    r.viterbi_clpl = likelihood::clpl_value(data, r.viterbi_map, r.lambda, period_count);

    start = Clock::now();
    refine::RefineOptions opts;
    opts.method = method;
    opts.period_count = period_count;
    r.refinement = refine::refine_map(data, r.viterbi_map, r.lambda, opts);
    r.refined_map = r.refinement.track;
    r.times.refine_seconds = seconds_since(start);
    r.refined_clpl = likelihood::clpl_value(data, r.refined_map, r.lambda, period_count);
    return r;
}

double rmse(const FrequencyTrack& estimate, const FrequencyTrack& truth)
{
    if (estimate.size() != truth.size() || truth.size() == 0)
        throw std::invalid_argument("rmse: tracks must have the same nonzero length");
    double sum = 0.0;
    for (std::size_t t = 0; t < truth.size(); ++t) {
        const double d = estimate[t] - truth[t];
        sum += d * d;
    }
    return std::sqrt(sum / static_cast<double>(truth.size()));
}

}  // namespace freqtrack
