#pragma once

#include "freqtrack/baseline.hpp"
#include "freqtrack/markov.hpp"
#include "freqtrack/refine.hpp"
#include "freqtrack/signal.hpp"

namespace freqtrack {

/// Standard experiment: T = 128 bins of N = 4 samples, grid of 128 states on
/// [-2.5, 2.5], K = 1.
struct ExperimentDefaults {
    static constexpr std::size_t bins = 128;
    static constexpr std::size_t samples_per_bin = 4;
    static constexpr std::size_t grid_size = 128;
    static constexpr double grid_half_span = 2.5;
};

markov::FrequencyGrid default_grid();

/// Sine profile spanning [-1.5, 1.5] with r_a = 2, r_b = 0.2 and r_nu set to
/// the profile's mean squared increment.
DataSet standard_simulation(std::uint64_t seed, std::size_t bins = ExperimentDefaults::bins,
                            std::size_t samples_per_bin = ExperimentDefaults::samples_per_bin);

struct StageTimes {
    double ml_seconds = 0.0;
    double viterbi_seconds = 0.0;
    double refine_seconds = 0.0;
};

/// The four estimates compared in the tracking experiment.
struct TrackingResult {
    FrequencyTrack ml;
    FrequencyTrack unwrapped_ml;
    FrequencyTrack viterbi_map;
    FrequencyTrack refined_map;
    double lambda = 0.0;
    double viterbi_clpl = 0.0;
    double refined_clpl = 0.0;
    refine::RefinementResult refinement;
    StageTimes times;
};

/// Viterbi on the grid, then continuous refinement seeded by the Viterbi path,
/// plus the periodogram-argmax baselines.
TrackingResult track_frequencies(const DataSet& data, const Hyperparameters& hyper,
                                 const markov::FrequencyGrid& grid, int period_count = 1,
                                 refine::Method method = refine::Method::newton);

/// Root mean squared difference. Throws std::invalid_argument on length mismatch.
double rmse(const FrequencyTrack& estimate, const FrequencyTrack& truth);

}  // namespace freqtrack
