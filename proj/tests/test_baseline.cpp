#include <cmath>

#include "doctest.h"
#include "freqtrack/baseline.hpp"
#include "freqtrack/pipeline.hpp"
#include "freqtrack/refine.hpp"
#include "freqtrack/spectral.hpp"
#include "test_support.hpp"

using namespace freqtrack;
using namespace freqtrack::baseline;

namespace {

DataSet noiseless(const FrequencyTrack& track)
{
    SimulationOptions opts;
    opts.fixed_amplitude = Complex(0.3, -1.1);
    return synthesize_dataset(track, Hyperparameters{1.0, 0.0, 1.0}, 4, 1, opts);
}

}  // namespace

TEST_CASE("argmax recovers noiseless frequencies up to aliasing")
{
    const auto ml = ml_periodogram_argmax(noiseless(FrequencyTrack{{0.2, 0.7, -0.5, 0.5, 0.0137}}));
    CHECK(ml.method == Method::aliased_ml);
    CHECK(std::abs(ml.track[0] - 0.2) < 1e-6);
    CHECK(std::abs(ml.track[1] + 0.3) < 1e-6);
    CHECK(std::abs(ml.track[2] - 0.5) < 1e-6);
    CHECK(std::abs(ml.track[3] - 0.5) < 1e-6);
    CHECK(std::abs(ml.track[4] - 0.0137) < 1e-6);
}

TEST_CASE("argmax stays in range on noise")
{
    std::mt19937_64 rng(71);
    const auto data = testing::random_dataset(rng, 200, 4);
    const auto ml = ml_periodogram_argmax(data);
    for (double v : ml.track.values) {
        CHECK(v > -0.5);
        CHECK(v <= 0.5);
    }
}

TEST_CASE("argmax ignores a complex rescaling of each record")
{
    std::mt19937_64 rng(72);
    for (int trial = 0; trial < 100; ++trial) {
        const auto rec = testing::random_record(rng, 4);
        const Complex c = std::polar(testing::uniform(rng, 0.1, 10.0), testing::uniform(rng, -3.0, 3.0));
        std::vector<Complex> y(rec.samples().begin(), rec.samples().end());
        for (auto& v : y)
            v *= c;
        CHECK(ml_frequency(rec) == doctest::Approx(ml_frequency(testing::record_of(y))).epsilon(1e-9));
    }
}

TEST_CASE("argmax is at least as good as the search grid")
{
    std::mt19937_64 rng(73);
    for (int trial = 0; trial < 100; ++trial) {
        const auto rec = testing::random_record(rng, 4);
        const double nu = ml_frequency(rec, 1024);
        double best = 0.0;
        for (int k = 0; k < 1024; ++k)
            best = std::max(best, spectral::periodogram(rec, -0.5 + (k + 1) / 1024.0));
        CHECK(spectral::periodogram(rec, nu) >= best - 1e-12);
    }
}

TEST_CASE("unwrap")
{
    const auto u = unwrap_track(BaselineTrack{FrequencyTrack{{0.4, -0.4}}, Method::aliased_ml});
    CHECK(u.method == Method::unwrapped_ml);
    CHECK(u.track[0] == 0.4);
    CHECK(u.track[1] == doctest::Approx(0.6));
    const FrequencyTrack smooth{{0.1, 0.2, 0.3, 0.2}};
    CHECK(unwrap_track(BaselineTrack{smooth, Method::aliased_ml}).track == smooth);

    std::mt19937_64 rng(74);
    FrequencyTrack noisy;
    for (int i = 0; i < 100; ++i)
        noisy.values.push_back(testing::uniform(rng, -0.5, 0.5));
    CHECK(refine::check_proposition1(unwrap_track(BaselineTrack{noisy, Method::aliased_ml}).track));
}

TEST_CASE("baselines fail on the aliased standard simulation")
{
    const auto data = standard_simulation(3);
    const auto ml = ml_periodogram_argmax(data);
    const auto un = unwrap_track(ml);
    CHECK(rmse(ml.track, *data.true_track) > 0.3);
    CHECK(rmse(un.track, *data.true_track) > 0.3);
}

TEST_CASE("rmse")
{
    CHECK(rmse(FrequencyTrack{{1.0, 2.0}}, FrequencyTrack{{1.0, 0.0}}) == doctest::Approx(std::sqrt(2.0)));
    CHECK_THROWS_AS(rmse(FrequencyTrack{{1.0}}, FrequencyTrack{{1.0, 0.0}}), std::invalid_argument);
}
