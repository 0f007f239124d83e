#include <cmath>
#include <sstream>

#include "doctest.h"
#include "freqtrack/csv_io.hpp"
#include "freqtrack/errors.hpp"
#include "freqtrack/signal.hpp"
#include "test_support.hpp"

using namespace freqtrack;

TEST_CASE("make_test_track linear ramp")
{
    const auto a = make_test_track(TrackProfile::linear_ramp, 3, 0.0, 1.0);
    CHECK(a.values == std::vector<double>{0.0, 0.5, 1.0});

    const auto b = make_test_track(TrackProfile::linear_ramp, 2, 0.2, 0.2);
    CHECK(b.values == std::vector<double>{0.2, 0.2});
}

TEST_CASE("make_test_track sine spans the range with small steps")
{
    const auto track = make_test_track(TrackProfile::sine, 128, -1.5, 1.5);
    REQUIRE(track.size() == 128);
    double lo = 1e9, hi = -1e9, max_step = 0.0;
    for (std::size_t t = 0; t < track.size(); ++t) {
        lo = std::min(lo, track[t]);
        hi = std::max(hi, track[t]);
        if (t > 0)
            max_step = std::max(max_step, std::abs(track[t] - track[t - 1]));
    }
    CHECK(max_step < 0.5);
    CHECK(hi > 1.49);
    CHECK(lo < -1.49);
    CHECK(track[0] == doctest::Approx(0.0));
}

TEST_CASE("make_test_track piecewise stays in range")
{
    const auto track = make_test_track(TrackProfile::piecewise, 64, -1.0, 2.0);
    for (double v : track.values) {
        CHECK(v >= -1.0);
        CHECK(v <= 2.0);
    }
    CHECK(track.values.back() == doctest::Approx(-1.0));
}

TEST_CASE("make_test_track rejects bad arguments")
{
    CHECK_THROWS_AS(make_test_track(TrackProfile::sine, 0, 0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(make_test_track(TrackProfile::sine, 4, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("steering vector is unit modulus and 1-periodic")
{
    const auto z = steering_vector(0.37, 5);
    const auto z1 = steering_vector(1.37, 5);
    for (std::size_t n = 0; n < 5; ++n) {
        CHECK(std::abs(z[n]) == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(std::abs(z[n] - z1[n]) < 1e-12);
    }
}

TEST_CASE("noiseless cisoid equals the steering vector")
{
    SimulationOptions opts;
    opts.fixed_amplitude = Complex(1.0, 0.0);
    const auto data = synthesize_dataset(FrequencyTrack{{0.25}}, Hyperparameters{1.0, 0.0, 1.0}, 4, 7, opts);
    const auto y = data[0].samples();
    const Complex expected[] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    for (std::size_t n = 0; n < 4; ++n)
        CHECK(std::abs(y[n] - expected[n]) < 1e-15);
}

TEST_CASE("synthesize_dataset is deterministic in the seed")
{
    const auto track = make_test_track(TrackProfile::sine, 32, -1.0, 1.0);
    const Hyperparameters h{1.0, 0.5, 0.01};
    const auto a = synthesize_dataset(track, h, 4, 99);
    const auto b = synthesize_dataset(track, h, 4, 99);
    const auto c = synthesize_dataset(track, h, 4, 100);
    CHECK(a.records() == b.records());
    CHECK_FALSE(a.records() == c.records());
    REQUIRE(a.true_track.has_value());
    CHECK(*a.true_track == track);
    CHECK(*a.true_hyper == h);
}

TEST_CASE("second moment converges to r_a + r_b")
{
    const std::size_t bins = 4096;
    const auto track = make_test_track(TrackProfile::linear_ramp, bins, -2.0, 2.0);
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const auto data = synthesize_dataset(track, Hyperparameters{1.0, 1.0, 1.0}, 4, seed);
        double sum = 0.0;
        for (const auto& rec : data.records())
            sum += rec.energy();
        const double moment = sum / (4.0 * bins);
        CHECK(std::abs(moment - 2.0) < 0.05 * 2.0);
    }
}

TEST_CASE("noise real and imaginary parts each carry half the variance")
{
    const auto track = make_test_track(TrackProfile::linear_ramp, 4096, 0.0, 0.0);
    const auto data = synthesize_dataset(track, Hyperparameters{0.0, 2.0, 1.0}, 4, 5);
    double re2 = 0.0, im2 = 0.0;
    for (const auto& rec : data.records()) {
        for (const auto& y : rec.samples()) {
            re2 += y.real() * y.real();
            im2 += y.imag() * y.imag();
        }
    }
    CHECK(re2 / 16384.0 == doctest::Approx(1.0).epsilon(0.05));
    CHECK(im2 / 16384.0 == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("domain type invariants")
{
    CHECK_THROWS_AS(ComplexRecord({Complex(1, 0)}, 1), std::invalid_argument);
    CHECK_THROWS_AS(ComplexRecord({Complex(1, 0), Complex(NAN, 0)}, 1), std::invalid_argument);
    CHECK_THROWS_AS(DataSet(std::vector<ComplexRecord>{}), std::invalid_argument);
    CHECK_THROWS_AS(DataSet({ComplexRecord({1.0, 1.0}, 1), ComplexRecord({1.0, 1.0, 1.0}, 2)}),
                    std::invalid_argument);
    CHECK_THROWS_AS(DataSet({ComplexRecord({1.0, 1.0}, 2)}), std::invalid_argument);
    CHECK_FALSE(Hyperparameters{1.0, 0.0, 1.0}.valid());
    CHECK_FALSE(Hyperparameters{1.0, 1.0, INFINITY}.valid());
    CHECK(Hyperparameters{1.0, 1.0, 1.0}.valid());
}

TEST_CASE("dataset and track CSV round trip bit-exactly")
{
    std::mt19937_64 rng(3);
    const auto data = testing::random_dataset(rng, 5, 4);
    std::stringstream buf;
    io::write_dataset(buf, data);
    CHECK(buf.str().rfind("t,n,re,im\n", 0) == 0);
    const auto back = io::read_dataset(buf);
    CHECK(back.records() == data.records());

    FrequencyTrack track{{0.1, -1.0 / 3.0, 2.5e-17}};
    std::stringstream tb;
    io::write_track(tb, track);
    CHECK(io::read_track(tb) == track);

    Hyperparameters h{2.0, 0.2, 1.0 / 300.0};
    std::stringstream hb;
    io::write_hyperparameters(hb, h);
    hb << "log10_r_a=0.3\n";
    CHECK(io::read_hyperparameters(hb) == h);
}

TEST_CASE("malformed CSV is a data error")
{
    std::stringstream bad_header("t,n,x,y\n1,1,0,0\n");
    CHECK_THROWS_AS(io::read_dataset(bad_header), DataError);
    std::stringstream missing("t,n,re,im\n1,1,0,0\n1,2,0,0\n2,1,0,0\n");
    CHECK_THROWS_AS(io::read_dataset(missing), DataError);
    std::stringstream junk("t,n,re,im\n1,1,abc,0\n1,2,0,0\n");
    CHECK_THROWS_AS(io::read_dataset(junk), DataError);
    std::stringstream hyper("r_a=1\nr_b=2\n");
    CHECK_THROWS_AS(io::read_hyperparameters(hyper), DataError);
    CHECK_THROWS_AS(io::read_dataset(std::filesystem::path("/nonexistent/data.csv")), IoError);
}
