#include "freqtrack/signal.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace freqtrack {

ComplexRecord::ComplexRecord(std::vector<Complex> samples, std::size_t bin_index)
    : samples_(std::move(samples)), bin_index_(bin_index)
{
    if (samples_.size() < 2)
        throw std::invalid_argument("ComplexRecord: at least two samples are required");
    for (const Complex& y : samples_) {
        if (!std::isfinite(y.real()) || !std::isfinite(y.imag()))
            throw std::invalid_argument("ComplexRecord: non-finite sample in bin " + std::to_string(bin_index));
    }
}

double ComplexRecord::energy() const
{
    double sum = 0.0;
    for (const Complex& y : samples_)
        sum += std::norm(y);
    return sum;
}

bool Hyperparameters::valid() const
{
    auto ok = [](double r) { return std::isfinite(r) && r > 0.0; };
    return ok(r_a) && ok(r_b) && ok(r_nu);
}

void Hyperparameters::validate() const
{
    if (!valid())
        throw std::invalid_argument("Hyperparameters: r_a, r_b and r_nu must be positive and finite");
}

DataSet::DataSet(std::vector<ComplexRecord> records) : records_(std::move(records))
{
    if (records_.empty())
        throw std::invalid_argument("DataSet: no records");
    const std::size_t n = records_.front().size();
    for (std::size_t t = 0; t < records_.size(); ++t) {
        if (records_[t].size() != n)
            throw std::invalid_argument("DataSet: records have different lengths");
        if (records_[t].bin_index() != t + 1)
            throw std::invalid_argument("DataSet: bin indices must run 1..T in order");
    }
}

std::vector<Complex> steering_vector(double nu, std::size_t n)
{
    std::vector<Complex> z(n);
    for (std::size_t k = 0; k < n; ++k)
        z[k] = std::polar(1.0, 2.0 * std::numbers::pi * nu * static_cast<double>(k));
    return z;
}

FrequencyTrack make_test_track(TrackProfile profile, std::size_t bins, double lo, double hi)
{
    if (bins == 0)
        throw std::invalid_argument("make_test_track: T must be positive");
    if (!std::isfinite(lo) || !std::isfinite(hi) || lo > hi)
        throw std::invalid_argument("make_test_track: invalid range");

    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    FrequencyTrack track;
    track.values.resize(bins);
    for (std::size_t t = 0; t < bins; ++t) {
        const double u = bins > 1 ? static_cast<double>(t) / static_cast<double>(bins - 1) : 0.0;
        double nu = lo;
        switch (profile) {
        case TrackProfile::linear_ramp:
            nu = lo + (hi - lo) * u;
            break;
        case TrackProfile::sine:
            nu = mid + half * std::sin(2.0 * std::numbers::pi * u);
            break;
        case TrackProfile::piecewise:
            if (u < 0.25)
                nu = mid + (hi - mid) * (u / 0.25);
            else if (u < 0.5)
                nu = hi;
            else if (u < 0.75)
                nu = hi + (lo - hi) * ((u - 0.5) / 0.25);
            else
                nu = lo;
            break;
        }
        track.values[t] = nu;
    }
    if (profile == TrackProfile::linear_ramp)
        track.values.back() = bins > 1 ? hi : lo;
    return track;
}

DataSet synthesize_dataset(const FrequencyTrack& track, const Hyperparameters& hyper, std::size_t samples_per_bin,
                           std::uint64_t seed, const SimulationOptions& options)
{
    if (samples_per_bin < 2)
        throw std::invalid_argument("synthesize_dataset: N must be at least 2");
    if (track.size() == 0)
        throw std::invalid_argument("synthesize_dataset: empty track");
    auto nonneg = [](double r) { return std::isfinite(r) && r >= 0.0; };
    if (!nonneg(hyper.r_a) || !nonneg(hyper.r_b))
        throw std::invalid_argument("synthesize_dataset: variances must be nonnegative and finite");

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double amp_sd = std::sqrt(0.5 * hyper.r_a);
    const double noise_sd = std::sqrt(0.5 * hyper.r_b);

    std::vector<ComplexRecord> records;
    records.reserve(track.size());
    for (std::size_t t = 0; t < track.size(); ++t) {
        Complex a;
        if (options.fixed_amplitude) {
            a = *options.fixed_amplitude;
        } else {
            const double re = gauss(rng);
            const double im = gauss(rng);
            a = Complex(amp_sd * re, amp_sd * im);
        }
        std::vector<Complex> y = steering_vector(track[t], samples_per_bin);
        for (Complex& sample : y) {
            const double re = gauss(rng);
            const double im = gauss(rng);
            sample = a * sample;
            if (hyper.r_b > 0.0)
                sample += Complex(noise_sd * re, noise_sd * im);
        }
        records.emplace_back(std::move(y), t + 1);
    }

    DataSet data(std::move(records));
    data.true_track = track;
    data.true_hyper = hyper;
    return data;
}

double mean_squared_increment(const FrequencyTrack& track)
{
    if (track.size() < 2)
        return 0.0;
    double sum = 0.0;
    for (std::size_t t = 0; t + 1 < track.size(); ++t) {
        const double d = track[t + 1] - track[t];
        sum += d * d;
    }
    return sum / static_cast<double>(track.size() - 1);
}

}  // namespace freqtrack
