#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace freqtrack {

using Complex = std::complex<double>;

/// One range bin: N complex samples of a noisy cisoid.
class ComplexRecord {
public:
    /// bin_index is 1-based. Throws std::invalid_argument if fewer than two
    /// samples are given or any sample is not finite.
    ComplexRecord(std::vector<Complex> samples, std::size_t bin_index);

    std::span<const Complex> samples() const { return samples_; }
    std::size_t size() const { return samples_.size(); }
    std::size_t bin_index() const { return bin_index_; }

    /// y^H y
    double energy() const;

    bool operator==(const ComplexRecord&) const = default;

private:
    std::vector<Complex> samples_;
    std::size_t bin_index_;
};

/// Frequencies in cycles/sample, one per bin. Values are unbounded.
struct FrequencyTrack {
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
    double operator[](std::size_t t) const { return values[t]; }
    double& operator[](std::size_t t) { return values[t]; }

    bool operator==(const FrequencyTrack&) const = default;
};

/// Amplitude variance r_a, noise variance r_b, and frequency-increment
/// variance r_nu.
struct Hyperparameters {
    double r_a = 1.0;
    double r_b = 1.0;
    double r_nu = 1.0;

    /// All three strictly positive and finite.
    bool valid() const;
    /// Throws std::invalid_argument unless valid().
    void validate() const;

    bool operator==(const Hyperparameters&) const = default;
};

/// T records sharing the same length N, plus the generating truth when the
/// data were simulated.
class DataSet {
public:
    /// Throws std::invalid_argument when empty, when record lengths differ, or
    /// when bin indices are not 1..T in order.
    explicit DataSet(std::vector<ComplexRecord> records);

    std::size_t bins() const { return records_.size(); }
    std::size_t samples_per_bin() const { return records_.front().size(); }

    const ComplexRecord& operator[](std::size_t t) const { return records_[t]; }
    const std::vector<ComplexRecord>& records() const { return records_; }

    std::optional<FrequencyTrack> true_track;
    std::optional<Hyperparameters> true_hyper;

private:
    std::vector<ComplexRecord> records_;
};

/// z(nu) = [1, e^{j2 pi nu}, ..., e^{j2 pi nu (N-1)}]
std::vector<Complex> steering_vector(double nu, std::size_t n);

enum class TrackProfile { linear_ramp, sine, piecewise };

/// Smooth deterministic frequency profile over [lo, hi].
///
/// linear_ramp goes from lo to hi. sine starts at the midpoint and runs one
/// full period of amplitude (hi - lo) / 2. piecewise rises from the midpoint
/// to hi, holds, falls to lo and holds, each stage a quarter of the bins.
FrequencyTrack make_test_track(TrackProfile profile, std::size_t bins, double lo, double hi);

struct SimulationOptions {
    /// When set every bin uses this amplitude instead of a draw from N(r_a).
    std::optional<Complex> fixed_amplitude;
};

/// Draws y_t = a_t z(nu_t) + b_t. Circular Gaussian draws of variance r put
/// r/2 on each of the real and imaginary parts. Zero variances are accepted
/// here so that noiseless records can be produced. The dataset keeps the
/// track and hyperparameters as metadata.
DataSet synthesize_dataset(const FrequencyTrack& track, const Hyperparameters& hyper,
                           std::size_t samples_per_bin, std::uint64_t seed,
                           const SimulationOptions& options = {});

/// Mean squared increment of a track, the natural r_nu of a deterministic
/// profile. Zero for a single bin.
double mean_squared_increment(const FrequencyTrack& track);

}  // namespace freqtrack
