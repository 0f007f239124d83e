#include "freqtrack/baseline.hpp"

#include <cmath>
#include <stdexcept>

#include "freqtrack/refine.hpp"
#include "freqtrack/spectral.hpp"

namespace freqtrack::baseline {

namespace {

// Maps nu into (-1/2, 1/2].
double alias(double nu)
{
    return -refine::decimal_part(-nu);
}

}  // namespace

double ml_frequency(const ComplexRecord& record, std::size_t resolution)
{
    if (resolution < 2)
        throw std::invalid_argument("ml_frequency: resolution must be at least 2");
    const double step = 1.0 / static_cast<double>(resolution);
    double best_nu = 0.5;
    double best = -1.0;
    for (std::size_t k = 1; k <= resolution; ++k) {
        const double nu = -0.5 + static_cast<double>(k) * step;
        const double v = spectral::periodogram(record, nu);
        if (v > best) {
            best = v;
            best_nu = nu;
        }
    }

    const auto d = spectral::periodogram_deriv(record, best_nu);
    if (d.second < 0.0) {
        const double polished = best_nu - d.first / d.second;
        if (std::abs(polished - best_nu) <= step && spectral::periodogram(record, polished) >= best)
            best_nu = polished;
    }
    return alias(best_nu);
}

BaselineTrack ml_periodogram_argmax(const DataSet& data, std::size_t resolution)
{
    BaselineTrack out;
    out.method = Method::aliased_ml;
    out.track.values.reserve(data.bins());
    for (const ComplexRecord& rec : data.records())
        out.track.values.push_back(ml_frequency(rec, resolution));
    return out;
}

BaselineTrack unwrap_track(const BaselineTrack& track)
{
    return BaselineTrack{refine::canonicalize(track.track), Method::unwrapped_ml};
}

}  // namespace freqtrack::baseline
