#pragma once

#include <cstddef>

#include "freqtrack/signal.hpp"

namespace freqtrack::baseline {

enum class Method { aliased_ml, unwrapped_ml };

struct BaselineTrack {
    FrequencyTrack track;
    Method method = Method::aliased_ml;
};

/// Periodogram maximizer in (-1/2, 1/2]: search on `resolution` points, then
/// one Newton step.
double ml_frequency(const ComplexRecord& record, std::size_t resolution = 1024);

/// Per-bin ml_frequency.
BaselineTrack ml_periodogram_argmax(const DataSet& data, std::size_t resolution = 1024);

/// Classical unwrap: integer offsets so that each step lands in [-1/2, 1/2).
BaselineTrack unwrap_track(const BaselineTrack& track);

}  // namespace freqtrack::baseline
