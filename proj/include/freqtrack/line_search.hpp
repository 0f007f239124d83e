#pragma once

#include <cstddef>
#include <functional>

#include "freqtrack/hyperopt.hpp"

namespace freqtrack::hyperopt {

struct LineSearchResult {
    double step = 0.0;
    double value = 0.0;
    std::size_t evaluations = 0;
};

/// Approximately minimizes phi(s) starting from s = 0 where phi(0) = phi0.
///
/// A bracket is grown from initial_step (and from -initial_step as well when
/// two_sided), then narrowed with the chosen method until it is narrower than
/// tolerance. Non-finite values count as +inf. The returned value never
/// exceeds phi0; step is 0 when no decrease was found.
LineSearchResult line_minimize(const std::function<double(double)>& phi, double phi0, double initial_step,
                               LineSearch method, bool two_sided, double tolerance);

}  // namespace freqtrack::hyperopt
