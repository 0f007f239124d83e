#pragma once

#include <vector>

#include "freqtrack/signal.hpp"

namespace freqtrack::spectral {

/// Biased empirical correlation lags c(n) = (1/N) sum_m y(m+n) conj(y(m)),
/// n = 0..N-1. Negative lags follow from c(-n) = conj(c(n)).
struct CorrelationLags {
    std::vector<Complex> lags;

    Complex at(long n) const;  ///< any lag in 1-N..N-1
    std::size_t size() const { return lags.size(); }
};

/// P(nu) = (1/N) |sum_n y(n) e^{-j2 pi nu n}|^2, n = 0..N-1.
double periodogram(const ComplexRecord& record, double nu);

CorrelationLags empirical_correlation(const ComplexRecord& record);

/// sum_{n=1-N}^{N-1} c(n) e^{-j2 pi nu n}; equals periodogram() for the
/// lags of the same record.
double periodogram_from_lags(const CorrelationLags& lags, double nu);

struct PeriodogramDerivatives {
    double first = 0.0;
    double second = 0.0;
};

/// First and second derivatives of the periodogram with respect to nu,
/// computed from the correlation lags.
PeriodogramDerivatives periodogram_deriv(const ComplexRecord& record, double nu);
PeriodogramDerivatives periodogram_deriv(const CorrelationLags& lags, double nu);

}  // namespace freqtrack::spectral
