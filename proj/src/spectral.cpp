#include "freqtrack/spectral.hpp"

#include <cmath>
#include <numbers>

namespace freqtrack::spectral {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

Complex CorrelationLags::at(long n) const
{
    return n >= 0 ? lags[static_cast<std::size_t>(n)] : std::conj(lags[static_cast<std::size_t>(-n)]);
}

double periodogram(const ComplexRecord& record, double nu)
{
    const auto y = record.samples();
    Complex sum(0.0, 0.0);
    for (std::size_t n = 0; n < y.size(); ++n)
        sum += y[n] * std::polar(1.0, -kTwoPi * nu * static_cast<double>(n));
    return std::norm(sum) / static_cast<double>(y.size());
}

CorrelationLags empirical_correlation(const ComplexRecord& record)
{
    const auto y = record.samples();
    const std::size_t n_samples = y.size();
    CorrelationLags c;
    c.lags.assign(n_samples, Complex(0.0, 0.0));
    for (std::size_t lag = 0; lag < n_samples; ++lag) {
        Complex sum(0.0, 0.0);
        for (std::size_t m = 0; m + lag < n_samples; ++m)
            sum += y[m + lag] * std::conj(y[m]);
        c.lags[lag] = sum / static_cast<double>(n_samples);
    }
    c.lags[0] = Complex(c.lags[0].real(), 0.0);
    return c;
}

// With c(-n) = conj(c(n)) the lag sum folds to
// c(0) + 2 sum_{n>0} Re(c(n) e^{-j2 pi nu n}), and the derivatives follow term by term.

double periodogram_from_lags(const CorrelationLags& lags, double nu)
{
    double value = lags.lags[0].real();
    for (std::size_t n = 1; n < lags.size(); ++n)
        value += 2.0 * std::real(lags.lags[n] * std::polar(1.0, -kTwoPi * nu * static_cast<double>(n)));
    return value;
}

PeriodogramDerivatives periodogram_deriv(const CorrelationLags& lags, double nu)
{
    PeriodogramDerivatives d;
    for (std::size_t n = 1; n < lags.size(); ++n) {
        const double dn = static_cast<double>(n);
        const Complex term = lags.lags[n] * std::polar(1.0, -kTwoPi * nu * dn);
        // d/dnu of 2 Re(c e^{-j2 pi nu n}) = 2 Re(-j2 pi n c e^{...}) = 4 pi n Im(c e^{...})
        d.first += 2.0 * kTwoPi * dn * term.imag();
        d.second -= 2.0 * kTwoPi * kTwoPi * dn * dn * term.real();
    }
    return d;
}

PeriodogramDerivatives periodogram_deriv(const ComplexRecord& record, double nu)
{
    return periodogram_deriv(empirical_correlation(record), nu);
}

}  // namespace freqtrack::spectral
