#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "freqtrack/matrix.hpp"
#include "freqtrack/signal.hpp"

namespace testing {

using freqtrack::Complex;

inline freqtrack::ComplexRecord random_record(std::mt19937_64& rng, std::size_t n, std::size_t bin = 1)
{
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<Complex> y(n);
    for (auto& v : y)
        v = Complex(g(rng), g(rng));
    return freqtrack::ComplexRecord(std::move(y), bin);
}

inline freqtrack::DataSet random_dataset(std::mt19937_64& rng, std::size_t bins, std::size_t n)
{
    std::vector<freqtrack::ComplexRecord> recs;
    for (std::size_t t = 0; t < bins; ++t)
        recs.push_back(random_record(rng, n, t + 1));
    return freqtrack::DataSet(std::move(recs));
}

inline freqtrack::ComplexRecord record_of(std::vector<Complex> y)
{
    return freqtrack::ComplexRecord(std::move(y), 1);
}

inline double uniform(std::mt19937_64& rng, double lo, double hi)
{
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline double rel_err(double a, double b)
{
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

inline double max_abs_diff(const freqtrack::Matrix& a, const freqtrack::Matrix& b)
{
    double m = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i)
        m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
    return m;
}

template <typename F>
double central_difference(F&& f, double x, double h)
{
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

template <typename F>
double second_difference(F&& f, double x, double h)
{
    return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
}

}  // namespace testing
