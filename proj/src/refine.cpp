#include "freqtrack/refine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "freqtrack/likelihood.hpp"
#include "freqtrack/spectral.hpp"

namespace freqtrack::refine {

double decimal_part(double x)
{
    double d = x - std::floor(x + 0.5);
    // x + 0.5 can round up to the next integer just below a half.
    if (d >= 0.5)
        d -= 1.0;
    else if (d < -0.5)
        d += 1.0;
    return d;
}

FrequencyTrack canonicalize(const FrequencyTrack& track)
{
    FrequencyTrack out = track;
    for (std::size_t t = 1; t < track.size(); ++t) {
        const double step = decimal_part(track[t] - out[t - 1]);
        // Apply the wrap as an integer offset so that the periodogram of
        // every bin is evaluated at nu + k.
        const double k = std::round(out[t - 1] + step - track[t]);
        out[t] = track[t] + k;
    }
    return out;
}

bool check_proposition1(const FrequencyTrack& track)
{
    for (std::size_t t = 0; t + 1 < track.size(); ++t) {
        if (!(std::abs(track[t + 1] - track[t]) <= 0.5))
            return false;
    }
    return true;
}

namespace {

void check_inputs(const DataSet& data, const FrequencyTrack& track, int period_count)
{
    if (track.size() != data.bins())
        throw std::invalid_argument("track length does not match the number of bins");
    if (!likelihood::in_admissible_set(track[0], period_count))
        throw std::invalid_argument("nu_1 lies outside (-K/2, K/2]; the criterion is infinite");
}

// Adds 2 lambda (D^T D nu) to grad.
void add_smoothness_gradient(const FrequencyTrack& track, double lambda, std::vector<double>& grad)
{
    const std::size_t n = track.size();
    for (std::size_t t = 0; t + 1 < n; ++t) {
        const double d = 2.0 * lambda * (track[t + 1] - track[t]);
        grad[t] -= d;
        grad[t + 1] += d;
    }
}

class Criterion {
public:
    Criterion(const DataSet& data, double lambda, int period_count)
        : data_(data), lambda_(lambda), period_count_(period_count)
    {
        lags_.reserve(data.bins());
        for (const ComplexRecord& rec : data.records())
            lags_.push_back(spectral::empirical_correlation(rec));
    }

    double value(const FrequencyTrack& track) const
    {
        return likelihood::clpl_value(data_, track, lambda_, period_count_);
    }

    std::vector<double> gradient(const FrequencyTrack& track) const
    {
        std::vector<double> g(track.size());
        for (std::size_t t = 0; t < track.size(); ++t)
            g[t] = -spectral::periodogram_deriv(lags_[t], track[t]).first;
        add_smoothness_gradient(track, lambda_, g);
        return g;
    }

    TridiagonalMatrix hessian(const FrequencyTrack& track) const
    {
        const std::size_t n = track.size();
        TridiagonalMatrix h;
        h.diagonal.resize(n);
        h.off_diagonal.assign(n > 0 ? n - 1 : 0, -2.0 * lambda_);
        for (std::size_t t = 0; t < n; ++t) {
            const double degree = (n == 1) ? 0.0 : ((t == 0 || t + 1 == n) ? 1.0 : 2.0);
            h.diagonal[t] = -spectral::periodogram_deriv(lags_[t], track[t]).second + 2.0 * lambda_ * degree;
        }
        return h;
    }

private:
    const DataSet& data_;
    double lambda_;
    int period_count_;
    std::vector<spectral::CorrelationLags> lags_;
};

double inf_norm(const std::vector<double>& v)
{
    double m = 0.0;
    for (double x : v)
        m = std::max(m, std::abs(x));
    return m;
}

struct StepOutcome {
    bool accepted = false;
    FrequencyTrack track;
    double value = 0.0;
    double scale = 0.0;
};

// Halves the step until the criterion decreases.
StepOutcome backtrack(const Criterion& crit, const FrequencyTrack& x, double fx, const std::vector<double>& dir,
                      double scale, std::size_t max_halvings)
{
    StepOutcome out;
    FrequencyTrack cand = x;
    for (std::size_t i = 0; i <= max_halvings; ++i, scale *= 0.5) {
        for (std::size_t t = 0; t < x.size(); ++t)
            cand[t] = x[t] + scale * dir[t];
        const double fc = crit.value(cand);
        if (fc < fx) {
            out.accepted = true;
            out.track = cand;
            out.value = fc;
            out.scale = scale;
            return out;
        }
    }
    return out;
}

}  // namespace

std::vector<double> clpl_gradient(const DataSet& data, const FrequencyTrack& track, double lambda, int period_count)
{
    check_inputs(data, track, period_count);
    return Criterion(data, lambda, period_count).gradient(track);
}

std::vector<double> clpl_gradient(const DataSet& data, const FrequencyTrack& track, const Hyperparameters& hyper,
                                  int period_count)
{
    return clpl_gradient(data, track, likelihood::regularization(hyper, data.samples_per_bin()), period_count);
}

TridiagonalMatrix clpl_hessian(const DataSet& data, const FrequencyTrack& track, double lambda)
{
    if (track.size() != data.bins())
        throw std::invalid_argument("track length does not match the number of bins");
    return Criterion(data, lambda, 1).hessian(track);
}

std::optional<std::vector<double>> solve_tridiagonal_spd(const TridiagonalMatrix& matrix, std::span<const double> rhs)
{
    const std::size_t n = matrix.diagonal.size();
    if (rhs.size() != n || (n > 0 && matrix.off_diagonal.size() != n - 1))
        throw std::invalid_argument("solve_tridiagonal_spd: dimension mismatch");
    std::vector<double> d(n), l(n > 0 ? n - 1 : 0), x(rhs.begin(), rhs.end());
    for (std::size_t i = 0; i < n; ++i) {
        d[i] = matrix.diagonal[i];
        if (i > 0)
            d[i] -= l[i - 1] * matrix.off_diagonal[i - 1];
        if (!(d[i] > 0.0) || !std::isfinite(d[i]))
            return std::nullopt;
        if (i + 1 < n)
            l[i] = matrix.off_diagonal[i] / d[i];
    }
    for (std::size_t i = 1; i < n; ++i)
        x[i] -= l[i - 1] * x[i - 1];
    for (std::size_t i = 0; i < n; ++i)
        x[i] /= d[i];
    for (std::size_t i = n; i-- > 1;)
        x[i - 1] -= l[i - 1] * x[i];
    return x;
}

RefinementResult refine_map(const DataSet& data, const FrequencyTrack& init, double lambda,
                            const RefineOptions& options)
{
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw std::invalid_argument("refine_map: lambda must be positive");
    check_inputs(data, init, options.period_count);
    const Criterion crit(data, lambda, options.period_count);

    RefinementResult result;
    result.track = canonicalize(init);
    double fx = crit.value(result.track);
    result.clpl_trace.push_back(fx);

    double gradient_scale = 1e-3;
    while (true) {
        while (result.iterations < options.max_iterations) {
            const std::vector<double> g = crit.gradient(result.track);
            if (inf_norm(g) < options.gradient_tolerance) {
                result.converged = true;
                break;
            }
            const std::vector<double> descent = [&] {
                std::vector<double> v(g.size());
                for (std::size_t t = 0; t < g.size(); ++t)
                    v[t] = -g[t];
                return v;
            }();

            StepOutcome step;
            if (options.method == Method::newton) {
                if (auto s = solve_tridiagonal_spd(crit.hessian(result.track), descent))
                    step = backtrack(crit, result.track, fx, *s, 1.0, 30);
            }
            if (!step.accepted) {
                step = backtrack(crit, result.track, fx, descent, 2.0 * gradient_scale, 60);
                if (step.accepted)
                    gradient_scale = step.scale;
            }
            if (!step.accepted)
                break;  // no representable decrease left
            result.track = std::move(step.track);
            fx = step.value;
            result.clpl_trace.push_back(fx);
            ++result.iterations;
        }

        // A local minimum may still contain steps longer than 1/2; rewrapping
        // keeps every periodogram term and shortens those steps.
        FrequencyTrack wrapped = canonicalize(result.track);
        if (wrapped == result.track)
            break;
        const double fw = crit.value(wrapped);
        result.track = std::move(wrapped);
        if (fw < fx) {
            fx = fw;
            result.clpl_trace.push_back(fx);
        }
        result.converged = false;
        if (result.iterations >= options.max_iterations)
            break;
    }
    return result;
}

RefinementResult refine_map(const DataSet& data, const FrequencyTrack& init, const Hyperparameters& hyper,
                            const RefineOptions& options)
{
    return refine_map(data, init, likelihood::regularization(hyper, data.samples_per_bin()), options);
}

}  // namespace freqtrack::refine
