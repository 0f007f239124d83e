#include "freqtrack/hyperopt.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "freqtrack/errors.hpp"
#include "freqtrack/hmm.hpp"
#include "freqtrack/likelihood.hpp"
#include "freqtrack/line_search.hpp"
#include "freqtrack/spectral.hpp"

namespace freqtrack::hyperopt {

HyperLikelihood::HyperLikelihood(const DataSet& data, markov::FrequencyGrid grid, int period_count)
    : grid_(std::move(grid)),
      period_count_(period_count),
      samples_per_bin_(data.samples_per_bin()),
      periodograms_(hmm::periodogram_table(data, grid_)),
      energies_(data.bins()),
      init_(markov::initial_distribution(grid_, period_count))
{
    for (std::size_t t = 0; t < data.bins(); ++t)
        energies_[t] = data[t].energy();
}

double HyperLikelihood::value(const Hyperparameters& hyper) const
{
    hyper.validate();
    const auto obs = hmm::observation_table(periodograms_, energies_, samples_per_bin_, hyper);
    const auto trans = markov::transition_matrix(grid_, hyper.r_nu);
    return -hmm::forward(obs, trans, init_).log_likelihood;
}

HyperLikelihood::ValueAndGradient HyperLikelihood::value_and_gradient(const Hyperparameters& hyper) const
{
    hyper.validate();
    const auto obs = hmm::observation_table(periodograms_, energies_, samples_per_bin_, hyper);
    const auto trans = markov::transition_matrix(grid_, hyper.r_nu);
    const auto fb = hmm::forward_backward(obs, trans, init_);
    const Matrix singles = hmm::posterior_singles(fb);
    const Matrix counts = hmm::expected_transitions(fb, obs, trans);

    const double n = static_cast<double>(samples_per_bin_);
    const double ra = hyper.r_a;
    const double rb = hyper.r_b;
    const double total = n * ra + rb;

    // Observation terms: derivatives of log O_t(p) weighted by p_t(p).
    double dq_ra = 0.0;
    double dq_rb = 0.0;
    const double ra_const = -n / total;
    const double ra_slope = n / (total * total);
    const double rb_const = (1.0 - n) / rb - 1.0 / total;
    const double rb_slope = -n * ra * (n * ra + 2.0 * rb) / (rb * rb * total * total);
    for (std::size_t t = 0; t < singles.rows(); ++t) {
        double mass = 0.0;
        double mean_periodogram = 0.0;
        for (std::size_t p = 0; p < singles.cols(); ++p) {
            mass += singles(t, p);
            mean_periodogram += singles(t, p) * periodograms_(t, p);
        }
        dq_ra += mass * ra_const + ra_slope * mean_periodogram;
        dq_rb += mass * (rb_const + energies_[t] / (rb * rb)) + rb_slope * mean_periodogram;
    }

    // Transition term: d log P(q, p) / d r_nu = (d_qp^2 - sum_s P(q, s) d_qs^2) / (2 r_nu^2).
    double dq_rnu = 0.0;
    const std::size_t states = trans.size();
    for (std::size_t q = 0; q < states; ++q) {
        const auto prob = trans.probabilities.row(q);
        const auto dist = trans.squared_distances.row(q);
        const auto cnt = counts.row(q);
        double mean_dist = 0.0;
        double row_mass = 0.0;
        double weighted = 0.0;
        for (std::size_t p = 0; p < states; ++p) {
            mean_dist += prob[p] * dist[p];
            row_mass += cnt[p];
            weighted += cnt[p] * dist[p];
        }
        dq_rnu += weighted - row_mass * mean_dist;
    }
    dq_rnu /= 2.0 * hyper.r_nu * hyper.r_nu;

    ValueAndGradient out;
    out.value = -fb.log_likelihood;
    out.gradient = HyperGradient{-dq_ra, -dq_rb, -dq_rnu};
    return out;
}

double clhl(const DataSet& data, const Hyperparameters& hyper, const markov::FrequencyGrid& grid, int period_count)
{
    return HyperLikelihood(data, grid, period_count).value(hyper);
}

HyperGradient clhl_gradient(const DataSet& data, const Hyperparameters& hyper, const markov::FrequencyGrid& grid,
                            int period_count)
{
    return HyperLikelihood(data, grid, period_count).value_and_gradient(hyper).gradient;
}

Hyperparameters empirical_init(const DataSet& data, const markov::FrequencyGrid& grid)
{
    const std::size_t bins = data.bins();
    if (bins < 2)
        throw std::invalid_argument("empirical_init: at least two bins are required");

    double r0 = 0.0;
    Complex r1(0.0, 0.0);
    for (const ComplexRecord& rec : data.records()) {
        const auto lags = spectral::empirical_correlation(rec);
        r0 += lags.lags[0].real();
        r1 += lags.lags[1];
    }
    r0 /= static_cast<double>(bins);
    r1 /= static_cast<double>(bins);
    if (!(r0 > 0.0))
        throw std::invalid_argument("empirical_init: data are identically zero");

    const auto candidates = markov::admissible_states(grid, 1);
    if (candidates.empty())
        throw std::invalid_argument("empirical_init: grid has no state in (-1/2, 1/2]");
    std::vector<double> ml(bins);
    for (std::size_t t = 0; t < bins; ++t) {
        double best = -1.0;
        for (std::size_t p : candidates) {
            const double v = spectral::periodogram(data[t], grid.state(p));
            if (v > best) {
                best = v;
                ml[t] = grid.state(p);
            }
        }
    }
    double mean = 0.0;
    for (std::size_t t = 0; t + 1 < bins; ++t)
        mean += ml[t + 1] - ml[t];
    mean /= static_cast<double>(bins - 1);
    double var = 0.0;
    for (std::size_t t = 0; t + 1 < bins; ++t) {
        const double d = ml[t + 1] - ml[t] - mean;
        var += d * d;
    }
    var /= static_cast<double>(bins - 1);

    Hyperparameters h;
    h.r_a = std::max(std::abs(r1), 1e-6 * r0);
    h.r_b = std::max(r0 - std::abs(r1), 1e-6 * r0);
    h.r_nu = std::max(var, 1e-8);
    return h;
}

std::string to_string(Direction direction)
{
    switch (direction) {
    case Direction::coordinate_wise: return "coordinate_wise";
    case Direction::gradient: return "gradient";
    case Direction::vignes: return "vignes";
    case Direction::bisector: return "bisector";
    case Direction::polak_ribiere: return "polak_ribiere";
    }
    return "?";
}

std::string to_string(LineSearch search)
{
    switch (search) {
    case LineSearch::dichotomy: return "dichotomy";
    case LineSearch::quadratic_interp: return "quadratic_interp";
    case LineSearch::golden_section: return "golden_section";
    }
    return "?";
}

std::optional<Direction> parse_direction(const std::string& name)
{
    for (Direction d : {Direction::coordinate_wise, Direction::gradient, Direction::vignes, Direction::bisector,
                        Direction::polak_ribiere}) {
        if (to_string(d) == name)
            return d;
    }
    return std::nullopt;
}

std::optional<LineSearch> parse_line_search(const std::string& name)
{
    for (LineSearch s : {LineSearch::dichotomy, LineSearch::quadratic_interp, LineSearch::golden_section}) {
        if (to_string(s) == name)
            return s;
    }
    return std::nullopt;
}

namespace {

using Vec3 = std::array<double, 3>;

Hyperparameters from_log(const Vec3& x)
{
    return Hyperparameters{std::exp(x[0]), std::exp(x[1]), std::exp(x[2])};
}

Vec3 to_log(const Hyperparameters& h)
{
    return {std::log(h.r_a), std::log(h.r_b), std::log(h.r_nu)};
}

double dot(const Vec3& a, const Vec3& b)
{
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

double norm(const Vec3& a)
{
    return std::sqrt(dot(a, a));
}

// Bookkeeping shared by all strategies: evaluation counts and the trajectory.
class Run {
public:
    Run(const HyperLikelihood& objective, OptimizerReport& report) : objective_(objective), report_(report) {}

    double value(const Vec3& x)
    {
        ++report_.function_evals;
        try {
            const double v = objective_.value(from_log(x));
            return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
        } catch (const NumericalError&) {
            return std::numeric_limits<double>::infinity();
        } catch (const std::invalid_argument&) {
            return std::numeric_limits<double>::infinity();
        }
    }

    /// Gradient with respect to log r.
    Vec3 gradient(const Vec3& x, double& value_out)
    {
        ++report_.gradient_evals;
        const Hyperparameters h = from_log(x);
        const auto vg = objective_.value_and_gradient(h);
        value_out = vg.value;
        return {vg.gradient.d_ra * h.r_a, vg.gradient.d_rb * h.r_b, vg.gradient.d_rnu * h.r_nu};
    }

    void accept(const Vec3& x, double v)
    {
        if (!std::isfinite(v)) {
            std::ostringstream msg;
            msg << "CLHL is not finite at iterate " << report_.trajectory.size();
            if (!report_.trajectory.empty()) {
                const auto& last = report_.trajectory.back();
                msg << " (previous r = " << last.r_a << ", " << last.r_b << ", " << last.r_nu << ")";
            }
            throw NumericalError(msg.str());
        }
        report_.trajectory.push_back(from_log(x));
        report_.values.push_back(v);
    }

private:
    const HyperLikelihood& objective_;
    OptimizerReport& report_;
};

bool small_decrease(double before, double after, double tol)
{
    return before - after <= tol * std::max(std::abs(before), 1e-300);
}

void coordinate_descent(Run& run, Vec3& x, double& fx, const OptimizerOptions& opt, OptimizerReport& report)
{
    Vec3 step{0.5, 0.5, 0.5};
    for (std::size_t iter = 0; iter < opt.max_iterations; ++iter) {
        const double start = fx;
        for (std::size_t i = 0; i < 3; ++i) {
            auto phi = [&](double s) {
                Vec3 y = x;
                y[i] += s;
                return run.value(y);
            };
            const auto ls = line_minimize(phi, fx, step[i], opt.line_search, true, opt.line_tolerance);
            if (ls.value < fx) {
                x[i] += ls.step;
                fx = ls.value;
                step[i] = std::clamp(std::abs(ls.step), 10.0 * opt.line_tolerance, 2.0);
            } else {
                step[i] = std::max(0.5 * step[i], 10.0 * opt.line_tolerance);
            }
        }
        ++report.iterations;
        run.accept(x, fx);
        if (small_decrease(start, fx, opt.relative_tolerance)) {
            report.converged = true;
            return;
        }
    }
}

void gradient_descent(Run& run, Vec3& x, double& fx, const OptimizerOptions& opt, OptimizerReport& report)
{
    double value_at_x = 0.0;
    Vec3 g = run.gradient(x, value_at_x);
    Vec3 g_prev{}, d_prev{};
    Vec3 weights{1.0, 1.0, 1.0};
    double step = 0.5;
    std::size_t since_restart = 0;

    for (std::size_t iter = 0; iter < opt.max_iterations; ++iter) {
        if (norm(g) == 0.0) {
            report.converged = true;
            return;
        }
        Vec3 d{-g[0], -g[1], -g[2]};
        const bool have_history = iter > 0;
        switch (opt.direction) {
        case Direction::gradient:
        case Direction::coordinate_wise:
            break;
        case Direction::bisector:
            // Bisector of the two most recent steepest-descent directions.
            if (have_history) {
                const double ng = norm(g), np = norm(g_prev);
                for (std::size_t i = 0; i < 3; ++i)
                    d[i] = -(g[i] / ng + g_prev[i] / np) * ng;
            }
            break;
        case Direction::vignes:
            // Per-component gain: grows while a partial derivative keeps its
            // sign, shrinks when it flips.
            if (have_history) {
                for (std::size_t i = 0; i < 3; ++i) {
                    weights[i] *= (g[i] * g_prev[i] > 0.0) ? 1.5 : 0.5;
                    weights[i] = std::clamp(weights[i], 1e-3, 1e3);
                }
            }
            for (std::size_t i = 0; i < 3; ++i)
                d[i] = -weights[i] * g[i];
            break;
        case Direction::polak_ribiere:
            if (have_history && since_restart < 3) {
                Vec3 diff{g[0] - g_prev[0], g[1] - g_prev[1], g[2] - g_prev[2]};
                const double beta = std::max(0.0, dot(g, diff) / dot(g_prev, g_prev));
                for (std::size_t i = 0; i < 3; ++i)
                    d[i] = -g[i] + beta * d_prev[i];
            } else {
                since_restart = 0;
            }
            break;
        }
        if (!(dot(d, g) < 0.0) || !std::isfinite(norm(d))) {
            d = {-g[0], -g[1], -g[2]};
            since_restart = 0;
        }

        const double start = fx;
        auto search = [&](const Vec3& dir) {
            const double len = norm(dir);
            auto phi = [&](double s) {
                Vec3 y{x[0] + s * dir[0] / len, x[1] + s * dir[1] / len, x[2] + s * dir[2] / len};
                return run.value(y);
            };
            return line_minimize(phi, fx, step, opt.line_search, false, opt.line_tolerance);
        };
        auto ls = search(d);
        bool steepest = d == Vec3{-g[0], -g[1], -g[2]};
        if (!(ls.value < fx) && !steepest) {
            d = {-g[0], -g[1], -g[2]};
            steepest = true;
            since_restart = 0;
            ls = search(d);
        }
        ++report.iterations;
        if (!(ls.value < fx)) {
            run.accept(x, fx);
            report.converged = true;
            return;
        }
        const double len = norm(d);
        for (std::size_t i = 0; i < 3; ++i)
            x[i] += ls.step * d[i] / len;
        fx = ls.value;
        step = std::clamp(ls.step, 10.0 * opt.line_tolerance, 2.0);
        run.accept(x, fx);

        g_prev = g;
        d_prev = d;
        ++since_restart;
        g = run.gradient(x, value_at_x);
        if (small_decrease(start, fx, opt.relative_tolerance)) {
            report.converged = true;
            return;
        }
    }
}

}  // namespace

OptimizerReport estimate_ml(const HyperLikelihood& objective, const Hyperparameters& start,
                            const OptimizerOptions& options)
{
    start.validate();
    OptimizerReport report;
    Run run(objective, report);
    Vec3 x = to_log(start);
    double fx = run.value(x);
    run.accept(x, fx);

    if (options.direction == Direction::coordinate_wise)
        coordinate_descent(run, x, fx, options, report);
    else
        gradient_descent(run, x, fx, options, report);

    report.minimizer = from_log(x);
    report.reached_minimum = fx;
    return report;
}

OptimizerReport estimate_ml(const DataSet& data, const markov::FrequencyGrid& grid, const OptimizerOptions& options)
{
    const HyperLikelihood objective(data, grid, options.period_count);
    const Hyperparameters start = options.start ? *options.start : empirical_init(data, grid);
    return estimate_ml(objective, start, options);
}

std::vector<LevelSetSample> level_sets(const HyperLikelihood& objective, const Hyperparameters& center,
                                       double half_width_log10, std::size_t points)
{
    center.validate();
    if (points < 2)
        throw std::invalid_argument("level_sets: at least two points per axis");
    std::vector<double> offsets(points);
    for (std::size_t i = 0; i < points; ++i)
        offsets[i] = -half_width_log10 + 2.0 * half_width_log10 * static_cast<double>(i) / static_cast<double>(points - 1);

    std::vector<LevelSetSample> samples;
    samples.reserve(points * points * points);
    for (double oa : offsets) {
        for (double ob : offsets) {
            for (double on : offsets) {
                LevelSetSample s;
                s.hyper = Hyperparameters{center.r_a * std::pow(10.0, oa), center.r_b * std::pow(10.0, ob),
                                          center.r_nu * std::pow(10.0, on)};
                try {
                    s.clhl = objective.value(s.hyper);
                } catch (const NumericalError&) {
                    s.clhl = std::numeric_limits<double>::infinity();
                }
                samples.push_back(s);
            }
        }
    }
    return samples;
}

}  // namespace freqtrack::hyperopt
