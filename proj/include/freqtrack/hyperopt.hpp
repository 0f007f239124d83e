#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "freqtrack/markov.hpp"
#include "freqtrack/matrix.hpp"
#include "freqtrack/signal.hpp"

namespace freqtrack::hyperopt {

/// Partial derivatives of CLHL = -log Pr[Y; r] with respect to r.
struct HyperGradient {
    double d_ra = 0.0;
    double d_rb = 0.0;
    double d_rnu = 0.0;
};

/// CLHL of a dataset as a function of the hyperparameters.
///
/// The periodogram of every bin at every grid state does not depend on r, so
/// it is computed once here and reused by every evaluation. The gradient is
/// obtained from one forward-backward pass through the EM identity
/// dCLHL/dr = -dQ(r, r')/dr' at r' = r.
class HyperLikelihood {
public:
    HyperLikelihood(const DataSet& data, markov::FrequencyGrid grid, int period_count = 1);

    double value(const Hyperparameters& hyper) const;

    struct ValueAndGradient {
        double value = 0.0;
        HyperGradient gradient;
    };
    ValueAndGradient value_and_gradient(const Hyperparameters& hyper) const;

    const markov::FrequencyGrid& grid() const { return grid_; }
    const Matrix& periodograms() const { return periodograms_; }

private:
    markov::FrequencyGrid grid_;
    int period_count_;
    std::size_t samples_per_bin_;
    Matrix periodograms_;
    std::vector<double> energies_;
    markov::InitialDistribution init_;
};

double clhl(const DataSet& data, const Hyperparameters& hyper, const markov::FrequencyGrid& grid,
            int period_count = 1);

HyperGradient clhl_gradient(const DataSet& data, const Hyperparameters& hyper, const markov::FrequencyGrid& grid,
                            int period_count = 1);

/// Moment-based starting point: r_a = |r(1)|, r_b = r(0) - |r(1)| with r(n)
/// the bin-averaged correlation lags, and r_nu the variance of successive
/// differences of the per-bin periodogram argmax over the grid states in
/// (-1/2, 1/2]. r_a and r_b are floored at 1e-6 r(0) and r_nu at 1e-8. Throws
/// std::invalid_argument when T < 2 or the data are identically zero.
Hyperparameters empirical_init(const DataSet& data, const markov::FrequencyGrid& grid);

enum class Direction { coordinate_wise, gradient, vignes, bisector, polak_ribiere };
enum class LineSearch { dichotomy, quadratic_interp, golden_section };

std::string to_string(Direction direction);
std::string to_string(LineSearch search);
std::optional<Direction> parse_direction(const std::string& name);
std::optional<LineSearch> parse_line_search(const std::string& name);

struct OptimizerOptions {
    Direction direction = Direction::coordinate_wise;
    LineSearch line_search = LineSearch::golden_section;
    std::size_t max_iterations = 200;
    /// Stop once an iteration lowers CLHL by less than this fraction.
    double relative_tolerance = 1e-8;
    /// Bracket width, in natural-log units of r, at which line searches stop.
    double line_tolerance = 1e-5;
    int period_count = 1;
    /// Starting point; empirical_init() when unset.
    std::optional<Hyperparameters> start;
};

struct OptimizerReport {
    Hyperparameters minimizer;
    double reached_minimum = 0.0;
    std::size_t gradient_evals = 0;
    std::size_t function_evals = 0;
    std::size_t iterations = 0;
    bool converged = false;
    /// Accepted iterates, starting point first, with their CLHL values.
    std::vector<Hyperparameters> trajectory;
    std::vector<double> values;
};

/// Minimizes CLHL over log r. Throws NumericalError if CLHL is not finite at
/// an accepted iterate.
OptimizerReport estimate_ml(const DataSet& data, const markov::FrequencyGrid& grid,
                            const OptimizerOptions& options = {});
OptimizerReport estimate_ml(const HyperLikelihood& objective, const Hyperparameters& start,
                            const OptimizerOptions& options = {});

struct LevelSetSample {
    Hyperparameters hyper;
    double clhl = 0.0;
};

/// CLHL on a points^3 grid, log10-uniform over center * 10^[-half_width, +half_width]
/// per component. Points where CLHL is not finite are reported as +inf.
std::vector<LevelSetSample> level_sets(const HyperLikelihood& objective, const Hyperparameters& center,
                                       double half_width_log10 = 1.0, std::size_t points = 25);

}  // namespace freqtrack::hyperopt
