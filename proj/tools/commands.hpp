#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "freqtrack/hyperopt.hpp"
#include "freqtrack/pipeline.hpp"
#include "run_config.hpp"

namespace freqtrack::cli {

enum ExitCode : int { ok = 0, usage = 1, io_failure = 2, data_failure = 3, numerical_failure = 4 };

/// Parses argv, runs one subcommand and maps failures to exit codes.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

markov::FrequencyGrid config_grid(const RunConfig& config);
TrackProfile parse_profile(const std::string& name);

/// Dataset drawn from the configured profile and hyperparameters.
DataSet simulate(const RunConfig& config, std::uint64_t seed);

struct StrategyRun {
    hyperopt::Direction direction;
    hyperopt::LineSearch line_search;
    hyperopt::OptimizerReport report;
};

/// One run per configured strategy ("all" gives five).
std::vector<StrategyRun> estimate(const RunConfig& config, const DataSet& data);

struct ReplicateMetrics {
    std::uint64_t seed = 0;
    double rmse_ml = 0.0;
    double rmse_unwrapped = 0.0;
    double rmse_viterbi = 0.0;
    double rmse_hessian = 0.0;
    /// log10(estimate / truth) per component.
    double log10_err_ra = 0.0;
    double log10_err_rb = 0.0;
    double log10_err_rnu = 0.0;
    double seconds = 0.0;
};

/// simulate, estimate (first configured strategy), then track.
ReplicateMetrics run_replicate(const RunConfig& config, std::uint64_t seed);

}  // namespace freqtrack::cli
