#include "commands.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>

#include "freqtrack/csv_io.hpp"
#include "freqtrack/errors.hpp"

namespace freqtrack::cli {

namespace fs = std::filesystem;
using hyperopt::Direction;
using hyperopt::LineSearch;

namespace {

using Clock = std::chrono::steady_clock;

constexpr Direction all_directions[] = {Direction::coordinate_wise, Direction::gradient, Direction::vignes,
                                        Direction::bisector, Direction::polak_ribiere};

void require_directory(const fs::path& dir)
{
    if (!fs::is_directory(dir))
        throw IoError("output directory does not exist: " + dir.string());
}

std::ofstream open_output(const fs::path& path)
{
    std::ofstream out(path);
    if (!out)
        throw IoError("cannot write " + path.string());
    out.precision(std::numeric_limits<double>::max_digits10);
    return out;
}

LineSearch default_search(Direction d)
{
    return d == Direction::coordinate_wise ? LineSearch::golden_section : LineSearch::dichotomy;
}

refine::Method parse_refine(const std::string& name)
{
    if (name == "newton")
        return refine::Method::newton;
    if (name == "gradient")
        return refine::Method::gradient;
    throw UsageError("unknown refine method '" + name + "' (newton or gradient)");
}

void write_report(std::ostream& out, const StrategyRun& run)
{
    const auto& r = run.report;
    const auto& m = r.minimizer;
    io::write_hyperparameters(out, m);
    out << "log10_r_a=" << std::log10(m.r_a) << '\n'
        << "log10_r_b=" << std::log10(m.r_b) << '\n'
        << "log10_r_nu=" << std::log10(m.r_nu) << '\n'
        << "strategy=" << hyperopt::to_string(run.direction) << '\n'
        << "line_search=" << hyperopt::to_string(run.line_search) << '\n'
        << "reached_minimum=" << r.reached_minimum << '\n'
        << "iterations=" << r.iterations << '\n'
        << "function_evals=" << r.function_evals << '\n'
        << "gradient_evals=" << r.gradient_evals << '\n'
        << "converged=" << (r.converged ? "true" : "false") << '\n';
}

double percentile(std::vector<double> v, double q)
{
    std::sort(v.begin(), v.end());
    const double pos = q * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

double mean(const std::vector<double>& v)
{
    double s = 0.0;
    for (double x : v)
        s += x;
    return s / static_cast<double>(v.size());
}

// --- subcommands -----------------------------------------------------------

void cmd_simulate(const RunConfig& config, std::ostream& out)
{
    require_directory(config.out);
    const DataSet data = simulate(config, config.seed);
    io::write_dataset(config.out / "dataset.csv", data);
    io::write_track(config.out / "truth.csv", *data.true_track);
    io::write_hyperparameters(config.out / "truth_hyper.txt", *data.true_hyper);
    const auto& h = *data.true_hyper;
    out << "T=" << data.bins() << " N=" << data.samples_per_bin() << " SNR=" << h.r_a / h.r_b << " ("
        << std::setprecision(3) << 10.0 * std::log10(h.r_a / h.r_b) << " dB)\n";
    out << "wrote " << (config.out / "dataset.csv").string() << " and " << (config.out / "truth.csv").string()
        << '\n';
}

void cmd_estimate(const RunConfig& config, std::ostream& out)
{
    if (!config.dataset)
        throw UsageError("estimate needs a dataset file");
    require_directory(config.out);
    const DataSet data = io::read_dataset(*config.dataset);
    const auto runs = estimate(config, data);

    const auto best = std::min_element(runs.begin(), runs.end(), [](const StrategyRun& a, const StrategyRun& b) {
        return a.report.reached_minimum < b.report.reached_minimum;
    });
    {
        auto file = open_output(config.out / "hyper.txt");
        write_report(file, *best);
    }

    out << std::left << std::setw(16) << "strategy" << std::setw(18) << "line_search" << std::right
        << std::setw(11) << "log10 r_a" << std::setw(11) << "log10 r_b" << std::setw(11) << "log10 r_nu"
        << std::setw(14) << "minimum" << std::setw(7) << "iters" << std::setw(8) << "f-evals" << std::setw(8)
        << "g-evals" << '\n';
    auto table = open_output(config.out / "strategies.csv");
    table << "strategy,line_search,log10_r_a,log10_r_b,log10_r_nu,reached_minimum,iterations,function_evals,"
             "gradient_evals\n";
    for (const auto& run : runs) {
        const auto& r = run.report;
        const auto& m = r.minimizer;
        table << hyperopt::to_string(run.direction) << ',' << hyperopt::to_string(run.line_search) << ','
              << std::log10(m.r_a) << ',' << std::log10(m.r_b) << ',' << std::log10(m.r_nu) << ','
              << r.reached_minimum << ',' << r.iterations << ',' << r.function_evals << ',' << r.gradient_evals
              << '\n';
        out << std::left << std::setw(16) << hyperopt::to_string(run.direction) << std::setw(18)
            << hyperopt::to_string(run.line_search) << std::right << std::fixed << std::setprecision(3)
            << std::setw(11) << std::log10(m.r_a) << std::setw(11) << std::log10(m.r_b) << std::setw(11)
            << std::log10(m.r_nu) << std::setw(14) << r.reached_minimum << std::setw(7) << r.iterations
            << std::setw(8) << r.function_evals << std::setw(8) << r.gradient_evals << '\n';
        out.unsetf(std::ios::fixed);
    }

    if (config.levelsets) {
        const hyperopt::HyperLikelihood objective(data, config_grid(config), config.period_count);
        const auto samples = hyperopt::level_sets(objective, best->report.minimizer, 1.0, config.levelset_points);
        auto file = open_output(config.out / "levelsets.csv");
        file << "r_a,r_b,r_nu,clhl\n";
        for (const auto& s : samples)
            file << s.hyper.r_a << ',' << s.hyper.r_b << ',' << s.hyper.r_nu << ',' << s.clhl << '\n';
        out << "wrote " << samples.size() << " level-set samples\n";
    }
}

void cmd_track(const RunConfig& config, std::ostream& out)
{
    if (!config.dataset || !config.hyper)
        throw UsageError("track needs a dataset file and a hyperparameter file");
    require_directory(config.out);
    const DataSet data = io::read_dataset(*config.dataset);
    const Hyperparameters hyper = io::read_hyperparameters(*config.hyper);
    if (!hyper.valid())
        throw DataError("hyperparameters must be positive and finite");

    std::optional<FrequencyTrack> truth;
    if (config.truth) {
        truth = io::read_track(*config.truth);
    } else if (const auto sibling = config.dataset->parent_path() / "truth.csv"; fs::exists(sibling)) {
        truth = io::read_track(sibling);
    }
    if (truth && truth->size() != data.bins())
        throw DataError("truth has " + std::to_string(truth->size()) + " rows, dataset has " +
                        std::to_string(data.bins()) + " bins");

    const auto r = track_frequencies(data, hyper, config_grid(config), config.period_count,
                                     parse_refine(config.refine));
    const std::pair<const char*, const FrequencyTrack*> outputs[] = {
        {"ml", &r.ml}, {"unwrapped_ml", &r.unwrapped_ml}, {"viterbi_map", &r.viterbi_map},
        {"hessian_map", &r.refined_map}};

    auto metrics = open_output(config.out / "metrics.txt");
    metrics << "lambda=" << r.lambda << '\n'
            << "viterbi_clpl=" << r.viterbi_clpl << '\n'
            << "refined_clpl=" << r.refined_clpl << '\n'
            << "refine_iterations=" << r.refinement.iterations << '\n';
    out << "lambda=" << r.lambda << " CLPL viterbi=" << r.viterbi_clpl << " refined=" << r.refined_clpl << '\n';
    for (const auto& [name, track] : outputs) {
        io::write_track(config.out / (std::string(name) + ".csv"), *track);
        if (truth) {
            const double e = rmse(*track, *truth);
            metrics << "rmse_" << name << '=' << e << '\n';
            out << std::left << std::setw(14) << name << " RMSE " << e << '\n';
        }
    }
    metrics << "seconds_ml=" << r.times.ml_seconds << '\n'
            << "seconds_viterbi=" << r.times.viterbi_seconds << '\n'
            << "seconds_refine=" << r.times.refine_seconds << '\n';
    out << "time ML " << r.times.ml_seconds << " s, Viterbi " << r.times.viterbi_seconds << " s, refine "
        << r.times.refine_seconds << " s\n";
}

void cmd_eval(const RunConfig& config, std::ostream& out)
{
    if (config.replicates == 0)
        throw UsageError("replicates must be positive");
    require_directory(config.out);
    std::vector<ReplicateMetrics> rows;
    auto table = open_output(config.out / "eval_replicates.csv");
    table << "seed,rmse_ml,rmse_unwrapped_ml,rmse_viterbi_map,rmse_hessian_map,log10_err_r_a,log10_err_r_b,"
             "log10_err_r_nu,seconds\n";
    for (std::size_t i = 0; i < config.replicates; ++i) {
        const auto m = run_replicate(config, config.seed_base + i);
        table << m.seed << ',' << m.rmse_ml << ',' << m.rmse_unwrapped << ',' << m.rmse_viterbi << ','
              << m.rmse_hessian << ',' << m.log10_err_ra << ',' << m.log10_err_rb << ',' << m.log10_err_rnu << ','
              << m.seconds << '\n';
        rows.push_back(m);
    }

    auto summary = open_output(config.out / "eval_summary.txt");
    summary << "replicates=" << rows.size() << '\n' << "seed_base=" << config.seed_base << '\n';
    const auto column = [&](auto member) {
        std::vector<double> v;
        for (const auto& r : rows)
            v.push_back(r.*member);
        return v;
    };
    const std::pair<const char*, double ReplicateMetrics::*> methods[] = {
        {"ml", &ReplicateMetrics::rmse_ml},
        {"unwrapped_ml", &ReplicateMetrics::rmse_unwrapped},
        {"viterbi_map", &ReplicateMetrics::rmse_viterbi},
        {"hessian_map", &ReplicateMetrics::rmse_hessian}};
    out << std::left << std::setw(14) << "method" << std::right << std::setw(10) << "mean" << std::setw(10)
        << "p10" << std::setw(10) << "median" << std::setw(10) << "p90" << '\n';
    for (const auto& [name, member] : methods) {
        const auto v = column(member);
        summary << "rmse_" << name << "_mean=" << mean(v) << '\n'
                << "rmse_" << name << "_p10=" << percentile(v, 0.1) << '\n'
                << "rmse_" << name << "_median=" << percentile(v, 0.5) << '\n'
                << "rmse_" << name << "_p90=" << percentile(v, 0.9) << '\n';
        out << std::left << std::setw(14) << name << std::right << std::fixed << std::setprecision(4)
            << std::setw(10) << mean(v) << std::setw(10) << percentile(v, 0.1) << std::setw(10)
            << percentile(v, 0.5) << std::setw(10) << percentile(v, 0.9) << '\n';
        out.unsetf(std::ios::fixed);
    }
    const std::pair<const char*, double ReplicateMetrics::*> errors[] = {
        {"r_a", &ReplicateMetrics::log10_err_ra},
        {"r_b", &ReplicateMetrics::log10_err_rb},
        {"r_nu", &ReplicateMetrics::log10_err_rnu}};
    for (const auto& [name, member] : errors) {
        auto v = column(member);
        for (auto& x : v)
            x = std::abs(x);
        summary << "abs_log10_err_" << name << "_mean=" << mean(v) << '\n'
                << "abs_log10_err_" << name << "_max=" << percentile(v, 1.0) << '\n';
        out << "|log10 error| " << name << ": mean " << mean(v) << ", max " << percentile(v, 1.0) << '\n';
    }
    const auto hessian = column(&ReplicateMetrics::rmse_hessian);
    const auto good = std::count_if(hessian.begin(), hessian.end(), [](double e) { return e < 0.05; });
    summary << "hessian_map_below_0.05=" << good << '\n';
    out << "Hessian-MAP RMSE < 0.05 in " << good << " of " << rows.size() << " replicates\n";
}

}  // namespace

markov::FrequencyGrid config_grid(const RunConfig& config)
{
    return markov::make_grid(config.grid_min, config.grid_max, config.grid_size);
}

TrackProfile parse_profile(const std::string& name)
{
    if (name == "sine")
        return TrackProfile::sine;
    if (name == "linear_ramp")
        return TrackProfile::linear_ramp;
    if (name == "piecewise")
        return TrackProfile::piecewise;
    throw UsageError("unknown profile '" + name + "' (sine, linear_ramp or piecewise)");
}

DataSet simulate(const RunConfig& config, std::uint64_t seed)
{
    const FrequencyTrack truth = make_test_track(parse_profile(config.profile), config.bins, config.track_lo,
                                                 config.track_hi);
    const Hyperparameters hyper{config.r_a, config.r_b,
                                config.r_nu.value_or(std::max(mean_squared_increment(truth), 1e-8))};
    if (!hyper.valid())
        throw UsageError("simulation hyperparameters must be positive and finite");
    return synthesize_dataset(truth, hyper, config.samples_per_bin, seed);
}

std::vector<StrategyRun> estimate(const RunConfig& config, const DataSet& data)
{
    std::vector<Direction> directions;
    if (config.strategy == "all") {
        directions.assign(std::begin(all_directions), std::end(all_directions));
    } else if (auto d = hyperopt::parse_direction(config.strategy)) {
        directions.push_back(*d);
    } else {
        throw UsageError("unknown strategy '" + config.strategy + "'");
    }
    std::optional<LineSearch> search;
    if (config.line_search) {
        search = hyperopt::parse_line_search(*config.line_search);
        if (!search)
            throw UsageError("unknown line search '" + *config.line_search + "'");
    }

    const hyperopt::HyperLikelihood objective(data, config_grid(config), config.period_count);
    const Hyperparameters start = hyperopt::empirical_init(data, objective.grid());
    std::vector<StrategyRun> runs;
    for (Direction d : directions) {
        hyperopt::OptimizerOptions opts;
        opts.direction = d;
        opts.line_search = search.value_or(default_search(d));
        opts.period_count = config.period_count;
        runs.push_back({d, opts.line_search, hyperopt::estimate_ml(objective, start, opts)});
    }
    return runs;
}

ReplicateMetrics run_replicate(const RunConfig& config, std::uint64_t seed)
{
    const auto start = Clock::now();
    const DataSet data = simulate(config, seed);
    RunConfig single = config;
    if (single.strategy == "all")
        single.strategy = "coordinate_wise";
    const auto est = estimate(single, data).front().report.minimizer;
    const auto r = track_frequencies(data, est, config_grid(config), config.period_count,
                                     parse_refine(config.refine));
    const auto& truth = *data.true_track;
    const auto& h = *data.true_hyper;
    ReplicateMetrics m;
    m.seed = seed;
    m.rmse_ml = rmse(r.ml, truth);
    m.rmse_unwrapped = rmse(r.unwrapped_ml, truth);
    m.rmse_viterbi = rmse(r.viterbi_map, truth);
    m.rmse_hessian = rmse(r.refined_map, truth);
    m.log10_err_ra = std::log10(est.r_a / h.r_a);
    m.log10_err_rb = std::log10(est.r_b / h.r_b);
    m.log10_err_rnu = std::log10(est.r_nu / h.r_nu);
    m.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    return m;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Frequency tracking beyond the Nyquist limit"};
    app.require_subcommand(1);

    std::string config_path, grid, strategy, line_search, refine_method;
    std::string out_dir, truth;
    std::uint64_t seed = 0, seed_base = 0;
    std::size_t replicates = 0;
    bool levelsets = false;
    std::string dataset, hyper;

    const auto common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "key=value config file; flags override it");
        sub->add_option("--out", out_dir, "output directory (must exist)");
        sub->add_option("--grid", grid, "state grid as \"min,max,P\"");
    };
    auto* simulate_cmd = app.add_subcommand("simulate", "draw a dataset and its true track");
    common(simulate_cmd);
    simulate_cmd->add_option("--seed", seed, "random seed");

    auto* estimate_cmd = app.add_subcommand("estimate", "maximum-likelihood hyperparameters");
    common(estimate_cmd);
    estimate_cmd->add_option("dataset", dataset, "dataset CSV");
    estimate_cmd->add_option("--strategy", strategy, "coordinate_wise, gradient, vignes, bisector, polak_ribiere or all");
    estimate_cmd->add_option("--line-search", line_search, "dichotomy, quadratic_interp or golden_section");
    estimate_cmd->add_flag("--levelsets", levelsets, "also write CLHL samples around the minimizer");

    auto* track_cmd = app.add_subcommand("track", "ML, unwrapped ML, Viterbi-MAP and Hessian-MAP tracks");
    common(track_cmd);
    track_cmd->add_option("dataset", dataset, "dataset CSV");
    track_cmd->add_option("hyper", hyper, "hyperparameter file");
    track_cmd->add_option("--truth", truth, "true track CSV (default: truth.csv beside the dataset)");
    track_cmd->add_option("--refine", refine_method, "newton or gradient");

    auto* eval_cmd = app.add_subcommand("eval", "seeded simulate/estimate/track replicates");
    common(eval_cmd);
    eval_cmd->add_option("--replicates", replicates, "number of replicates");
    eval_cmd->add_option("--seed-base", seed_base, "seed of the first replicate");
    eval_cmd->add_option("--strategy", strategy, "hyperparameter strategy");
    eval_cmd->add_option("--line-search", line_search, "line search");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? ExitCode::ok : ExitCode::usage;
    }

    CLI::App* sub = app.get_subcommands().front();
    const auto given = [&](const char* name) { return sub->get_option_no_throw(name) && sub->count(name) > 0; };

    try {
        RunConfig config = given("--config") ? load_config(config_path) : RunConfig{};
        if (given("--grid")) apply_grid_spec(config, grid);
        if (given("--out")) config.out = out_dir;
        if (given("--seed")) config.seed = seed;
        if (given("--seed-base")) config.seed_base = seed_base;
        if (given("--replicates")) config.replicates = replicates;
        if (given("--strategy")) config.strategy = strategy;
        if (given("--line-search")) config.line_search = line_search;
        if (given("--levelsets")) config.levelsets = levelsets;
        if (given("--refine")) config.refine = refine_method;
        if (given("--truth")) config.truth = truth;
        if (given("dataset")) config.dataset = dataset;
        if (given("hyper")) config.hyper = hyper;

        if (sub == simulate_cmd) cmd_simulate(config, out);
        else if (sub == estimate_cmd) cmd_estimate(config, out);
        else if (sub == track_cmd) cmd_track(config, out);
        else cmd_eval(config, out);
        return ExitCode::ok;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return ExitCode::usage;
    } catch (const IoError& e) {
        err << "I/O error: " << e.what() << '\n';
        return ExitCode::io_failure;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return ExitCode::numerical_failure;
    } catch (const DataError& e) {
        err << "data error: " << e.what() << '\n';
        return ExitCode::data_failure;
    } catch (const std::invalid_argument& e) {
        err << "data error: " << e.what() << '\n';
        return ExitCode::data_failure;
    }
}

}  // namespace freqtrack::cli
