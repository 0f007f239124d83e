#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

namespace freqtrack::cli {

/// Bad flags, bad config keys or values. Maps to exit code 1.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Everything a command needs. Serialized as "key=value" lines; '#' starts a
/// comment. Unset optional keys are omitted on write.
struct RunConfig {
    double grid_min = -2.5;
    double grid_max = 2.5;
    std::size_t grid_size = 128;
    int period_count = 1;

    std::size_t bins = 128;
    std::size_t samples_per_bin = 4;
    std::string profile = "sine";
    double track_lo = -1.5;
    double track_hi = 1.5;
    double r_a = 2.0;
    double r_b = 0.2;
    /// Defaults to the profile's mean squared increment.
    std::optional<double> r_nu;

    std::uint64_t seed = 1;
    std::uint64_t seed_base = 1;
    std::size_t replicates = 20;

    std::string strategy = "coordinate_wise";
    /// Defaults to golden_section for coordinate_wise, dichotomy otherwise.
    std::optional<std::string> line_search;
    bool levelsets = false;
    std::size_t levelset_points = 25;
    std::string refine = "newton";

    std::filesystem::path out = ".";
    std::optional<std::filesystem::path> dataset;
    std::optional<std::filesystem::path> hyper;
    std::optional<std::filesystem::path> truth;

    bool operator==(const RunConfig&) const = default;
};

/// Sets one key. Throws UsageError on an unknown key or unparsable value.
void apply_setting(RunConfig& config, const std::string& key, const std::string& value);

RunConfig parse_config(std::istream& in);
/// Throws IoError when the file cannot be read.
RunConfig load_config(const std::filesystem::path& path);
void write_config(std::ostream& out, const RunConfig& config);

/// "min,max,P"
void apply_grid_spec(RunConfig& config, const std::string& spec);

}  // namespace freqtrack::cli
