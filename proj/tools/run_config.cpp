#include "run_config.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "freqtrack/errors.hpp"

namespace freqtrack::cli {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& text)
{
    T value{};
    const char* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end || text.empty())
        throw UsageError("config: bad value for " + key + ": '" + text + "'");
    return value;
}

bool parse_bool(const std::string& key, const std::string& text)
{
    if (text == "true" || text == "1" || text == "yes")
        return true;
    if (text == "false" || text == "0" || text == "no")
        return false;
    throw UsageError("config: bad value for " + key + ": '" + text + "'");
}

std::string format(double v)
{
    std::ostringstream s;
    s.precision(std::numeric_limits<double>::max_digits10);
    s << v;
    return s.str();
}

}  // namespace

void apply_grid_spec(RunConfig& config, const std::string& spec)
{
    std::istringstream in(spec);
    std::string a, b, c;
    if (!std::getline(in, a, ',') || !std::getline(in, b, ',') || !std::getline(in, c) )
        throw UsageError("grid must be \"min,max,P\", got '" + spec + "'");
    const double lo = parse_number<double>("grid", trim(a));
    const double hi = parse_number<double>("grid", trim(b));
    const auto p = parse_number<std::size_t>("grid", trim(c));
    if (!(lo < hi) || p < 2)
        throw UsageError("grid needs min < max and P >= 2");
    config.grid_min = lo;
    config.grid_max = hi;
    config.grid_size = p;
}

void apply_setting(RunConfig& c, const std::string& key, const std::string& raw)
{
    const std::string v = trim(raw);
    if (key == "grid") apply_grid_spec(c, v);
    else if (key == "grid_min") c.grid_min = parse_number<double>(key, v);
    else if (key == "grid_max") c.grid_max = parse_number<double>(key, v);
    else if (key == "grid_size") c.grid_size = parse_number<std::size_t>(key, v);
    else if (key == "K") c.period_count = parse_number<int>(key, v);
    else if (key == "T") c.bins = parse_number<std::size_t>(key, v);
    else if (key == "N") c.samples_per_bin = parse_number<std::size_t>(key, v);
    else if (key == "profile") c.profile = v;
    else if (key == "track_lo") c.track_lo = parse_number<double>(key, v);
    else if (key == "track_hi") c.track_hi = parse_number<double>(key, v);
    else if (key == "r_a") c.r_a = parse_number<double>(key, v);
    else if (key == "r_b") c.r_b = parse_number<double>(key, v);
    else if (key == "r_nu") c.r_nu = parse_number<double>(key, v);
    else if (key == "seed") c.seed = parse_number<std::uint64_t>(key, v);
    else if (key == "seed_base") c.seed_base = parse_number<std::uint64_t>(key, v);
    else if (key == "replicates") c.replicates = parse_number<std::size_t>(key, v);
    else if (key == "strategy") c.strategy = v;
    else if (key == "line_search") c.line_search = v;
    else if (key == "levelsets") c.levelsets = parse_bool(key, v);
    else if (key == "levelset_points") c.levelset_points = parse_number<std::size_t>(key, v);
    else if (key == "refine") c.refine = v;
    else if (key == "out") c.out = v;
    else if (key == "dataset") c.dataset = v;
    else if (key == "hyper") c.hyper = v;
    else if (key == "truth") c.truth = v;
    else throw UsageError("config: unknown key '" + key + "'");
}

RunConfig parse_config(std::istream& in)
{
    RunConfig c;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw UsageError("config line " + std::to_string(number) + ": expected key=value");
        apply_setting(c, trim(line.substr(0, eq)), line.substr(eq + 1));
    }
    return c;
}

RunConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open config file " + path.string());
    return parse_config(in);
}

void write_config(std::ostream& out, const RunConfig& c)
{
    out << "grid_min=" << format(c.grid_min) << '\n'
        << "grid_max=" << format(c.grid_max) << '\n'
        << "grid_size=" << c.grid_size << '\n'
        << "K=" << c.period_count << '\n'
        << "T=" << c.bins << '\n'
        << "N=" << c.samples_per_bin << '\n'
        << "profile=" << c.profile << '\n'
        << "track_lo=" << format(c.track_lo) << '\n'
        << "track_hi=" << format(c.track_hi) << '\n'
        << "r_a=" << format(c.r_a) << '\n'
        << "r_b=" << format(c.r_b) << '\n';
    if (c.r_nu)
        out << "r_nu=" << format(*c.r_nu) << '\n';
    out << "seed=" << c.seed << '\n'
        << "seed_base=" << c.seed_base << '\n'
        << "replicates=" << c.replicates << '\n'
        << "strategy=" << c.strategy << '\n';
    if (c.line_search)
        out << "line_search=" << *c.line_search << '\n';
    out << "levelsets=" << (c.levelsets ? "true" : "false") << '\n'
        << "levelset_points=" << c.levelset_points << '\n'
        << "refine=" << c.refine << '\n'
        << "out=" << c.out.string() << '\n';
    if (c.dataset)
        out << "dataset=" << c.dataset->string() << '\n';
    if (c.hyper)
        out << "hyper=" << c.hyper->string() << '\n';
    if (c.truth)
        out << "truth=" << c.truth->string() << '\n';
}

}  // namespace freqtrack::cli
