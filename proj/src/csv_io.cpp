#include "freqtrack/csv_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "freqtrack/errors.hpp"

namespace freqtrack::io {

namespace {

constexpr int kDigits = std::numeric_limits<double>::max_digits10;

std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view line, char sep)
{
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(sep, start);
        fields.push_back(trim(line.substr(start, pos - start)));
        if (pos == std::string_view::npos)
            break;
        start = pos + 1;
    }
    return fields;
}

double parse_double(std::string_view text, std::size_t line_no)
{
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value))
        throw DataError("line " + std::to_string(line_no) + ": bad number '" + std::string(text) + "'");
    return value;
}

std::size_t parse_index(std::string_view text, std::size_t line_no)
{
    std::size_t value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || value == 0)
        throw DataError("line " + std::to_string(line_no) + ": bad index '" + std::string(text) + "'");
    return value;
}

void expect_header(std::istream& in, std::string_view header)
{
    std::string line;
    if (!std::getline(in, line) || trim(line) != header)
        throw DataError("expected header '" + std::string(header) + "'");
}

template <typename Fn>
void for_each_row(std::istream& in, std::size_t columns, Fn&& fn)
{
    std::string line;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty())
            continue;
        const auto fields = split(line, ',');
        if (fields.size() != columns)
            throw DataError("line " + std::to_string(line_no) + ": expected " + std::to_string(columns) + " fields");
        fn(fields, line_no);
    }
}

std::ifstream open_in(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open " + path.string() + " for reading");
    return in;
}

std::ofstream open_out(const std::filesystem::path& path)
{
    std::ofstream out(path);
    if (!out)
        throw IoError("cannot open " + path.string() + " for writing");
    return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path)
{
    out.flush();
    if (!out)
        throw IoError("write failed on " + path.string());
}

}  // namespace

void write_dataset(std::ostream& out, const DataSet& data)
{
    out << "t,n,re,im\n" << std::setprecision(kDigits);
    for (const ComplexRecord& rec : data.records()) {
        const auto samples = rec.samples();
        for (std::size_t n = 0; n < samples.size(); ++n)
            out << rec.bin_index() << ',' << n + 1 << ',' << samples[n].real() << ',' << samples[n].imag() << '\n';
    }
}

DataSet read_dataset(std::istream& in)
{
    expect_header(in, "t,n,re,im");
    std::map<std::size_t, std::map<std::size_t, Complex>> cells;
    for_each_row(in, 4, [&](const std::vector<std::string_view>& f, std::size_t line_no) {
        const std::size_t t = parse_index(f[0], line_no);
        const std::size_t n = parse_index(f[1], line_no);
        const Complex y(parse_double(f[2], line_no), parse_double(f[3], line_no));
        if (!cells[t].emplace(n, y).second)
            throw DataError("line " + std::to_string(line_no) + ": duplicate sample");
    });
    if (cells.empty())
        throw DataError("dataset has no samples");

    const std::size_t bins = cells.rbegin()->first;
    if (cells.size() != bins)
        throw DataError("dataset bins must run 1..T without gaps");
    const std::size_t n_samples = cells.begin()->second.size();

    std::vector<ComplexRecord> records;
    records.reserve(bins);
    for (auto& [t, row] : cells) {
        if (row.size() != n_samples || row.rbegin()->first != n_samples)
            throw DataError("bin " + std::to_string(t) + " does not have samples 1..N");
        std::vector<Complex> samples;
        samples.reserve(n_samples);
        for (auto& [n, y] : row)
            samples.push_back(y);
        try {
            records.emplace_back(std::move(samples), t);
        } catch (const std::invalid_argument& e) {
            throw DataError(e.what());
        }
    }
    return DataSet(std::move(records));
}

void write_track(std::ostream& out, const FrequencyTrack& track)
{
    out << "t,nu\n" << std::setprecision(kDigits);
    for (std::size_t t = 0; t < track.size(); ++t)
        out << t + 1 << ',' << track[t] << '\n';
}

FrequencyTrack read_track(std::istream& in)
{
    expect_header(in, "t,nu");
    FrequencyTrack track;
    for_each_row(in, 2, [&](const std::vector<std::string_view>& f, std::size_t line_no) {
        const std::size_t t = parse_index(f[0], line_no);
        if (t != track.size() + 1)
            throw DataError("line " + std::to_string(line_no) + ": track rows must be in order");
        track.values.push_back(parse_double(f[1], line_no));
    });
    if (track.size() == 0)
        throw DataError("track has no rows");
    return track;
}

void write_hyperparameters(std::ostream& out, const Hyperparameters& hyper)
{
    out << std::setprecision(kDigits) << "r_a=" << hyper.r_a << "\nr_b=" << hyper.r_b << "\nr_nu=" << hyper.r_nu
        << '\n';
}

Hyperparameters read_hyperparameters(std::istream& in)
{
    std::optional<double> r_a, r_b, r_nu;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view view = trim(line);
        if (view.empty() || view.front() == '#')
            continue;
        const std::size_t eq = view.find('=');
        if (eq == std::string_view::npos)
            throw DataError("line " + std::to_string(line_no) + ": expected key=value");
        const std::string_view key = trim(view.substr(0, eq));
        const std::string_view value = trim(view.substr(eq + 1));
        if (key == "r_a")
            r_a = parse_double(value, line_no);
        else if (key == "r_b")
            r_b = parse_double(value, line_no);
        else if (key == "r_nu")
            r_nu = parse_double(value, line_no);
    }
    if (!r_a || !r_b || !r_nu)
        throw DataError("hyperparameter file must define r_a, r_b and r_nu");
    Hyperparameters hyper{*r_a, *r_b, *r_nu};
    if (!hyper.valid())
        throw DataError("hyperparameters must be positive");
    return hyper;
}

void write_dataset(const std::filesystem::path& path, const DataSet& data)
{
    auto out = open_out(path);
    write_dataset(out, data);
    finish(out, path);
}

DataSet read_dataset(const std::filesystem::path& path)
{
    auto in = open_in(path);
    return read_dataset(in);
}

void write_track(const std::filesystem::path& path, const FrequencyTrack& track)
{
    auto out = open_out(path);
    write_track(out, track);
    finish(out, path);
}

FrequencyTrack read_track(const std::filesystem::path& path)
{
    auto in = open_in(path);
    return read_track(in);
}

void write_hyperparameters(const std::filesystem::path& path, const Hyperparameters& hyper)
{
    auto out = open_out(path);
    write_hyperparameters(out, hyper);
    finish(out, path);
}

Hyperparameters read_hyperparameters(const std::filesystem::path& path)
{
    auto in = open_in(path);
    return read_hyperparameters(in);
}

}  // namespace freqtrack::io
