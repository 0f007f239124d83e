#pragma once

#include <filesystem>
#include <iosfwd>

#include "freqtrack/signal.hpp"

namespace freqtrack::io {

// Dataset CSV: header "t,n,re,im", one row per sample, 1-based t and n.
// Track CSV: header "t,nu". Hyperparameter file: "r_a=...", "r_b=...",
// "r_nu=..." lines; other keys are ignored on read.
//
// Stream readers throw DataError on malformed content; path overloads also
// throw IoError when the file cannot be opened.

void write_dataset(std::ostream& out, const DataSet& data);
DataSet read_dataset(std::istream& in);

void write_track(std::ostream& out, const FrequencyTrack& track);
FrequencyTrack read_track(std::istream& in);

void write_hyperparameters(std::ostream& out, const Hyperparameters& hyper);
Hyperparameters read_hyperparameters(std::istream& in);

void write_dataset(const std::filesystem::path& path, const DataSet& data);
DataSet read_dataset(const std::filesystem::path& path);
void write_track(const std::filesystem::path& path, const FrequencyTrack& track);
FrequencyTrack read_track(const std::filesystem::path& path);
void write_hyperparameters(const std::filesystem::path& path, const Hyperparameters& hyper);
Hyperparameters read_hyperparameters(const std::filesystem::path& path);

}  // namespace freqtrack::io
