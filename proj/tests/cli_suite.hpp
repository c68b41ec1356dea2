#pragma once

// Runs the edsfrey executable over a fixed list of commands with a fresh
// cache directory, collecting each JSON certificate and exit status.

#include "edsfrey/io.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace cli_suite {

struct Outcome {
    int status = -1;
    edsfrey::Json certificate;   // null when none was written
};

int run(const std::string& args, const std::filesystem::path& cache_dir, const std::filesystem::path& output);

// Name -> outcome for every command of the suite.
std::map<std::string, Outcome> run_suite(const std::filesystem::path& workdir);

std::string curve(const std::string& name);

}  // namespace cli_suite
