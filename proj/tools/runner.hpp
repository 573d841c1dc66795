#pragma once

#include <string>
#include <vector>

#include "config.hpp"
#include "json.hpp"

namespace floquet::cli {

// Parses argv, runs one subcommand and returns the process exit code:
// 0 on success, 2 on invalid input, 1 on numerical or output failure.
int run(int argc, char** argv);

// Runs a subcommand on a finalized config and returns the report text.
std::string run_subcommand(const std::string& name, RunConfig& cfg, std::string* summary);

nlohmann::json verify_suite(const RunConfig& cfg);

extern const std::vector<std::string> kSuites;

}  // namespace floquet::cli
