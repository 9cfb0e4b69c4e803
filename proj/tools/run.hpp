#pragma once

#include "io.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fel::cli {

using io::json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitBudget = 3;

struct RunConfig {
    std::string command;
    std::vector<json> inputs;
    std::map<std::string, double> params;
    std::map<std::string, json> options;  ///< family, span, grid, diagnostics
    std::string out;                      ///< empty: stdout
    std::string format = "csv";
    std::uint64_t budget = 0;  ///< 0: FEL_BUDGET or the library default
    int threads = 1;

    bool has(const std::string& k) const { return params.count(k) > 0; }
    double get(const std::string& k) const { return params.at(k); }
    int geti(const std::string& k) const { return static_cast<int>(params.at(k)); }
    std::uint64_t effective_budget() const;
    /// Everything that determines the output; thread count excluded.
    json to_json() const;
};

const std::vector<std::string>& commands();

/// Reads a JSON run file with keys command, inputs, params, options, out, format, budget, threads.
RunConfig load_config(const std::string& path);

std::vector<std::string> validate(const RunConfig& cfg);

struct RunResult {
    int status = kExitOk;
    std::string body;      ///< rendered output
    json manifest;         ///< written beside file outputs
    std::string message;   ///< diagnostic for non-zero status
};

/// Validates, runs and renders; never throws.
RunResult run(const RunConfig& cfg);

/// run() plus writing the output file and its manifest sidecar.
int execute(const RunConfig& cfg);

}  // namespace fel::cli
