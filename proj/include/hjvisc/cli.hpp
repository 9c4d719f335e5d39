#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hjvisc/io.hpp"

namespace hjvisc::cli {

enum ExitCode : int { kPass = 0, kFail = 1, kInputError = 2 };

const std::vector<std::string>& task_names();

/// One invocation. `doc` is the problem document; command-line values, when
/// set, take precedence over the corresponding document keys.
struct Options {
    std::string task;
    io::Json doc = io::Json::object();
    std::string source = "<doc>";

    std::string out_path;
    std::string csv_path;
    std::string svg_path;
    std::string trace_path;

    std::optional<std::uint64_t> seed;
    std::optional<std::string> phi;
    std::optional<std::string> lower_path;
    std::optional<std::string> upper_path;
    std::optional<std::size_t> nodes;
    std::optional<double> residual_tol;
    std::optional<std::size_t> max_iters;
};

/// Runs one task, writes the text report to `out` and diagnostics to `err`,
/// and writes the requested artifact files. Returns an ExitCode.
int run(const Options& opts, std::ostream& out, std::ostream& err);

/// Everything a task produces; run() writes the parts whose paths are set.
struct Outcome {
    int code = kPass;
    std::string report;
    std::string diagnostics;
    io::Json json = io::Json::object();
    std::string csv;
    std::string svg;
    io::Json trace;
};

Outcome run_to_memory(const Options& opts);

}  // namespace hjvisc::cli
