#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "rt/report.hpp"
#include "rt/scenario.hpp"

namespace rt {

struct RunOptions {
    std::string subcommand;
    std::string scenario_path;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;
    double tolerance_scale = 1.0;
    int threads = 1;
    bool strict = false;
};

// Extra CSV outputs produced by sweeps, keyed by file name.
struct Artifact {
    std::string file;
    std::string content;
};

const std::vector<std::string>& subcommands();

// Runs one subcommand against a loaded scenario.
Report run_checks(const Scenario& s, const RunOptions& opt, std::vector<Artifact>& artifacts);

// Loads the scenario, runs, writes <out-dir>/<subcommand>_report.{txt,csv} plus sweep files and
// echoes the text report. Exit status: 0 all checks pass, 1 a check or numerical step failed,
// 2 parse error, 3 validation error.
int run(const RunOptions& opt, std::ostream& out, std::ostream& err);

}  // namespace rt
