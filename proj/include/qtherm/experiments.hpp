#pragma once

#include <map>
#include <string>
#include <vector>

#include "qtherm/config.hpp"

namespace qtherm::cli {

// Column-oriented numeric table; every column carries a unit annotation
// ("1" for dimensionless quantities).
struct Table {
    std::vector<std::string> columns;
    std::vector<std::string> units;
    std::vector<std::vector<double>> rows;
};

struct ResultSet {
    std::string experiment;
    std::string config_normalized;
    std::uint64_t hash = 0;
    std::string version;
    std::map<std::string, Table> tables;
    std::map<std::string, double> diagnostics;
};

// Runs one experiment; deterministic given the config seed.  Module errors
// propagate wrapped with experiment context.
ResultSet run_experiment(const ExperimentConfig& cfg);

// One-line description for --list.
std::string experiment_blurb(const std::string& name);

// Writes one CSV per table (RFC-4180, '.' decimal, LF endings) plus a JSON
// metadata/diagnostics sidecar, each atomically (temp file + rename).
// Returns the written paths.
std::vector<std::string> write_outputs(const ResultSet& r, const std::string& dir);

// Largest diagnostic whose name ends in "_defect" (0 when none); the
// assertion mode of the CLI compares this against the run tolerance.
double worst_defect(const ResultSet& r);

} // namespace qtherm::cli
