// Experiment dispatch, tabular output, manifests and run comparison

#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "spinmem/cli/config.hpp"

namespace spinmem::cli {

inline constexpr const char* tool_version = "0.1.0";

// Column-oriented table written as '#' comments, one tab-separated header row and
// one row per grid point. The first `grid_columns` columns hold the sweep grid.
struct Table {
    std::vector<std::string> comments;
    std::vector<std::string> columns;
    std::size_t grid_columns{1};
    std::vector<std::vector<double>> rows;

    void write(const std::filesystem::path& path) const;
    static Table read(const std::filesystem::path& path);
};

struct RunManifest {
    std::string config_hash;
    std::string version;
    std::string timestamp;  // UTC, ISO 8601
    std::vector<std::string> outputs;
    double wall_seconds{0.0};
    nlohmann::json config;
};

// Runs the experiment and writes the tables plus manifest.json into out_dir.
// Numerical errors are rethrown with the experiment name prepended.
RunManifest run(const ExperimentConfig& config, const std::filesystem::path& out_dir, unsigned jobs = 1);

struct ColumnDiff {
    std::string file;
    std::string column;
    double max_abs_diff;
};

struct CompareReport {
    std::vector<ColumnDiff> columns;
    double tolerance;

    bool passed() const;
    std::string text() const;
};

// Compares every data file present in both runs. Throws schema_mismatch when the
// file sets, headers, row counts or grid columns differ.
CompareReport compare(const std::filesystem::path& a, const std::filesystem::path& b, double tolerance);

struct CatalogEntry {
    std::string name;
    std::string figure;
    std::string required;
    std::string description;
};

const std::vector<CatalogEntry>& experiment_catalog();
std::string list_experiments();

}  // namespace spinmem::cli
