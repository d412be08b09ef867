#pragma once

// Run configuration for the command-line front end: parsing, validation and
// task execution. Kept in the library so tests can drive it directly.

#include "mmi/errors.hpp"
#include "mmi/minimax.hpp"
#include "mmi/report.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace mmi {

inline constexpr int kSchemaVersion = 1;

struct RunOptions {
    int grid = 1024;
    double tol = 1e-6;
    int max_iter = 500;
    double damping = 0.5;
    double ceiling = 1e8;
    int window = 50;
    double weight_tol = 1e-8;
    double quadrature_tol = 1e-10;
    std::uint64_t seed = 42;
    int samples = 100;
};

struct RunConfig {
    std::string task;
    IncrementSpec spec;
    std::vector<double> functional;
    std::optional<Density> signal, noise, observed;
    double beta = 1.0;
    int point = -1;
    std::optional<DensityClass> density_class;
    RunOptions options;
    json echo;  // the document as given
};

RunConfig parse_config(const json& doc, const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);

Density parse_density(const json& node, const IncrementSpec& spec, bool integrated_default,
                      const std::filesystem::path& base_dir = {});

ObservationModel build_model(const RunConfig& cfg);

// CSV "t,value" with an optional header line.
ObservationSeries read_series_csv(const std::filesystem::path& path);

// CSV rows for plotting: lambda, f, g (or p), |h|, arg h.
struct GridTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
    std::string to_csv() const;
};

struct RunResult {
    json report;
    GridTable grid;
};

RunResult run_task(const RunConfig& cfg, const std::optional<ObservationSeries>& series, bool verbose = false);

json error_block(const Error& e);

} // namespace mmi
