// Batch front end: reads a JSON run config, runs the requested task, writes report.json (and grid.csv).
#include "mmi/config.hpp"
#include "mmi/errors.hpp"
#include "mmi/report.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

namespace fs = std::filesystem;

namespace {

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw mmi::IoError("cannot write " + path.string());
    out << text;
    if (!out) throw mmi::IoError("write failed for " + path.string());
}

int fail(const mmi::Error& e, const fs::path& out_dir) {
    const std::string block = mmi::dump_json(mmi::error_block(e));
    std::cerr << block;
    std::error_code ec;
    if (fs::is_directory(out_dir, ec)) {
        std::ofstream f(out_dir / "error.json", std::ios::binary);
        f << block;
    }
    return static_cast<int>(e.code());
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Minimax interpolation of sequences with stationary increments"};
    std::string config_path, series_path, out_dir = ".";
    bool grid_out = false, verbose = false;
    app.add_option("--config", config_path, "run configuration (JSON)")->required();
    app.add_option("--series", series_path, "observations as a two-column CSV t,value");
    app.add_option("--out", out_dir, "output directory for report.json and grid.csv");
    app.add_flag("--grid-out", grid_out, "also write grid.csv (lambda, densities, |h|, arg h)");
    app.add_flag("--verbose", verbose, "progress messages on stderr");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : static_cast<int>(mmi::ErrorCode::Validation);
    }

    const fs::path out = out_dir;
    try {
        std::error_code ec;
        fs::create_directories(out, ec);
        if (!fs::is_directory(out)) throw mmi::IoError("cannot create output directory " + out.string());
        const auto cfg = mmi::load_config(config_path);
        std::optional<mmi::ObservationSeries> series;
        if (!series_path.empty()) series = mmi::read_series_csv(series_path);
        const auto result = mmi::run_task(cfg, series, verbose);
        write_file(out / "report.json", mmi::dump_json(result.report));
        if (grid_out) write_file(out / "grid.csv", result.grid.to_csv());
        if (verbose) std::cerr << "[mmi] wrote " << (out / "report.json").string() << "\n";
        return 0;
    } catch (const mmi::Error& e) {
        return fail(e, out);
    } catch (const std::exception& e) {
        return fail(mmi::NumericalError(e.what(), "internal"), out);
    }
}
