// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the vegloss authors

#include <cmath>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>

#include "vegloss/cli.hpp"
#include "vegloss/geometry.hpp"
#include "vegloss/io.hpp"

using namespace vegloss;
using namespace vegloss::cli;
namespace fs = std::filesystem;

namespace {

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

fs::path scratch() {
    const fs::path dir = fs::temp_directory_path() / "vegloss_test_cli";
    fs::create_directories(dir);
    return dir;
}

std::string path_of(const char* name) { return (scratch() / name).string(); }

// Tx 21 m up, three rx on a line; both trees sit past the clear rx, so
// only the two far rays cross canopy.
geometry::SiteGeometry pipeline_site() {
    geometry::SiteGeometry site;
    site.tx = {0.0, 0.0, 21.0};
    site.rx_points = {{"clear", {60.0, 0.0, 2.0}},
                      {"veg1", {80.0, 0.0, 2.0}},
                      {"veg2", {90.0, 0.0, 2.0}}};
    site.trees = {{"t1", 70.0, 0.0, 7.0, 8.0, 9.0}, {"t2", 75.0, 0.0, 6.0, 8.0, 9.0}};
    return site;
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start < text.size()) {
        const std::size_t end = text.find('\n', start);
        if (end == std::string::npos) {
            out.push_back(text.substr(start));
            break;
        }
        out.push_back(text.substr(start, end - start));
        start = end + 1;
    }
    return out;
}

} // namespace

TEST_CASE("band specs expand to contiguous sub-bands") {
    const auto bands = parse_bands("6:18:1");
    REQUIRE(bands.size() == 12);
    CHECK(bands.front().f_low == 6e9);
    CHECK(bands.front().f_high == 7e9);
    CHECK(bands.back().f_low == 17e9);
    CHECK(bands.back().f_high == 18e9);

    const auto halves = parse_bands("6:7:0.5");
    REQUIRE(halves.size() == 2);
    CHECK(halves[1].f_low == 6.5e9);

    CHECK_THROWS_AS(parse_bands("6:18"), Error);
    CHECK_THROWS_AS(parse_bands("6:18:5"), Error);   // 12/5 bands is not integral
    CHECK_THROWS_AS(parse_bands("18:6:1"), Error);
    CHECK_THROWS_AS(parse_bands("a:b:c"), Error);
    CHECK_THROWS_AS(parse_bands("6:18:0"), Error);
}

TEST_CASE("error codes map to exit classes") {
    CHECK(exit_code_for(ErrorCode::ParseError) == 2);
    CHECK(exit_code_for(ErrorCode::IoError) == 2);
    CHECK(exit_code_for(ErrorCode::InvalidGeometry) == 2);
    CHECK(exit_code_for(ErrorCode::GridMismatch) == 2);
    CHECK(exit_code_for(ErrorCode::LosNotFound) == 3);
    CHECK(exit_code_for(ErrorCode::NoAlignment) == 3);
    CHECK(exit_code_for(ErrorCode::DegenerateFit) == 3);
    CHECK(exit_code_for(ErrorCode::OutOfBand) == 3);
    CHECK(exit_code_for(ErrorCode::InsufficientData) == 3);
}

TEST_CASE("depth command reports per-rx distance and depth") {
    const std::string site_path = path_of("site.json");
    io::write_site(pipeline_site(), site_path);

    DepthOptions opts;
    opts.site_path = site_path;
    opts.format = "csv";
    std::ostringstream out;
    cmd_depth(opts, out);
    const auto lines = split_lines(out.str());
    REQUIRE(lines.size() == 4);
    CHECK(lines[0] == "rx_id,distance_m,veg_depth_m");
    CHECK(lines[1].rfind("clear,", 0) == 0);
    CHECK(lines[2].rfind("veg1,", 0) == 0);
    CHECK(lines[3].rfind("veg2,", 0) == 0);

    // Values agree with the geometry module.
    const geometry::SiteGeometry site = pipeline_site();
    const auto fields = [](const std::string& line) {
        std::vector<std::string> f;
        std::size_t start = 0;
        while (true) {
            const std::size_t c = line.find(',', start);
            if (c == std::string::npos) {
                f.push_back(line.substr(start));
                return f;
            }
            f.push_back(line.substr(start, c - start));
            start = c + 1;
        }
    };
    const auto veg1 = fields(lines[2]);
    CHECK(io::parse_double(veg1[1], "t") == geometry::tx_rx_distance(site, "veg1"));
    CHECK(io::parse_double(veg1[2], "t") == geometry::vegetation_depth(site, "veg1"));

    opts.format = "nope";
    CHECK_THROWS_AS(cmd_depth(opts, out), Error);
}

TEST_CASE("predict command composes the budget for each bound") {
    PredictOptions opts;
    opts.f_ghz = 10.5;
    opts.distance_m = 100.0;
    opts.veg_depth_m = 5.0;
    opts.tx_power_dbm = 30.0;
    opts.bound = propagation::Bound::High;
    opts.format = "csv";
    std::ostringstream out;
    cmd_predict(opts, out);
    const auto lines = split_lines(out.str());
    REQUIRE(lines.size() == 2);

    std::vector<std::string> f;
    std::size_t start = 0;
    while (true) {
        const std::size_t c = lines[1].find(',', start);
        if (c == std::string::npos) {
            f.push_back(lines[1].substr(start));
            break;
        }
        f.push_back(lines[1].substr(start, c - start));
        start = c + 1;
    }
    REQUIRE(f.size() == 9);
    const auto& model = propagation::builtin_model();
    CHECK(near(io::parse_double(f[3], "t"), propagation::friis_db(10.5e9, 100.0), 1e-12));
    CHECK(near(io::parse_double(f[5], "t"), 1.68 * 5.0, 1e-12));
    CHECK(f[7] == "high");
    const double want = 30.0 + propagation::friis_db(10.5e9, 100.0) -
                        propagation::predict_loss(model, 10.5e9, 5.0, propagation::Bound::High);
    CHECK(near(io::parse_double(f[8], "t"), want, 1e-12));

    PredictOptions bad = opts;
    bad.f_ghz = 25.0;
    try {
        std::ostringstream sink;
        cmd_predict(bad, sink);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::OutOfBand);
    }
}

TEST_CASE("synth, process, and fit chain end to end") {
    const fs::path dir = scratch() / "pipeline";
    fs::create_directories(dir);
    io::write_site(pipeline_site(), (dir / "site.json").string());
    io::write_file((dir / "scenario.json").string(), R"({
  "site": "site.json",
  "seed": 11,
  "rolloff_db_per_10deg": 3,
  "system_response": {"gain_db": 2, "phase_rad": 0.4, "ripple_db": 1, "ripple_cycles": 3},
  "orientation_grid": {"az_min": -10, "az_max": 10, "az_step": 10, "el_min": 0, "el_max": 0, "el_step": 10}
})");

    SynthOptions synth_opts;
    synth_opts.scenario_path = (dir / "scenario.json").string();
    synth_opts.out_dir = (dir / "dataset").string();
    std::ostringstream synth_out;
    cmd_synth(synth_opts, synth_out);
    CHECK(fs::exists(dir / "dataset" / "ota.scan"));
    CHECK(fs::exists(dir / "dataset" / "manifest.json"));
    CHECK(fs::exists(dir / "dataset" / "veg1"));
    CHECK(synth_out.str().find("alpha_mid") != std::string::npos);

    ProcessOptions proc;
    proc.measurements_dir = (dir / "dataset").string();
    proc.cal_path = (dir / "dataset" / "ota.scan").string();
    proc.site_path = (dir / "site.json").string();
    proc.out_path = (dir / "samples.csv").string();
    proc.bands = parse_bands("6:8:1");
    proc.format = "csv";
    std::ostringstream proc_out;
    cmd_process(proc, proc_out);

    const std::vector<io::SampleRow> rows = io::read_samples(proc.out_path);
    REQUIRE(rows.size() == 6); // 3 rx x 2 bands
    const geometry::SiteGeometry site = pipeline_site();
    for (const io::SampleRow& row : rows) {
        REQUIRE(row.ok);
        CHECK(row.orientation.azimuth_deg == 0.0); // boresight wins
        const double alpha = row.band.f_low == 6e9 ? 1.26 : 1.50;
        const double depth = geometry::vegetation_depth(site, row.rx_id);
        CHECK(near(row.l_veg_db, alpha * depth, 0.05));
        CHECK(near(row.veg_depth_m, depth, 1e-9));
    }

    FitOptions fit;
    fit.samples_path = proc.out_path;
    fit.out_model = (dir / "model.csv").string();
    fit.out_report = (dir / "report.csv").string();
    fit.out_residuals = (dir / "residuals.csv").string();
    fit.format = "csv";
    std::ostringstream fit_out;
    cmd_fit(fit, fit_out);

    const propagation::VegLossModel fitted = io::read_model(fit.out_model);
    REQUIRE(fitted.entries.size() == 2);
    CHECK(near(fitted.entries[0].alpha, 1.26, 0.02));
    CHECK(near(fitted.entries[1].alpha, 1.50, 0.02));
    CHECK(fs::exists(fit.out_report));
    CHECK(fs::exists(fit.out_residuals));
    const std::string report = io::read_text_file(fit.out_report);
    CHECK(report.find("n_samples") != std::string::npos);
    CHECK(report.find("# bounds_method: confidence_interval") != std::string::npos);
}

TEST_CASE("run reports usage and input errors without crashing") {
    const char* missing[] = {"vegloss", "depth", "--site", "/nonexistent/site.json"};
    CHECK(run(4, missing) == 2);
    const char* bad_sub[] = {"vegloss", "frobnicate"};
    CHECK(run(2, bad_sub) == 2);
    const char* no_sub[] = {"vegloss"};
    CHECK(run(1, no_sub) == 2);
}
