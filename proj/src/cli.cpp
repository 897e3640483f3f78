// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the vegloss authors

#include "vegloss/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "vegloss/geometry.hpp"
#include "vegloss/synth.hpp"

namespace vegloss::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string fixed4(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

std::string band_token(const propagation::SubBand& band) {
    return io::format_double(band.f_low / 1e9) + "-" + io::format_double(band.f_high / 1e9);
}

// Left-pads cells to per-column width; plain and predictable for eyeballing.
std::string render_table(const std::vector<std::string>& header,
                         const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> width(header.size());
    for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
    }
    std::string out;
    const auto emit = [&](const std::vector<std::string>& row) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c > 0) out += "  ";
            out += std::string(width[c] - row[c].size(), ' ') + row[c];
        }
        out += "\n";
    };
    emit(header);
    for (const auto& row : rows) emit(row);
    return out;
}

void require_format(const std::string& format) {
    if (format != "table" && format != "csv" && format != "json") {
        throw Error(ErrorCode::InvalidInput, "format must be table, csv, or json");
    }
}

std::vector<propagation::SubBand> default_bands() {
    return parse_bands("6:18:1");
}

struct DepthRow {
    std::string rx_id;
    double distance = 0.0;
    double depth = 0.0;
};

std::vector<DepthRow> compute_depths(const geometry::SiteGeometry& site) {
    std::vector<DepthRow> rows;
    for (const geometry::RxPoint& rx : site.rx_points) {
        rows.push_back({rx.id, geometry::tx_rx_distance(site, rx.id),
                        geometry::vegetation_depth(site, rx.id)});
    }
    std::sort(rows.begin(), rows.end(),
              [](const DepthRow& a, const DepthRow& b) { return a.rx_id < b.rx_id; });
    return rows;
}

std::vector<fs::path> sorted_entries(const fs::path& dir, bool want_dirs, const std::string& ext) {
    if (!fs::is_directory(dir)) {
        throw Error(ErrorCode::IoError, dir.string() + " is not a directory");
    }
    std::vector<fs::path> out;
    for (const fs::directory_entry& entry : fs::directory_iterator(dir)) {
        if (want_dirs && entry.is_directory()) out.push_back(entry.path());
        if (!want_dirs && entry.is_regular_file() && entry.path().extension() == ext) {
            out.push_back(entry.path());
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

json manifest_json(const synth::SyntheticScenario& scn) {
    json m;
    for (const propagation::VegLossEntry& e : scn.truth_model.entries) {
        m["alpha_mid"][band_token(e.band)] = e.alpha;
        m["bands"].push_back(band_token(e.band));
    }
    for (const geometry::RxPoint& rx : scn.site.rx_points) {
        m["depths_m"][rx.id] = geometry::vegetation_depth(scn.site, rx.id);
        m["distances_m"][rx.id] = geometry::tx_rx_distance(scn.site, rx.id);
    }
    m["d_ota_m"] = scn.d_ota;
    m["rolloff_db_per_10deg"] = scn.rolloff_db_per_10deg;
    m["seed"] = scn.seed;
    if (std::isfinite(scn.snr_db)) {
        m["snr_db"] = scn.snr_db;
    }
    m["orientation_grid"] = {{"az_min", scn.grid.az_min}, {"az_max", scn.grid.az_max},
                             {"az_step", scn.grid.az_step}, {"el_min", scn.grid.el_min},
                             {"el_max", scn.grid.el_max}, {"el_step", scn.grid.el_step}};
    return m;
}

} // namespace

std::vector<propagation::SubBand> parse_bands(const std::string& spec) {
    const auto fail = [&]() {
        throw Error(ErrorCode::InvalidInput,
                    "band spec '" + spec + "' must be start:stop:step in GHz with an integral band count");
    };
    std::vector<double> parts;
    std::size_t start = 0;
    while (parts.size() < 4) {
        const std::size_t colon = spec.find(':', start);
        const std::string token =
            colon == std::string::npos ? spec.substr(start) : spec.substr(start, colon - start);
        try {
            parts.push_back(io::parse_double(token, "band spec"));
        } catch (const Error&) {
            fail();
        }
        if (colon == std::string::npos) break;
        start = colon + 1;
    }
    if (parts.size() != 3) fail();
    const double lo = parts[0], hi = parts[1], step = parts[2];
    if (!(step > 0.0) || !(hi > lo)) fail();
    const double count = (hi - lo) / step;
    const long long n = std::llround(count);
    if (n < 1 || std::abs(count - static_cast<double>(n)) > 1e-9) fail();
    std::vector<propagation::SubBand> bands;
    for (long long i = 0; i < n; ++i) {
        const double f_low = lo + static_cast<double>(i) * step;
        bands.push_back(propagation::SubBand{f_low * 1e9, (f_low + step) * 1e9});
    }
    return bands;
}

void cmd_depth(const DepthOptions& opts, std::ostream& out) {
    require_format(opts.format);
    const geometry::SiteGeometry site = io::read_site(opts.site_path);
    const std::vector<DepthRow> rows = compute_depths(site);

    std::string text;
    if (opts.format == "csv") {
        text = "rx_id,distance_m,veg_depth_m\n";
        for (const DepthRow& r : rows) {
            text += r.rx_id + "," + io::format_double(r.distance) + "," +
                    io::format_double(r.depth) + "\n";
        }
    } else if (opts.format == "json") {
        json doc = json::array();
        for (const DepthRow& r : rows) {
            doc.push_back({{"rx_id", r.rx_id}, {"distance_m", r.distance}, {"veg_depth_m", r.depth}});
        }
        text = doc.dump(2) + "\n";
    } else {
        std::vector<std::vector<std::string>> cells;
        for (const DepthRow& r : rows) {
            cells.push_back({r.rx_id, fixed4(r.distance), fixed4(r.depth)});
        }
        text = render_table({"rx_id", "distance_m", "veg_depth_m"}, cells);
    }
    out << text;
}

void cmd_process(const ProcessOptions& opts, std::ostream& out) {
    require_format(opts.format);
    const geometry::SiteGeometry site = io::read_site(opts.site_path);
    const sounder::CalibrationScan cal = io::read_calibration(opts.cal_path);
    const std::vector<propagation::SubBand> bands =
        opts.bands.empty() ? default_bands() : opts.bands;

    sounder::ProcessingOptions proc;
    proc.window = opts.window;
    proc.threshold_offset_db = opts.threshold_db;
    proc.tau_gate = opts.tau_gate_us < 0.0 ? -1.0 : opts.tau_gate_us * 1e-6;

    const std::vector<fs::path> rx_dirs = sorted_entries(opts.measurements_dir, true, "");
    if (rx_dirs.empty()) {
        throw Error(ErrorCode::InvalidInput,
                    "no measurement sets (rx subdirectories) under " + opts.measurements_dir);
    }

    std::vector<io::SampleRow> rows;
    std::set<std::string> seen;
    for (const fs::path& rx_dir : rx_dirs) {
        const std::vector<fs::path> files = sorted_entries(rx_dir, false, ".scan");
        if (files.empty()) {
            throw Error(ErrorCode::InvalidInput, "no .scan files under " + rx_dir.string());
        }
        sounder::DirectionalScanSet set;
        for (const fs::path& file : files) {
            set.scans.push_back(io::read_measurement(file.string()));
        }
        sounder::validate_scan_set(set);

        const std::string rx_id = set.scans.front().rx_id;
        if (!seen.insert(rx_id).second) {
            throw Error(ErrorCode::InvalidInput, "duplicate measurement set for rx " + rx_id);
        }
        const double distance = geometry::tx_rx_distance(site, rx_id);
        if (std::abs(distance - set.scans.front().distance) > 1e-6) {
            throw Error(ErrorCode::InvalidInput,
                        "rx " + rx_id + ": sweep distance disagrees with the site geometry");
        }
        const double depth = geometry::vegetation_depth(site, rx_id);

        for (const propagation::SubBand& band : bands) {
            io::SampleRow row;
            row.rx_id = rx_id;
            row.band = band;
            row.veg_depth_m = depth;
            row.p_friis_db = propagation::friis_db(band.center(), distance);
            try {
                const sounder::AlignmentResult best =
                    sounder::select_best_alignment(set, cal, band, proc);
                row.orientation = best.orientation;
                row.p_los_db = best.p_los_db;
                row.l_veg_db = propagation::excess_loss(row.p_friis_db, best.p_los_db);
                row.ok = true;
            } catch (const Error& e) {
                if (e.code() != ErrorCode::NoAlignment) throw;
                row.ok = false;
                const double nan = std::nan("");
                row.orientation = {nan, nan};
                row.p_los_db = nan;
                row.l_veg_db = nan;
            }
            rows.push_back(row);
        }
    }
    std::sort(rows.begin(), rows.end(), [](const io::SampleRow& a, const io::SampleRow& b) {
        if (a.rx_id != b.rx_id) return a.rx_id < b.rx_id;
        return a.band.f_low < b.band.f_low;
    });

    std::string text;
    if (opts.format == "csv") {
        text = io::samples_to_csv(rows);
    } else if (opts.format == "json") {
        json doc = json::array();
        for (const io::SampleRow& r : rows) {
            json item = {{"rx_id", r.rx_id},
                         {"band", band_token(r.band)},
                         {"p_friis_db", r.p_friis_db},
                         {"veg_depth_m", r.veg_depth_m},
                         {"status", r.ok ? "ok" : "no_los"}};
            if (r.ok) {
                item["orientation_az"] = r.orientation.azimuth_deg;
                item["orientation_el"] = r.orientation.elevation_deg;
                item["p_los_db"] = r.p_los_db;
                item["l_veg_db"] = r.l_veg_db;
            } else {
                item["orientation_az"] = nullptr;
                item["orientation_el"] = nullptr;
                item["p_los_db"] = nullptr;
                item["l_veg_db"] = nullptr;
            }
            doc.push_back(item);
        }
        text = doc.dump(2) + "\n";
    } else {
        std::vector<std::vector<std::string>> cells;
        for (const io::SampleRow& r : rows) {
            cells.push_back({r.rx_id, band_token(r.band),
                             r.ok ? fixed4(r.orientation.azimuth_deg) : "-",
                             r.ok ? fixed4(r.orientation.elevation_deg) : "-",
                             r.ok ? fixed4(r.p_los_db) : "-", fixed4(r.p_friis_db),
                             r.ok ? fixed4(r.l_veg_db) : "-", fixed4(r.veg_depth_m),
                             r.ok ? "ok" : "no_los"});
        }
        text = render_table({"rx_id", "band", "az", "el", "p_los_db", "p_friis_db", "l_veg_db",
                             "veg_depth_m", "status"},
                            cells);
    }

    if (!opts.out_path.empty()) {
        io::write_samples(rows, opts.out_path);
    }
    out << text;
}

void cmd_fit(const FitOptions& opts, std::ostream& out) {
    require_format(opts.format);
    if (opts.out_model.empty()) {
        throw Error(ErrorCode::InvalidInput, "an output model path is required");
    }
    const std::vector<io::SampleRow> all_rows = io::read_samples(opts.samples_path);
    std::vector<io::SampleRow> rows;
    for (const io::SampleRow& r : all_rows) {
        if (r.ok) rows.push_back(r);
    }
    if (rows.empty()) {
        throw Error(ErrorCode::InvalidInput, opts.samples_path + " has no usable samples");
    }

    std::vector<propagation::SubBand> bands = opts.bands;
    if (bands.empty()) {
        for (const io::SampleRow& r : rows) {
            if (std::find(bands.begin(), bands.end(), r.band) == bands.end()) bands.push_back(r.band);
        }
        std::sort(bands.begin(), bands.end(),
                  [](const propagation::SubBand& a, const propagation::SubBand& b) {
                      return a.f_low < b.f_low;
                  });
    }

    std::vector<fitting::FitResult> fits;
    std::vector<std::vector<fitting::DepthLossSample>> fit_samples;
    std::vector<std::string> footer;
    for (const propagation::SubBand& band : bands) {
        std::vector<fitting::DepthLossSample> samples;
        for (const io::SampleRow& r : rows) {
            if (r.band == band) {
                samples.push_back({r.rx_id, r.band, r.veg_depth_m, r.l_veg_db});
            }
        }
        if (samples.empty()) {
            footer.push_back("omitted band " + band_token(band) + ": no samples");
            continue;
        }
        fitting::FitResult fit = fitting::fit_origin_constrained(samples);
        std::size_t positive = 0;
        for (const fitting::DepthLossSample& s : samples) {
            if (s.d_veg > 0.0) ++positive;
        }
        if (positive >= 2) {
            const auto [lo, hi] =
                fitting::slope_bounds(samples, fit.alpha, opts.confidence, opts.method);
            fit.alpha_min = lo;
            fit.alpha_max = hi;
        } else {
            footer.push_back("band " + band_token(band) +
                             ": bounds need two positive-depth samples, interval collapsed");
        }
        fits.push_back(fit);
        fit_samples.push_back(std::move(samples));
    }
    if (fits.empty()) {
        throw Error(ErrorCode::InvalidInput, "no requested band has samples");
    }

    std::vector<std::string> warnings;
    const propagation::VegLossModel model = fitting::build_model(fits, &warnings);
    footer.insert(footer.end(), warnings.begin(), warnings.end());

    const std::string method_label = opts.method == fitting::BoundsMethod::ConfidenceInterval
                                         ? "confidence_interval level=" + io::format_double(opts.confidence)
                                         : "empirical";

    io::write_model(model, opts.out_model);

    if (!opts.out_report.empty()) {
        std::string report = "f_low_ghz,f_high_ghz,alpha_min,alpha,alpha_max,n_samples\n";
        for (const fitting::FitResult& fit : fits) {
            report += io::format_double(fit.band.f_low / 1e9) + "," +
                      io::format_double(fit.band.f_high / 1e9) + "," + io::format_double(fit.alpha_min) +
                      "," + io::format_double(fit.alpha) + "," + io::format_double(fit.alpha_max) + "," +
                      std::to_string(fit.n) + "\n";
        }
        report += "# bounds_method: " + method_label + "\n";
        for (const std::string& line : footer) {
            report += "# " + line + "\n";
        }
        io::write_file(opts.out_report, report);
    }

    if (!opts.out_residuals.empty()) {
        std::string res = "rx_id,band,veg_depth_m,l_veg_db,fitted_db,residual_db\n";
        for (std::size_t i = 0; i < fits.size(); ++i) {
            for (const fitting::DepthLossSample& s : fit_samples[i]) {
                const double fitted = fits[i].alpha * s.d_veg;
                res += s.rx_id + "," + band_token(s.band) + "," + io::format_double(s.d_veg) + "," +
                       io::format_double(s.l_veg_db) + "," + io::format_double(fitted) + "," +
                       io::format_double(s.l_veg_db - fitted) + "\n";
            }
        }
        io::write_file(opts.out_residuals, res);
    }

    std::string text;
    if (opts.format == "csv") {
        text = io::model_to_csv(model);
    } else if (opts.format == "json") {
        json doc;
        doc["bounds_method"] = method_label;
        doc["model"] = json::array();
        for (std::size_t i = 0; i < fits.size(); ++i) {
            doc["model"].push_back({{"band", band_token(fits[i].band)},
                                    {"alpha_min", model.entries[i].alpha_min},
                                    {"alpha", model.entries[i].alpha},
                                    {"alpha_max", model.entries[i].alpha_max},
                                    {"n_samples", fits[i].n}});
        }
        doc["notes"] = footer;
        text = doc.dump(2) + "\n";
    } else {
        std::vector<std::vector<std::string>> cells;
        for (std::size_t i = 0; i < fits.size(); ++i) {
            cells.push_back({band_token(fits[i].band), fixed4(model.entries[i].alpha_min),
                             fixed4(model.entries[i].alpha), fixed4(model.entries[i].alpha_max),
                             std::to_string(fits[i].n)});
        }
        text = render_table({"band", "alpha_min", "alpha", "alpha_max", "n"}, cells);
        text += "bounds: " + method_label + "\n";
        for (const std::string& line : footer) {
            text += "note: " + line + "\n";
        }
    }
    out << text;
}

void cmd_predict(const PredictOptions& opts, std::ostream& out) {
    require_format(opts.format);
    const propagation::VegLossModel model =
        opts.model_path.empty() ? propagation::builtin_model() : io::read_model(opts.model_path);

    propagation::LinkBudgetInput input;
    input.f = opts.f_ghz * 1e9;
    input.distance = opts.distance_m;
    input.veg_depth = opts.veg_depth_m;
    input.tx_power_dbm = opts.tx_power_dbm;
    input.tx_gain_dbi = opts.tx_gain_dbi;
    input.rx_gain_dbi = opts.rx_gain_dbi;

    const double received_mid = propagation::link_budget(input, model);
    const double loss_low = propagation::predict_loss(model, input.f, input.veg_depth,
                                                      propagation::Bound::Low);
    const double loss_mid = propagation::predict_loss(model, input.f, input.veg_depth,
                                                      propagation::Bound::Mid);
    const double loss_high = propagation::predict_loss(model, input.f, input.veg_depth,
                                                       propagation::Bound::High);
    const double loss_bound = opts.bound == propagation::Bound::Low
                                  ? loss_low
                                  : (opts.bound == propagation::Bound::High ? loss_high : loss_mid);
    const double friis = propagation::friis_db(input.f, input.distance);
    const double received = received_mid + loss_mid - loss_bound;
    const char* bound_name = opts.bound == propagation::Bound::Low
                                 ? "low"
                                 : (opts.bound == propagation::Bound::High ? "high" : "mid");

    std::string text;
    if (opts.format == "csv") {
        text =
            "f_ghz,distance_m,veg_depth_m,friis_db,veg_loss_low_db,veg_loss_mid_db,veg_loss_high_db,"
            "bound,received_dbm\n";
        text += io::format_double(opts.f_ghz) + "," + io::format_double(opts.distance_m) + "," +
                io::format_double(opts.veg_depth_m) + "," + io::format_double(friis) + "," +
                io::format_double(loss_low) + "," + io::format_double(loss_mid) + "," +
                io::format_double(loss_high) + "," + bound_name + "," + io::format_double(received) +
                "\n";
    } else if (opts.format == "json") {
        const json doc = {{"f_ghz", opts.f_ghz},
                          {"distance_m", opts.distance_m},
                          {"veg_depth_m", opts.veg_depth_m},
                          {"friis_db", friis},
                          {"veg_loss_low_db", loss_low},
                          {"veg_loss_mid_db", loss_mid},
                          {"veg_loss_high_db", loss_high},
                          {"bound", bound_name},
                          {"received_dbm", received}};
        text = doc.dump(2) + "\n";
    } else {
        std::vector<std::vector<std::string>> cells = {
            {"f_ghz", fixed4(opts.f_ghz)},
            {"distance_m", fixed4(opts.distance_m)},
            {"veg_depth_m", fixed4(opts.veg_depth_m)},
            {"friis_db", fixed4(friis)},
            {"veg_loss_low_db", fixed4(loss_low)},
            {"veg_loss_mid_db", fixed4(loss_mid)},
            {"veg_loss_high_db", fixed4(loss_high)},
            {"bound", bound_name},
            {"received_dbm", fixed4(received)},
        };
        text = render_table({"quantity", "value"}, cells);
    }
    out << text;
}

void cmd_synth(const SynthOptions& opts, std::ostream& out) {
    const synth::SyntheticScenario scn = io::read_scenario(opts.scenario_path);
    const json manifest = manifest_json(scn);

    std::error_code ec;
    fs::create_directories(opts.out_dir, ec);
    if (ec) {
        throw Error(ErrorCode::IoError, "cannot create " + opts.out_dir + ": " + ec.message());
    }

    io::write_calibration(synth::synthesize_ota(scn), (fs::path(opts.out_dir) / "ota.scan").string());

    for (const geometry::RxPoint& rx : scn.site.rx_points) {
        const fs::path rx_dir = fs::path(opts.out_dir) / rx.id;
        fs::create_directories(rx_dir, ec);
        if (ec) {
            throw Error(ErrorCode::IoError, "cannot create " + rx_dir.string() + ": " + ec.message());
        }
        for (const synth::Orientation& orientation : scn.grid.orientations()) {
            const std::string name = "az" + io::format_double(orientation.azimuth_deg) + "_el" +
                                     io::format_double(orientation.elevation_deg) + ".scan";
            io::write_measurement(synth::synthesize_measurement(scn, rx.id, orientation),
                                  (rx_dir / name).string());
        }
    }

    const std::string text = manifest.dump(2) + "\n";
    io::write_file((fs::path(opts.out_dir) / "manifest.json").string(), text);
    out << text;
}

int exit_code_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::ParseError:
        case ErrorCode::IoError:
        case ErrorCode::NotFound:
        case ErrorCode::InvalidInput:
        case ErrorCode::InvalidGeometry:
        case ErrorCode::GridMismatch:
        case ErrorCode::InvalidGate:
            return 2;
        case ErrorCode::DegenerateFit:
        case ErrorCode::OutOfBand:
        case ErrorCode::LosNotFound:
        case ErrorCode::NoAlignment:
        case ErrorCode::DegenerateCalibration:
        case ErrorCode::InsufficientData:
        case ErrorCode::BandCoverageError:
            return 3;
    }
    return 4;
}

int run(int argc, const char* const* argv) {
    CLI::App app{"vegetation excess-loss measurement-to-model toolkit (6-18 GHz)"};
    app.require_subcommand(1);

    DepthOptions depth;
    CLI::App* cmd_d = app.add_subcommand("depth", "vegetation depth and distance per rx point");
    cmd_d->add_option("--site", depth.site_path, "site geometry JSON")->required();
    cmd_d->add_option("--format", depth.format, "table|csv|json");

    ProcessOptions process;
    std::string process_bands;
    std::string process_window = "rect";
    CLI::App* cmd_p = app.add_subcommand("process", "sweeps to per-band excess-loss samples");
    cmd_p->add_option("--measurements", process.measurements_dir, "directory of rx sweep sets")->required();
    cmd_p->add_option("--cal", process.cal_path, "OTA calibration sweep file")->required();
    cmd_p->add_option("--site", process.site_path, "site geometry JSON")->required();
    cmd_p->add_option("--out", process.out_path, "also write the sample table CSV here");
    cmd_p->add_option("--bands", process_bands, "start:stop:step in GHz (default 6:18:1)");
    cmd_p->add_option("--window", process_window, "rect|hann (default rect)");
    cmd_p->add_option("--threshold-db", process.threshold_db, "offset above noise floor (default 12)");
    cmd_p->add_option("--tau-gate-us", process.tau_gate_us, "delay gate (default 90% of span)");
    cmd_p->add_option("--format", process.format, "table|csv|json");

    FitOptions fit;
    std::string fit_bands;
    std::string fit_method = "ci";
    CLI::App* cmd_f = app.add_subcommand("fit", "per-band origin-constrained slopes from samples");
    cmd_f->add_option("--samples", fit.samples_path, "sample table CSV from process")->required();
    cmd_f->add_option("--out-model", fit.out_model, "output model CSV")->required();
    cmd_f->add_option("--out-report", fit.out_report, "fit report CSV with sample counts");
    cmd_f->add_option("--out-residuals", fit.out_residuals, "per-sample residual CSV");
    cmd_f->add_option("--bands", fit_bands, "start:stop:step in GHz (default: bands present)");
    cmd_f->add_option("--confidence", fit.confidence, "bound confidence level (default 0.95)");
    cmd_f->add_option("--bounds-method", fit_method, "ci|empirical (default ci)");
    cmd_f->add_option("--format", fit.format, "table|csv|json");

    PredictOptions predict;
    std::string predict_bound = "mid";
    CLI::App* cmd_pr = app.add_subcommand("predict", "link budget from a fitted or built-in model");
    cmd_pr->add_option("--model", predict.model_path, "model CSV (default: built-in)");
    cmd_pr->add_option("--f-ghz", predict.f_ghz, "frequency in GHz")->required();
    cmd_pr->add_option("--distance-m", predict.distance_m, "Tx-Rx distance in m")->required();
    cmd_pr->add_option("--veg-depth-m", predict.veg_depth_m, "vegetation depth in m")->required();
    cmd_pr->add_option("--tx-power-dbm", predict.tx_power_dbm, "transmit power (default 0)");
    cmd_pr->add_option("--tx-gain-dbi", predict.tx_gain_dbi, "transmit gain (default 0)");
    cmd_pr->add_option("--rx-gain-dbi", predict.rx_gain_dbi, "receive gain (default 0)");
    cmd_pr->add_option("--bound", predict_bound, "low|mid|high slope for the budget (default mid)");
    cmd_pr->add_option("--format", predict.format, "table|csv|json");

    SynthOptions synth_opts;
    CLI::App* cmd_s = app.add_subcommand("synth", "generate a sweep dataset from a scenario");
    cmd_s->add_option("--scenario", synth_opts.scenario_path, "scenario JSON")->required();
    cmd_s->add_option("--out", synth_opts.out_dir, "output dataset directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        std::ostringstream buffer;
        if (cmd_d->parsed()) {
            cmd_depth(depth, buffer);
        } else if (cmd_p->parsed()) {
            if (!process_bands.empty()) process.bands = parse_bands(process_bands);
            if (process_window == "rect") {
                process.window = sounder::Window::Rectangular;
            } else if (process_window == "hann") {
                process.window = sounder::Window::Hann;
            } else {
                throw Error(ErrorCode::InvalidInput, "window must be rect or hann");
            }
            cmd_process(process, buffer);
        } else if (cmd_f->parsed()) {
            if (!fit_bands.empty()) fit.bands = parse_bands(fit_bands);
            if (fit_method == "ci") {
                fit.method = fitting::BoundsMethod::ConfidenceInterval;
            } else if (fit_method == "empirical") {
                fit.method = fitting::BoundsMethod::Empirical;
            } else {
                throw Error(ErrorCode::InvalidInput, "bounds method must be ci or empirical");
            }
            cmd_fit(fit, buffer);
        } else if (cmd_pr->parsed()) {
            if (predict_bound == "low") {
                predict.bound = propagation::Bound::Low;
            } else if (predict_bound == "mid") {
                predict.bound = propagation::Bound::Mid;
            } else if (predict_bound == "high") {
                predict.bound = propagation::Bound::High;
            } else {
                throw Error(ErrorCode::InvalidInput, "bound must be low, mid, or high");
            }
            cmd_predict(predict, buffer);
        } else {
            cmd_synth(synth_opts, buffer);
        }
        std::cout << buffer.str();
        return 0;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 4;
    }
}

} // namespace vegloss::cli
