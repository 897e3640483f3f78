// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the vegloss authors

#include "vegloss/io.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string_view>

#include <json.hpp>

namespace vegloss::io {
namespace {

static_assert(std::endian::native == std::endian::little,
              "sweep container payload is little-endian float64");

using nlohmann::json;

std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = text.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(text.substr(start));
            return out;
        }
        out.push_back(text.substr(start, pos - start));
        start = pos + 1;
    }
}

// Ids travel through CSV columns and space-separated headers unquoted.
void require_token_id(const std::string& id, const std::string& context) {
    if (id.empty()) {
        throw Error(ErrorCode::InvalidInput, context + ": empty id");
    }
    for (char c : id) {
        if (c == ',' || std::isspace(static_cast<unsigned char>(c)) ||
            std::iscntrl(static_cast<unsigned char>(c))) {
            throw Error(ErrorCode::InvalidInput, context + ": id '" + id + "' contains separators");
        }
    }
}

json parse_json(const std::string& text, const std::string& context) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, context + ": " + e.what());
    }
}

void expect_keys(const json& obj, std::initializer_list<const char*> keys, const std::string& context) {
    if (!obj.is_object()) {
        throw Error(ErrorCode::ParseError, context + ": expected an object");
    }
    for (const auto& item : obj.items()) {
        bool known = false;
        for (const char* k : keys) {
            if (item.key() == k) {
                known = true;
                break;
            }
        }
        if (!known) {
            throw Error(ErrorCode::ParseError, context + ": unknown key '" + item.key() + "'");
        }
    }
}

const json& require_field(const json& obj, const char* key, const std::string& context) {
    const auto it = obj.find(key);
    if (it == obj.end()) {
        throw Error(ErrorCode::ParseError, context + ": missing key '" + std::string(key) + "'");
    }
    return *it;
}

double number_field(const json& obj, const char* key, const std::string& context) {
    const json& v = require_field(obj, key, context);
    if (!v.is_number()) {
        throw Error(ErrorCode::ParseError, context + ": '" + std::string(key) + "' must be a number");
    }
    return v.get<double>();
}

std::string string_field(const json& obj, const char* key, const std::string& context) {
    const json& v = require_field(obj, key, context);
    if (!v.is_string()) {
        throw Error(ErrorCode::ParseError, context + ": '" + std::string(key) + "' must be a string");
    }
    return v.get<std::string>();
}

std::string band_token(const propagation::SubBand& band) {
    return format_double(band.f_low / 1e9) + "-" + format_double(band.f_high / 1e9);
}

propagation::SubBand parse_band_token(std::string_view token, const std::string& context) {
    const std::size_t dash = token.find('-', 1); // skip a possible leading sign
    if (dash == std::string_view::npos) {
        throw Error(ErrorCode::ParseError, context + ": band '" + std::string(token) + "' is not low-high");
    }
    const double lo = parse_double(std::string(token.substr(0, dash)), context);
    const double hi = parse_double(std::string(token.substr(dash + 1)), context);
    return propagation::SubBand{lo * 1e9, hi * 1e9};
}

} // namespace

std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& token, const std::string& context) {
    double value = 0.0;
    const char* end = token.data() + token.size();
    const auto res = std::from_chars(token.data(), end, value);
    if (res.ec != std::errc() || res.ptr != end || !std::isfinite(value)) {
        throw Error(ErrorCode::ParseError, context + ": '" + token + "' is not a finite number");
    }
    return value;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::IoError, "cannot open " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) {
        throw Error(ErrorCode::IoError, "cannot read " + path);
    }
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(ErrorCode::IoError, "cannot create " + path);
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
        throw Error(ErrorCode::IoError, "cannot write " + path);
    }
}

geometry::SiteGeometry read_site(const std::string& path) {
    const std::string context = "site " + path;
    const json root = parse_json(read_text_file(path), context);
    expect_keys(root, {"units", "lateral_inclusion_radius", "tx", "rx_points", "trees"}, context);
    if (string_field(root, "units", context) != "meters") {
        throw Error(ErrorCode::ParseError, context + ": units must be \"meters\"");
    }

    geometry::SiteGeometry site;
    if (root.contains("lateral_inclusion_radius")) {
        site.lateral_inclusion_radius = number_field(root, "lateral_inclusion_radius", context);
    }

    const json& tx = require_field(root, "tx", context);
    expect_keys(tx, {"easting", "northing", "height"}, context + ": tx");
    site.tx.x = number_field(tx, "easting", context);
    site.tx.y = number_field(tx, "northing", context);
    site.tx.z = number_field(tx, "height", context);

    const json& rx_points = require_field(root, "rx_points", context);
    if (!rx_points.is_array()) {
        throw Error(ErrorCode::ParseError, context + ": rx_points must be an array");
    }
    for (const json& rx : rx_points) {
        const std::string rx_context = context + ": rx_points";
        expect_keys(rx, {"id", "easting", "northing", "height"}, rx_context);
        geometry::RxPoint point;
        point.id = string_field(rx, "id", rx_context);
        require_token_id(point.id, rx_context);
        point.position.x = number_field(rx, "easting", rx_context);
        point.position.y = number_field(rx, "northing", rx_context);
        point.position.z = number_field(rx, "height", rx_context);
        site.rx_points.push_back(point);
    }

    const json& trees = require_field(root, "trees", context);
    if (!trees.is_array()) {
        throw Error(ErrorCode::ParseError, context + ": trees must be an array");
    }
    for (const json& tree : trees) {
        const std::string tree_context = context + ": trees";
        expect_keys(tree,
                    {"id", "easting", "northing", "canopy_center_height", "canopy_width", "canopy_height"},
                    tree_context);
        geometry::TreeDescription desc;
        desc.id = string_field(tree, "id", tree_context);
        require_token_id(desc.id, tree_context);
        desc.easting = number_field(tree, "easting", tree_context);
        desc.northing = number_field(tree, "northing", tree_context);
        desc.canopy_center_height = number_field(tree, "canopy_center_height", tree_context);
        desc.canopy_width = number_field(tree, "canopy_width", tree_context);
        desc.canopy_height = number_field(tree, "canopy_height", tree_context);
        site.trees.push_back(desc);
    }

    geometry::validate_site(site);
    return site;
}

void write_site(const geometry::SiteGeometry& site, const std::string& path) {
    geometry::validate_site(site);
    json root;
    root["units"] = "meters";
    root["lateral_inclusion_radius"] = site.lateral_inclusion_radius;
    root["tx"] = {{"easting", site.tx.x}, {"northing", site.tx.y}, {"height", site.tx.z}};
    root["rx_points"] = json::array();
    for (const geometry::RxPoint& rx : site.rx_points) {
        root["rx_points"].push_back({{"id", rx.id},
                                     {"easting", rx.position.x},
                                     {"northing", rx.position.y},
                                     {"height", rx.position.z}});
    }
    root["trees"] = json::array();
    for (const geometry::TreeDescription& tree : site.trees) {
        root["trees"].push_back({{"id", tree.id},
                                 {"easting", tree.easting},
                                 {"northing", tree.northing},
                                 {"canopy_center_height", tree.canopy_center_height},
                                 {"canopy_width", tree.canopy_width},
                                 {"canopy_height", tree.canopy_height}});
    }
    write_file(path, root.dump(2) + "\n");
}

namespace {

constexpr std::string_view kScanMagic = "VEGSCAN 1";

std::string scan_header(const sounder::FrequencyScan& scan, const double* d_ota) {
    require_token_id(scan.rx_id, "sweep header");
    std::string h;
    h += kScanMagic;
    h += "\nrx_id " + scan.rx_id;
    h += "\ndistance_m " + format_double(scan.distance);
    h += "\nazimuth_deg " + format_double(scan.orientation.azimuth_deg);
    h += "\nelevation_deg " + format_double(scan.orientation.elevation_deg);
    h += "\nf_start_hz " + format_double(scan.f_start);
    h += "\nf_step_hz " + format_double(scan.f_step);
    h += "\nn_points " + std::to_string(scan.samples.size());
    if (d_ota != nullptr) {
        h += "\nd_ota_m " + format_double(*d_ota);
    }
    h += "\nDATA\n";
    return h;
}

void write_scan_file(const sounder::FrequencyScan& scan, const double* d_ota, const std::string& path) {
    sounder::validate_scan(scan);
    std::string out = scan_header(scan, d_ota);
    const std::size_t payload_at = out.size();
    out.resize(payload_at + scan.samples.size() * 2 * sizeof(double));
    char* p = out.data() + payload_at;
    for (const std::complex<double>& s : scan.samples) {
        const double re = s.real();
        const double im = s.imag();
        std::memcpy(p, &re, sizeof(double));
        std::memcpy(p + sizeof(double), &im, sizeof(double));
        p += 2 * sizeof(double);
    }
    write_file(path, out);
}

struct ScanFile {
    sounder::FrequencyScan scan;
    bool has_d_ota = false;
    double d_ota = 0.0;
};

ScanFile read_scan_file(const std::string& path) {
    const std::string context = "sweep " + path;
    const std::string raw = read_text_file(path);

    const std::string marker = "\nDATA\n";
    const std::size_t marker_at = raw.find(marker);
    if (raw.substr(0, kScanMagic.size()) != kScanMagic || marker_at == std::string::npos) {
        throw Error(ErrorCode::ParseError, context + ": not a VEGSCAN 1 container");
    }
    const std::size_t payload_at = marker_at + marker.size();

    ScanFile out;
    bool have_rx = false, have_dist = false, have_az = false, have_el = false;
    bool have_fstart = false, have_fstep = false, have_n = false;
    std::size_t n_points = 0;

    const std::string_view header(raw.data() + kScanMagic.size() + 1,
                                  marker_at > kScanMagic.size() ? marker_at - kScanMagic.size() - 1 : 0);
    for (std::string_view line : split(header, '\n')) {
        if (line.empty()) continue;
        const std::size_t space = line.find(' ');
        if (space == std::string_view::npos) {
            throw Error(ErrorCode::ParseError, context + ": header line '" + std::string(line) + "'");
        }
        const std::string_view key = line.substr(0, space);
        const std::string value(line.substr(space + 1));
        if (key == "rx_id") {
            out.scan.rx_id = value;
            have_rx = true;
        } else if (key == "distance_m") {
            out.scan.distance = parse_double(value, context);
            have_dist = true;
        } else if (key == "azimuth_deg") {
            out.scan.orientation.azimuth_deg = parse_double(value, context);
            have_az = true;
        } else if (key == "elevation_deg") {
            out.scan.orientation.elevation_deg = parse_double(value, context);
            have_el = true;
        } else if (key == "f_start_hz") {
            out.scan.f_start = parse_double(value, context);
            have_fstart = true;
        } else if (key == "f_step_hz") {
            out.scan.f_step = parse_double(value, context);
            have_fstep = true;
        } else if (key == "n_points") {
            std::size_t parsed = 0;
            const char* end = value.data() + value.size();
            const auto res = std::from_chars(value.data(), end, parsed);
            if (res.ec != std::errc() || res.ptr != end) {
                throw Error(ErrorCode::ParseError, context + ": bad n_points '" + value + "'");
            }
            n_points = parsed;
            have_n = true;
        } else if (key == "d_ota_m") {
            out.d_ota = parse_double(value, context);
            out.has_d_ota = true;
        } else {
            throw Error(ErrorCode::ParseError, context + ": unknown header key '" + std::string(key) + "'");
        }
    }
    if (!have_rx || !have_dist || !have_az || !have_el || !have_fstart || !have_fstep || !have_n) {
        throw Error(ErrorCode::ParseError, context + ": incomplete header");
    }
    if (n_points < 2) {
        throw Error(ErrorCode::ParseError, context + ": n_points must be at least 2");
    }
    if (!(out.scan.f_step > 0.0)) {
        throw Error(ErrorCode::ParseError, context + ": grid is not monotonic (f_step_hz <= 0)");
    }
    const std::size_t expected = n_points * 2 * sizeof(double);
    if (raw.size() - payload_at != expected) {
        throw Error(ErrorCode::ParseError,
                    context + ": payload holds " + std::to_string(raw.size() - payload_at) +
                        " bytes, header promises " + std::to_string(expected));
    }

    out.scan.samples.resize(n_points);
    const char* p = raw.data() + payload_at;
    for (std::size_t i = 0; i < n_points; ++i) {
        double re = 0.0, im = 0.0;
        std::memcpy(&re, p, sizeof(double));
        std::memcpy(&im, p + sizeof(double), sizeof(double));
        out.scan.samples[i] = {re, im};
        p += 2 * sizeof(double);
    }
    sounder::validate_scan(out.scan);
    return out;
}

} // namespace

void write_measurement(const sounder::FrequencyScan& scan, const std::string& path) {
    write_scan_file(scan, nullptr, path);
}

sounder::FrequencyScan read_measurement(const std::string& path) {
    ScanFile file = read_scan_file(path);
    if (file.has_d_ota) {
        throw Error(ErrorCode::ParseError, "sweep " + path + ": calibration container passed as measurement");
    }
    return std::move(file.scan);
}

void write_calibration(const sounder::CalibrationScan& cal, const std::string& path) {
    write_scan_file(cal.scan, &cal.d_ota, path);
}

sounder::CalibrationScan read_calibration(const std::string& path) {
    ScanFile file = read_scan_file(path);
    if (!file.has_d_ota) {
        throw Error(ErrorCode::ParseError, "sweep " + path + ": missing d_ota_m header field");
    }
    if (file.scan.rx_id != "OTA") {
        throw Error(ErrorCode::ParseError, "sweep " + path + ": calibration rx_id must be OTA");
    }
    sounder::CalibrationScan cal;
    cal.scan = std::move(file.scan);
    cal.d_ota = file.d_ota;
    return cal;
}

std::string model_to_csv(const propagation::VegLossModel& model) {
    propagation::validate_model(model);
    std::string out = "f_low_ghz,f_high_ghz,alpha_min,alpha,alpha_max\n";
    for (const propagation::VegLossEntry& e : model.entries) {
        out += format_double(e.band.f_low / 1e9) + "," + format_double(e.band.f_high / 1e9) + "," +
               format_double(e.alpha_min) + "," + format_double(e.alpha) + "," +
               format_double(e.alpha_max) + "\n";
    }
    return out;
}

propagation::VegLossModel model_from_csv(const std::string& text) {
    const std::string context = "model";
    std::vector<std::string_view> lines = split(text, '\n');
    while (!lines.empty() && lines.back().empty()) lines.pop_back();
    if (lines.empty() || lines.front() != "f_low_ghz,f_high_ghz,alpha_min,alpha,alpha_max") {
        throw Error(ErrorCode::ParseError, context + ": bad or missing header");
    }
    propagation::VegLossModel model;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::string line_context = context + " line " + std::to_string(i + 1);
        const std::vector<std::string_view> fields = split(lines[i], ',');
        if (fields.size() != 5) {
            throw Error(ErrorCode::ParseError, line_context + ": expected 5 fields");
        }
        propagation::VegLossEntry e;
        e.band.f_low = parse_double(std::string(fields[0]), line_context) * 1e9;
        e.band.f_high = parse_double(std::string(fields[1]), line_context) * 1e9;
        e.alpha_min = parse_double(std::string(fields[2]), line_context);
        e.alpha = parse_double(std::string(fields[3]), line_context);
        e.alpha_max = parse_double(std::string(fields[4]), line_context);
        model.entries.push_back(e);
    }
    propagation::validate_model(model);
    return model;
}

void write_model(const propagation::VegLossModel& model, const std::string& path) {
    write_file(path, model_to_csv(model));
}

propagation::VegLossModel read_model(const std::string& path) {
    try {
        return model_from_csv(read_text_file(path));
    } catch (const Error& e) {
        if (e.code() == ErrorCode::ParseError) {
            throw Error(ErrorCode::ParseError, path + ": " + e.what());
        }
        throw;
    }
}

std::string samples_to_csv(const std::vector<SampleRow>& rows) {
    std::string out =
        "rx_id,band,orientation_az,orientation_el,p_los_db,p_friis_db,l_veg_db,veg_depth_m,status\n";
    for (const SampleRow& row : rows) {
        require_token_id(row.rx_id, "sample table");
        out += row.rx_id + "," + band_token(row.band) + ",";
        if (row.ok) {
            out += format_double(row.orientation.azimuth_deg) + "," +
                   format_double(row.orientation.elevation_deg) + "," + format_double(row.p_los_db) +
                   "," + format_double(row.p_friis_db) + "," + format_double(row.l_veg_db);
        } else {
            out += ",,," + format_double(row.p_friis_db) + ",";
        }
        out += "," + format_double(row.veg_depth_m) + "," + (row.ok ? "ok" : "no_los") + "\n";
    }
    return out;
}

std::vector<SampleRow> samples_from_csv(const std::string& text) {
    const std::string context = "sample table";
    std::vector<std::string_view> lines = split(text, '\n');
    while (!lines.empty() && lines.back().empty()) lines.pop_back();
    if (lines.empty() ||
        lines.front() !=
            "rx_id,band,orientation_az,orientation_el,p_los_db,p_friis_db,l_veg_db,veg_depth_m,status") {
        throw Error(ErrorCode::ParseError, context + ": bad or missing header");
    }
    std::vector<SampleRow> rows;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::string line_context = context + " line " + std::to_string(i + 1);
        const std::vector<std::string_view> fields = split(lines[i], ',');
        if (fields.size() != 9) {
            throw Error(ErrorCode::ParseError, line_context + ": expected 9 fields");
        }
        SampleRow row;
        row.rx_id = std::string(fields[0]);
        require_token_id(row.rx_id, line_context);
        row.band = parse_band_token(fields[1], line_context);
        if (fields[8] == "ok") {
            row.ok = true;
            row.orientation.azimuth_deg = parse_double(std::string(fields[2]), line_context);
            row.orientation.elevation_deg = parse_double(std::string(fields[3]), line_context);
            row.p_los_db = parse_double(std::string(fields[4]), line_context);
            row.p_friis_db = parse_double(std::string(fields[5]), line_context);
            row.l_veg_db = parse_double(std::string(fields[6]), line_context);
        } else if (fields[8] == "no_los") {
            row.ok = false;
            const double nan = std::nan("");
            row.orientation.azimuth_deg = nan;
            row.orientation.elevation_deg = nan;
            row.p_los_db = nan;
            row.p_friis_db = parse_double(std::string(fields[5]), line_context);
            row.l_veg_db = nan;
        } else {
            throw Error(ErrorCode::ParseError, line_context + ": unknown status '" + std::string(fields[8]) + "'");
        }
        row.veg_depth_m = parse_double(std::string(fields[7]), line_context);
        rows.push_back(row);
    }
    return rows;
}

void write_samples(const std::vector<SampleRow>& rows, const std::string& path) {
    write_file(path, samples_to_csv(rows));
}

std::vector<SampleRow> read_samples(const std::string& path) {
    try {
        return samples_from_csv(read_text_file(path));
    } catch (const Error& e) {
        if (e.code() == ErrorCode::ParseError) {
            throw Error(ErrorCode::ParseError, path + ": " + e.what());
        }
        throw;
    }
}

synth::SyntheticScenario read_scenario(const std::string& path) {
    const std::string context = "scenario " + path;
    const json root = parse_json(read_text_file(path), context);
    expect_keys(root,
                {"site", "truth_model", "seed", "snr_db", "rolloff_db_per_10deg", "d_ota_m",
                 "system_response", "orientation_grid", "extra_paths"},
                context);

    const std::filesystem::path base = std::filesystem::path(path).parent_path();
    const auto resolve = [&](const std::string& ref) {
        const std::filesystem::path p(ref);
        return p.is_absolute() ? p.string() : (base / p).string();
    };

    synth::SyntheticScenario scn;
    scn.site = read_site(resolve(string_field(root, "site", context)));
    if (root.contains("truth_model")) {
        scn.truth_model = read_model(resolve(string_field(root, "truth_model", context)));
    } else {
        scn.truth_model = propagation::builtin_model();
    }
    if (root.contains("seed")) {
        const json& seed = root["seed"];
        if (!seed.is_number_unsigned()) {
            throw Error(ErrorCode::ParseError, context + ": seed must be a non-negative integer");
        }
        scn.seed = seed.get<std::uint64_t>();
    }
    if (root.contains("snr_db")) {
        scn.snr_db = number_field(root, "snr_db", context);
    }
    if (root.contains("rolloff_db_per_10deg")) {
        scn.rolloff_db_per_10deg = number_field(root, "rolloff_db_per_10deg", context);
    }
    if (root.contains("d_ota_m")) {
        scn.d_ota = number_field(root, "d_ota_m", context);
    }
    if (root.contains("system_response")) {
        const json& sr = root["system_response"];
        const std::string sr_context = context + ": system_response";
        expect_keys(sr, {"gain_db", "phase_rad", "ripple_db", "ripple_cycles"}, sr_context);
        if (sr.contains("gain_db")) scn.system_response.gain_db = number_field(sr, "gain_db", sr_context);
        if (sr.contains("phase_rad")) scn.system_response.phase_rad = number_field(sr, "phase_rad", sr_context);
        if (sr.contains("ripple_db")) scn.system_response.ripple_db = number_field(sr, "ripple_db", sr_context);
        if (sr.contains("ripple_cycles"))
            scn.system_response.ripple_cycles = number_field(sr, "ripple_cycles", sr_context);
    }
    if (root.contains("orientation_grid")) {
        const json& g = root["orientation_grid"];
        const std::string g_context = context + ": orientation_grid";
        expect_keys(g, {"az_min", "az_max", "az_step", "el_min", "el_max", "el_step"}, g_context);
        scn.grid.az_min = number_field(g, "az_min", g_context);
        scn.grid.az_max = number_field(g, "az_max", g_context);
        scn.grid.az_step = number_field(g, "az_step", g_context);
        scn.grid.el_min = number_field(g, "el_min", g_context);
        scn.grid.el_max = number_field(g, "el_max", g_context);
        scn.grid.el_step = number_field(g, "el_step", g_context);
    }
    if (root.contains("extra_paths")) {
        const json& paths = root["extra_paths"];
        if (!paths.is_object()) {
            throw Error(ErrorCode::ParseError, context + ": extra_paths must map rx ids to path lists");
        }
        for (const auto& item : paths.items()) {
            const std::string p_context = context + ": extra_paths['" + item.key() + "']";
            if (!item.value().is_array()) {
                throw Error(ErrorCode::ParseError, p_context + ": expected an array");
            }
            std::vector<synth::SyntheticPath> list;
            for (const json& p : item.value()) {
                expect_keys(p, {"delay_ns", "gain_db", "phase_rad"}, p_context);
                synth::SyntheticPath sp;
                sp.delay = number_field(p, "delay_ns", p_context) * 1e-9;
                sp.gain_db = number_field(p, "gain_db", p_context);
                sp.phase = p.contains("phase_rad") ? number_field(p, "phase_rad", p_context) : 0.0;
                list.push_back(sp);
            }
            scn.extra_paths[item.key()] = std::move(list);
        }
    }
    synth::validate_scenario(scn);
    return scn;
}

} // namespace vegloss::io
