// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the vegloss authors

#pragma once

#include <string>
#include <vector>

#include "vegloss/geometry.hpp"
#include "vegloss/propagation.hpp"
#include "vegloss/sounder.hpp"
#include "vegloss/synth.hpp"

namespace vegloss::io {

// Shortest round-trip decimal form; all machine-readable outputs use it
// so re-parsing reproduces the exact double and re-running reproduces
// the exact bytes.
std::string format_double(double value);
double parse_double(const std::string& token, const std::string& context);

std::string read_text_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

// Site description: JSON with a mandatory "units": "meters" marker, tx,
// rx_points, trees, and optional lateral_inclusion_radius. Unknown keys
// are rejected at every level.
geometry::SiteGeometry read_site(const std::string& path);
void write_site(const geometry::SiteGeometry& site, const std::string& path);

// Sweep container: "VEGSCAN 1" text header (key value lines ending at a
// DATA marker) followed by n_points little-endian (re, im) float64
// pairs. Calibration files carry an extra d_ota_m header field and
// rx_id OTA.
void write_measurement(const sounder::FrequencyScan& scan, const std::string& path);
sounder::FrequencyScan read_measurement(const std::string& path);
void write_calibration(const sounder::CalibrationScan& cal, const std::string& path);
sounder::CalibrationScan read_calibration(const std::string& path);

// Loss model: CSV with header f_low_ghz,f_high_ghz,alpha_min,alpha,alpha_max.
std::string model_to_csv(const propagation::VegLossModel& model);
propagation::VegLossModel model_from_csv(const std::string& text);
void write_model(const propagation::VegLossModel& model, const std::string& path);
propagation::VegLossModel read_model(const std::string& path);

// One processed (rx, band) result. Rows where no orientation retained a
// LoS component keep their identity and Friis reference but carry no
// alignment or loss values.
struct SampleRow {
    std::string rx_id;
    propagation::SubBand band;
    sounder::Orientation orientation;
    double p_los_db = 0.0;
    double p_friis_db = 0.0;
    double l_veg_db = 0.0;
    double veg_depth_m = 0.0;
    bool ok = true;
};

std::string samples_to_csv(const std::vector<SampleRow>& rows);
std::vector<SampleRow> samples_from_csv(const std::string& text);
void write_samples(const std::vector<SampleRow>& rows, const std::string& path);
std::vector<SampleRow> read_samples(const std::string& path);

// Scenario: JSON referencing a site file (and optionally a truth model
// file; the built-in model otherwise), plus seed, snr_db (omit for
// noiseless), rolloff, d_ota_m, system_response, orientation_grid, and
// extra_paths. Referenced paths resolve relative to the scenario file.
synth::SyntheticScenario read_scenario(const std::string& path);

} // namespace vegloss::io
