// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the vegloss authors

#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "vegloss/errors.hpp"
#include "vegloss/fitting.hpp"
#include "vegloss/io.hpp"
#include "vegloss/propagation.hpp"
#include "vegloss/sounder.hpp"

namespace vegloss::cli {

// Output goes to the stream only after a command fully succeeds, so a
// failing run never leaves partial tables behind.

struct DepthOptions {
    std::string site_path;
    std::string format = "table";
};

struct ProcessOptions {
    std::string measurements_dir;
    std::string cal_path;
    std::string site_path;
    std::string out_path;                        // optional CSV copy
    std::vector<propagation::SubBand> bands;     // default 6:18:1
    sounder::Window window = sounder::Window::Rectangular;
    double threshold_db = 12.0;
    double tau_gate_us = -1.0;                   // <0: 90% of span
    std::string format = "table";
};

struct FitOptions {
    std::string samples_path;
    std::string out_model;
    std::string out_report;                      // optional
    std::string out_residuals;                   // optional
    std::vector<propagation::SubBand> bands;     // default: bands present
    double confidence = 0.95;
    fitting::BoundsMethod method = fitting::BoundsMethod::ConfidenceInterval;
    std::string format = "table";
};

struct PredictOptions {
    std::string model_path;                      // empty: built-in model
    double f_ghz = 0.0;
    double distance_m = 0.0;
    double veg_depth_m = 0.0;
    double tx_power_dbm = 0.0;
    double tx_gain_dbi = 0.0;
    double rx_gain_dbi = 0.0;
    propagation::Bound bound = propagation::Bound::Mid;
    std::string format = "table";
};

struct SynthOptions {
    std::string scenario_path;
    std::string out_dir;
};

void cmd_depth(const DepthOptions& opts, std::ostream& out);
void cmd_process(const ProcessOptions& opts, std::ostream& out);
void cmd_fit(const FitOptions& opts, std::ostream& out);
void cmd_predict(const PredictOptions& opts, std::ostream& out);
void cmd_synth(const SynthOptions& opts, std::ostream& out);

// "6:18:1" (GHz start:stop:step) -> twelve 1-GHz bands, etc.
std::vector<propagation::SubBand> parse_bands(const std::string& spec);

// 2: malformed input or files; 3: domain failures (degenerate fit, out
// of band, undetectable LoS, ...); 4: anything unexpected.
int exit_code_for(ErrorCode code);

int run(int argc, const char* const* argv);

} // namespace vegloss::cli
