// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the vegloss authors

#pragma once

#include <complex>
#include <string>
#include <vector>

#include "vegloss/errors.hpp"
#include "vegloss/propagation.hpp"

namespace vegloss::sounder {

using propagation::SubBand;

// Default sweep grid: 12,001 points over 6-18 GHz in 1 MHz steps,
// giving 1 us of unambiguous excess delay (about 300 m of path).
inline constexpr double kDefaultFStartHz = 6e9;
inline constexpr double kDefaultFStepHz = 1e6;
inline constexpr std::size_t kDefaultNPoints = 12001;

struct Orientation {
    double azimuth_deg = 0.0;
    double elevation_deg = 0.0;
};

inline bool operator==(const Orientation& lhs, const Orientation& rhs) {
    return lhs.azimuth_deg == rhs.azimuth_deg && lhs.elevation_deg == rhs.elevation_deg;
}

// One directional frequency sweep: uniformly gridded complex transfer
// function samples (linear voltage ratio).
struct FrequencyScan {
    double f_start = kDefaultFStartHz; // Hz
    double f_step = kDefaultFStepHz;   // Hz
    std::vector<std::complex<double>> samples;
    Orientation orientation;
    std::string rx_id;
    double distance = 0.0; // Tx-Rx distance (m)

    double frequency_at(std::size_t k) const { return f_start + static_cast<double>(k) * f_step; }
    double f_end() const { return frequency_at(samples.empty() ? 0 : samples.size() - 1); }
};

void validate_scan(const FrequencyScan& scan);

// OTA reference sweep on the same grid as the scans it calibrates.
struct CalibrationScan {
    FrequencyScan scan;
    double d_ota = 44.0; // m
};

enum class Window { Rectangular, Hann };

struct PdpBin {
    double delay = 0.0; // s
    double power = 0.0; // linear
};

// Power delay profile of one sub-band and orientation. Bins hold the
// retained set: the full delay grid when ungated, the thresholded/gated
// subset afterwards.
struct PowerDelayProfile {
    SubBand band;
    double delay_step = 0.0; // s
    std::vector<PdpBin> bins;
    bool gated = false;
    double noise_floor = 0.0;     // linear
    double threshold = 0.0;       // P_lambda, linear
    double tau_gate = 0.0;        // s
    std::size_t n_transform = 0;  // transform length backing delay_step
    Window window = Window::Rectangular;

    double delay_span() const { return static_cast<double>(n_transform) * delay_step; }
};

// Directional sweep set over the rotation grid for one Rx point.
// Construction validates unique orientations and shared rx/distance/grid.
struct DirectionalScanSet {
    std::vector<FrequencyScan> scans;
};

void validate_scan_set(const DirectionalScanSet& set);

// Free-space transfer function c/(4*pi*d*f) * exp(-j*2*pi*f*d/c): the
// absolute scale (and delay) divided out by an OTA reference at d.
std::complex<double> free_space_response(double f_hz, double d_m);

// Normalizes a measurement by the OTA calibration and re-embeds the
// free-space scale at d_ota, so LoS powers compare directly against
// friis_db. Grids must match sample-for-sample.
FrequencyScan calibrate(const FrequencyScan& meas, const CalibrationScan& cal);

// Contiguous sample run covering [f_low, f_high]; edges snap to the
// nearest grid points. On the default grid a 1-GHz slice has 1001
// samples.
FrequencyScan subband_slice(const FrequencyScan& scan, const SubBand& band);

// Windowed inverse DFT (1/N normalization) to per-bin |.|^2. The window
// is unit-mean-square normalized so total PDP power equals the mean
// windowed spectrum power (Parseval). Output is ungated, delay grid
// [0, 1/f_step) in steps of 1/(N*f_step).
PowerDelayProfile compute_pdp(const FrequencyScan& scan, Window window = Window::Rectangular);

// Median power over the last tail_fraction of delay bins, a region
// beyond plausible multipath on the 1 us span. Requires an ungated
// profile; tail_fraction in (0, 0.5].
double estimate_noise_floor(const PowerDelayProfile& pdp, double tail_fraction = 0.1);

// Keeps exactly the bins with delay <= tau_gate and power >= P_lambda,
// where P_lambda sits threshold_offset_db above the noise floor. A
// profile that is already gated keeps its stored floor, so re-gating
// with identical parameters is a no-op.
PowerDelayProfile gate_and_threshold(const PowerDelayProfile& pdp, double tau_gate,
                                     double threshold_offset_db = 12.0,
                                     double tail_fraction = 0.1);

// Convenience default gate: 90% of the delay span.
double default_tau_gate(const PowerDelayProfile& pdp);

// Magnitude of the normalized window transform |(1/N) sum w_k e^{j2pi ku/N}|
// at fractional bin offset u; W(0) = 1 for the rectangular window. LoS
// de-scalloping inverts this kernel.
double window_kernel(Window window, std::size_t n, double u);

// LoS power in dB from a gated PDP: peak retained bin within
// +/- search_halfwidth bins of the expected delay d/c, de-scalloped via
// two-bin inversion of the window kernel (exact at bin-centered delays;
// see kernel notes in the implementation).
double extract_los_power(const PowerDelayProfile& pdp, double d_m,
                         std::size_t search_halfwidth = 3);

struct ProcessingOptions {
    Window window = Window::Rectangular;
    double threshold_offset_db = 12.0;
    double tau_gate = -1.0; // <0: default 0.9 * span
    double tail_fraction = 0.1;
    std::size_t search_halfwidth = 3;
};

struct AlignmentResult {
    Orientation orientation;
    double p_los_db = 0.0;
};

// Runs calibrate -> subband_slice -> compute_pdp -> gate_and_threshold ->
// extract_los_power per orientation and returns the orientation with the
// highest LoS power. Ties break toward the smallest |azimuth|, then the
// smallest |elevation|. Orientations without a detectable LoS are
// skipped; NoAlignment if none remain.
AlignmentResult select_best_alignment(const DirectionalScanSet& set, const CalibrationScan& cal,
                                      const SubBand& band, const ProcessingOptions& opts = {});

} // namespace vegloss::sounder
