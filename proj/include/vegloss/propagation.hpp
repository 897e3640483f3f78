// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the vegloss authors

#pragma once

#include <vector>

#include "vegloss/errors.hpp"

namespace vegloss::propagation {

inline constexpr double kSpeedOfLight = 299792458.0; // m/s

struct SubBand {
    double f_low = 0.0;  // Hz
    double f_high = 0.0; // Hz

    double center() const { return 0.5 * (f_low + f_high); }
};

inline bool operator==(const SubBand& lhs, const SubBand& rhs) {
    return lhs.f_low == rhs.f_low && lhs.f_high == rhs.f_high;
}

struct VegLossEntry {
    SubBand band;
    double alpha_min = 0.0; // dB/m
    double alpha = 0.0;     // dB/m
    double alpha_max = 0.0; // dB/m
};

// Per-sub-band linear loss model: excess loss = alpha(f) * d_veg.
// Bands are contiguous, non-overlapping, in ascending order.
struct VegLossModel {
    std::vector<VegLossEntry> entries;
};

enum class Bound { Low, Mid, High };

struct LinkBudgetInput {
    double f = 0.0;            // Hz
    double distance = 0.0;     // m
    double veg_depth = 0.0;    // m
    double tx_power_dbm = 0.0;
    double tx_gain_dbi = 0.0;
    double rx_gain_dbi = 0.0;
};

// Free-space received power relative to transmitted power with unity
// gains: -20*log10(4*pi*d*f/c).
double friis_db(double f_hz, double d_m);

// Excess vegetation loss: Friis reference minus measured LoS power.
// May be negative under constructive small-scale fading.
double excess_loss(double p_friis_db, double p_los_db);

// Checks model invariants (contiguity, ordering, alpha_min <= alpha <=
// alpha_max); throws BandCoverageError / InvalidInput.
void validate_model(const VegLossModel& model);

// Index of the band containing f. Bands are half-open [f_low, f_high),
// the last band is closed. Throws OutOfBand.
std::size_t band_index(const VegLossModel& model, double f_hz);

// Predicted vegetation loss alpha_<bound>(f) * d_veg in dB.
double predict_loss(const VegLossModel& model, double f_hz, double d_veg_m, Bound bound);

// Received power in dBm: tx_power + gains + friis - predicted mid loss.
double link_budget(const LinkBudgetInput& input, const VegLossModel& model);

// The built-in 6-18 GHz model (12 one-GHz bands).
const VegLossModel& builtin_model();

} // namespace vegloss::propagation
