// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the vegloss authors

#pragma once

#include <complex>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "vegloss/geometry.hpp"
#include "vegloss/propagation.hpp"
#include "vegloss/sounder.hpp"

namespace vegloss::synth {

using sounder::CalibrationScan;
using sounder::DirectionalScanSet;
using sounder::FrequencyScan;
using sounder::Orientation;

// One extra multipath component. gain_db already includes its path loss;
// phase is the component's phase at the grid start frequency.
struct SyntheticPath {
    double delay = 0.0;    // s, within [0, 1/f_step)
    double gain_db = 0.0;
    double phase = 0.0;    // rad
};

// Smooth complex spectrum standing in for the cabling/antenna chain that
// OTA calibration is meant to divide out. ripple_db peaks must stay
// below 6.02 dB so the response never crosses zero.
struct SystemResponse {
    double gain_db = 0.0;
    double phase_rad = 0.0;
    double ripple_db = 0.0;
    double ripple_cycles = 0.0;
};

// Rotation grid; the default covers azimuth -60..60 and elevation
// -30..30 in 10 degree steps.
struct OrientationGrid {
    double az_min = -60.0;
    double az_max = 60.0;
    double az_step = 10.0;
    double el_min = -30.0;
    double el_max = 30.0;
    double el_step = 10.0;

    std::vector<Orientation> orientations() const;
};

// Declared ground truth for a synthetic campaign. A non-finite snr_db
// disables noise entirely; extra paths are keyed by rx id and bypass the
// beam rolloff (they model off-axis reflections already folded into
// gain_db).
struct SyntheticScenario {
    geometry::SiteGeometry site;
    propagation::VegLossModel truth_model;
    std::map<std::string, std::vector<SyntheticPath>> extra_paths;
    double snr_db = std::numeric_limits<double>::infinity();
    double rolloff_db_per_10deg = 3.0;
    SystemResponse system_response;
    std::uint64_t seed = 0;
    double d_ota = 44.0;
    OrientationGrid grid;
};

void validate_scenario(const SyntheticScenario& scn);

// System response evaluated on the default sweep span.
std::complex<double> system_response_at(const SystemResponse& sr, double f_hz);

// Boresight-normalized beam gain (voltage) at the given pointing error.
double beam_factor(double rolloff_db_per_10deg, const Orientation& orientation);

// One raw directional sweep on the default grid:
//   H(f) = S(f) [ G_fs(f, d) A_veg(f) B(orientation) + sum extra paths ] + n(f)
// with A_veg = 10^(-predicted loss / 20) from the truth model and the
// link's vegetation depth. Noise is complex white, seeded per
// (scenario seed, rx id, orientation), and scaled so the LoS delay bin
// of the weakest 1-GHz sub-band sits at snr_db after rectangular-window
// PDP formation; every other band then meets or exceeds snr_db.
FrequencyScan synthesize_measurement(const SyntheticScenario& scn, const std::string& rx_id,
                                     const Orientation& orientation);

// Noiseless time-gated OTA reference: S(f) G_fs(f, d_ota).
CalibrationScan synthesize_ota(const SyntheticScenario& scn);

// Full rotation-grid sweep set for one rx point, ordered azimuth-major.
DirectionalScanSet synthesize_set(const SyntheticScenario& scn, const std::string& rx_id);

} // namespace vegloss::synth
