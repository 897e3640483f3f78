// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the vegloss authors

#include "vegloss/synth.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <random>

#include "vegloss/rng.hpp"

namespace vegloss::synth {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSweepSpanHz =
    static_cast<double>(sounder::kDefaultNPoints - 1) * sounder::kDefaultFStepHz;

std::string fmt(const char* format, double a) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), format, a);
    return buf;
}

// Noise stream seed for one sweep: the scenario seed advanced by the rx
// id hash and the orientation bit patterns through splitmix64, so sweeps
// are independent of each other and of generation order.
std::uint64_t sweep_seed(const SyntheticScenario& scn, const std::string& rx_id,
                         const Orientation& orientation) {
    std::uint64_t state = scn.seed ^ rng::fnv1a(rx_id);
    (void)rng::splitmix64(state);
    state ^= std::bit_cast<std::uint64_t>(orientation.azimuth_deg);
    (void)rng::splitmix64(state);
    state ^= std::bit_cast<std::uint64_t>(orientation.elevation_deg);
    return rng::splitmix64(state);
}

// Per-sample complex noise variance meeting snr_db at the LoS delay bin
// of the link's weakest sub-band, evaluated at boresight. With a
// unit-mean-square window the mean noise bin power is sigma^2 / N, so
// sigma^2 = min over bands of (amplitude^2 N_band) / snr_linear.
double noise_sigma(const SyntheticScenario& scn, double distance, double depth) {
    if (!std::isfinite(scn.snr_db)) return 0.0;
    const double snr_lin = std::pow(10.0, scn.snr_db / 10.0);
    double min_bin_power = std::numeric_limits<double>::infinity();
    for (const propagation::VegLossEntry& entry : scn.truth_model.entries) {
        const double f_c = entry.band.center();
        const double a_fs = std::abs(sounder::free_space_response(f_c, distance));
        const double a_veg =
            std::pow(10.0, -propagation::predict_loss(scn.truth_model, f_c, depth,
                                                      propagation::Bound::Mid) / 20.0);
        const double a_sys = std::abs(system_response_at(scn.system_response, f_c));
        const double amp = a_fs * a_veg * a_sys;
        const double n_band =
            std::round((entry.band.f_high - entry.band.f_low) / sounder::kDefaultFStepHz) + 1.0;
        min_bin_power = std::min(min_bin_power, amp * amp * n_band);
    }
    return std::sqrt(min_bin_power / snr_lin);
}

} // namespace

std::vector<Orientation> OrientationGrid::orientations() const {
    if (!std::isfinite(az_min) || !std::isfinite(az_max) || !std::isfinite(az_step) ||
        !std::isfinite(el_min) || !std::isfinite(el_max) || !std::isfinite(el_step) ||
        !(az_step > 0.0) || !(el_step > 0.0) || az_max < az_min || el_max < el_min) {
        throw Error(ErrorCode::InvalidInput, "orientation grid is not well formed");
    }
    const auto count = [](double lo, double hi, double step) {
        return static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    };
    std::vector<Orientation> out;
    const std::size_t n_az = count(az_min, az_max, az_step);
    const std::size_t n_el = count(el_min, el_max, el_step);
    out.reserve(n_az * n_el);
    for (std::size_t i = 0; i < n_az; ++i) {
        for (std::size_t j = 0; j < n_el; ++j) {
            out.push_back(Orientation{az_min + static_cast<double>(i) * az_step,
                                      el_min + static_cast<double>(j) * el_step});
        }
    }
    return out;
}

void validate_scenario(const SyntheticScenario& scn) {
    geometry::validate_site(scn.site);
    propagation::validate_model(scn.truth_model);
    if (!std::isfinite(scn.rolloff_db_per_10deg) || scn.rolloff_db_per_10deg < 0.0) {
        throw Error(ErrorCode::InvalidInput, "beam rolloff must be finite and non-negative");
    }
    if (!std::isfinite(scn.d_ota) || !(scn.d_ota > 0.0)) {
        throw Error(ErrorCode::InvalidInput, fmt("calibration distance %g m is not positive", scn.d_ota));
    }
    const SystemResponse& sr = scn.system_response;
    if (!std::isfinite(sr.gain_db) || !std::isfinite(sr.phase_rad) ||
        !std::isfinite(sr.ripple_db) || !std::isfinite(sr.ripple_cycles)) {
        throw Error(ErrorCode::InvalidInput, "system response parameters must be finite");
    }
    if (sr.ripple_db < 0.0 || sr.ripple_db >= 6.0) {
        throw Error(ErrorCode::InvalidInput,
                    fmt("ripple of %g dB would let the system response reach zero", sr.ripple_db));
    }
    (void)scn.grid.orientations();
    const double delay_span = 1.0 / sounder::kDefaultFStepHz;
    for (const auto& [rx_id, paths] : scn.extra_paths) {
        (void)geometry::find_rx(scn.site, rx_id);
        for (const SyntheticPath& p : paths) {
            if (!std::isfinite(p.delay) || p.delay < 0.0 || p.delay >= delay_span) {
                throw Error(ErrorCode::InvalidInput,
                            fmt("extra path delay %g s is outside the unambiguous span", p.delay));
            }
            if (!std::isfinite(p.gain_db) || !std::isfinite(p.phase)) {
                throw Error(ErrorCode::InvalidInput, "extra path gain and phase must be finite");
            }
        }
    }
}

std::complex<double> system_response_at(const SystemResponse& sr, double f_hz) {
    const double x = (f_hz - sounder::kDefaultFStartHz) / kSweepSpanHz;
    const double ripple_amp = std::pow(10.0, sr.ripple_db / 20.0) - 1.0;
    const double mag = std::pow(10.0, sr.gain_db / 20.0) *
                       (1.0 + ripple_amp * std::cos(2.0 * kPi * sr.ripple_cycles * x));
    return std::polar(mag, sr.phase_rad);
}

double beam_factor(double rolloff_db_per_10deg, const Orientation& orientation) {
    const double az = orientation.azimuth_deg;
    const double el = orientation.elevation_deg;
    const double loss_db = rolloff_db_per_10deg * (az * az + el * el) / 100.0;
    return std::pow(10.0, -loss_db / 20.0);
}

FrequencyScan synthesize_measurement(const SyntheticScenario& scn, const std::string& rx_id,
                                     const Orientation& orientation) {
    validate_scenario(scn);
    const double d = geometry::tx_rx_distance(scn.site, rx_id);
    const double depth = geometry::vegetation_depth(scn.site, rx_id);
    const double b = beam_factor(scn.rolloff_db_per_10deg, orientation);
    const double sigma = noise_sigma(scn, d, depth);

    const std::vector<SyntheticPath>* paths = nullptr;
    if (const auto it = scn.extra_paths.find(rx_id); it != scn.extra_paths.end()) {
        paths = &it->second;
    }

    FrequencyScan scan;
    scan.f_start = sounder::kDefaultFStartHz;
    scan.f_step = sounder::kDefaultFStepHz;
    scan.orientation = orientation;
    scan.rx_id = rx_id;
    scan.distance = d;
    scan.samples.resize(sounder::kDefaultNPoints);

    std::mt19937_64 gen(sweep_seed(scn, rx_id, orientation));
    const double noise_quad = sigma / std::numbers::sqrt2;
    for (std::size_t k = 0; k < scan.samples.size(); ++k) {
        const double f = scan.frequency_at(k);
        const double a_veg =
            std::pow(10.0, -propagation::predict_loss(scn.truth_model, f, depth,
                                                      propagation::Bound::Mid) / 20.0);
        std::complex<double> h = sounder::free_space_response(f, d) * (a_veg * b);
        if (paths != nullptr) {
            for (const SyntheticPath& p : *paths) {
                const double gain = std::pow(10.0, p.gain_db / 20.0);
                h += std::polar(gain, p.phase - 2.0 * kPi * (f - scan.f_start) * p.delay);
            }
        }
        h *= system_response_at(scn.system_response, f);
        if (sigma > 0.0) {
            const auto [g_re, g_im] = rng::gaussian_pair(gen);
            h += std::complex<double>(noise_quad * g_re, noise_quad * g_im);
        }
        scan.samples[k] = h;
    }
    return scan;
}

CalibrationScan synthesize_ota(const SyntheticScenario& scn) {
    validate_scenario(scn);
    CalibrationScan cal;
    cal.d_ota = scn.d_ota;
    cal.scan.f_start = sounder::kDefaultFStartHz;
    cal.scan.f_step = sounder::kDefaultFStepHz;
    cal.scan.rx_id = "OTA";
    cal.scan.distance = scn.d_ota;
    cal.scan.samples.resize(sounder::kDefaultNPoints);
    for (std::size_t k = 0; k < cal.scan.samples.size(); ++k) {
        const double f = cal.scan.frequency_at(k);
        cal.scan.samples[k] = system_response_at(scn.system_response, f) *
                              sounder::free_space_response(f, scn.d_ota);
    }
    return cal;
}

DirectionalScanSet synthesize_set(const SyntheticScenario& scn, const std::string& rx_id) {
    DirectionalScanSet set;
    for (const Orientation& orientation : scn.grid.orientations()) {
        set.scans.push_back(synthesize_measurement(scn, rx_id, orientation));
    }
    sounder::validate_scan_set(set);
    return set;
}

} // namespace vegloss::synth
