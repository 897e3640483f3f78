// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the vegloss authors

#include "vegloss/sounder.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <mutex>
#include <numbers>
#include <string>
#include <vector>

#include <fftw3.h>

namespace vegloss::sounder {
namespace {

constexpr double kPi = std::numbers::pi;

// FFTW plan creation and destruction share global state; execution does not.
std::mutex& fftw_plan_mutex() {
    static std::mutex m;
    return m;
}

bool finite(double v) { return std::isfinite(v); }

std::string fmt(const char* format, double a, double b = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), format, a, b);
    return buf;
}

// Window samples normalized to unit mean square, so windowing preserves
// mean spectrum power and the PDP total obeys Parseval.
std::vector<double> window_values(Window window, std::size_t n) {
    std::vector<double> w(n, 1.0);
    if (window == Window::Hann) {
        // Periodic form: the analysis kernel then closes over Dirichlet sums.
        for (std::size_t k = 0; k < n; ++k) {
            w[k] = 0.5 * (1.0 - std::cos(2.0 * kPi * static_cast<double>(k) / static_cast<double>(n)));
        }
    }
    double ms = 0.0;
    for (double v : w) ms += v * v;
    ms /= static_cast<double>(n);
    if (!(ms > 0.0)) {
        throw Error(ErrorCode::InvalidInput, "window has zero energy");
    }
    const double inv_rms = 1.0 / std::sqrt(ms);
    for (double& v : w) v *= inv_rms;
    return w;
}

double window_inv_rms(Window window, std::size_t n) {
    if (window == Window::Rectangular) return 1.0;
    double ms = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double v = 0.5 * (1.0 - std::cos(2.0 * kPi * static_cast<double>(k) / static_cast<double>(n)));
        ms += v * v;
    }
    return 1.0 / std::sqrt(ms / static_cast<double>(n));
}

// sum_{k=0}^{n-1} exp(j 2 pi k u / n). Real n at integer multiples of n;
// elsewhere the closed geometric form.
std::complex<double> dirichlet_sum(double u, std::size_t n) {
    const double nn = static_cast<double>(n);
    const double den = std::sin(kPi * u / nn);
    if (den == 0.0) return {nn, 0.0};
    const double mag = std::sin(kPi * u) / den;
    const double phase = kPi * u * (nn - 1.0) / nn;
    return {mag * std::cos(phase), mag * std::sin(phase)};
}

double kernel_mag(Window window, std::size_t n, double u, double inv_rms) {
    const double nn = static_cast<double>(n);
    if (window == Window::Rectangular) {
        return std::abs(dirichlet_sum(u, n)) / nn;
    }
    // Periodic Hann is three Dirichlet kernels: 0.5 D(u) - 0.25 D(u +/- 1).
    const std::complex<double> s = 0.5 * dirichlet_sum(u, n) -
                                   0.25 * dirichlet_sum(u + 1.0, n) -
                                   0.25 * dirichlet_sum(u - 1.0, n);
    return inv_rms * std::abs(s) / nn;
}

void require_grid(const PowerDelayProfile& pdp) {
    if (pdp.n_transform == 0 || !(pdp.delay_step > 0.0)) {
        throw Error(ErrorCode::InvalidInput, "profile lacks a delay grid");
    }
}

long long bin_index(const PdpBin& bin, double delay_step) {
    return std::llround(bin.delay / delay_step);
}

} // namespace

void validate_scan(const FrequencyScan& scan) {
    if (scan.samples.size() < 2) {
        throw Error(ErrorCode::InvalidInput, "scan needs at least two frequency samples");
    }
    if (!finite(scan.f_start) || !(scan.f_start > 0.0)) {
        throw Error(ErrorCode::InvalidInput, fmt("scan start frequency %g Hz is not positive", scan.f_start));
    }
    if (!finite(scan.f_step) || !(scan.f_step > 0.0)) {
        throw Error(ErrorCode::InvalidInput, fmt("scan frequency step %g Hz is not positive", scan.f_step));
    }
    if (!finite(scan.distance) || scan.distance < 0.0) {
        throw Error(ErrorCode::InvalidInput, "scan distance must be finite and non-negative");
    }
    if (!finite(scan.orientation.azimuth_deg) || !finite(scan.orientation.elevation_deg)) {
        throw Error(ErrorCode::InvalidInput, "scan orientation must be finite");
    }
    for (std::size_t k = 0; k < scan.samples.size(); ++k) {
        const auto& s = scan.samples[k];
        if (!finite(s.real()) || !finite(s.imag())) {
            throw Error(ErrorCode::InvalidInput, fmt("scan sample %g is not finite", static_cast<double>(k)));
        }
    }
}

void validate_scan_set(const DirectionalScanSet& set) {
    if (set.scans.empty()) {
        throw Error(ErrorCode::InvalidInput, "directional scan set is empty");
    }
    const FrequencyScan& ref = set.scans.front();
    for (const FrequencyScan& scan : set.scans) {
        validate_scan(scan);
        if (scan.f_start != ref.f_start || scan.f_step != ref.f_step ||
            scan.samples.size() != ref.samples.size()) {
            throw Error(ErrorCode::GridMismatch, "scan set mixes frequency grids");
        }
        if (scan.rx_id != ref.rx_id) {
            throw Error(ErrorCode::InvalidInput, "scan set mixes rx points: " + ref.rx_id + " and " + scan.rx_id);
        }
        if (scan.distance != ref.distance) {
            throw Error(ErrorCode::InvalidInput, "scan set mixes link distances");
        }
    }
    for (std::size_t i = 0; i < set.scans.size(); ++i) {
        for (std::size_t j = i + 1; j < set.scans.size(); ++j) {
            if (set.scans[i].orientation == set.scans[j].orientation) {
                throw Error(ErrorCode::InvalidInput,
                            fmt("duplicate orientation az %g el %g in scan set",
                                set.scans[i].orientation.azimuth_deg,
                                set.scans[i].orientation.elevation_deg));
            }
        }
    }
}

std::complex<double> free_space_response(double f_hz, double d_m) {
    if (!finite(f_hz) || !(f_hz > 0.0)) {
        throw Error(ErrorCode::InvalidInput, fmt("frequency %g Hz is not positive", f_hz));
    }
    if (!finite(d_m) || !(d_m > 0.0)) {
        throw Error(ErrorCode::InvalidInput, fmt("distance %g m is not positive", d_m));
    }
    const double amp = propagation::kSpeedOfLight / (4.0 * kPi * d_m * f_hz);
    const double phase = -2.0 * kPi * f_hz * d_m / propagation::kSpeedOfLight;
    return std::polar(amp, phase);
}

FrequencyScan calibrate(const FrequencyScan& meas, const CalibrationScan& cal) {
    validate_scan(meas);
    validate_scan(cal.scan);
    if (!finite(cal.d_ota) || !(cal.d_ota > 0.0)) {
        throw Error(ErrorCode::InvalidInput, fmt("calibration distance %g m is not positive", cal.d_ota));
    }
    if (meas.f_start != cal.scan.f_start || meas.f_step != cal.scan.f_step ||
        meas.samples.size() != cal.scan.samples.size()) {
        throw Error(ErrorCode::GridMismatch, "measurement and calibration use different frequency grids");
    }
    FrequencyScan out = meas;
    for (std::size_t k = 0; k < meas.samples.size(); ++k) {
        const std::complex<double>& c = cal.scan.samples[k];
        if (std::norm(c) == 0.0) {
            throw Error(ErrorCode::DegenerateCalibration,
                        fmt("calibration sample at %g Hz is zero", meas.frequency_at(k)));
        }
        out.samples[k] = meas.samples[k] / c * free_space_response(meas.frequency_at(k), cal.d_ota);
    }
    return out;
}

FrequencyScan subband_slice(const FrequencyScan& scan, const SubBand& band) {
    validate_scan(scan);
    if (!finite(band.f_low) || !finite(band.f_high) || !(band.f_low < band.f_high)) {
        throw Error(ErrorCode::InvalidInput, fmt("sub-band [%g, %g] Hz is not ordered", band.f_low, band.f_high));
    }
    const long long n = static_cast<long long>(scan.samples.size());
    const long long i_lo = std::llround((band.f_low - scan.f_start) / scan.f_step);
    const long long i_hi = std::llround((band.f_high - scan.f_start) / scan.f_step);
    if (i_lo < 0 || i_hi >= n) {
        throw Error(ErrorCode::OutOfBand,
                    fmt("sub-band [%g, %g] Hz is outside the scanned range", band.f_low, band.f_high));
    }
    if (i_hi - i_lo < 1) {
        throw Error(ErrorCode::InvalidInput, "sub-band is narrower than the frequency step");
    }
    FrequencyScan out = scan;
    out.f_start = scan.frequency_at(static_cast<std::size_t>(i_lo));
    out.samples.assign(scan.samples.begin() + i_lo, scan.samples.begin() + i_hi + 1);
    return out;
}

PowerDelayProfile compute_pdp(const FrequencyScan& scan, Window window) {
    validate_scan(scan);
    const std::size_t n = scan.samples.size();
    const std::vector<double> w = window_values(window, n);

    fftw_complex* in = fftw_alloc_complex(n);
    fftw_complex* out = fftw_alloc_complex(n);
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(fftw_plan_mutex());
        plan = fftw_plan_dft_1d(static_cast<int>(n), in, out, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    for (std::size_t k = 0; k < n; ++k) {
        in[k][0] = w[k] * scan.samples[k].real();
        in[k][1] = w[k] * scan.samples[k].imag();
    }
    fftw_execute(plan);

    PowerDelayProfile pdp;
    pdp.band = SubBand{scan.f_start, scan.f_end()};
    pdp.n_transform = n;
    pdp.delay_step = 1.0 / (static_cast<double>(n) * scan.f_step);
    pdp.window = window;
    pdp.bins.resize(n);
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double re = out[i][0] * inv_n;
        const double im = out[i][1] * inv_n;
        pdp.bins[i].delay = static_cast<double>(i) * pdp.delay_step;
        pdp.bins[i].power = re * re + im * im;
    }
    {
        std::lock_guard<std::mutex> lock(fftw_plan_mutex());
        fftw_destroy_plan(plan);
    }
    fftw_free(in);
    fftw_free(out);
    return pdp;
}

double estimate_noise_floor(const PowerDelayProfile& pdp, double tail_fraction) {
    if (pdp.gated) {
        throw Error(ErrorCode::InvalidInput, "noise floor must be estimated before gating");
    }
    if (!finite(tail_fraction) || !(tail_fraction > 0.0) || tail_fraction > 0.5) {
        throw Error(ErrorCode::InvalidInput, fmt("tail fraction %g is outside (0, 0.5]", tail_fraction));
    }
    const std::size_t n = pdp.bins.size();
    const std::size_t n_tail = static_cast<std::size_t>(std::floor(static_cast<double>(n) * tail_fraction));
    if (n_tail < 10) {
        throw Error(ErrorCode::InsufficientData,
                    fmt("noise tail has %g bins, need at least 10", static_cast<double>(n_tail)));
    }
    std::vector<double> tail(n_tail);
    for (std::size_t i = 0; i < n_tail; ++i) {
        tail[i] = pdp.bins[n - n_tail + i].power;
    }
    std::sort(tail.begin(), tail.end());
    const std::size_t mid = n_tail / 2;
    if (n_tail % 2 == 1) return tail[mid];
    return 0.5 * (tail[mid - 1] + tail[mid]);
}

double default_tau_gate(const PowerDelayProfile& pdp) {
    require_grid(pdp);
    return 0.9 * pdp.delay_span();
}

PowerDelayProfile gate_and_threshold(const PowerDelayProfile& pdp, double tau_gate,
                                     double threshold_offset_db, double tail_fraction) {
    require_grid(pdp);
    if (!finite(tau_gate) || !(tau_gate > 0.0) || tau_gate > pdp.delay_span()) {
        throw Error(ErrorCode::InvalidGate,
                    fmt("gate %g s is outside the delay span (0, %g] s", tau_gate, pdp.delay_span()));
    }
    if (!finite(threshold_offset_db)) {
        throw Error(ErrorCode::InvalidInput, "threshold offset must be finite");
    }
    // A gated profile keeps its original floor; re-estimating from retained
    // bins would measure the threshold, not the noise.
    const double floor = pdp.gated ? pdp.noise_floor : estimate_noise_floor(pdp, tail_fraction);
    const double threshold = floor * std::pow(10.0, threshold_offset_db / 10.0);

    PowerDelayProfile out = pdp;
    out.bins.clear();
    for (const PdpBin& bin : pdp.bins) {
        if (bin.delay <= tau_gate && bin.power >= threshold) {
            out.bins.push_back(bin);
        }
    }
    out.gated = true;
    out.noise_floor = floor;
    out.threshold = threshold;
    out.tau_gate = tau_gate;
    return out;
}

double window_kernel(Window window, std::size_t n, double u) {
    if (n < 2) {
        throw Error(ErrorCode::InvalidInput, "window kernel needs at least two samples");
    }
    return kernel_mag(window, n, u, window_inv_rms(window, n));
}

double extract_los_power(const PowerDelayProfile& pdp, double d_m, std::size_t search_halfwidth) {
    require_grid(pdp);
    if (!pdp.gated) {
        throw Error(ErrorCode::InvalidInput, "LoS extraction requires a gated profile");
    }
    if (!finite(d_m) || !(d_m > 0.0)) {
        throw Error(ErrorCode::InvalidInput, fmt("link distance %g m is not positive", d_m));
    }
    const double tau_expected = d_m / propagation::kSpeedOfLight;
    const long long expected = std::llround(tau_expected / pdp.delay_step);
    const long long halfwidth = static_cast<long long>(search_halfwidth);

    bool found = false;
    long long peak_idx = 0;
    double peak_power = 0.0;
    for (const PdpBin& bin : pdp.bins) {
        const long long idx = bin_index(bin, pdp.delay_step);
        if (std::llabs(idx - expected) > halfwidth) continue;
        if (!found || bin.power > peak_power) {
            found = true;
            peak_idx = idx;
            peak_power = bin.power;
        }
    }
    if (!found || !(peak_power > 0.0)) {
        throw Error(ErrorCode::LosNotFound,
                    fmt("no retained bin within %g bins of the expected delay %g s",
                        static_cast<double>(search_halfwidth), tau_expected));
    }

    double p_lo = 0.0;
    double p_hi = 0.0;
    for (const PdpBin& bin : pdp.bins) {
        const long long idx = bin_index(bin, pdp.delay_step);
        if (idx == peak_idx - 1) p_lo = bin.power;
        if (idx == peak_idx + 1) p_hi = bin.power;
    }

    // A path at fractional bin offset delta leaves |X[peak]| = A W(delta)
    // and |X[peak +/- 1]| = A W(1 -/+ delta), W the window kernel. The
    // amplitude ratio to the stronger neighbor pins delta, then the peak
    // magnitude divided by W(delta) restores A without scalloping loss.
    const std::size_t n = pdp.n_transform;
    const double inv_rms = window_inv_rms(pdp.window, n);
    const auto kernel = [&](double u) { return kernel_mag(pdp.window, n, u, inv_rms); };

    double delta = 0.0;
    const double p_nb = std::max(p_lo, p_hi);
    if (p_nb > 0.0) {
        const double r_floor = kernel(1.0) / kernel(0.0);
        const double r = std::clamp(std::sqrt(p_nb / peak_power), r_floor, 1.0);
        // W(1 - delta) - r W(delta) increases on [0, 0.5] and brackets zero
        // for r in [W(1)/W(0), 1].
        double lo = 0.0;
        double hi = 0.5;
        for (int i = 0; i < 64; ++i) {
            const double mid = 0.5 * (lo + hi);
            if (kernel(1.0 - mid) - r * kernel(mid) < 0.0) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        delta = 0.5 * (lo + hi);
    }
    const double w_peak = kernel(delta);
    return 10.0 * std::log10(peak_power) - 20.0 * std::log10(w_peak);
}

AlignmentResult select_best_alignment(const DirectionalScanSet& set, const CalibrationScan& cal,
                                      const SubBand& band, const ProcessingOptions& opts) {
    validate_scan_set(set);

    bool found = false;
    AlignmentResult best{};
    double best_az = 0.0;
    double best_el = 0.0;
    for (const FrequencyScan& scan : set.scans) {
        const FrequencyScan calibrated = calibrate(scan, cal);
        const FrequencyScan slice = subband_slice(calibrated, band);
        const PowerDelayProfile pdp = compute_pdp(slice, opts.window);
        const double gate = opts.tau_gate < 0.0 ? default_tau_gate(pdp) : opts.tau_gate;
        const PowerDelayProfile gated =
            gate_and_threshold(pdp, gate, opts.threshold_offset_db, opts.tail_fraction);

        double p_los;
        try {
            p_los = extract_los_power(gated, scan.distance, opts.search_halfwidth);
        } catch (const Error& err) {
            if (err.code() == ErrorCode::LosNotFound) continue;
            throw;
        }

        const double az = std::abs(scan.orientation.azimuth_deg);
        const double el = std::abs(scan.orientation.elevation_deg);
        const bool better = !found || p_los > best.p_los_db ||
                            (p_los == best.p_los_db &&
                             (az < best_az || (az == best_az && el < best_el)));
        if (better) {
            found = true;
            best.orientation = scan.orientation;
            best.p_los_db = p_los;
            best_az = az;
            best_el = el;
        }
    }
    if (!found) {
        throw Error(ErrorCode::NoAlignment, "no orientation retained a line-of-sight component");
    }
    return best;
}

} // namespace vegloss::sounder
