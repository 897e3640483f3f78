// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the vegloss authors

#include "vegloss/propagation.hpp"

#include <cmath>

namespace vegloss::propagation {

double friis_db(double f_hz, double d_m) {
    if (!(f_hz > 0.0) || !std::isfinite(f_hz))
        throw Error(ErrorCode::InvalidInput, "friis_db requires f > 0");
    if (!(d_m > 0.0) || !std::isfinite(d_m))
        throw Error(ErrorCode::InvalidInput, "friis_db requires d > 0");
    return -20.0 * std::log10(4.0 * M_PI * d_m * f_hz / kSpeedOfLight);
}

double excess_loss(double p_friis_db, double p_los_db) {
    if (!std::isfinite(p_friis_db) || !std::isfinite(p_los_db))
        throw Error(ErrorCode::InvalidInput, "excess_loss requires finite inputs");
    return p_friis_db - p_los_db;
}

void validate_model(const VegLossModel& model) {
    if (model.entries.empty())
        throw Error(ErrorCode::BandCoverageError, "model has no bands");
    const double eps = 1e-3; // Hz scale tolerance for band edges
    for (std::size_t i = 0; i < model.entries.size(); ++i) {
        const auto& e = model.entries[i];
        if (!(e.band.f_low < e.band.f_high))
            throw Error(ErrorCode::InvalidInput, "band with f_low >= f_high");
        if (!(e.alpha_min <= e.alpha && e.alpha <= e.alpha_max))
            throw Error(ErrorCode::InvalidInput,
                        "band slopes must satisfy alpha_min <= alpha <= alpha_max");
        if (i > 0) {
            const double prev_high = model.entries[i - 1].band.f_high;
            if (e.band.f_low < prev_high - eps)
                throw Error(ErrorCode::BandCoverageError, "overlapping bands");
            if (e.band.f_low > prev_high + eps)
                throw Error(ErrorCode::BandCoverageError, "gap between bands");
        }
    }
}

std::size_t band_index(const VegLossModel& model, double f_hz) {
    if (model.entries.empty())
        throw Error(ErrorCode::OutOfBand, "model has no bands");
    for (std::size_t i = 0; i < model.entries.size(); ++i) {
        const auto& b = model.entries[i].band;
        const bool last = (i + 1 == model.entries.size());
        if (f_hz >= b.f_low && (f_hz < b.f_high || (last && f_hz <= b.f_high)))
            return i;
    }
    throw Error(ErrorCode::OutOfBand, "frequency outside model coverage");
}

double predict_loss(const VegLossModel& model, double f_hz, double d_veg_m, Bound bound) {
    if (d_veg_m < 0.0 || !std::isfinite(d_veg_m))
        throw Error(ErrorCode::InvalidInput, "predict_loss requires d_veg >= 0");
    const auto& e = model.entries[band_index(model, f_hz)];
    switch (bound) {
    case Bound::Low:
        return e.alpha_min * d_veg_m;
    case Bound::High:
        return e.alpha_max * d_veg_m;
    case Bound::Mid:
    default:
        return e.alpha * d_veg_m;
    }
}

double link_budget(const LinkBudgetInput& in, const VegLossModel& model) {
    if (!(in.distance > 0.0))
        throw Error(ErrorCode::InvalidInput, "link_budget requires d > 0");
    if (in.veg_depth < 0.0 || in.veg_depth > in.distance)
        throw Error(ErrorCode::InvalidInput, "link_budget requires 0 <= d_veg <= d");
    return in.tx_power_dbm + in.tx_gain_dbi + in.rx_gain_dbi + friis_db(in.f, in.distance) -
           predict_loss(model, in.f, in.veg_depth, Bound::Mid);
}

const VegLossModel& builtin_model() {
    static const VegLossModel model = [] {
        auto ghz = [](double g) { return g * 1e9; };
        VegLossModel m;
        m.entries = {
            {{ghz(6), ghz(7)}, 0.86, 1.26, 1.66},   {{ghz(7), ghz(8)}, 1.04, 1.50, 1.95},
            {{ghz(8), ghz(9)}, 1.11, 1.55, 2.00},   {{ghz(9), ghz(10)}, 0.91, 1.57, 2.23},
            {{ghz(10), ghz(11)}, 1.24, 1.68, 2.11}, {{ghz(11), ghz(12)}, 1.23, 1.80, 2.38},
            {{ghz(12), ghz(13)}, 1.33, 1.80, 2.26}, {{ghz(13), ghz(14)}, 1.12, 1.69, 2.27},
            {{ghz(14), ghz(15)}, 1.35, 1.80, 2.25}, {{ghz(15), ghz(16)}, 1.22, 1.81, 2.40},
            {{ghz(16), ghz(17)}, 1.25, 1.76, 2.26}, {{ghz(17), ghz(18)}, 1.10, 1.79, 2.48},
        };
        validate_model(m);
        return m;
    }();
    return model;
}

} // namespace vegloss::propagation
