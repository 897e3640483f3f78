// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the vegloss authors

#include "vegloss/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include <boost/math/distributions/students_t.hpp>

namespace vegloss::fitting {
namespace {

void validate_samples(const std::vector<DepthLossSample>& samples) {
    if (samples.empty()) {
        throw Error(ErrorCode::InvalidInput, "no samples to fit");
    }
    for (const DepthLossSample& s : samples) {
        if (!std::isfinite(s.d_veg) || s.d_veg < 0.0) {
            throw Error(ErrorCode::InvalidInput, "vegetation depth must be finite and non-negative");
        }
        if (!std::isfinite(s.l_veg_db)) {
            throw Error(ErrorCode::InvalidInput, "excess loss must be finite");
        }
    }
}

std::size_t positive_depth_count(const std::vector<DepthLossSample>& samples) {
    std::size_t n = 0;
    for (const DepthLossSample& s : samples) {
        if (s.d_veg > 0.0) ++n;
    }
    return n;
}

std::string band_label(const SubBand& band) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%g-%g GHz", band.f_low / 1e9, band.f_high / 1e9);
    return buf;
}

} // namespace

FitResult fit_origin_constrained(const std::vector<DepthLossSample>& samples) {
    validate_samples(samples);
    if (positive_depth_count(samples) == 0) {
        throw Error(ErrorCode::DegenerateFit, "all samples have zero vegetation depth");
    }
    double sum_dl = 0.0;
    double sum_dd = 0.0;
    for (const DepthLossSample& s : samples) {
        sum_dl += s.d_veg * s.l_veg_db;
        sum_dd += s.d_veg * s.d_veg;
    }
    FitResult fit;
    fit.band = samples.front().band;
    fit.alpha = sum_dl / sum_dd;
    fit.n = samples.size();
    fit.residuals.reserve(samples.size());
    for (const DepthLossSample& s : samples) {
        fit.residuals.push_back(s.l_veg_db - fit.alpha * s.d_veg);
    }
    // The interval needs two positive-depth samples; a lone sample gets
    // the degenerate interval at alpha.
    if (positive_depth_count(samples) >= 2) {
        const auto [lo, hi] = slope_bounds(samples, fit.alpha);
        fit.alpha_min = lo;
        fit.alpha_max = hi;
    } else {
        fit.alpha_min = fit.alpha;
        fit.alpha_max = fit.alpha;
    }
    return fit;
}

std::pair<double, double> slope_bounds(const std::vector<DepthLossSample>& samples, double alpha,
                                       double level, BoundsMethod method) {
    validate_samples(samples);
    if (!std::isfinite(alpha)) {
        throw Error(ErrorCode::InvalidInput, "slope must be finite");
    }
    if (!std::isfinite(level) || !(level > 0.0) || !(level < 1.0)) {
        throw Error(ErrorCode::InvalidInput, "confidence level must lie in (0, 1)");
    }
    if (positive_depth_count(samples) < 2) {
        throw Error(ErrorCode::InsufficientData, "slope bounds need at least two positive-depth samples");
    }

    if (method == BoundsMethod::Empirical) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -std::numeric_limits<double>::infinity();
        for (const DepthLossSample& s : samples) {
            if (s.d_veg <= 0.0) continue;
            const double slope = s.l_veg_db / s.d_veg;
            lo = std::min(lo, slope);
            hi = std::max(hi, slope);
        }
        return {std::max(0.0, lo), hi};
    }

    const std::size_t n = samples.size();
    double rss = 0.0;
    double sum_dd = 0.0;
    for (const DepthLossSample& s : samples) {
        const double r = s.l_veg_db - alpha * s.d_veg;
        rss += r * r;
        sum_dd += s.d_veg * s.d_veg;
    }
    const double s2 = rss / static_cast<double>(n - 1);
    const boost::math::students_t dist(static_cast<double>(n - 1));
    const double t = boost::math::quantile(dist, 0.5 * (1.0 + level));
    const double half_width = t * std::sqrt(s2 / sum_dd);
    return {std::max(0.0, alpha - half_width), alpha + half_width};
}

VegLossModel build_model(const std::vector<FitResult>& fits, std::vector<std::string>* warnings) {
    if (fits.empty()) {
        throw Error(ErrorCode::InvalidInput, "no fits to assemble");
    }
    std::vector<FitResult> ordered = fits;
    std::sort(ordered.begin(), ordered.end(),
              [](const FitResult& a, const FitResult& b) { return a.band.f_low < b.band.f_low; });

    VegLossModel model;
    model.entries.reserve(ordered.size());
    for (const FitResult& fit : ordered) {
        propagation::VegLossEntry entry{fit.band, fit.alpha_min, fit.alpha, fit.alpha_max};
        if (entry.alpha_min < 0.0 || entry.alpha < 0.0 || entry.alpha_max < 0.0) {
            if (warnings != nullptr) {
                warnings->push_back("clamped negative slope to 0 in band " + band_label(fit.band));
            }
            entry.alpha_min = std::max(0.0, entry.alpha_min);
            entry.alpha = std::max(0.0, entry.alpha);
            entry.alpha_max = std::max(0.0, entry.alpha_max);
        }
        model.entries.push_back(entry);
    }
    propagation::validate_model(model);
    return model;
}

} // namespace vegloss::fitting
