// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the vegloss authors

#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "vegloss/errors.hpp"
#include "vegloss/propagation.hpp"

namespace vegloss::fitting {

using propagation::SubBand;
using propagation::VegLossModel;

// One (depth, excess loss) observation for a sub-band.
struct DepthLossSample {
    std::string rx_id;
    SubBand band;
    double d_veg = 0.0;      // m
    double l_veg_db = 0.0;   // dB
};

struct FitResult {
    SubBand band;
    double alpha = 0.0;      // dB/m
    double alpha_min = 0.0;
    double alpha_max = 0.0;
    std::vector<double> residuals; // dB, one per input sample, input order
    std::size_t n = 0;
};

// How alpha_min/alpha_max are derived from the samples. The source data
// behind published bounds is ambiguous, so both are offered and callers
// must label which one produced a model.
enum class BoundsMethod {
    ConfidenceInterval, // through-origin regression CI, default level 0.95
    Empirical,          // min/max of the per-sample slopes l/d
};

// Least-squares slope through the origin: alpha = sum(d*l) / sum(d*d).
// Zero-depth samples do not move the slope but do get residuals.
FitResult fit_origin_constrained(const std::vector<DepthLossSample>& samples);

// Interval around alpha. Confidence method: alpha +/- t_{n-1,(1+level)/2}
// * s / sqrt(sum d^2) with s^2 = RSS/(n-1) over all n samples; the lower
// bound is floored at 0. Empirical method: extreme per-sample slopes.
std::pair<double, double> slope_bounds(const std::vector<DepthLossSample>& samples, double alpha,
                                       double level = 0.95,
                                       BoundsMethod method = BoundsMethod::ConfidenceInterval);

// Assembles per-band fits into a model, sorting bands canonically.
// Negative slopes are clamped to 0 with a note appended to warnings;
// vegetation cannot amplify.
VegLossModel build_model(const std::vector<FitResult>& fits, std::vector<std::string>* warnings = nullptr);

} // namespace vegloss::fitting
