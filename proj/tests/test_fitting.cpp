// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the vegloss authors

#include <cmath>
#include <random>
#include <vector>

#include <doctest.h>

#include "vegloss/fitting.hpp"

using namespace vegloss;
using namespace vegloss::fitting;

namespace {

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

const SubBand kBand{6e9, 7e9};

std::vector<DepthLossSample> make_samples(const std::vector<std::pair<double, double>>& dl) {
    std::vector<DepthLossSample> out;
    for (const auto& [d, l] : dl) {
        out.push_back({"rx", kBand, d, l});
    }
    return out;
}

double sse(const std::vector<DepthLossSample>& samples, double alpha) {
    double s = 0.0;
    for (const auto& sample : samples) {
        const double r = sample.l_veg_db - alpha * sample.d_veg;
        s += r * r;
    }
    return s;
}

} // namespace

TEST_CASE("single sample pins the slope") {
    const FitResult fit = fit_origin_constrained(make_samples({{2.0, 4.0}}));
    CHECK(fit.alpha == 2.0);
    CHECK(fit.alpha_min == 2.0);
    CHECK(fit.alpha_max == 2.0);
    CHECK(fit.n == 1);
    CHECK(fit.residuals.size() == 1);
    CHECK(near(fit.residuals[0], 0.0, 1e-15));
}

TEST_CASE("closed form matches the normal equation") {
    const auto samples = make_samples({{1.0, 2.0}, {2.0, 3.8}, {3.0, 6.3}});
    const FitResult fit = fit_origin_constrained(samples);
    // sum(d*l)/sum(d*d) = 28.5 / 14
    CHECK(near(fit.alpha, 28.5 / 14.0, 1e-15));
    REQUIRE(fit.residuals.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(near(fit.residuals[i], samples[i].l_veg_db - fit.alpha * samples[i].d_veg, 1e-15));
    }
}

TEST_CASE("collinear data recovers the slope exactly") {
    const auto samples = make_samples({{1.0, 2.5}, {4.0, 10.0}, {9.5, 23.75}});
    const FitResult fit = fit_origin_constrained(samples);
    CHECK(near(fit.alpha, 2.5, 1e-13));
    // A perfect fit collapses the confidence interval onto the slope.
    CHECK(near(fit.alpha_min, 2.5, 1e-6));
    CHECK(near(fit.alpha_max, 2.5, 1e-6));
}

TEST_CASE("zero-depth samples contribute residuals but not slope") {
    const auto with_zero = make_samples({{0.0, 0.7}, {2.0, 4.0}, {4.0, 8.4}});
    const auto without = make_samples({{2.0, 4.0}, {4.0, 8.4}});
    const FitResult a = fit_origin_constrained(with_zero);
    const FitResult b = fit_origin_constrained(without);
    CHECK(a.alpha == b.alpha);
    CHECK(a.n == 3);
    CHECK(near(a.residuals[0], 0.7, 1e-15));
    // The zero-depth residual still enters the confidence interval.
    CHECK(a.alpha_max - a.alpha_min != b.alpha_max - b.alpha_min);
}

TEST_CASE("fit minimizes the sum of squared errors") {
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> depth(0.0, 30.0);
    std::uniform_real_distribution<double> noise(-2.0, 2.0);
    std::uniform_int_distribution<int> count(2, 12);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<DepthLossSample> samples;
        samples.push_back({"rx", kBand, depth(rng) + 0.5, 0.0});
        for (int i = 1, n = count(rng); i < n; ++i) {
            samples.push_back({"rx", kBand, depth(rng), 0.0});
        }
        for (auto& s : samples) s.l_veg_db = 1.7 * s.d_veg + noise(rng);
        const FitResult fit = fit_origin_constrained(samples);
        const double base = sse(samples, fit.alpha);
        for (const double eps : {1e-4, -1e-4, 0.01, -0.01}) {
            CHECK(base <= sse(samples, fit.alpha + eps) + 1e-12);
        }
    }
}

TEST_CASE("degenerate and invalid sample sets") {
    CHECK_THROWS_AS(fit_origin_constrained({}), Error);
    try {
        fit_origin_constrained(make_samples({{0.0, 1.0}, {0.0, 2.0}}));
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DegenerateFit);
    }
    CHECK_THROWS_AS(fit_origin_constrained(make_samples({{-1.0, 1.0}})), Error);
    CHECK_THROWS_AS(fit_origin_constrained(make_samples({{1.0, NAN}})), Error);
}

TEST_CASE("confidence bounds match the t-interval") {
    // Three samples, df = 2; t_{2, 0.975} from standard tables.
    const auto samples = make_samples({{1.0, 2.0}, {2.0, 3.8}, {3.0, 6.3}});
    const FitResult fit = fit_origin_constrained(samples);
    const double t = 4.30265272991;
    const double rss = sse(samples, fit.alpha);
    const double half = t * std::sqrt(rss / 2.0 / 14.0);
    const auto [lo, hi] = slope_bounds(samples, fit.alpha, 0.95);
    CHECK(near(lo, std::max(0.0, fit.alpha - half), 1e-9));
    CHECK(near(hi, fit.alpha + half, 1e-9));
    // A wider level widens the interval.
    const auto [lo99, hi99] = slope_bounds(samples, fit.alpha, 0.99);
    CHECK(lo99 <= lo);
    CHECK(hi99 >= hi);
}

TEST_CASE("confidence lower bound is floored at zero") {
    const auto samples = make_samples({{1.0, 0.1}, {2.0, -0.1}, {3.0, 0.2}});
    const FitResult fit = fit_origin_constrained(samples);
    const auto [lo, hi] = slope_bounds(samples, fit.alpha, 0.999);
    CHECK(lo == 0.0);
    CHECK(hi > fit.alpha);
}

TEST_CASE("empirical bounds are the extreme per-sample slopes") {
    const auto samples = make_samples({{0.0, 0.3}, {2.0, 4.0}, {4.0, 9.6}, {10.0, 12.0}});
    const FitResult fit = fit_origin_constrained(samples);
    const auto [lo, hi] = slope_bounds(samples, fit.alpha, 0.95, BoundsMethod::Empirical);
    CHECK(near(lo, 1.2, 1e-15));  // 12 / 10
    CHECK(near(hi, 2.4, 1e-15));  // 9.6 / 4
}

TEST_CASE("bounds need two positive-depth samples") {
    try {
        slope_bounds(make_samples({{2.0, 4.0}}), 2.0);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InsufficientData);
    }
    CHECK_THROWS_AS(slope_bounds(make_samples({{1.0, 1.0}, {2.0, 2.0}}), 1.0, 1.5), Error);
}

TEST_CASE("model assembly sorts bands and clamps negatives") {
    FitResult high;
    high.band = {7e9, 8e9};
    high.alpha_min = 1.0;
    high.alpha = 1.5;
    high.alpha_max = 2.0;
    FitResult low;
    low.band = {6e9, 7e9};
    low.alpha_min = -0.4;
    low.alpha = -0.1;
    low.alpha_max = 0.2;

    std::vector<std::string> warnings;
    const VegLossModel model = build_model({high, low}, &warnings);
    REQUIRE(model.entries.size() == 2);
    CHECK(model.entries[0].band.f_low == 6e9);
    CHECK(model.entries[0].alpha_min == 0.0);
    CHECK(model.entries[0].alpha == 0.0);
    CHECK(model.entries[0].alpha_max == 0.2);
    CHECK(model.entries[1].alpha == 1.5);
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("6-7 GHz") != std::string::npos);

    // Bands that do not tile the range are rejected.
    FitResult gap = high;
    gap.band = {9e9, 10e9};
    CHECK_THROWS_AS(build_model({low, gap}), Error);
}
