// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the vegloss authors

#include <cmath>
#include <random>

#include <doctest.h>

#include "vegloss/geometry.hpp"

using namespace vegloss;
using geometry::chord_length;
using geometry::RaySegment;
using geometry::SiteGeometry;
using geometry::TreeEllipse;

namespace {

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

TreeEllipse ellipse(double cx, double cz, double a, double b) {
    return TreeEllipse{{cx, cz}, a, b, "t"};
}

RaySegment segment(double x0, double z0, double x1, double z1) {
    return RaySegment{{x0, z0}, {x1, z1}};
}

// Search oracle, independent of the quadratic's root formula. The squared
// normalized distance q(t) is convex along the segment, so the inside set
// is one interval: locate the minimum by ternary search, then bisect the
// boundary crossings.
double searched_chord(const TreeEllipse& e, const RaySegment& ray) {
    const double sx = ray.end.x - ray.start.x;
    const double sz = ray.end.z - ray.start.z;
    const double seg_len = std::hypot(sx, sz);
    const auto q = [&](double t) {
        const double px = (ray.start.x + t * sx - e.center.x) / e.a;
        const double pz = (ray.start.z + t * sz - e.center.z) / e.b;
        return px * px + pz * pz - 1.0;
    };
    double lo = 0.0, hi = 1.0;
    for (int i = 0; i < 200; ++i) {
        const double m1 = lo + (hi - lo) / 3.0;
        const double m2 = hi - (hi - lo) / 3.0;
        if (q(m1) < q(m2)) hi = m2; else lo = m1;
    }
    const double t_min = 0.5 * (lo + hi);
    if (!(q(t_min) < 0.0)) return 0.0;

    const auto crossing = [&](double t_in, double t_out) {
        for (int i = 0; i < 100; ++i) {
            const double mid = 0.5 * (t_in + t_out);
            (q(mid) < 0.0 ? t_in : t_out) = mid;
        }
        return 0.5 * (t_in + t_out);
    };
    const double t_lo = q(0.0) < 0.0 ? 0.0 : crossing(t_min, 0.0);
    const double t_hi = q(1.0) < 0.0 ? 1.0 : crossing(t_min, 1.0);
    return (t_hi - t_lo) * seg_len;
}

SiteGeometry basic_site() {
    SiteGeometry site;
    site.tx = {0.0, 0.0, 10.0};
    site.rx_points = {{"rx1", {100.0, 0.0, 2.0}}};
    return site;
}

} // namespace

TEST_CASE("chord through circle center") {
    CHECK(near(chord_length(ellipse(0, 0, 2, 2), segment(-5, 0, 5, 0)), 4.0, 1e-12));
}

TEST_CASE("off-center chord of a circle") {
    // Horizontal line z = 1 through a radius-2 circle: half-chord sqrt(3).
    CHECK(near(chord_length(ellipse(0, 0, 2, 2), segment(-5, 1, 5, 1)), 2.0 * std::sqrt(3.0), 1e-12));
}

TEST_CASE("ellipse principal axes") {
    CHECK(near(chord_length(ellipse(0, 0, 3, 1), segment(-5, 0, 5, 0)), 6.0, 1e-12));
    CHECK(near(chord_length(ellipse(0, 0, 3, 1), segment(0, -5, 0, 5)), 2.0, 1e-12));
}

TEST_CASE("miss and tangency report zero depth") {
    CHECK(chord_length(ellipse(0, 0, 2, 2), segment(-5, 3, 5, 3)) == 0.0);
    CHECK(chord_length(ellipse(0, 0, 3, 1), segment(-5, 1, 5, 1)) == 0.0);
}

TEST_CASE("segment endpoints clip the chord") {
    // Start at the circle center: only the forward half is traversed.
    CHECK(near(chord_length(ellipse(0, 0, 1, 1), segment(0, 0, 5, 0)), 1.0, 1e-12));
    // Entirely inside: the chord is the whole segment.
    CHECK(near(chord_length(ellipse(0, 0, 1, 1), segment(-0.5, 0, 0.5, 0)), 1.0, 1e-12));
    // Entirely before the ellipse.
    CHECK(chord_length(ellipse(10, 0, 1, 1), segment(-5, 0, 5, 0)) == 0.0);
}

TEST_CASE("random segments match the search oracle") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> axis(0.2, 8.0);
    std::uniform_real_distribution<double> coord(-15.0, 15.0);
    for (int i = 0; i < 300; ++i) {
        const TreeEllipse e = ellipse(coord(rng) * 0.3, coord(rng) * 0.3, axis(rng), axis(rng));
        const RaySegment ray = segment(coord(rng), coord(rng), coord(rng), coord(rng));
        const double got = chord_length(e, ray);
        const double want = searched_chord(e, ray);
        CHECK(near(got, want, std::max(1e-7 * want, 1e-6)));
    }
}

TEST_CASE("degenerate inputs are rejected") {
    CHECK_THROWS_AS(chord_length(ellipse(0, 0, 0, 1), segment(-5, 0, 5, 0)), Error);
    CHECK_THROWS_AS(chord_length(ellipse(0, 0, 1, 1), segment(2, 2, 2, 2)), Error);
}

TEST_CASE("site validation") {
    SiteGeometry site = basic_site();
    CHECK_NOTHROW(geometry::validate_site(site));

    SiteGeometry dup = site;
    dup.rx_points.push_back({"rx1", {50.0, 0.0, 2.0}});
    CHECK_THROWS_AS(geometry::validate_site(dup), Error);

    SiteGeometry low_tx = site;
    low_tx.tx.z = 0.0;
    CHECK_THROWS_AS(geometry::validate_site(low_tx), Error);

    SiteGeometry bad_tree = site;
    bad_tree.trees.push_back({"t1", 10.0, 0.0, 5.0, 0.0, 4.0});
    CHECK_THROWS_AS(geometry::validate_site(bad_tree), Error);
}

TEST_CASE("projection keeps only trees near the ground track") {
    SiteGeometry site = basic_site();
    site.trees.push_back({"near", 50.0, 3.0, 6.0, 4.0, 4.0});
    site.trees.push_back({"far", 50.0, 8.0, 6.0, 4.0, 4.0});
    const auto [ray, trees] = geometry::project_to_vertical_plane(site, "rx1");
    CHECK(ray.start.x == 0.0);
    CHECK(ray.start.z == 10.0);
    CHECK(near(ray.end.x, 100.0, 1e-12));
    CHECK(ray.end.z == 2.0);
    REQUIRE(trees.size() == 1);
    CHECK(trees[0].label == "near");
    CHECK(near(trees[0].center.x, 50.0, 1e-12));
    CHECK(trees[0].center.z == 6.0);
    CHECK(trees[0].a == 2.0);
    CHECK(trees[0].b == 2.0);
}

TEST_CASE("projection is invariant under rigid motion of the track") {
    // Same relative layout rotated 30 degrees and translated; the planar
    // reduction must produce the same ray and ellipse centers.
    const double ang = 30.0 * M_PI / 180.0;
    const double c = std::cos(ang), s = std::sin(ang);
    SiteGeometry site;
    site.tx = {200.0, -50.0, 10.0};
    const auto place = [&](double along, double perp) {
        return std::pair<double, double>{200.0 + along * c - perp * s, -50.0 + along * s + perp * c};
    };
    const auto [rx_e, rx_n] = place(100.0, 0.0);
    site.rx_points = {{"rx1", {rx_e, rx_n, 2.0}}};
    const auto [t_e, t_n] = place(40.0, -2.0);
    site.trees.push_back({"t", t_e, t_n, 7.0, 6.0, 5.0});

    const auto [ray, trees] = geometry::project_to_vertical_plane(site, "rx1");
    CHECK(near(ray.end.x, 100.0, 1e-9));
    REQUIRE(trees.size() == 1);
    CHECK(near(trees[0].center.x, 40.0, 1e-9));
}

TEST_CASE("vegetation depth sums chords and double-counts overlap") {
    SiteGeometry site = basic_site();
    site.rx_points[0].position = {100.0, 0.0, 10.0}; // level ray at z = 10
    site.trees.push_back({"a", 50.0, 0.0, 10.0, 8.0, 6.0});
    CHECK(near(geometry::vegetation_depth(site, "rx1"), 8.0, 1e-9));
    site.trees.push_back({"b", 50.0, 0.0, 10.0, 8.0, 6.0});
    CHECK(near(geometry::vegetation_depth(site, "rx1"), 16.0, 1e-9));
}

TEST_CASE("tx rx distance is 3D") {
    SiteGeometry site = basic_site();
    site.rx_points[0].position = {3.0, 4.0, 22.0}; // dz = 12, ground 5
    CHECK(near(geometry::tx_rx_distance(site, "rx1"), 13.0, 1e-12));
    CHECK_THROWS_AS(geometry::tx_rx_distance(site, "nope"), Error);
}

TEST_CASE("unknown rx id raises NotFound") {
    const SiteGeometry site = basic_site();
    try {
        geometry::find_rx(site, "ghost");
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NotFound);
    }
}
