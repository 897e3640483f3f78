// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the vegloss authors

#include "vegloss/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace vegloss::geometry {

namespace {

constexpr double kTangencyEps = 1e-12;

bool finite3(const Point3& p) {
    return std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.z);
}

} // namespace

void validate_site(const SiteGeometry& site) {
    if (!finite3(site.tx))
        throw Error(ErrorCode::InvalidGeometry, "tx position is not finite");
    if (!(site.tx.z > 0.0))
        throw Error(ErrorCode::InvalidGeometry, "tx height must be > 0");
    if (!(site.lateral_inclusion_radius > 0.0))
        throw Error(ErrorCode::InvalidGeometry, "lateral_inclusion_radius must be > 0");
    std::unordered_set<std::string> ids;
    for (const auto& rx : site.rx_points) {
        if (rx.id.empty())
            throw Error(ErrorCode::InvalidGeometry, "rx point with empty id");
        if (!ids.insert(rx.id).second)
            throw Error(ErrorCode::InvalidGeometry, "duplicate rx id '" + rx.id + "'");
        if (!finite3(rx.position))
            throw Error(ErrorCode::InvalidGeometry, "rx '" + rx.id + "' position is not finite");
    }
    for (const auto& t : site.trees) {
        if (!(t.canopy_width > 0.0) || !(t.canopy_height > 0.0))
            throw Error(ErrorCode::InvalidGeometry,
                        "tree '" + t.id + "' canopy extents must be > 0");
        if (!std::isfinite(t.easting) || !std::isfinite(t.northing) ||
            !std::isfinite(t.canopy_center_height))
            throw Error(ErrorCode::InvalidGeometry, "tree '" + t.id + "' position is not finite");
    }
}

const RxPoint& find_rx(const SiteGeometry& site, const std::string& rx_id) {
    auto it = std::find_if(site.rx_points.begin(), site.rx_points.end(),
                           [&](const RxPoint& rx) { return rx.id == rx_id; });
    if (it == site.rx_points.end())
        throw Error(ErrorCode::NotFound, "unknown rx id '" + rx_id + "'");
    return *it;
}

std::pair<RaySegment, std::vector<TreeEllipse>>
project_to_vertical_plane(const SiteGeometry& site, const std::string& rx_id) {
    const RxPoint& rx = find_rx(site, rx_id);

    const double dx = rx.position.x - site.tx.x;
    const double dy = rx.position.y - site.tx.y;
    const double ground_dist = std::hypot(dx, dy);
    if (ground_dist < 1e-12)
        throw Error(ErrorCode::InvalidGeometry,
                    "rx '" + rx_id + "' is directly above/below tx; ground track is degenerate");

    const double ux = dx / ground_dist;
    const double uy = dy / ground_dist;

    RaySegment ray;
    ray.start = {0.0, site.tx.z};
    ray.end = {ground_dist, rx.position.z};

    std::vector<TreeEllipse> ellipses;
    for (const auto& t : site.trees) {
        const double tx_ = t.easting - site.tx.x;
        const double ty_ = t.northing - site.tx.y;
        const double along = tx_ * ux + ty_ * uy;
        const double perp = std::abs(tx_ * uy - ty_ * ux);
        if (perp > site.lateral_inclusion_radius)
            continue;
        TreeEllipse e;
        e.center = {along, t.canopy_center_height};
        e.a = t.canopy_width / 2.0;
        e.b = t.canopy_height / 2.0;
        e.label = t.id;
        ellipses.push_back(std::move(e));
    }
    return {ray, std::move(ellipses)};
}

double chord_length(const TreeEllipse& ellipse, const RaySegment& ray) {
    if (!(ellipse.a > 0.0) || !(ellipse.b > 0.0))
        throw Error(ErrorCode::InvalidGeometry,
                    "degenerate ellipse '" + ellipse.label + "' (semi-axes must be > 0)");

    const double sx = ray.end.x - ray.start.x;
    const double sz = ray.end.z - ray.start.z;
    const double seg_len = std::hypot(sx, sz);
    if (seg_len == 0.0)
        throw Error(ErrorCode::InvalidGeometry, "ray segment has zero length");

    // Normalized frame: ellipse center at the origin, axes scaled to the
    // unit circle. Keeps the quadratic well conditioned for thin ellipses.
    const double px = (ray.start.x - ellipse.center.x) / ellipse.a;
    const double pz = (ray.start.z - ellipse.center.z) / ellipse.b;
    const double dx = sx / ellipse.a;
    const double dz = sz / ellipse.b;

    const double qa = dx * dx + dz * dz;
    const double qb = 2.0 * (px * dx + pz * dz);
    const double qc = px * px + pz * pz - 1.0;

    const double disc = qb * qb - 4.0 * qa * qc;
    if (disc <= kTangencyEps && disc >= -kTangencyEps)
        return 0.0; // tangency
    if (disc < 0.0)
        return 0.0;

    const double sq = std::sqrt(disc);
    double t0 = (-qb - sq) / (2.0 * qa);
    double t1 = (-qb + sq) / (2.0 * qa);

    // Segment, not infinite line: clamp to [0, 1].
    const double lo = std::max(0.0, t0);
    const double hi = std::min(1.0, t1);
    if (hi <= lo)
        return 0.0;
    return (hi - lo) * seg_len;
}

double vegetation_depth(const SiteGeometry& site, const std::string& rx_id) {
    auto [ray, trees] = project_to_vertical_plane(site, rx_id);
    double total = 0.0;
    for (const auto& e : trees)
        total += chord_length(e, ray);
    return total;
}

double tx_rx_distance(const SiteGeometry& site, const std::string& rx_id) {
    const RxPoint& rx = find_rx(site, rx_id);
    const double dx = rx.position.x - site.tx.x;
    const double dy = rx.position.y - site.tx.y;
    const double dz = rx.position.z - site.tx.z;
    const double d = std::sqrt(dx * dx + dy * dy + dz * dz);
    if (!(d > 0.0))
        throw Error(ErrorCode::InvalidGeometry, "rx '" + rx_id + "' coincides with tx");
    return d;
}

} // namespace vegloss::geometry
