// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the vegloss authors

#pragma once

#include <string>
#include <vector>

#include "vegloss/errors.hpp"

namespace vegloss::geometry {

// Point in the vertical plane spanned by the Tx-Rx ground track:
// x is horizontal distance along the track (m), z is height above
// ground (m, z = 0 is the ground datum).
struct PlanarPoint {
    double x = 0.0;
    double z = 0.0;
};

// Axis-aligned ellipse modeling one tree canopy silhouette in the
// vertical plane. a is the horizontal semi-axis, b the vertical one.
struct TreeEllipse {
    PlanarPoint center;
    double a = 0.0;
    double b = 0.0;
    std::string label;
};

struct Point3 {
    double x = 0.0; // easting (m)
    double y = 0.0; // northing (m)
    double z = 0.0; // height (m)
};

struct RxPoint {
    std::string id;
    Point3 position;
};

// 3D tree description as surveyed: ground-plane centroid plus canopy
// extents. canopy_center_height is the height of the canopy centroid,
// not the tree top.
struct TreeDescription {
    std::string id;
    double easting = 0.0;
    double northing = 0.0;
    double canopy_center_height = 0.0;
    double canopy_width = 0.0;  // full width (m)
    double canopy_height = 0.0; // full height (m)
};

struct SiteGeometry {
    Point3 tx;
    std::vector<RxPoint> rx_points;
    std::vector<TreeDescription> trees;
    double lateral_inclusion_radius = 5.0;
};

struct RaySegment {
    PlanarPoint start;
    PlanarPoint end;
};

// Checks SiteGeometry invariants (unique rx ids, tx height > 0, positive
// canopy extents, positive inclusion radius); throws InvalidGeometry.
void validate_site(const SiteGeometry& site);

// Reduces the 3D site to the vertical plane through the Tx-Rx ground
// track of `rx_id`. The ray starts at (0, tx height) and ends at
// (ground distance, rx height). Trees whose centroid lies within
// lateral_inclusion_radius of the track line are projected to
// TreeEllipse at their along-track position; others are dropped.
std::pair<RaySegment, std::vector<TreeEllipse>>
project_to_vertical_plane(const SiteGeometry& site, const std::string& rx_id);

// Length of the intersection of `ray` (a closed segment) with the closed
// ellipse. Returns 0 for misses and tangency. Solved in a normalized
// frame (ellipse mapped to the unit circle); intersection parameters are
// clamped to the segment range [0, 1].
double chord_length(const TreeEllipse& ellipse, const RaySegment& ray);

// Total vegetation depth along the LoS ray to `rx_id`: plain sum of
// chord lengths over all included trees (overlaps double-count).
double vegetation_depth(const SiteGeometry& site, const std::string& rx_id);

// 3D Euclidean Tx-Rx distance.
double tx_rx_distance(const SiteGeometry& site, const std::string& rx_id);

const RxPoint& find_rx(const SiteGeometry& site, const std::string& rx_id);

} // namespace vegloss::geometry
