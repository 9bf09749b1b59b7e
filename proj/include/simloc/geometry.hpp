#pragma once

#include "simloc/tile_matrix.hpp"

namespace simloc::geometry {

/// Camera mount: height above the road plane, depression angle below the horizon, focal length.
/// Lengths in cm, angle in radians.
struct CameraRig {
    double height_cm = 60.0;
    double theta_rad = 0.0;
    double focal_cm = 0.0367;

    static CameraRig from_degrees(double height_cm, double theta_deg, double focal_cm);
    void validate() const;
};

struct RoadPoint {
    double x_bar = 0.0;  // lateral
    double y_bar = 0.0;  // ahead of the point below the pinhole
};

struct FocalPoint {
    double x_tilde = 0.0;
    double y_tilde = 0.0;
};

struct SpacePoint {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

/// Road-plane rectangle [x_lower, x_upper] x [y_lower, y_upper].
struct TileRect {
    double x_lower = 0.0;
    double x_upper = 0.0;
    double y_lower = 0.0;
    double y_upper = 0.0;

    void validate() const;
};

FocalPoint project_pinhole(const SpacePoint& p, double focal_cm);

FocalPoint project_road(const RoadPoint& p, const CameraRig& rig);

/// Maps a road point into the pinhole frame (x along the road's lateral axis, z along the optical axis).
SpacePoint road_to_space(const RoadPoint& p, const CameraRig& rig);

/// Determinant of the road -> focal plane Jacobian; depends on y_bar only.
double jacobian_det(double y_bar, const CameraRig& rig);

/// Closed-form focal-plane area of a road rectangle.
double tile_area_focal(const TileRect& tile, const CameraRig& rig);

/// Road-plane rectangle of tile (k, j), zero-based. Rows start at the foot of the camera;
/// columns are centred laterally.
TileRect tile_rect(const TileGrid& grid, std::size_t k, std::size_t j);

TileMatrix grid_tile_areas(const TileGrid& grid, const CameraRig& rig);

}  // namespace simloc::geometry
