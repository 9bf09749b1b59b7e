#include "simloc/geometry.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace simloc::geometry {

namespace {

// y_bar cos(theta) + h sin(theta): depth of a road point along the optical axis.
double axial_depth(double y_bar, const CameraRig& rig) {
    return y_bar * std::cos(rig.theta_rad) + rig.height_cm * std::sin(rig.theta_rad);
}

}  // namespace

CameraRig CameraRig::from_degrees(double height_cm, double theta_deg, double focal_cm) {
    CameraRig rig{height_cm, theta_deg * std::numbers::pi / 180.0, focal_cm};
    rig.validate();
    return rig;
}

void CameraRig::validate() const {
    if (!(height_cm > 0.0)) throw std::invalid_argument("CameraRig: height must be > 0");
    if (!(focal_cm > 0.0)) throw std::invalid_argument("CameraRig: focal length must be > 0");
    if (!(theta_rad > 0.0 && theta_rad < std::numbers::pi / 2.0))
        throw std::invalid_argument("CameraRig: depression angle must lie in (0, 90) degrees");
}

void TileRect::validate() const {
    if (!(x_lower <= x_upper)) throw std::invalid_argument("TileRect: x_lower > x_upper");
    if (!(0.0 <= y_lower && y_lower <= y_upper)) throw std::invalid_argument("TileRect: need 0 <= y_lower <= y_upper");
}

FocalPoint project_pinhole(const SpacePoint& p, double focal_cm) {
    if (!(p.z > 0.0)) throw std::domain_error("project_pinhole: point is not in front of the pinhole (z <= 0)");
    return {focal_cm * p.x / p.z, focal_cm * p.y / p.z};
}

FocalPoint project_road(const RoadPoint& p, const CameraRig& rig) {
    const double depth = axial_depth(p.y_bar, rig);
    if (!(depth > 0.0)) throw std::domain_error("project_road: road point projects behind the camera");
    const double s = std::sin(rig.theta_rad);
    const double c = std::cos(rig.theta_rad);
    return {rig.focal_cm * p.x_bar / depth, rig.focal_cm * (p.y_bar * s - rig.height_cm * c) / depth};
}

SpacePoint road_to_space(const RoadPoint& p, const CameraRig& rig) {
    // Rotate the (forward, down) offset of the road point by the depression angle.
    const double s = std::sin(rig.theta_rad);
    const double c = std::cos(rig.theta_rad);
    return {p.x_bar, p.y_bar * s - rig.height_cm * c, p.y_bar * c + rig.height_cm * s};
}

double jacobian_det(double y_bar, const CameraRig& rig) {
    const double depth = axial_depth(y_bar, rig);
    return rig.focal_cm * rig.focal_cm * rig.height_cm / (depth * depth * depth);
}

double tile_area_focal(const TileRect& tile, const CameraRig& rig) {
    tile.validate();
    const double f2h = rig.focal_cm * rig.focal_cm * rig.height_cm;
    const double near = axial_depth(tile.y_lower, rig);
    const double far = axial_depth(tile.y_upper, rig);
    const double width = tile.x_upper - tile.x_lower;
    return width / (2.0 * std::cos(rig.theta_rad)) * (f2h / (near * near) - f2h / (far * far));
}

TileRect tile_rect(const TileGrid& grid, std::size_t k, std::size_t j) {
    if (k >= grid.n_w || j >= grid.n_d) throw std::out_of_range("tile_rect: tile index outside the grid");
    const double s = grid.side_cm;
    const double x0 = -static_cast<double>(grid.n_w) * s / 2.0;
    return {x0 + static_cast<double>(k) * s, x0 + static_cast<double>(k + 1) * s, static_cast<double>(j) * s,
            static_cast<double>(j + 1) * s};
}

TileMatrix grid_tile_areas(const TileGrid& grid, const CameraRig& rig) {
    grid.validate();
    rig.validate();
    TileMatrix areas = TileMatrix::like(grid);
    for (std::size_t j = 0; j < grid.n_d; ++j) {
        // Area is independent of lateral offset, so one value serves the whole row.
        const double row_area = tile_area_focal(tile_rect(grid, 0, j), rig);
        for (std::size_t k = 0; k < grid.n_w; ++k) areas(k, j) = row_area;
    }
    return areas;
}

}  // namespace simloc::geometry
