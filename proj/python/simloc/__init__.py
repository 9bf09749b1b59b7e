"""Perspective-aware image-matching localization simulator."""

from ._simloc import (
    ConfigError,
    classify_ip,
    discretize_gaussian,
    grid_tile_areas,
    jacobian_det,
    mi_scores,
    preset_names,
    project_road,
    sweep_alpha,
    sweep_csv,
    sweep_noise,
    tile_area_focal,
)

__all__ = [
    "ConfigError",
    "classify_ip",
    "discretize_gaussian",
    "grid_tile_areas",
    "jacobian_det",
    "mi_scores",
    "preset_names",
    "project_road",
    "sweep_alpha",
    "sweep_csv",
    "sweep_noise",
    "tile_area_focal",
]
