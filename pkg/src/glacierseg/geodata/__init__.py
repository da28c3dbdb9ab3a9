"""Dataset construction: fishnet grids, tiling, normalization, synthetic scenes."""

from .augment import TRANSFORMS, apply_transform, augment, draw_transform
from .bands import BAND_NAMES, LANDSAT7_BANDS, NUM_BANDS, BandSpec
from .fishnet import (
    FishnetCell,
    assign_splits,
    build_fishnet,
    cells_from_geojson,
    cells_to_geojson,
    filter_and_split,
    load_cells,
    mark_glacier_cells,
    save_cells,
)
from .normalization import (
    NormalizationStats,
    compute_normalization,
    denormalize_pixels,
    normalize_pixels,
    normalize_tile,
)
from .synthetic import SceneSpec, generate_synthetic_scene
from .tiling import (
    BACKGROUND,
    CLEAN,
    CLASS_NAMES,
    DEBRIS,
    GLACIER_CLASSES,
    MASKED,
    LabelGrid,
    MultispectralTile,
    tile_cell,
)

__all__ = [
    "BAND_NAMES", "LANDSAT7_BANDS", "NUM_BANDS", "BandSpec",
    "FishnetCell", "build_fishnet", "mark_glacier_cells", "assign_splits",
    "filter_and_split", "cells_to_geojson", "cells_from_geojson",
    "save_cells", "load_cells",
    "MultispectralTile", "LabelGrid", "tile_cell",
    "BACKGROUND", "CLEAN", "DEBRIS", "MASKED", "CLASS_NAMES", "GLACIER_CLASSES",
    "NormalizationStats", "compute_normalization", "normalize_pixels",
    "denormalize_pixels", "normalize_tile",
    "TRANSFORMS", "augment", "apply_transform", "draw_transform",
    "SceneSpec", "generate_synthetic_scene",
]
