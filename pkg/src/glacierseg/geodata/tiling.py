"""Tile types and the cell -> sub-image cropping step."""

from dataclasses import dataclass, field

import numpy as np

from ..errors import InvalidInputError, ShapeMismatchError
from .bands import NUM_BANDS, check_band_count

BACKGROUND, CLEAN, DEBRIS, MASKED = 0, 1, 2, 3
CLASS_NAMES = {BACKGROUND: "background", CLEAN: "clean", DEBRIS: "debris", MASKED: "masked"}
GLACIER_CLASSES = (CLEAN, DEBRIS)


@dataclass
class MultispectralTile:
    """An 8-channel square raster window, [channels, height, width]."""

    pixels: np.ndarray
    tile_id: str
    cell_id: str
    normalized: bool = False
    stats_id: str | None = None

    def __post_init__(self):
        self.pixels = np.asarray(self.pixels)
        if self.pixels.ndim != 3:
            raise ShapeMismatchError(f"tile pixels must be [C,H,W], got {self.pixels.shape}")
        check_band_count(self.pixels.shape[0], f"tile {self.tile_id}")
        if self.pixels.shape[1] != self.pixels.shape[2]:
            raise ShapeMismatchError(f"tiles are square, got {self.pixels.shape}")
        if not np.all(np.isfinite(self.pixels)):
            raise InvalidInputError(f"tile {self.tile_id} contains NaN/Inf pixels")

    @property
    def size(self):
        return self.pixels.shape[1]


@dataclass
class LabelGrid:
    """Per-pixel class annotation: 0 background, 1 clean, 2 debris, 3 masked."""

    classes: np.ndarray

    def __post_init__(self):
        self.classes = np.asarray(self.classes, dtype=np.uint8)
        if self.classes.ndim != 2:
            raise ShapeMismatchError(f"label grid must be [H,W], got {self.classes.shape}")
        if self.classes.max(initial=0) > MASKED:
            raise InvalidInputError("label grid contains class ids outside 0..3")

    @property
    def shape(self):
        return self.classes.shape

    def glacier_fraction(self):
        return float(np.isin(self.classes, GLACIER_CLASSES).mean())

    def valid_mask(self):
        return self.classes != MASKED

    def class_fractions(self):
        counts = np.bincount(self.classes.ravel(), minlength=4)
        return counts / self.classes.size


def tile_cell(raster, labels, cell_id, tile_size=512, min_glacier_fraction=0.10):
    """Crop one cell raster into non-overlapping tiles, filtering by class balance.

    Tiles whose glacier fraction (clean + debris pixels over all pixels) is
    below ``min_glacier_fraction`` are dropped, as are edge remainders smaller
    than ``tile_size``.
    """
    raster = np.asarray(raster)
    if raster.ndim != 3:
        raise ShapeMismatchError(f"raster must be [C,H,W], got {raster.shape}")
    check_band_count(raster.shape[0], f"cell {cell_id}")
    label_arr = labels.classes if isinstance(labels, LabelGrid) else np.asarray(labels)
    if label_arr.shape != raster.shape[1:]:
        raise ShapeMismatchError(
            f"labels {label_arr.shape} do not match raster {raster.shape[1:]}"
        )
    if not 0 <= min_glacier_fraction < 1:
        raise InvalidInputError(f"min_glacier_fraction must be in [0,1), got {min_glacier_fraction}")
    if tile_size <= 0:
        raise InvalidInputError(f"tile_size must be positive, got {tile_size}")

    _, h, w = raster.shape
    pairs = []
    for i in range(h // tile_size):
        for j in range(w // tile_size):
            sl = np.s_[i * tile_size:(i + 1) * tile_size, j * tile_size:(j + 1) * tile_size]
            label = LabelGrid(label_arr[sl])
            if label.glacier_fraction() < min_glacier_fraction:
                continue
            tile = MultispectralTile(
                pixels=raster[(slice(None),) + sl].copy(),
                tile_id=f"{cell_id}_t{i:02d}{j:02d}",
                cell_id=cell_id,
            )
            pairs.append((tile, label))
    return pairs
