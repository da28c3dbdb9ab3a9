"""Real-raster preparation: fishnet an 8-band raster, split, tile, store.

Cell bounds live in pixel coordinates of the input raster (x = column,
y = row, origin top-left); reprojection is out of scope, so the fishnet is a
pixel-space partition.
"""

from pathlib import Path

import numpy as np

from ..errors import EmptyDatasetError, InvalidInputError, ShapeMismatchError
from ..geodata import storage
from ..geodata.fishnet import assign_splits, build_fishnet, save_cells
from ..geodata.normalization import compute_normalization
from ..geodata.tiling import GLACIER_CLASSES, tile_cell


def read_label_raster(path):
    path = Path(path)
    if path.suffix == ".npy":
        labels = np.load(path)
    else:
        import tifffile
        labels = tifffile.imread(path)
    labels = np.asarray(labels)
    if labels.ndim != 2:
        raise InvalidInputError(f"label raster must be 2-D, got shape {labels.shape}")
    return labels.astype(np.uint8)


def _cell_window(cell):
    x0, y0, x1, y1 = (int(round(v)) for v in cell.bounds)
    return np.s_[y0:y1, x0:x1]


def prepare_dataset(raster_path, labels_path, out_dir, cell_size=512,
                    ratios=(0.7, 0.1, 0.2), seed=0, tile_size=512,
                    min_glacier_fraction=0.10):
    """Full preprocessing pass; returns a summary dict."""
    raster = storage.read_geotiff(raster_path)
    labels = read_label_raster(labels_path)
    if labels.shape != raster.shape[1:]:
        raise ShapeMismatchError(
            f"label raster {labels.shape} does not match image raster {raster.shape[1:]}"
        )
    h, w = labels.shape
    cells = build_fishnet((0, 0, w, h), cell_size)
    for cell in cells:
        window = labels[_cell_window(cell)]
        cell.has_glacier = bool(np.isin(window, GLACIER_CLASSES).any())
    assign_splits(cells, ratios, seed)

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    n_tiles = {"train": 0, "val": 0, "test": 0}
    train_tiles = []
    for cell in cells:
        if cell.split == "discarded":
            continue
        window = _cell_window(cell)
        pairs = tile_cell(raster[(slice(None),) + window], labels[window], cell.cell_id,
                          tile_size=tile_size, min_glacier_fraction=min_glacier_fraction)
        for tile, label in pairs:
            storage.write_tile(out_dir, tile, label, cell.split)
            n_tiles[cell.split] += 1
            if cell.split == "train":
                train_tiles.append(tile)
    save_cells(out_dir / "cells.geojson", cells)
    if not train_tiles:
        raise EmptyDatasetError("preparation produced no training tiles")
    stats = compute_normalization(train_tiles)
    storage.save_stats(out_dir, stats)
    return {
        "cells_total": len(cells),
        "cells_kept": sum(1 for c in cells if c.split != "discarded"),
        "tiles": n_tiles,
        "stats_id": stats.stats_id,
        "out_dir": str(out_dir),
    }
