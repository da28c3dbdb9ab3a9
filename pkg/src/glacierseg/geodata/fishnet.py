"""Fishnet gridding and spatially non-overlapping split assignment.

A fishnet is a rectangular-cell partition of a map extent.  Cells never
overlap: adjacent cells share their edge coordinate exactly because every
grid line is computed once.  Splits are assigned per cell, so anything tiled
from one cell lands in exactly one of train/val/test.
"""

import json
import math
from dataclasses import dataclass, field

import numpy as np
from shapely.geometry import box, shape

from ..errors import EmptyDatasetError, InvalidInputError

SPLITS = ("train", "val", "test")
DISCARDED = "discarded"


@dataclass
class FishnetCell:
    cell_id: str
    bounds: tuple  # (min_x, min_y, max_x, max_y)
    has_glacier: bool = False
    split: str = DISCARDED

    def to_geometry(self):
        return box(*self.bounds)

    @property
    def width(self):
        return self.bounds[2] - self.bounds[0]

    @property
    def height(self):
        return self.bounds[3] - self.bounds[1]


def build_fishnet(extent, cell_size):
    """Partition ``extent`` (min_x, min_y, max_x, max_y) into a cell grid.

    Produces ceil(width/cell_size) * ceil(height/cell_size) cells; cells on
    the max edges may be smaller.  Grid lines are shared between neighbours,
    so the cells are disjoint and their union is exactly the extent.
    """
    min_x, min_y, max_x, max_y = (float(v) for v in extent)
    width = max_x - min_x
    height = max_y - min_y
    if width <= 0 or height <= 0:
        raise InvalidInputError(f"degenerate extent {extent!r}")
    cell_size = float(cell_size)
    if cell_size <= 0:
        raise InvalidInputError(f"cell_size must be positive, got {cell_size}")

    n_cols = math.ceil(width / cell_size)
    n_rows = math.ceil(height / cell_size)
    xs = [min(min_x + i * cell_size, max_x) for i in range(n_cols)] + [max_x]
    ys = [min(min_y + i * cell_size, max_y) for i in range(n_rows)] + [max_y]

    cells = []
    for r in range(n_rows):
        for c in range(n_cols):
            cells.append(FishnetCell(
                cell_id=f"r{r:03d}c{c:03d}",
                bounds=(xs[c], ys[r], xs[c + 1], ys[r + 1]),
            ))
    return cells


def mark_glacier_cells(cells, label_geometries):
    """Set ``has_glacier`` on every cell that intersects any label geometry.

    ``label_geometries`` may hold shapely geometries, GeoJSON-like mappings,
    or plain (min_x, min_y, max_x, max_y) tuples.
    """
    geoms = [_as_geometry(g) for g in label_geometries]
    for cell in cells:
        cell_geom = cell.to_geometry()
        cell.has_glacier = any(cell_geom.intersects(g) for g in geoms)
    return cells


def _as_geometry(obj):
    if hasattr(obj, "intersects"):
        return obj
    if isinstance(obj, dict):
        return shape(obj)
    return box(*obj)


def split_counts(n, ratios):
    """Largest-remainder apportionment of ``n`` cells into len(ratios) splits."""
    total = float(sum(ratios))
    if any(r < 0 for r in ratios) or total <= 0:
        raise InvalidInputError(f"ratios must be nonnegative with positive sum, got {ratios!r}")
    if abs(total - 1.0) > 1e-9:
        raise InvalidInputError(f"ratios must sum to 1, got {ratios!r} (sum {total})")
    exact = [r * n for r in ratios]
    counts = [math.floor(e) for e in exact]
    remainders = [e - c for e, c in zip(exact, counts)]
    for i in sorted(range(len(ratios)), key=lambda i: (-remainders[i], i)):
        if sum(counts) == n:
            break
        counts[i] += 1
    return counts


def assign_splits(cells, ratios, seed):
    """Randomly assign kept cells to train/val/test, deterministic in seed."""
    kept = [c for c in cells if c.has_glacier]
    if not kept:
        raise EmptyDatasetError("no cells intersect any glacier label")
    counts = split_counts(len(kept), ratios)
    order = np.random.default_rng(seed).permutation(len(kept))
    bounds_ = np.cumsum(counts)
    for rank, idx in enumerate(order):
        which = int(np.searchsorted(bounds_, rank, side="right"))
        kept[idx].split = SPLITS[which]
    for c in cells:
        if not c.has_glacier:
            c.split = DISCARDED
    return cells


def filter_and_split(cells, label_geometries, ratios, seed):
    """Discard glacier-free cells, then split the rest by ratio.

    Deterministic given the seed; no cell ends up in two splits.
    """
    mark_glacier_cells(cells, label_geometries)
    return assign_splits(cells, ratios, seed)


def cells_to_geojson(cells):
    features = []
    for c in cells:
        x0, y0, x1, y1 = c.bounds
        features.append({
            "type": "Feature",
            "geometry": {
                "type": "Polygon",
                "coordinates": [[[x0, y0], [x1, y0], [x1, y1], [x0, y1], [x0, y0]]],
            },
            "properties": {
                "cell_id": c.cell_id,
                "split": c.split,
                "has_glacier": c.has_glacier,
            },
        })
    return {"type": "FeatureCollection", "features": features}


def cells_from_geojson(obj):
    cells = []
    for feat in obj["features"]:
        ring = feat["geometry"]["coordinates"][0]
        xs = [p[0] for p in ring]
        ys = [p[1] for p in ring]
        props = feat["properties"]
        cells.append(FishnetCell(
            cell_id=props["cell_id"],
            bounds=(min(xs), min(ys), max(xs), max(ys)),
            has_glacier=props["has_glacier"],
            split=props["split"],
        ))
    return cells


def save_cells(path, cells):
    with open(path, "w") as f:
        json.dump(cells_to_geojson(cells), f, indent=1)


def load_cells(path):
    with open(path) as f:
        return cells_from_geojson(json.load(f))
