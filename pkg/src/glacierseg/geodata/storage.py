"""On-disk dataset layout: raw tensor tiles with JSON sidecars.

A dataset directory looks like::

    dataset/
      cells.geojson            fishnet cells with split assignment
      stats_<id>.json          z-score statistics (written once computed)
      tiles/
        <tile_id>.img.bin      raw C-order image bytes [8, H, W]
        <tile_id>.lbl.bin      raw C-order label bytes [H, W]
        <tile_id>.json         sidecar (shape, dtype, split, channel order, ...)

GeoTIFF ingestion goes through tifffile; georeferencing tags are not
interpreted (reprojection is out of scope), bounds come from the fishnet.
"""

import json
from pathlib import Path

import numpy as np
import tifffile

from ..errors import BandMismatchError, CheckpointError, EmptyDatasetError, InvalidInputError
from .bands import BAND_NAMES, NUM_BANDS
from .normalization import NormalizationStats
from .tiling import LabelGrid, MultispectralTile

SIDECAR_SUFFIX = ".json"
IMAGE_SUFFIX = ".img.bin"
LABEL_SUFFIX = ".lbl.bin"


def tiles_dir(dataset_dir):
    return Path(dataset_dir) / "tiles"


def write_tile(dataset_dir, tile, label, split):
    """Write one tile/label pair plus its sidecar; returns the sidecar path."""
    out = tiles_dir(dataset_dir)
    out.mkdir(parents=True, exist_ok=True)
    img_name = tile.tile_id + IMAGE_SUFFIX
    lbl_name = tile.tile_id + LABEL_SUFFIX
    pixels = np.ascontiguousarray(tile.pixels)
    classes = np.ascontiguousarray(label.classes)
    pixels.tofile(out / img_name)
    classes.tofile(out / lbl_name)
    sidecar = {
        "tile_id": tile.tile_id,
        "cell_id": tile.cell_id,
        "split": split,
        "shape": list(pixels.shape),
        "dtype": str(pixels.dtype),
        "channels": list(BAND_NAMES),
        "image_file": img_name,
        "label_file": lbl_name,
        "label_dtype": str(classes.dtype),
        "normalization_stats": tile.stats_id,
    }
    path = out / (tile.tile_id + SIDECAR_SUFFIX)
    with open(path, "w") as f:
        json.dump(sidecar, f, indent=1)
    return path


def read_tile(dataset_dir, tile_id):
    """Load one tile/label pair; returns (tile, label, sidecar dict)."""
    out = tiles_dir(dataset_dir)
    with open(out / (tile_id + SIDECAR_SUFFIX)) as f:
        sidecar = json.load(f)
    shape = tuple(sidecar["shape"])
    pixels = np.fromfile(out / sidecar["image_file"], dtype=sidecar["dtype"]).reshape(shape)
    classes = np.fromfile(out / sidecar["label_file"], dtype=sidecar["label_dtype"])
    tile = MultispectralTile(
        pixels=pixels,
        tile_id=sidecar["tile_id"],
        cell_id=sidecar["cell_id"],
        normalized=sidecar["normalization_stats"] is not None,
        stats_id=sidecar["normalization_stats"],
    )
    label = LabelGrid(classes.reshape(shape[1:]))
    return tile, label, sidecar


def list_tiles(dataset_dir, split=None):
    """Tile ids in the dataset, optionally restricted to one split, sorted."""
    out = tiles_dir(dataset_dir)
    if not out.is_dir():
        raise EmptyDatasetError(f"no tiles directory under {dataset_dir}")
    ids = []
    for sidecar_path in sorted(out.glob("*" + SIDECAR_SUFFIX)):
        with open(sidecar_path) as f:
            sidecar = json.load(f)
        if split is None or sidecar["split"] == split:
            ids.append(sidecar["tile_id"])
    return ids


def load_split(dataset_dir, split):
    """All (tile, label) pairs of one split."""
    pairs = []
    for tile_id in list_tiles(dataset_dir, split):
        tile, label, _ = read_tile(dataset_dir, tile_id)
        pairs.append((tile, label))
    if not pairs:
        raise EmptyDatasetError(f"split {split!r} of {dataset_dir} holds no tiles")
    return pairs


def save_stats(dataset_dir, stats):
    path = Path(dataset_dir) / f"stats_{stats.stats_id}.json"
    with open(path, "w") as f:
        json.dump(stats.to_dict(), f, indent=1)
    return path


def load_stats(dataset_dir, stats_id=None):
    candidates = sorted(Path(dataset_dir).glob("stats_*.json"))
    if stats_id is not None:
        candidates = [p for p in candidates if p.stem == f"stats_{stats_id}"]
    if not candidates:
        raise CheckpointError(f"no normalization stats found under {dataset_dir}")
    if len(candidates) > 1:
        raise InvalidInputError(
            f"multiple stats files under {dataset_dir}; pass stats_id to pick one"
        )
    with open(candidates[0]) as f:
        return NormalizationStats.from_dict(json.load(f))


def read_geotiff(path):
    """Read a multiband TIFF as [bands, H, W]; band-interleaved files are transposed."""
    arr = tifffile.imread(path)
    if arr.ndim == 2:
        arr = arr[None]
    if arr.ndim != 3:
        raise InvalidInputError(f"{path}: expected a 2-D or 3-D raster, got shape {arr.shape}")
    if arr.shape[0] != NUM_BANDS and arr.shape[2] == NUM_BANDS:
        arr = np.ascontiguousarray(arr.transpose(2, 0, 1))
    if arr.shape[0] != NUM_BANDS:
        raise BandMismatchError(f"{path}: has {arr.shape[0]} bands, expected {NUM_BANDS}")
    return arr


def write_geotiff(path, raster):
    """Write [bands, H, W] as a multi-page TIFF (round-trips with read_geotiff)."""
    tifffile.imwrite(path, np.asarray(raster))
