"""Per-channel z-scoring with statistics taken from the training split only."""

import hashlib
import json
from dataclasses import dataclass

import numpy as np

from ..errors import EmptyDatasetError
from .bands import NUM_BANDS
from .tiling import MultispectralTile

STD_FLOOR = 1e-6


@dataclass
class NormalizationStats:
    per_channel_mean: np.ndarray
    per_channel_std: np.ndarray
    computed_from: str = "train"

    def __post_init__(self):
        self.per_channel_mean = np.asarray(self.per_channel_mean, dtype=np.float64)
        self.per_channel_std = np.asarray(self.per_channel_std, dtype=np.float64)
        assert self.per_channel_mean.shape == (NUM_BANDS,)
        assert self.per_channel_std.shape == (NUM_BANDS,)
        assert np.all(self.per_channel_std > 0)

    @property
    def stats_id(self):
        digest = hashlib.sha256(json.dumps(self.to_dict(), sort_keys=True).encode())
        return digest.hexdigest()[:12]

    def to_dict(self):
        return {
            "per_channel_mean": self.per_channel_mean.tolist(),
            "per_channel_std": self.per_channel_std.tolist(),
            "computed_from": self.computed_from,
        }

    @classmethod
    def from_dict(cls, d):
        return cls(
            per_channel_mean=d["per_channel_mean"],
            per_channel_std=d["per_channel_std"],
            computed_from=d.get("computed_from", "train"),
        )


def compute_normalization(tiles, computed_from="train"):
    """Mean/std per channel over all pixels of the given training tiles.

    Standard deviations are floored at 1e-6 so constant channels stay finite.
    """
    arrays = [t.pixels if isinstance(t, MultispectralTile) else np.asarray(t) for t in tiles]
    if not arrays:
        raise EmptyDatasetError("cannot compute normalization stats from zero tiles")
    flat = np.concatenate([a.reshape(NUM_BANDS, -1) for a in arrays], axis=1)
    mean = flat.mean(axis=1)
    std = np.maximum(flat.std(axis=1), STD_FLOOR)
    return NormalizationStats(mean, std, computed_from)


def normalize_pixels(pixels, stats):
    scale = (1.0 / stats.per_channel_std)[:, None, None]
    return ((pixels - stats.per_channel_mean[:, None, None]) * scale).astype(pixels.dtype)


def denormalize_pixels(pixels, stats):
    return (pixels * stats.per_channel_std[:, None, None]
            + stats.per_channel_mean[:, None, None]).astype(pixels.dtype)


def normalize_tile(tile, stats):
    """Return a z-scored copy of ``tile`` tagged with the stats id."""
    return MultispectralTile(
        pixels=normalize_pixels(tile.pixels, stats),
        tile_id=tile.tile_id,
        cell_id=tile.cell_id,
        normalized=True,
        stats_id=stats.stats_id,
    )
