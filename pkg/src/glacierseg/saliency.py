"""Per-channel gradient saliency.

A saliency map is |d(sum of output logits)/d(input)|, one spatial map per
input channel; the per-channel score sums that map over all pixels.  Scores
averaged over a sample set (optionally L1-normalized per tile first) rank
the spectral bands by their contribution to the prediction.  Gradients are
taken on logits rather than probabilities so sigmoid saturation cannot mute
a channel's contribution.
"""

import json
from dataclasses import dataclass

import numpy as np

from .errors import EmptyDatasetError
from .geodata.bands import BAND_NAMES, NUM_BANDS
from .geodata.tiling import MultispectralTile


@dataclass
class SaliencyMap:
    values: np.ndarray  # [channels, rows, cols], absolute gradients
    tile_id: str
    class_name: str


@dataclass
class SaliencyReport:
    per_channel_scores: np.ndarray  # [8]
    ranking: tuple  # band names, highest score first
    n_samples: int
    class_name: str
    normalized: bool

    def to_dict(self):
        return {
            "per_channel_scores": [float(s) for s in self.per_channel_scores],
            "ranking": list(self.ranking),
            "band_names": list(BAND_NAMES),
            "n_samples": self.n_samples,
            "class_name": self.class_name,
            "normalized": self.normalized,
        }

    def save_json(self, path):
        with open(path, "w") as f:
            json.dump(self.to_dict(), f, indent=1)


def rank_bands(scores):
    """Band names sorted by descending score; ties fall back to band order."""
    order = sorted(range(NUM_BANDS), key=lambda i: (-float(scores[i]), i))
    return tuple(BAND_NAMES[i] for i in order)


def saliency_map(model, tile, class_name="clean"):
    """Absolute input gradient of the summed output logit for one tile."""
    pixels = tile.pixels if isinstance(tile, MultispectralTile) else np.asarray(tile)
    x = pixels[None]
    logits = model.forward(x, training=False)
    model.zero_grad()
    grad = model.backward(np.ones_like(logits))
    model.zero_grad()  # param grads from the probe are not wanted
    tile_id = tile.tile_id if isinstance(tile, MultispectralTile) else ""
    return SaliencyMap(values=np.abs(grad[0]), tile_id=tile_id, class_name=class_name)


def saliency_score(smap):
    """Sum every channel's map over its rows and columns: one score per band."""
    values = smap.values if isinstance(smap, SaliencyMap) else np.asarray(smap)
    return values.reshape(values.shape[0], -1).sum(axis=1)


def average_report(model, tiles, normalize=True, class_name="clean"):
    """Average per-tile scores over a sample set and rank the bands.

    With ``normalize`` each tile's 8-vector is L1-normalized first so tiles
    with large overall gradient magnitude do not dominate the average.
    """
    tiles = list(tiles)
    if not tiles:
        raise EmptyDatasetError("saliency report needs at least one tile")
    scores = np.zeros(NUM_BANDS, dtype=np.float64)
    for tile in tiles:
        s = saliency_score(saliency_map(model, tile, class_name))
        if normalize:
            total = s.sum()
            if total > 0:
                s = s / total
        scores += s
    scores /= len(tiles)
    return SaliencyReport(
        per_channel_scores=scores,
        ranking=rank_bands(scores),
        n_samples=len(tiles),
        class_name=class_name,
        normalized=normalize,
    )


def save_saliency_chart(reports, path):
    """Bar chart of per-band scores, one bar group per report (class)."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    reports = [reports] if isinstance(reports, SaliencyReport) else list(reports)
    x = np.arange(NUM_BANDS)
    width = 0.8 / max(len(reports), 1)
    fig, ax = plt.subplots(figsize=(9, 4))
    for i, rep in enumerate(reports):
        ax.bar(x + i * width, rep.per_channel_scores, width, label=rep.class_name)
    ax.set_xticks(x + width * (len(reports) - 1) / 2)
    ax.set_xticklabels(BAND_NAMES, rotation=30, ha="right")
    ax.set_ylabel("average saliency score" + (" (normalized)" if reports[0].normalized else ""))
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
