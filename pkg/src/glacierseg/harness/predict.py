"""Two-model prediction with clean/debris fusion and error-map rendering."""

import json
from pathlib import Path

import numpy as np

from .. import metrics
from ..errors import ShapeMismatchError
from ..geodata import storage
from ..geodata.tiling import CLEAN, DEBRIS, MASKED
from ..network import load_checkpoint
from .data import load_prepared
from .evaluate import predict_probabilities
from .manifest import RunManifest
from .plots import plot_class_map, plot_error_map


def predict(manifest_clean, manifest_debris, split="test", data_dir=None,
            out_dir="predictions", which="best", render=True):
    """Fuse both binary models into final class grids for a split.

    Writes one ``<tile_id>.fused.npy`` grid per tile, per-tile metric rows,
    and (optionally) the fused map plus TP/FP/FN overlays per class.
    Returns (list of fused grids, list of per-tile report dicts).
    """
    m_clean = manifest_clean if isinstance(manifest_clean, RunManifest) else RunManifest.load(manifest_clean)
    m_debris = manifest_debris if isinstance(manifest_debris, RunManifest) else RunManifest.load(manifest_debris)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    models = {}
    datasets = {}
    for name, manifest in (("clean", m_clean), ("debris", m_debris)):
        if manifest.config["class_name"] != name:
            raise ShapeMismatchError(
                f"manifest for the {name} slot was trained on "
                f"{manifest.config['class_name']!r}"
            )
        model, _ = load_checkpoint(manifest.checkpoint_path(which))
        directory = data_dir or manifest.config["data_dir"]
        stats = storage.load_stats(directory, manifest.stats_id)
        datasets[name] = load_prepared(directory, stats=stats).split(split)
        models[name] = (model, manifest.config.get("threshold", 0.5))

    if [s.tile_id for s in datasets["clean"]] != [s.tile_id for s in datasets["debris"]]:
        raise ShapeMismatchError("clean and debris runs disagree on the tile set")

    clean_model, clean_thr = models["clean"]
    debris_model, debris_thr = models["debris"]
    clean_probs = predict_probabilities(clean_model, datasets["clean"])
    debris_probs = predict_probabilities(debris_model, datasets["debris"])

    fused_grids = []
    tile_rows = []
    for sample, p_clean, p_debris in zip(datasets["clean"], clean_probs, debris_probs):
        clean_bin = p_clean >= clean_thr
        debris_bin = p_debris >= debris_thr
        fused = fuse_with_mask(clean_bin, debris_bin, sample.classes)
        fused_grids.append(fused)
        np.save(out_dir / f"{sample.tile_id}.fused.npy", fused)
        row = {"tile_id": sample.tile_id}
        for class_name, class_id, p in (("clean", CLEAN, p_clean), ("debris", DEBRIS, p_debris)):
            rep = metrics.evaluate(p, sample.classes, class_id,
                                   models[class_name][1])
            row[class_name] = rep.to_json_row()
        tile_rows.append(row)
        if render:
            plot_class_map(fused, out_dir / f"{sample.tile_id}.fused.png",
                           title=f"{sample.tile_id} fused")
            valid = sample.classes != MASKED
            plot_error_map(clean_bin, sample.classes == CLEAN, valid,
                           out_dir / f"{sample.tile_id}.clean_errors.png",
                           title=f"{sample.tile_id} clean TP/FP/FN")
            plot_error_map(debris_bin, sample.classes == DEBRIS, valid,
                           out_dir / f"{sample.tile_id}.debris_errors.png",
                           title=f"{sample.tile_id} debris TP/FP/FN")

    with open(out_dir / "tile_reports.json", "w") as f:
        json.dump(tile_rows, f, indent=1)
    return fused_grids, tile_rows


def fuse_with_mask(clean_bin, debris_bin, classes):
    """fuse_labels plus carrying the masked class through from the labels."""
    fused = metrics.fuse_labels(clean_bin, debris_bin)
    fused[np.asarray(classes) == MASKED] = MASKED
    return fused
