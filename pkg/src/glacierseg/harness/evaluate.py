"""Run inference over a split and report pooled metrics."""

import json
from pathlib import Path

import numpy as np
from scipy.special import expit

from .. import metrics
from ..errors import EmptyDatasetError
from ..geodata import storage
from ..network import load_checkpoint
from .data import load_prepared
from .manifest import RunManifest


def _as_manifest(m):
    return m if isinstance(m, RunManifest) else RunManifest.load(m)


def predict_probabilities(model, samples, batch_size=8):
    """Eval-mode probability maps for a list of samples, in order."""
    out = []
    for start in range(0, len(samples), batch_size):
        chunk = samples[start:start + batch_size]
        logits = model.forward(np.stack([s.pixels for s in chunk]), training=False)
        out.extend(expit(logits))
    return out


def evaluate_run(manifests, split="test", data_dir=None, out_path=None, which="best"):
    """Pooled MetricsReport per provided model (one per class).

    ``manifests`` may be a single manifest/path or a list of them.  Writes
    JSON rows plus a results table when ``out_path`` is given.
    """
    if isinstance(manifests, (str, Path, RunManifest)):
        manifests = [manifests]
    manifests = [_as_manifest(m) for m in manifests]

    reports = {}
    rows = []
    for manifest in manifests:
        config = manifest.config
        model, header = load_checkpoint(manifest.checkpoint_path(which))
        directory = data_dir or config["data_dir"]
        stats = storage.load_stats(directory, manifest.stats_id)
        data = load_prepared(directory, stats=stats)
        samples = data.split(split)
        if not samples:
            raise EmptyDatasetError(f"split {split!r} is empty")
        class_name = config["class_name"]
        class_id = 1 if class_name == "clean" else 2
        probs = predict_probabilities(model, samples, config.get("batch_size", 8))
        per_tile = [
            metrics.evaluate(p, s.classes, class_id, config.get("threshold", 0.5))
            for p, s in zip(probs, samples)
        ]
        pooled = metrics.aggregate(per_tile)
        reports[class_name] = pooled
        rows.append(pooled.to_json_row(split=split) | {"loss": config["loss"]})

    if out_path is not None:
        out_path = Path(out_path)
        out_path.parent.mkdir(parents=True, exist_ok=True)
        with open(out_path, "w") as f:
            json.dump(rows, f, indent=1)
        label = "+".join(sorted({m.config["loss"] for m in manifests}))
        weight = _weight_label(manifests[0].config)
        table = metrics.format_results_table([
            (label, weight, reports.get("clean"), reports.get("debris")),
        ])
        with open(out_path.with_suffix(".txt"), "w") as f:
            f.write(table + "\n")
    return reports


def _weight_label(config):
    if config["loss"] == "combined":
        return f"{config['alpha']:g}"
    if config["loss"] == "slba":
        return "dynamic"
    return "-"
