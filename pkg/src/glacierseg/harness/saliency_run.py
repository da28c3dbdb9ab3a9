"""Saliency over a split for a trained run: JSON report plus bar chart."""

from pathlib import Path

from ..errors import EmptyDatasetError
from ..geodata import storage
from ..network import load_checkpoint
from ..saliency import average_report, save_saliency_chart
from .data import load_prepared
from .manifest import RunManifest


def run_saliency(manifest, split="train", data_dir=None, out_dir=None,
                 normalize=True, which="best"):
    """Average per-band saliency for the tiles of one split.

    Writes ``saliency_<class>_<split>.json`` and a matching chart next to the
    manifest (or under ``out_dir``); returns the SaliencyReport.
    """
    manifest = manifest if isinstance(manifest, RunManifest) else RunManifest.load(manifest)
    model, _ = load_checkpoint(manifest.checkpoint_path(which))
    directory = data_dir or manifest.config["data_dir"]
    stats = storage.load_stats(directory, manifest.stats_id)
    samples = load_prepared(directory, stats=stats).split(split)
    if not samples:
        raise EmptyDatasetError(f"split {split!r} is empty")
    class_name = manifest.config["class_name"]
    report = average_report(model, [s.pixels for s in samples],
                            normalize=normalize, class_name=class_name)
    out_dir = Path(out_dir) if out_dir else Path(manifest.path).parent
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = f"saliency_{class_name}_{split}"
    report.save_json(out_dir / f"{stem}.json")
    save_saliency_chart(report, out_dir / f"{stem}.png")
    return report
