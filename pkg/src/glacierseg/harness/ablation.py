"""Loss-ablation driver: one table row per loss variant, both classes."""

import json
from dataclasses import replace
from pathlib import Path

from .. import metrics
from ..errors import InvalidConfigError
from .data import load_prepared
from .evaluate import evaluate_run
from .train import train

DEFAULT_VARIANTS = "ce,combined:0,combined:0.1,combined:0.5,combined:0.9,combined:1,slba"


def parse_variants(text):
    """'ce,combined:0.5,slba' -> [('ce', None), ('combined', 0.5), ('slba', None)]."""
    variants = []
    for token in text.split(","):
        token = token.strip()
        if not token:
            continue
        if ":" in token:
            kind, alpha = token.split(":", 1)
            variants.append((kind.strip(), float(alpha)))
        else:
            variants.append((token, None))
    if not variants:
        raise InvalidConfigError("ablation needs at least one loss variant")
    return variants


def variant_label(kind, alpha):
    if kind == "combined":
        return "combined", f"{alpha:g}"
    if kind == "slba":
        return "slba", "dynamic"
    return kind, "-"


def run_ablation(base_config, variants=DEFAULT_VARIANTS, split="test", out_dir=None):
    """Train clean+debris models per variant and emit the comparison table.

    Returns the list of (loss_label, weight_label, clean_report,
    debris_report) rows; writes ``ablation_results.txt`` / ``.json`` and one
    run directory per (variant, class) under ``out_dir``.
    """
    if isinstance(variants, str):
        variants = parse_variants(variants)
    out_dir = Path(out_dir or base_config.out_dir or "ablation")
    out_dir.mkdir(parents=True, exist_ok=True)
    data = load_prepared(base_config.data_dir)

    rows = []
    json_rows = []
    for kind, alpha in variants:
        loss_label, weight_label = variant_label(kind, alpha)
        per_class = {}
        for class_name in ("clean", "debris"):
            run_dir = out_dir / f"{kind}{'' if alpha is None else f'_{alpha:g}'}_{class_name}"
            config = replace(
                base_config,
                loss=kind,
                alpha=base_config.alpha if alpha is None else alpha,
                class_name=class_name,
                # the cross-entropy row is the plain-U-Net baseline
                architecture="standard" if kind == "ce" else base_config.architecture,
                out_dir=str(run_dir),
            )
            manifest = train(config, data=data)
            reports = evaluate_run(manifest, split=split, data_dir=base_config.data_dir)
            per_class[class_name] = reports[class_name]
            json_rows.append(
                reports[class_name].to_json_row(split=split)
                | {"loss": loss_label, "weight": weight_label, "run_dir": str(run_dir)}
            )
        rows.append((loss_label, weight_label, per_class["clean"], per_class["debris"]))

    table = metrics.format_results_table(rows)
    with open(out_dir / "ablation_results.txt", "w") as f:
        f.write(table + "\n")
    with open(out_dir / "ablation_results.json", "w") as f:
        json.dump(json_rows, f, indent=1)
    return rows
