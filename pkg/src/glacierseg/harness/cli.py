"""Command-line interface.

Subcommands: prepare, synth, train, evaluate, predict, saliency, ablation.
Each accepts ``--config PATH`` (plain-text key = value), with ``--seed`` and
``--out`` overriding the config where applicable.
"""

import argparse
import json
import sys

from ..errors import GlacierSegError
from ..geodata.synthetic import SceneSpec
from .ablation import DEFAULT_VARIANTS, run_ablation
from .config import RunConfig
from .data import generate_synthetic_dataset
from .evaluate import evaluate_run
from .predict import predict
from .prepare import prepare_dataset
from .saliency_run import run_saliency
from .train import train


def _ratios(text):
    parts = [float(p) for p in text.split(",")]
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("ratios must be train,val,test")
    return tuple(parts)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="glacierseg",
        description="Glacier segmentation toolkit (desk scale).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("prepare", help="fishnet + tile an 8-band raster")
    p.add_argument("--raster", required=True, help="8-band GeoTIFF")
    p.add_argument("--labels", required=True, help="label raster (.npy or .tif, classes 0..3)")
    p.add_argument("--out", required=True, help="dataset output directory")
    p.add_argument("--cell-size", type=int, default=512)
    p.add_argument("--tile-size", type=int, default=512)
    p.add_argument("--ratios", type=_ratios, default=(0.7, 0.1, 0.2))
    p.add_argument("--min-glacier-fraction", type=float, default=0.10)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("synth", help="generate a synthetic scene dataset")
    p.add_argument("--config", help="scene spec file (key = value)")
    p.add_argument("--out", required=True)
    p.add_argument("--n-scenes", type=int, default=32)
    p.add_argument("--ratios", type=_ratios, default=(0.75, 0.125, 0.125))
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("train", help="train one single-class model")
    p.add_argument("--config", required=True, help="run config file")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=None)

    p = sub.add_parser("evaluate", help="pooled metrics for trained run(s)")
    p.add_argument("--manifest", action="append", required=True,
                   help="run manifest (repeat for clean + debris)")
    p.add_argument("--split", default="test")
    p.add_argument("--out", default=None, help="JSON output path")
    p.add_argument("--data", default=None, help="override dataset directory")

    p = sub.add_parser("predict", help="fused clean/debris prediction maps")
    p.add_argument("--clean", required=True, help="manifest of the clean-ice run")
    p.add_argument("--debris", required=True, help="manifest of the debris-ice run")
    p.add_argument("--split", default="test")
    p.add_argument("--out", default="predictions")
    p.add_argument("--data", default=None)
    p.add_argument("--no-render", action="store_true")

    p = sub.add_parser("saliency", help="per-band saliency report + chart")
    p.add_argument("--manifest", required=True)
    p.add_argument("--split", default="train")
    p.add_argument("--out", default=None)
    p.add_argument("--data", default=None)
    p.add_argument("--raw", action="store_true", help="skip per-tile L1 normalization")

    p = sub.add_parser("ablation", help="loss-variant comparison table")
    p.add_argument("--config", required=True, help="base run config file")
    p.add_argument("--variants", default=DEFAULT_VARIANTS)
    p.add_argument("--split", default="test")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=None)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return _dispatch(args)
    except GlacierSegError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def _dispatch(args):
    if args.command == "prepare":
        summary = prepare_dataset(
            args.raster, args.labels, args.out,
            cell_size=args.cell_size, ratios=args.ratios, seed=args.seed,
            tile_size=args.tile_size, min_glacier_fraction=args.min_glacier_fraction,
        )
        print(json.dumps(summary, indent=1))
        return 0

    if args.command == "synth":
        spec = SceneSpec.from_config(args.config) if args.config else SceneSpec()
        cells, tile_size = generate_synthetic_dataset(
            spec, args.n_scenes, args.ratios, args.seed, args.out)
        counts = {}
        for c in cells:
            counts[c.split] = counts.get(c.split, 0) + 1
        print(json.dumps({"scenes": len(cells), "tile_size": tile_size, "splits": counts}))
        return 0

    if args.command == "train":
        config = RunConfig.from_file(args.config,
                                     overrides={"seed": args.seed, "out_dir": args.out})
        manifest = train(config)
        last = manifest.history[-1]
        print(json.dumps({
            "out_dir": str(manifest.path and str(manifest.path)),
            "status": manifest.status,
            "best_epoch": manifest.best_epoch,
            "best_val_iou": manifest.best_val_iou,
            "final_train_loss": last["train_loss"],
        }))
        return 0

    if args.command == "evaluate":
        reports = evaluate_run(args.manifest, split=args.split, data_dir=args.data,
                               out_path=args.out)
        print(json.dumps({k: r.to_json_row(split=args.split) for k, r in reports.items()},
                         indent=1))
        return 0

    if args.command == "predict":
        _, rows = predict(args.clean, args.debris, split=args.split, data_dir=args.data,
                          out_dir=args.out, render=not args.no_render)
        print(json.dumps({"tiles": len(rows), "out_dir": args.out}))
        return 0

    if args.command == "saliency":
        report = run_saliency(args.manifest, split=args.split, data_dir=args.data,
                              out_dir=args.out, normalize=not args.raw)
        print(json.dumps(report.to_dict(), indent=1))
        return 0

    if args.command == "ablation":
        config = RunConfig.from_file(args.config,
                                     overrides={"seed": args.seed, "out_dir": args.out})
        rows = run_ablation(config, variants=args.variants, split=args.split,
                            out_dir=args.out)
        print(f"wrote {len(rows)} ablation rows to {args.out or config.out_dir or 'ablation'}")
        return 0

    raise AssertionError(f"unhandled command {args.command}")


if __name__ == "__main__":
    sys.exit(main())
