"""Training/evaluation harness: configs, runs, manifests, CLI."""

from .ablation import run_ablation
from .config import RunConfig
from .data import generate_synthetic_dataset, load_prepared
from .evaluate import evaluate_run
from .manifest import RunManifest
from .predict import predict
from .prepare import prepare_dataset
from .saliency_run import run_saliency
from .train import train

__all__ = [
    "RunConfig", "RunManifest", "train", "evaluate_run", "predict",
    "run_saliency", "run_ablation", "prepare_dataset",
    "generate_synthetic_dataset", "load_prepared",
]
