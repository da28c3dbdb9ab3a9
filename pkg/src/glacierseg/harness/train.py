"""The training loop: batching, augmentation, loss dispatch, checkpointing."""

import time
from pathlib import Path

import numpy as np
from scipy.special import expit

from .. import kernels, metrics
from ..errors import EmptyDatasetError, TrainingDivergedError
from ..geodata.augment import augment
from ..losses import (
    BoundaryParams,
    LossWeights,
    boundary_loss,
    combined_loss,
    cross_entropy_baseline,
    masked_dice_loss,
    slba_loss,
)
from ..network import ModelConfig, UNet, save_checkpoint
from ..network.unet import model_config_to_dict
from ..optim import Adam
from .data import binary_target, load_prepared, split_digest
from .manifest import RunManifest


class BatchObjective:
    """Computes the configured loss and its logit gradients for one batch."""

    def __init__(self, config):
        self.kind = config.loss
        self.alpha = config.alpha
        self.params = BoundaryParams(theta=config.theta, kernel=config.boundary_kernel)
        self.weights = LossWeights(alpha=config.alpha) if self.kind == "slba" else None
        self.grad_log_alpha1 = np.zeros(1)
        self.grad_log_alpha2 = np.zeros(1)

    def weight_slots(self):
        """Extra optimizer slots when the loss itself has parameters."""
        if self.weights is None:
            return []
        return [
            ("loss.log_alpha1", self.weights.log_alpha1, self.grad_log_alpha1),
            ("loss.log_alpha2", self.weights.log_alpha2, self.grad_log_alpha2),
        ]

    def history_columns(self):
        """Recorded per-epoch effective component weights."""
        if self.kind == "slba":
            w = self.weights
            return {"w_dice": w.w_dice, "w_boundary": w.w_boundary,
                    "alpha1": w.alpha1, "alpha2": w.alpha2}
        if self.kind == "combined":
            return {"w_dice": self.alpha, "w_boundary": 1.0 - self.alpha,
                    "alpha1": None, "alpha2": None}
        if self.kind == "dice":
            return {"w_dice": 1.0, "w_boundary": 0.0, "alpha1": None, "alpha2": None}
        if self.kind == "boundary":
            return {"w_dice": 0.0, "w_boundary": 1.0, "alpha1": None, "alpha2": None}
        return {"w_dice": None, "w_boundary": None, "alpha1": None, "alpha2": None}

    def __call__(self, logits, targets, with_grad=True):
        """Returns (batch loss, dlogits or None).  ``targets`` = [(g, v), ...]."""
        n = logits.shape[0]
        dlogits = np.zeros_like(logits) if with_grad else None

        if self.kind == "ce":
            total = 0.0
            for i, (g, v) in enumerate(targets):
                res = cross_entropy_baseline(logits[i], g, v)
                total += res.value
                if with_grad:
                    dlogits[i] = res.grad / n
            return total / n, dlogits

        probs = expit(np.asarray(logits, dtype=np.float64))
        dice_results = []
        boundary_results = []
        for i, (g, v) in enumerate(targets):
            if self.kind in ("dice", "combined", "slba"):
                dice_results.append(masked_dice_loss(probs[i], g, v))
            if self.kind in ("boundary", "combined", "slba"):
                boundary_results.append(boundary_loss(probs[i], g, self.params, valid=v))

        def chain(i, grad_p):
            # d loss/d logit = d loss/d p * sigmoid'(logit)
            return grad_p * probs[i] * (1.0 - probs[i]) / n

        if self.kind == "dice":
            value = sum(r.value for r in dice_results) / n
            if with_grad:
                for i, r in enumerate(dice_results):
                    dlogits[i] = chain(i, r.grad)
            return value, dlogits

        if self.kind == "boundary":
            value = sum(r.value for r in boundary_results) / n
            if with_grad:
                for i, r in enumerate(boundary_results):
                    dlogits[i] = chain(i, r.grad)
            return value, dlogits

        if self.kind == "combined":
            value = sum(
                combined_loss(d.value, b.value, self.alpha)
                for d, b in zip(dice_results, boundary_results)
            ) / n
            if with_grad:
                for i, (d, b) in enumerate(zip(dice_results, boundary_results)):
                    if self.alpha == 1.0:
                        grad_p = d.grad
                    elif self.alpha == 0.0:
                        grad_p = b.grad
                    else:
                        grad_p = self.alpha * d.grad + (1.0 - self.alpha) * b.grad
                    dlogits[i] = chain(i, grad_p)
            return value, dlogits

        # slba: weights apply to the batch-mean component losses
        l_dice = sum(r.value for r in dice_results) / n
        l_bnd = sum(r.value for r in boundary_results) / n
        res = slba_loss(l_dice, l_bnd, self.weights)
        if with_grad:
            for i, (d, b) in enumerate(zip(dice_results, boundary_results)):
                dlogits[i] = chain(i, res.d_l_dice * d.grad + res.d_l_boundary * b.grad)
            self.grad_log_alpha1[0] = res.d_log_alpha1
            self.grad_log_alpha2[0] = res.d_log_alpha2
        return res.value, dlogits


def _stack_batch(samples, indices, class_id, rng, augment_probability):
    xs, targets = [], []
    for idx in indices:
        s = samples[idx]
        pixels, classes = s.pixels, s.classes
        if augment_probability > 0:
            pixels, classes = augment(pixels, classes, rng, augment_probability)
        xs.append(pixels)
        targets.append(binary_target(classes, class_id))
    return np.stack(xs), targets


def _evaluate_split(model, samples, objective, class_id, threshold, batch_size):
    """Eval-mode loss and pooled IoU over one split."""
    if not samples:
        return None, None
    reports = []
    total_loss = 0.0
    for start in range(0, len(samples), batch_size):
        chunk = samples[start:start + batch_size]
        x = np.stack([s.pixels for s in chunk])
        logits = model.forward(x, training=False)
        targets = [binary_target(s.classes, class_id) for s in chunk]
        value, _ = objective(logits, targets, with_grad=False)
        total_loss += value * len(chunk)
        probs = expit(logits)
        for i, s in enumerate(chunk):
            reports.append(metrics.evaluate(probs[i], s.classes, class_id, threshold))
    pooled = metrics.aggregate(reports)
    return total_loss / len(samples), pooled.iou


def train(config, data=None):
    """Train one single-class model according to ``config``.

    Returns the RunManifest (also written to ``<out_dir>/manifest.json``
    together with best/last checkpoints and, for the self-learning loss, the
    per-epoch component-weight trajectory plot).
    """
    config.validate()
    t_start = time.perf_counter()
    out_dir = Path(config.out_dir or f"runs/{config.class_name}_{config.loss}")
    out_dir.mkdir(parents=True, exist_ok=True)

    if data is None:
        data = load_prepared(config.data_dir)
    if not data.train:
        raise EmptyDatasetError("training split is empty")
    eval_samples = data.val if data.val else data.train
    validation_split = "val" if data.val else "train"

    seeds = np.random.SeedSequence(config.seed).spawn(3)
    model_seed = int(np.random.default_rng(seeds[0]).integers(2 ** 31 - 1))
    shuffle_rng = np.random.default_rng(seeds[1])
    augment_rng = np.random.default_rng(seeds[2])

    depth = config.resolve_depth(data.tile_size)
    if config.architecture == "standard":
        model_config = ModelConfig(
            in_channels=8, base_features=config.base_features, depth=depth,
            dropout_rate=0.0, activation="relu", batch_norm=False,
        )
    else:
        model_config = ModelConfig(
            in_channels=8,
            base_features=config.base_features,
            depth=depth,
            dropout_rate=config.dropout_rate,
        )
    model = UNet(model_config, seed=model_seed)
    objective = BatchObjective(config)
    optimizer = Adam(model.param_items() + objective.weight_slots(),
                     learning_rate=config.learning_rate)

    manifest = RunManifest(
        config=config.to_dict(),
        model_config=model_config_to_dict(model_config),
        stats_id=data.stats.stats_id,
        split_digest=split_digest(data),
        n_tiles={k: len(data.split(k)) for k in ("train", "val", "test")},
        validation_split=validation_split,
        backend=kernels.active_backend(),
    )

    class_id = config.class_id
    best_iou = -1.0
    n_train = len(data.train)
    for epoch in range(config.epochs):
        order = shuffle_rng.permutation(n_train)
        epoch_loss = 0.0
        for start in range(0, n_train, config.batch_size):
            indices = order[start:start + config.batch_size]
            x, targets = _stack_batch(
                data.train, indices, class_id, augment_rng, config.augment_probability)
            logits = model.forward(x, training=True)
            value, dlogits = objective(logits, targets)
            if not np.isfinite(value):
                manifest.status = "aborted_nan"
                manifest.diagnostics = {
                    "epoch": epoch, "batch_start": int(start), "loss_value": repr(value),
                }
                manifest.runtime_seconds = time.perf_counter() - t_start
                manifest.save(out_dir / "manifest.json")
                raise TrainingDivergedError(
                    f"non-finite loss at epoch {epoch}: {value!r}; "
                    f"diagnostic manifest written to {out_dir}"
                )
            epoch_loss += value * len(indices)
            model.zero_grad()
            model.backward(dlogits.astype(np.float32))
            optimizer.step()

        val_loss, val_iou = _evaluate_split(
            model, eval_samples, objective, class_id, config.threshold, config.batch_size)
        entry = {
            "epoch": epoch,
            "train_loss": epoch_loss / n_train,
            "val_loss": val_loss,
            "val_iou": val_iou,
        }
        entry.update(objective.history_columns())
        manifest.history.append(entry)

        if val_iou is not None and val_iou > best_iou:
            best_iou = val_iou
            manifest.best_epoch = epoch
            manifest.best_val_iou = val_iou
            save_checkpoint(out_dir / "checkpoint_best.npz", model, data.stats.stats_id,
                            epoch, extra={"class_name": config.class_name})
            manifest.best_checkpoint = "checkpoint_best.npz"

    save_checkpoint(out_dir / "checkpoint_last.npz", model, data.stats.stats_id,
                    config.epochs - 1, extra={"class_name": config.class_name})
    manifest.last_checkpoint = "checkpoint_last.npz"
    if manifest.best_checkpoint is None:  # no finite validation IoU ever recorded
        manifest.best_checkpoint = "checkpoint_last.npz"
        manifest.best_epoch = config.epochs - 1

    if config.loss == "slba":
        from .plots import plot_weight_trajectories
        plot_weight_trajectories(manifest.history, out_dir / "weight_trajectories.png")

    manifest.runtime_seconds = time.perf_counter() - t_start
    manifest.save(out_dir / "manifest.json")
    return manifest
