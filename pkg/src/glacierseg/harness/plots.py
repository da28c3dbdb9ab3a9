"""Chart outputs: loss-weight trajectories and TP/FP/FN overlay maps."""

import numpy as np


def _plt():
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    return plt


def plot_weight_trajectories(history, path):
    """Per-epoch effective dice/boundary weights of a self-learned-loss run."""
    plt = _plt()
    epochs = [h["epoch"] for h in history]
    w_dice = [h["w_dice"] for h in history]
    w_bnd = [h["w_boundary"] for h in history]
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.plot(epochs, w_dice, label="dice weight  1/(2*alpha1^2)")
    ax.plot(epochs, w_bnd, label="boundary weight  1/(2*alpha2^2)")
    ax.set_xlabel("epoch")
    ax.set_ylabel("effective loss weight")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_error_map(pred_binary, truth_binary, valid, path, title=""):
    """TP (green) / FP (red) / FN (blue) overlay for one tile."""
    plt = _plt()
    pred_binary = np.asarray(pred_binary, dtype=bool)
    truth_binary = np.asarray(truth_binary, dtype=bool)
    valid = np.asarray(valid, dtype=bool)
    rgb = np.zeros(pred_binary.shape + (3,), dtype=np.float32)
    rgb[pred_binary & truth_binary & valid] = (0.1, 0.7, 0.2)
    rgb[pred_binary & ~truth_binary & valid] = (0.85, 0.15, 0.1)
    rgb[~pred_binary & truth_binary & valid] = (0.15, 0.25, 0.9)
    rgb[~valid] = (0.6, 0.6, 0.6)
    fig, ax = plt.subplots(figsize=(4.5, 4.5))
    ax.imshow(rgb, interpolation="nearest")
    ax.set_title(title)
    ax.set_axis_off()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_class_map(class_grid, path, title=""):
    """Fused segmentation map: background, clean, debris, masked."""
    plt = _plt()
    palette = np.array([
        (0.92, 0.92, 0.88),  # background
        (0.30, 0.65, 0.95),  # clean ice
        (0.55, 0.35, 0.20),  # debris ice
        (0.55, 0.55, 0.55),  # masked
    ], dtype=np.float32)
    rgb = palette[np.asarray(class_grid, dtype=np.int64)]
    fig, ax = plt.subplots(figsize=(4.5, 4.5))
    ax.imshow(rgb, interpolation="nearest")
    ax.set_title(title)
    ax.set_axis_off()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
