"""Versioned checkpoint container: one .npz holding parameters, batch-norm
buffers, the model config, the normalization stats id, and the epoch."""

import json
from pathlib import Path

import numpy as np

from ..errors import CheckpointError
from .unet import UNet, model_config_from_dict, model_config_to_dict

FORMAT = "glacierseg.checkpoint"
VERSION = 1


def save_checkpoint(path, model, stats_id, epoch, extra=None):
    header = {
        "format": FORMAT,
        "version": VERSION,
        "model_config": model_config_to_dict(model.config),
        "stats_id": stats_id,
        "epoch": int(epoch),
        "dtype": model.dtype.name,
        "extra": extra or {},
    }
    arrays = {"p:" + name: value for name, value, _ in model.param_items()}
    arrays.update({"s:" + name: value for name, value in model.state_items()})
    arrays["__header__"] = np.frombuffer(json.dumps(header).encode(), dtype=np.uint8)
    np.savez(path, **arrays)
    return Path(path)


def load_checkpoint(path):
    """Rebuild the model bit-exactly; returns (model, header)."""
    path = Path(path)
    if not path.is_file():
        raise CheckpointError(f"checkpoint {path} does not exist")
    with np.load(path) as data:
        if "__header__" not in data:
            raise CheckpointError(f"{path} is not a {FORMAT} file")
        header = json.loads(bytes(data["__header__"]))
        if header.get("format") != FORMAT:
            raise CheckpointError(f"{path}: unexpected format {header.get('format')!r}")
        if header.get("version") != VERSION:
            raise CheckpointError(f"{path}: unsupported version {header.get('version')!r}")
        config = model_config_from_dict(header["model_config"])
        model = UNet(config, seed=0, dtype=np.dtype(header["dtype"]))
        for name, value, _ in model.param_items():
            key = "p:" + name
            if key not in data:
                raise CheckpointError(f"{path}: missing parameter {name}")
            stored = data[key]
            if stored.shape != value.shape:
                raise CheckpointError(f"{path}: shape mismatch for {name}")
            value[...] = stored
        for name, value in model.state_items():
            key = "s:" + name
            if key not in data:
                raise CheckpointError(f"{path}: missing state {name}")
            value[...] = data[key]
    return model, header
