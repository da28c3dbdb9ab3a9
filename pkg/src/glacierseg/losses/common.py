"""Shared bits for the loss implementations."""

from dataclasses import dataclass

import numpy as np

from ..errors import ShapeMismatchError


@dataclass
class LossResult:
    """A scalar loss together with its gradient w.r.t. the prediction grid."""

    value: float
    grad: np.ndarray


def check_same_shape(*grids):
    shapes = {np.asarray(g).shape for g in grids if g is not None}
    if len(shapes) > 1:
        raise ShapeMismatchError(f"grids disagree in shape: {sorted(shapes)}")


def as_float_grids(*grids):
    return tuple(None if g is None else np.asarray(g, dtype=np.float64) for g in grids)
