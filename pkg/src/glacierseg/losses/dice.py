"""Masked dice loss: overlap objective over the non-masked pixels only."""

import numpy as np

from .common import LossResult, as_float_grids, check_same_shape

SMOOTH = 1e-7


def masked_dice_loss(pred, target, valid, smooth=SMOOTH):
    """1 - (2*sum(p*g*v) + eps) / (sum(p*v) + sum(g*v) + eps).

    ``valid`` marks the pixels that count (label != masked).  Masked pixels
    contribute nothing to value or gradient; an all-masked grid returns a
    well-defined 0 with zero gradient.
    """
    check_same_shape(pred, target, valid)
    p, g, v = as_float_grids(pred, target, valid)
    inter = float((p * g * v).sum())
    psum = float((p * v).sum())
    gsum = float((g * v).sum())
    denom = psum + gsum + smooth
    value = 1.0 - (2.0 * inter + smooth) / denom
    grad = -(2.0 * g * denom - (2.0 * inter + smooth)) * v / (denom * denom)
    return LossResult(value, grad)


def dice_coefficient(pred, target, valid, smooth=SMOOTH):
    return 1.0 - masked_dice_loss(pred, target, valid, smooth).value


def all_valid_like(grid):
    return np.ones_like(np.asarray(grid), dtype=np.float64)
