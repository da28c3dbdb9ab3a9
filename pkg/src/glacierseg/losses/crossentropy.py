"""Masked binary cross-entropy on logits, the standard-U-Net baseline."""

import numpy as np
from scipy.special import expit

from .common import LossResult, as_float_grids, check_same_shape


def cross_entropy_baseline(pred_logits, target, valid):
    """Mean BCE over valid pixels, computed stably from logits.

    Defined-empty convention: an all-masked grid gives loss 0, gradient 0.
    """
    check_same_shape(pred_logits, target, valid)
    z, g, v = as_float_grids(pred_logits, target, valid)
    n_valid = float(v.sum())
    if n_valid == 0.0:
        return LossResult(0.0, np.zeros_like(z))
    # softplus(z) - z*g, with softplus(z) = max(z, 0) + log1p(exp(-|z|))
    per_pixel = np.maximum(z, 0.0) - z * g + np.log1p(np.exp(-np.abs(z)))
    value = float((per_pixel * v).sum() / n_valid)
    grad = (expit(z) - g) * v / n_valid
    return LossResult(value, grad)
