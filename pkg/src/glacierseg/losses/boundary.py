"""Boundary loss: one minus a tolerance-relaxed boundary F1.

Boundaries are extracted morphologically (grid minus its erosion); erosion
and the tolerance extension are stride-1 window extrema, so the whole loss is
differentiable in the prediction through max/min routing.  On binary inputs
the extraction degenerates to the usual inner-boundary ring.
"""

from dataclasses import dataclass

import numpy as np

from .. import kernels
from ..errors import InvalidInputError
from .common import LossResult, as_float_grids, check_same_shape


@dataclass
class BoundaryParams:
    theta: int = 3  # pixel tolerance for matching the two boundaries
    kernel: int = 3  # erosion window for boundary extraction

    def validate(self):
        if self.theta < 1:
            raise InvalidInputError(f"theta must be >= 1, got {self.theta}")
        if self.kernel < 3 or self.kernel % 2 == 0:
            raise InvalidInputError(f"kernel must be odd and >= 3, got {self.kernel}")
        return self


class _WindowMax:
    """Sliding-window max that remembers its argmax routing for the vjp."""

    def __init__(self, x, k, pad_value):
        self.k = k
        self.out, self._arg = kernels.window_max(x, k, pad_value)

    def vjp(self, grad_out):
        return kernels.window_max_backward(grad_out, self._arg, self.k)


class _Boundary:
    """b = x - erode(x), with erode(x) = -window_max(-x) (zero outside)."""

    def __init__(self, x, kernel):
        self._neg = _WindowMax(-x, kernel, 0.0)
        self.out = x + self._neg.out

    def vjp(self, grad_out):
        return grad_out - self._neg.vjp(grad_out)


def extract_boundary(mask, kernel=3):
    """Grid minus its erosion; pixels outside the grid count as background.

    Works on binary masks (exact morphological boundary) and on probability
    grids (soft boundary via the min-pool surrogate).
    """
    BoundaryParams(kernel=kernel).validate()
    (x,) = as_float_grids(np.asarray(mask))
    return _Boundary(x, kernel).out


def boundary_loss(pred, target, params=None, valid=None):
    """1 - BF1 between predicted and target boundaries, theta-tolerant.

    Precision weighs the predicted boundary by the dilated target boundary;
    recall weighs the dilated predicted boundary by the target boundary.
    Empty-boundary conventions: both empty -> 0; P = R = 0 -> 1.  When
    ``valid`` is given, masked pixels are set to background before boundary
    extraction on both grids.
    """
    params = (params or BoundaryParams()).validate()
    check_same_shape(pred, target, valid)
    p, g, v = as_float_grids(pred, target, valid)
    if v is not None:
        p = p * v
        g = g * v

    k = params.kernel
    ext_k = 2 * params.theta + 1
    pb_node = _Boundary(p, k)
    pb = pb_node.out
    gb = _Boundary(g, k).out
    gb_ext, _ = kernels.window_max(gb, ext_k, 0.0)
    ep_node = _WindowMax(pb, ext_k, 0.0)

    sp = float(pb.sum())
    sg = float(gb.sum())
    if sp == 0.0 and sg == 0.0:
        return LossResult(0.0, np.zeros_like(p))

    precision = float((pb * gb_ext).sum()) / sp if sp > 0 else 0.0
    recall = float((ep_node.out * gb).sum()) / sg if sg > 0 else 0.0
    if precision + recall == 0.0:
        return LossResult(1.0, np.zeros_like(p))

    denom = precision + recall
    value = 1.0 - 2.0 * precision * recall / denom

    # d(loss)/dP and d(loss)/dR from the harmonic mean
    dP = -2.0 * recall * recall / (denom * denom)
    dR = -2.0 * precision * precision / (denom * denom)

    grad_pb = np.zeros_like(p)
    if sp > 0:
        grad_pb += dP * (gb_ext - precision) / sp
    if sg > 0:
        grad_pb += ep_node.vjp(dR * gb / sg)
    grad = pb_node.vjp(grad_pb)
    if v is not None:
        grad = grad * v
    return LossResult(value, grad)
