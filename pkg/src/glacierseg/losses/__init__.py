"""Loss functions (all return their gradient alongside the value)."""

from .boundary import BoundaryParams, boundary_loss, extract_boundary
from .common import LossResult
from .composite import (
    LossWeights,
    SlbaResult,
    combined_loss,
    fit_alpha_weights,
    slba_loss,
    slba_objective,
)
from .crossentropy import cross_entropy_baseline
from .dice import masked_dice_loss

LOSS_KINDS = ("ce", "dice", "boundary", "combined", "slba")

__all__ = [
    "LossResult", "masked_dice_loss",
    "BoundaryParams", "extract_boundary", "boundary_loss",
    "LossWeights", "SlbaResult", "combined_loss", "slba_loss",
    "slba_objective", "fit_alpha_weights",
    "cross_entropy_baseline", "LOSS_KINDS",
]
