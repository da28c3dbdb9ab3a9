"""Geometric training-time augmentation applied jointly to tile and label."""

import numpy as np

from ..errors import InvalidInputError

TRANSFORMS = ("rot90", "rot180", "rot270", "hflip", "vflip")

DEFAULT_PROBABILITY = 0.15


def apply_transform(name, pixels, classes):
    """Apply one named transform to [C,H,W] pixels and [H,W] classes alike."""
    if name == "rot90":
        return np.rot90(pixels, 1, (1, 2)).copy(), np.rot90(classes, 1).copy()
    if name == "rot180":
        return np.rot90(pixels, 2, (1, 2)).copy(), np.rot90(classes, 2).copy()
    if name == "rot270":
        return np.rot90(pixels, 3, (1, 2)).copy(), np.rot90(classes, 3).copy()
    if name == "hflip":
        return pixels[:, :, ::-1].copy(), classes[:, ::-1].copy()
    if name == "vflip":
        return pixels[:, ::-1, :].copy(), classes[::-1, :].copy()
    raise InvalidInputError(f"unknown transform {name!r}")


def draw_transform(rng, probability=DEFAULT_PROBABILITY):
    """Return a transform name with the given probability, else None."""
    if not 0.0 <= probability <= 1.0:
        raise InvalidInputError(f"probability must be in [0,1], got {probability}")
    if rng.random() < probability:
        return TRANSFORMS[rng.integers(len(TRANSFORMS))]
    return None


def augment(pixels, classes, rng, probability=DEFAULT_PROBABILITY):
    """With ``probability``, apply one uniformly drawn transform; else identity.

    Rotations are multiples of 90 degrees and flips are axis-aligned, so the
    pixel/label pairing is preserved exactly.
    """
    name = draw_transform(rng, probability)
    if name is None:
        return pixels, classes
    return apply_transform(name, pixels, classes)
