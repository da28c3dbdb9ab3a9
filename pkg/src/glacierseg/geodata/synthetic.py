"""Synthetic multispectral scene generator.

Desk-scale stand-in for real satellite tiles: clean ice gets a distinct
spectral offset in a configurable channel subset, debris stays spectrally
close to the background but forms a textured, lobed region attached to the
clean ice, and a border band is masked out.  Class areas are hit exactly
(up to pixel rounding) by thresholding smooth random fields at the matching
quantile, which keeps the shapes organic.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

from .. import configfile
from ..errors import SceneSpecError
from .bands import NUM_BANDS
from .tiling import BACKGROUND, CLEAN, DEBRIS, MASKED, LabelGrid, MultispectralTile


@dataclass
class SceneSpec:
    size: int = 64
    fraction_clean: float = 0.22
    fraction_debris: float = 0.025
    fraction_masked: float = 0.035
    clean_signature: dict = field(default_factory=lambda: {4: 3.0, 7: 3.0})
    debris_signature: dict = field(default_factory=lambda: {2: 0.5, 4: 0.5})
    noise: float = 1.0
    mask_band_width: int | None = None
    # fraction (0..1) of the debris noise that is spatially smooth: marginal
    # pixel statistics stay those of the background, only the local
    # correlation changes, which keeps debris a context cue rather than a
    # per-pixel one
    debris_texture: float = 0.9
    # moraine-like lookalikes: background patches carrying the same texture
    # and spectral offsets as debris.  Far distractors sit away from clean
    # ice so appearance alone cannot identify debris; adjacent distractors
    # share the debris zone itself, putting a hard cap on how certain any
    # pixel-wise posterior can be
    distractor_fraction: float = 0.05
    distractor_margin: int = 6  # minimum gap (pixels) between far distractors and clean ice
    adjacent_distractor_fraction: float = 0.0125
    background_level: float = 0.0
    blob_scale: float | None = None  # smoothing of the clean-region field
    debris_blob_scale: float = 2.0
    texture_scale: float = 2.0
    debris_ring: int | None = None  # adjacency band (pixels) around clean ice

    def __post_init__(self):
        if self.size < 8:
            raise SceneSpecError(f"scene size must be >= 8, got {self.size}")
        fracs = (self.fraction_clean, self.fraction_debris, self.fraction_masked)
        if any(f < 0 or f > 1 for f in fracs):
            raise SceneSpecError(f"class fractions must lie in [0,1], got {fracs}")
        if sum(fracs) > 1 + 1e-9:
            raise SceneSpecError(
                f"class fractions sum to {sum(fracs):.4f} > 1; no room for background"
            )
        for sig_name in ("clean_signature", "debris_signature"):
            sig = getattr(self, sig_name)
            if any(not 0 <= ch < NUM_BANDS for ch in sig):
                raise SceneSpecError(f"{sig_name} channels must be in 0..{NUM_BANDS - 1}")
        if self.noise < 0:
            raise SceneSpecError("noise must be nonnegative")
        if not 0.0 <= self.debris_texture <= 1.0:
            raise SceneSpecError(
                f"debris_texture is a mixing fraction in [0,1], got {self.debris_texture}"
            )
        if not 0.0 <= self.distractor_fraction <= 1.0:
            raise SceneSpecError(
                f"distractor_fraction must lie in [0,1], got {self.distractor_fraction}"
            )
        if not 0.0 <= self.adjacent_distractor_fraction <= 1.0:
            raise SceneSpecError(
                "adjacent_distractor_fraction must lie in [0,1], "
                f"got {self.adjacent_distractor_fraction}"
            )

    @property
    def fractions(self):
        rest = 1.0 - self.fraction_clean - self.fraction_debris - self.fraction_masked
        return (rest, self.fraction_clean, self.fraction_debris, self.fraction_masked)

    def resolved_mask_band_width(self):
        if self.mask_band_width is not None:
            return int(self.mask_band_width)
        # widest band whose area does not overshoot the target fraction
        return round(self.size * (1.0 - math.sqrt(1.0 - self.fraction_masked)) / 2.0)

    @classmethod
    def from_config(cls, path):
        return cls.from_mapping(configfile.read_config(path), source=str(path))

    @classmethod
    def from_mapping(cls, values, source="<scene config>"):
        values = dict(values)
        values.pop("seed", None)  # seed belongs to the generate call
        kwargs = {}
        if "fractions" in values:
            fracs = configfile.parse_floats(values.pop("fractions"))
            if len(fracs) == 4:
                if abs(sum(fracs) - 1.0) > 1e-6:
                    raise SceneSpecError(f"{source}: 4-part fractions must sum to 1, got {fracs}")
                fracs = fracs[1:]
            if len(fracs) != 3:
                raise SceneSpecError(
                    f"{source}: fractions needs 3 values (clean, debris, masked) "
                    f"or 4 (background first)"
                )
            kwargs["fraction_clean"], kwargs["fraction_debris"], kwargs["fraction_masked"] = fracs
        for key in ("clean_signature", "debris_signature"):
            if key in values:
                kwargs[key] = configfile.parse_channel_map(values.pop(key), key)
        for key, cast in (
            ("size", int), ("noise", float), ("debris_texture", float),
            ("distractor_fraction", float), ("distractor_margin", int),
            ("adjacent_distractor_fraction", float),
            ("background_level", float), ("blob_scale", float),
            ("debris_blob_scale", float), ("texture_scale", float),
        ):
            if key in values:
                kwargs[key] = cast(values.pop(key))
        if "mask_band_width" in values:
            raw = values.pop("mask_band_width")
            kwargs["mask_band_width"] = None if raw.lower() == "auto" else int(raw)
        if "debris_ring" in values:
            kwargs["debris_ring"] = int(values.pop("debris_ring"))
        if values:
            raise SceneSpecError(f"{source}: unknown scene keys {sorted(values)}")
        return cls(**kwargs)


def _top_k_mask(values, candidates, k):
    """Boolean mask selecting the k largest ``values`` among ``candidates``."""
    mask = np.zeros(values.shape, dtype=bool)
    if k <= 0:
        return mask
    flat_idx = np.flatnonzero(candidates)
    if flat_idx.size == 0:
        return mask
    k = min(k, flat_idx.size)
    order = np.argsort(values.ravel()[flat_idx], kind="stable")[::-1]
    mask.ravel()[flat_idx[order[:k]]] = True
    return mask


def generate_synthetic_scene(spec, seed):
    """Produce one (MultispectralTile, LabelGrid) pair, bit-deterministic in seed."""
    rng = np.random.default_rng(seed)
    s = spec.size
    labels = np.zeros((s, s), dtype=np.uint8)

    w = spec.resolved_mask_band_width()
    if w > 0:
        labels[:w, :] = MASKED
        labels[-w:, :] = MASKED
        labels[:, :w] = MASKED
        labels[:, -w:] = MASKED
    unmasked = labels == BACKGROUND

    blob_scale = spec.blob_scale if spec.blob_scale is not None else s / 8.0
    clean_field = ndimage.gaussian_filter(rng.standard_normal((s, s)), blob_scale)
    n_clean = round(spec.fraction_clean * s * s)
    clean = _top_k_mask(clean_field, unmasked, n_clean)

    debris_field = ndimage.gaussian_filter(rng.standard_normal((s, s)), spec.debris_blob_scale)
    n_debris = round(spec.fraction_debris * s * s)
    debris = np.zeros((s, s), dtype=bool)
    if n_debris > 0:
        ring = spec.debris_ring if spec.debris_ring is not None else max(3, s // 10)
        candidates = np.zeros((s, s), dtype=bool)
        grow = ring
        while candidates.sum() < n_debris:
            near_clean = ndimage.binary_dilation(clean, iterations=grow) if clean.any() else unmasked
            candidates = near_clean & ~clean & unmasked
            if grow > 4 * s:  # clean region absent or mask leaves no room
                candidates = ~clean & unmasked
                break
            grow *= 2
        debris = _top_k_mask(debris_field, candidates, n_debris)

    distractor_field = ndimage.gaussian_filter(rng.standard_normal((s, s)), spec.debris_blob_scale)
    n_distract = round(spec.distractor_fraction * s * s)
    distractors = np.zeros((s, s), dtype=bool)
    if n_distract > 0:
        near = ndimage.binary_dilation(clean, iterations=spec.distractor_margin) if clean.any() else clean
        far_zone = unmasked & ~near & ~debris
        distractors = _top_k_mask(distractor_field, far_zone, n_distract)
    n_adjacent = round(spec.adjacent_distractor_fraction * s * s)
    if n_adjacent > 0:
        adj_field = ndimage.gaussian_filter(rng.standard_normal((s, s)), spec.debris_blob_scale)
        ring = spec.debris_ring if spec.debris_ring is not None else max(3, s // 10)
        near_clean = ndimage.binary_dilation(clean, iterations=ring) if clean.any() else unmasked
        adj_zone = near_clean & ~clean & ~debris & unmasked
        distractors |= _top_k_mask(adj_field, adj_zone, n_adjacent)
    debris_like = debris | distractors

    pixels = np.full((NUM_BANDS, s, s), spec.background_level, dtype=np.float64)
    if spec.noise > 0:
        white = rng.standard_normal((NUM_BANDS, s, s))
        pixels += spec.noise * white
        if spec.debris_texture > 0 and debris_like.any():
            # swap part of the white noise for per-channel smooth noise on
            # debris-like pixels; the quadrature mix keeps the marginal variance
            smooth = ndimage.gaussian_filter(
                rng.standard_normal((NUM_BANDS, s, s)),
                (0, spec.texture_scale, spec.texture_scale),
            )
            smooth /= max(smooth.std(), 1e-12)
            q = spec.debris_texture
            mixed = math.sqrt(1.0 - q * q) * white + q * smooth
            pixels[:, debris_like] = spec.background_level + spec.noise * mixed[:, debris_like]
    for ch, offset in spec.clean_signature.items():
        pixels[ch][clean] += offset
    for ch, offset in spec.debris_signature.items():
        pixels[ch][debris_like] += offset

    labels[clean] = CLEAN
    labels[debris] = DEBRIS

    tile = MultispectralTile(
        pixels=pixels.astype(np.float32),
        tile_id=f"scene{seed:08d}",
        cell_id=f"scene{seed:08d}",
        normalized=False,
    )
    return tile, LabelGrid(labels)
