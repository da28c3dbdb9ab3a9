"""The modified U-Net: GELU activations, batch norm, spatial dropout,
zero-padded convolutions, and a single-logit sigmoid head.

Clean-ice and debris-ice segmentation use two separate instances of this
model; their outputs are fused downstream (metrics.fuse_labels).
"""

import warnings
from dataclasses import asdict, dataclass

import numpy as np
from scipy.special import expit

from ..errors import InvalidConfigError, InvalidInputError, ShapeMismatchError
from .layers import Conv2d, ConvBlock, ConvTranspose2d, MaxPool2d, SpatialDropout2d


@dataclass
class ModelConfig:
    """Defaults describe the modified architecture (GELU + batch norm +
    spatial dropout); activation='relu' with batch_norm=False and zero
    dropout gives the plain-U-Net baseline used for the cross-entropy row."""

    in_channels: int = 8
    base_features: int = 32
    depth: int = 4
    dropout_rate: float = 0.1
    activation: str = "gelu"
    padding: str = "zero"
    batch_norm: bool = True

    def validate(self):
        if self.in_channels <= 0 or self.base_features <= 0 or self.depth < 1:
            raise InvalidConfigError(f"non-positive model dimensions in {self}")
        if not 0.0 <= self.dropout_rate < 1.0:
            raise InvalidConfigError(f"dropout_rate must be in [0,1), got {self.dropout_rate}")
        if self.activation not in ("gelu", "relu"):
            raise InvalidConfigError(f"unsupported activation {self.activation!r}")
        if self.padding != "zero":
            raise InvalidConfigError(f"unsupported padding {self.padding!r}")
        return self


@dataclass
class SegmentationOutput:
    logits: np.ndarray
    probabilities: np.ndarray

    @classmethod
    def from_logits(cls, logits):
        return cls(logits=logits, probabilities=expit(logits))


class UNet:
    """Encoder-decoder with skip connections; explicit backward pass."""

    def __init__(self, config, seed, dtype=np.float32):
        self.config = config.validate()
        self.dtype = np.dtype(dtype)
        init_seq, drop_seq = np.random.SeedSequence(seed).spawn(2)
        rng = np.random.default_rng(init_seq)
        drop_rng = np.random.default_rng(drop_seq)

        f = config.base_features
        d = config.depth
        block = dict(batch_norm=config.batch_norm, activation=config.activation)
        self.enc = []
        self.pools = []
        self.drop_down = []
        ch = config.in_channels
        for i in range(d):
            self.enc.append(ConvBlock(ch, f * 2 ** i, rng, dtype, **block))
            self.pools.append(MaxPool2d())
            self.drop_down.append(SpatialDropout2d(config.dropout_rate, drop_rng))
            ch = f * 2 ** i
        self.bottleneck = ConvBlock(f * 2 ** (d - 1), f * 2 ** d, rng, dtype, **block)
        self.ups = []
        self.dec = []
        self.drop_up = []
        for i in range(d):  # indexed by encoder level; applied deepest-first
            self.ups.append(ConvTranspose2d(f * 2 ** (i + 1), f * 2 ** i, rng, dtype))
            self.dec.append(ConvBlock(f * 2 ** (i + 1), f * 2 ** i, rng, dtype, **block))
            self.drop_up.append(SpatialDropout2d(config.dropout_rate, drop_rng))
        self.head = Conv2d(f, 1, 1, 0, rng, dtype)
        self._skip_channels = [f * 2 ** i for i in range(d)]

    # -- plumbing ---------------------------------------------------------

    def _named_layers(self):
        for i, block in enumerate(self.enc):
            yield f"enc{i}", block
        yield "bottleneck", self.bottleneck
        for i, up in enumerate(self.ups):
            yield f"up{i}", up
        for i, block in enumerate(self.dec):
            yield f"dec{i}", block
        yield "head", self.head

    def param_items(self):
        items = []
        for name, layer in self._named_layers():
            items.extend((f"{name}.{n}", v, g) for n, v, g in layer.param_items())
        return items

    def state_items(self):
        items = []
        for name, layer in self._named_layers():
            items.extend((f"{name}.{n}", v) for n, v in layer.state_items())
        return items

    def zero_grad(self):
        for _, _, grad in self.param_items():
            grad.fill(0.0)

    def num_parameters(self):
        return sum(v.size for _, v, _ in self.param_items())

    # -- forward / backward -----------------------------------------------

    def _check_input(self, x):
        if x.ndim != 4:
            raise ShapeMismatchError(f"expected [N,C,H,W], got shape {x.shape}")
        if x.shape[1] != self.config.in_channels:
            raise ShapeMismatchError(
                f"input has {x.shape[1]} channels, model expects {self.config.in_channels}"
            )
        stride = 2 ** self.config.depth
        if x.shape[2] % stride or x.shape[3] % stride:
            raise ShapeMismatchError(
                f"spatial size {x.shape[2]}x{x.shape[3]} not divisible by 2^depth={stride}"
            )

    def forward(self, x, training=False):
        """Map [N,C,H,W] inputs to [N,H,W] logits."""
        x = np.ascontiguousarray(x, dtype=self.dtype)
        self._check_input(x)
        skips = []
        for i in range(self.config.depth):
            x = self.enc[i].forward(x, training)
            skips.append(x)
            x = self.pools[i].forward(x, training)
            x = self.drop_down[i].forward(x, training)
        x = self.bottleneck.forward(x, training)
        for i in reversed(range(self.config.depth)):
            x = self.ups[i].forward(x, training)
            x = np.concatenate([skips[i], x], axis=1)
            x = self.dec[i].forward(x, training)
            x = self.drop_up[i].forward(x, training)
        return self.head.forward(x, training)[:, 0]

    def backward(self, dlogits):
        """Propagate [N,H,W] logit gradients; returns the input gradient."""
        d = self.head.backward(np.ascontiguousarray(dlogits, dtype=self.dtype)[:, None])
        dskips = [None] * self.config.depth
        for i in range(self.config.depth):
            d = self.drop_up[i].backward(d)
            d = self.dec[i].backward(d)
            c = self._skip_channels[i]
            dskips[i] = d[:, :c]
            d = self.ups[i].backward(np.ascontiguousarray(d[:, c:]))
        d = self.bottleneck.backward(d)
        for i in reversed(range(self.config.depth)):
            d = self.drop_down[i].backward(d)
            d = self.pools[i].backward(d)
            d = self.enc[i].backward(d + dskips[i])
        return d


def build_model(config, seed, dtype=np.float32):
    """Construct a U-Net with deterministic initial parameters."""
    return UNet(config, seed, dtype)


def forward(model, tile, training=False, strict=False):
    """Run one tile through the model, returning logits and probabilities.

    Refuses (strict) or warns on tiles that were never z-scored, since batch
    norm expects normalized inputs.
    """
    if not tile.normalized:
        message = f"tile {tile.tile_id} is not normalized"
        if strict:
            raise InvalidInputError(message)
        warnings.warn(message, stacklevel=2)
    logits = model.forward(tile.pixels[None], training=training)[0]
    return SegmentationOutput.from_logits(logits)


def model_config_to_dict(config):
    return asdict(config)


def model_config_from_dict(d):
    return ModelConfig(**d).validate()
