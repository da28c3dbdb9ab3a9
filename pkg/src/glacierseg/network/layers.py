"""Neural-net building blocks with explicit forward/backward passes.

Everything is plain numpy; the patch unfolding and pooling inner loops go
through :mod:`glacierseg.kernels` so they can run jitted or pure-numpy.
Each layer caches what its backward pass needs, accumulates parameter
gradients in place, and returns the gradient w.r.t. its input, which is how
input saliency falls out of the same machinery.
"""

import math

import numpy as np
from scipy.special import erf

from .. import kernels

_INV_SQRT2 = 1.0 / math.sqrt(2.0)
_INV_SQRT2PI = 1.0 / math.sqrt(2.0 * math.pi)


class Layer:
    """Base: parameter-free, identity param listing."""

    def param_items(self):
        return []

    def state_items(self):
        return []

    def zero_grad(self):
        for _, _, grad in self.param_items():
            grad.fill(0.0)


class Conv2d(Layer):
    """Stride-1 convolution with constant zero padding.

    Convolutions feeding a batch norm are built without bias: the norm would
    subtract it exactly, leaving a parameter with an identically-zero
    gradient.
    """

    def __init__(self, in_channels, out_channels, kernel_size, padding, rng,
                 dtype=np.float32, bias=True):
        self.k = kernel_size
        self.pad = padding
        fan_in = in_channels * kernel_size * kernel_size
        scale = np.sqrt(2.0 / fan_in)
        self.w = (rng.standard_normal((out_channels, in_channels, kernel_size, kernel_size))
                  * scale).astype(dtype)
        self.b = np.zeros(out_channels, dtype=dtype) if bias else None
        self.dw = np.zeros_like(self.w)
        self.db = np.zeros_like(self.b) if bias else None
        self._x = None

    def param_items(self):
        items = [("w", self.w, self.dw)]
        if self.b is not None:
            items.append(("b", self.b, self.db))
        return items

    def forward(self, x, training=False):
        self._x = x
        n, _, h, w = x.shape
        h_out = h + 2 * self.pad - self.k + 1
        w_out = w + 2 * self.pad - self.k + 1
        cols = kernels.im2col(x, self.k, self.pad)
        wmat = self.w.reshape(self.w.shape[0], -1)
        out = np.matmul(wmat, cols)
        if self.b is not None:
            out += self.b[None, :, None]
        return out.reshape(n, self.w.shape[0], h_out, w_out)

    def backward(self, dout):
        x = self._x
        n, _, h, w = x.shape
        f = self.w.shape[0]
        dmat = dout.reshape(n, f, -1)
        # recompute the unfold instead of caching it: trades ~15% time for
        # not holding an [N, C*k*k, H*W] buffer per conv layer
        cols = kernels.im2col(x, self.k, self.pad)
        dw = np.matmul(dmat, cols.transpose(0, 2, 1)).sum(axis=0)
        self.dw += dw.reshape(self.w.shape)
        if self.b is not None:
            self.db += dmat.sum(axis=(0, 2))
        dcols = np.matmul(self.w.reshape(f, -1).T, dmat)
        return kernels.col2im(dcols, h, w, self.k, self.pad)


class ConvTranspose2d(Layer):
    """2x2 stride-2 transposed convolution (the U-Net up-sampling step)."""

    def __init__(self, in_channels, out_channels, rng, dtype=np.float32):
        # no bias: the output always feeds a decoder conv block whose batch
        # norm would cancel it
        scale = np.sqrt(2.0 / in_channels)
        self.w = (rng.standard_normal((in_channels, out_channels, 2, 2)) * scale).astype(dtype)
        self.dw = np.zeros_like(self.w)
        self._x2 = None

    def param_items(self):
        return [("w", self.w, self.dw)]

    def forward(self, x, training=False):
        n, c, h, w = x.shape
        f = self.w.shape[1]
        x2 = np.ascontiguousarray(x.transpose(0, 2, 3, 1)).reshape(n * h * w, c)
        self._x2 = x2
        self._in_shape = (n, c, h, w)
        blocks = np.matmul(x2, self.w.reshape(c, f * 4)).reshape(n, h, w, f, 2, 2)
        out = blocks.transpose(0, 3, 1, 4, 2, 5).reshape(n, f, 2 * h, 2 * w)
        return np.ascontiguousarray(out)

    def backward(self, dout):
        n, c, h, w = self._in_shape
        f = self.w.shape[1]
        dblk = dout.reshape(n, f, h, 2, w, 2).transpose(0, 2, 4, 1, 3, 5)
        dblk2 = np.ascontiguousarray(dblk).reshape(n * h * w, f * 4)
        self.dw += np.matmul(self._x2.T, dblk2).reshape(self.w.shape)
        dx = np.matmul(dblk2, self.w.reshape(c, f * 4).T).reshape(n, h, w, c)
        return np.ascontiguousarray(dx.transpose(0, 3, 1, 2))


class BatchNorm2d(Layer):
    def __init__(self, channels, momentum=0.1, eps=1e-5, dtype=np.float32):
        self.gamma = np.ones(channels, dtype=dtype)
        self.beta = np.zeros(channels, dtype=dtype)
        self.dgamma = np.zeros_like(self.gamma)
        self.dbeta = np.zeros_like(self.beta)
        self.running_mean = np.zeros(channels, dtype=dtype)
        self.running_var = np.ones(channels, dtype=dtype)
        self.momentum = momentum
        self.eps = eps
        self._cache = None

    def param_items(self):
        return [("gamma", self.gamma, self.dgamma), ("beta", self.beta, self.dbeta)]

    def state_items(self):
        return [("running_mean", self.running_mean), ("running_var", self.running_var)]

    def forward(self, x, training=False):
        axes = (0, 2, 3)
        if training:
            mean = x.mean(axis=axes)
            var = x.var(axis=axes)
            self.running_mean += self.momentum * (mean - self.running_mean)
            self.running_var += self.momentum * (var - self.running_var)
        else:
            mean = self.running_mean
            var = self.running_var
        invstd = 1.0 / np.sqrt(var + self.eps)
        xhat = (x - mean[None, :, None, None]) * invstd[None, :, None, None]
        self._cache = (xhat, invstd.astype(x.dtype), training)
        return self.gamma[None, :, None, None] * xhat + self.beta[None, :, None, None]

    def backward(self, dout):
        xhat, invstd, training = self._cache
        axes = (0, 2, 3)
        self.dgamma += (dout * xhat).sum(axis=axes)
        self.dbeta += dout.sum(axis=axes)
        g = self.gamma[None, :, None, None] * invstd[None, :, None, None]
        if not training:
            return dout * g
        dxhat = dout * self.gamma[None, :, None, None]
        m1 = dxhat.mean(axis=axes)
        m2 = (dxhat * xhat).mean(axis=axes)
        return invstd[None, :, None, None] * (
            dxhat - m1[None, :, None, None] - xhat * m2[None, :, None, None]
        )


class ReLU(Layer):
    """Plain rectifier (the unmodified-architecture activation)."""

    def __init__(self):
        self._pos = None

    def forward(self, x, training=False):
        self._pos = x > 0
        return np.where(self._pos, x, x.dtype.type(0))

    def backward(self, dout):
        return np.where(self._pos, dout, dout.dtype.type(0))


class GELU(Layer):
    """Exact Gaussian error linear unit."""

    def __init__(self):
        self._x = None
        self._cdf = None

    def forward(self, x, training=False):
        self._x = x
        self._cdf = 0.5 * (1.0 + erf(x * _INV_SQRT2))
        return x * self._cdf

    def backward(self, dout):
        x = self._x
        pdf = np.exp(-0.5 * x * x) * _INV_SQRT2PI
        return dout * (self._cdf + x * pdf)


class SpatialDropout2d(Layer):
    """Inverted dropout that zeroes whole feature maps."""

    def __init__(self, rate, rng):
        self.rate = rate
        self.rng = rng
        self._mask = None

    def forward(self, x, training=False):
        if not training or self.rate <= 0.0:
            self._mask = None
            return x
        keep = self.rng.random((x.shape[0], x.shape[1], 1, 1)) >= self.rate
        self._mask = keep.astype(x.dtype) / (1.0 - self.rate)
        return x * self._mask

    def backward(self, dout):
        if self._mask is None:
            return dout
        return dout * self._mask


class MaxPool2d(Layer):
    """2x2 stride-2 max pooling."""

    def __init__(self):
        self._arg = None

    def forward(self, x, training=False):
        out, self._arg = kernels.maxpool2(x)
        return out

    def backward(self, dout):
        return kernels.maxpool2_backward(dout, self._arg)


class ConvBlock(Layer):
    """conv -> batch norm -> GELU, twice (modified profile).

    The standard profile (plain U-Net baseline) swaps GELU for ReLU and
    drops the norm, in which case the convolutions keep their biases.
    """

    def __init__(self, in_channels, out_channels, rng, dtype=np.float32,
                 batch_norm=True, activation="gelu"):
        act = GELU if activation == "gelu" else ReLU
        self.layers = []
        for cin in (in_channels, out_channels):
            self.layers.append(
                Conv2d(cin, out_channels, 3, 1, rng, dtype, bias=not batch_norm))
            if batch_norm:
                self.layers.append(BatchNorm2d(out_channels, dtype=dtype))
            self.layers.append(act())

    def forward(self, x, training=False):
        for layer in self.layers:
            x = layer.forward(x, training)
        return x

    def backward(self, dout):
        for layer in reversed(self.layers):
            dout = layer.backward(dout)
        return dout

    def param_items(self):
        items = []
        for i, layer in enumerate(self.layers):
            items.extend((f"{i}.{n}", v, g) for n, v, g in layer.param_items())
        return items

    def state_items(self):
        items = []
        for i, layer in enumerate(self.layers):
            items.extend((f"{i}.{n}", v) for n, v in layer.state_items())
        return items
