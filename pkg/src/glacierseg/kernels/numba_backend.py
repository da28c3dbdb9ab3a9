"""Numba-jitted twins of the numpy kernels.

Semantics (including tie-breaking) must stay bit-identical to
:mod:`glacierseg.kernels.numpy_backend`; the parity tests in
``tests/test_kernels.py`` enforce this.  Compiled artifacts are cached on
disk, so the JIT cost is paid once per dtype.
"""

import numpy as np
from numba import njit

NAME = "numba"


@njit(cache=True)
def _im2col(xp, cols, k, h_out, w_out):
    n, c = xp.shape[0], xp.shape[1]
    for ni in range(n):
        for ci in range(c):
            for ki in range(k):
                for kj in range(k):
                    row = (ci * k + ki) * k + kj
                    for i in range(h_out):
                        base = i * w_out
                        for j in range(w_out):
                            cols[ni, row, base + j] = xp[ni, ci, ki + i, kj + j]


def im2col(x, k, pad):
    n, c, h, w = x.shape
    h_out = h + 2 * pad - k + 1
    w_out = w + 2 * pad - k + 1
    xp = x if pad == 0 else np.pad(x, ((0, 0), (0, 0), (pad, pad), (pad, pad)))
    cols = np.empty((n, c * k * k, h_out * w_out), dtype=x.dtype)
    _im2col(np.ascontiguousarray(xp), cols, k, h_out, w_out)
    return cols


@njit(cache=True)
def _col2im(cols, xp, k, h_out, w_out):
    n, c = xp.shape[0], xp.shape[1]
    for ni in range(n):
        for ci in range(c):
            for ki in range(k):
                for kj in range(k):
                    row = (ci * k + ki) * k + kj
                    for i in range(h_out):
                        base = i * w_out
                        for j in range(w_out):
                            xp[ni, ci, ki + i, kj + j] += cols[ni, row, base + j]


def col2im(cols, h, w, k, pad):
    n = cols.shape[0]
    c = cols.shape[1] // (k * k)
    h_out = h + 2 * pad - k + 1
    w_out = w + 2 * pad - k + 1
    xp = np.zeros((n, c, h + 2 * pad, w + 2 * pad), dtype=cols.dtype)
    _col2im(np.ascontiguousarray(cols), xp, k, h_out, w_out)
    if pad == 0:
        return xp
    return np.ascontiguousarray(xp[:, :, pad:pad + h, pad:pad + w])


@njit(cache=True)
def _maxpool2(x, out, arg):
    n, c, ho, wo = out.shape
    for ni in range(n):
        for ci in range(c):
            for i in range(ho):
                for j in range(wo):
                    best = x[ni, ci, 2 * i, 2 * j]
                    code = 0
                    for di in range(2):
                        for dj in range(2):
                            v = x[ni, ci, 2 * i + di, 2 * j + dj]
                            if v > best:
                                best = v
                                code = di * 2 + dj
                    out[ni, ci, i, j] = best
                    arg[ni, ci, i, j] = code


def maxpool2(x):
    n, c, h, w = x.shape
    out = np.empty((n, c, h // 2, w // 2), dtype=x.dtype)
    arg = np.empty((n, c, h // 2, w // 2), dtype=np.int8)
    _maxpool2(np.ascontiguousarray(x), out, arg)
    return out, arg


@njit(cache=True)
def _maxpool2_backward(grad_out, arg, grad_in):
    n, c, ho, wo = grad_out.shape
    for ni in range(n):
        for ci in range(c):
            for i in range(ho):
                for j in range(wo):
                    code = arg[ni, ci, i, j]
                    di = code // 2
                    dj = code % 2
                    grad_in[ni, ci, 2 * i + di, 2 * j + dj] = grad_out[ni, ci, i, j]


def maxpool2_backward(grad_out, arg):
    n, c, ho, wo = grad_out.shape
    grad_in = np.zeros((n, c, ho * 2, wo * 2), dtype=grad_out.dtype)
    _maxpool2_backward(np.ascontiguousarray(grad_out), arg, grad_in)
    return grad_in


@njit(cache=True)
def _window_max(x, out, arg, k, pad_value):
    h, w = x.shape
    r = k // 2
    for i in range(h):
        for j in range(w):
            best = pad_value
            code = -1
            for ki in range(k):
                si = i + ki - r
                for kj in range(k):
                    sj = j + kj - r
                    if 0 <= si < h and 0 <= sj < w:
                        v = x[si, sj]
                    else:
                        v = pad_value
                    if code < 0 or v > best:
                        best = v
                        code = ki * k + kj
            out[i, j] = best
            arg[i, j] = code


def window_max(x, k, pad_value):
    h, w = x.shape
    out = np.empty((h, w), dtype=x.dtype)
    arg = np.empty((h, w), dtype=np.int16)
    _window_max(np.ascontiguousarray(x), out, arg, k, x.dtype.type(pad_value))
    return out, arg


@njit(cache=True)
def _window_max_backward(grad_out, arg, grad_in, k):
    h, w = grad_out.shape
    r = k // 2
    for i in range(h):
        for j in range(w):
            code = arg[i, j]
            si = i + code // k - r
            sj = j + code % k - r
            if 0 <= si < h and 0 <= sj < w:
                grad_in[si, sj] += grad_out[i, j]


def window_max_backward(grad_out, arg, k):
    h, w = grad_out.shape
    grad_in = np.zeros((h, w), dtype=grad_out.dtype)
    _window_max_backward(np.ascontiguousarray(grad_out), arg, grad_in, k)
    return grad_in
