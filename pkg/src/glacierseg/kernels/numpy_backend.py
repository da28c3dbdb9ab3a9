"""Pure-numpy implementations of the hot kernels.

Every function here has a numba twin in :mod:`glacierseg.kernels.numba_backend`
with identical semantics, including tie-breaking (first window position in
row-major order wins every max).  The active implementation is chosen in
:mod:`glacierseg.kernels`.
"""

import numpy as np

NAME = "numpy"


def im2col(x, k, pad):
    """Unfold stride-1 k x k patches of ``x`` [N,C,H,W] into [N, C*k*k, L].

    L = H_out * W_out with H_out = H + 2*pad - k + 1.  Column layout matches
    ``weights.reshape(F, C*k*k)``: channel slowest, then kernel row, kernel col.
    """
    n, c, h, w = x.shape
    h_out = h + 2 * pad - k + 1
    w_out = w + 2 * pad - k + 1
    xp = x if pad == 0 else np.pad(x, ((0, 0), (0, 0), (pad, pad), (pad, pad)))
    cols = np.empty((n, c, k, k, h_out * w_out), dtype=x.dtype)
    for ki in range(k):
        for kj in range(k):
            patch = xp[:, :, ki:ki + h_out, kj:kj + w_out]
            cols[:, :, ki, kj, :] = patch.reshape(n, c, h_out * w_out)
    return cols.reshape(n, c * k * k, h_out * w_out)


def col2im(cols, h, w, k, pad):
    """Adjoint of :func:`im2col`: scatter-add columns back onto [N,C,H,W]."""
    n = cols.shape[0]
    c = cols.shape[1] // (k * k)
    h_out = h + 2 * pad - k + 1
    w_out = w + 2 * pad - k + 1
    colsr = cols.reshape(n, c, k, k, h_out, w_out)
    xp = np.zeros((n, c, h + 2 * pad, w + 2 * pad), dtype=cols.dtype)
    for ki in range(k):
        for kj in range(k):
            xp[:, :, ki:ki + h_out, kj:kj + w_out] += colsr[:, :, ki, kj]
    if pad == 0:
        return xp
    return xp[:, :, pad:pad + h, pad:pad + w]


def maxpool2(x):
    """2x2 stride-2 max pooling of [N,C,H,W] -> (out, argmax).

    ``argmax`` holds the in-window position 0..3 (row-major) of the max,
    first occurrence on ties.
    """
    n, c, h, w = x.shape
    v = x.reshape(n, c, h // 2, 2, w // 2, 2)
    v = v.transpose(0, 1, 2, 4, 3, 5).reshape(n, c, h // 2, w // 2, 4)
    arg = v.argmax(axis=-1).astype(np.int8)
    out = np.take_along_axis(v, arg[..., None].astype(np.intp), axis=-1)[..., 0]
    return out, arg


def maxpool2_backward(grad_out, arg):
    """Route pooled gradients back to the argmax positions."""
    n, c, ho, wo = grad_out.shape
    g = np.zeros((n, c, ho, wo, 4), dtype=grad_out.dtype)
    np.put_along_axis(g, arg[..., None].astype(np.intp), grad_out[..., None], axis=-1)
    g = g.reshape(n, c, ho, wo, 2, 2).transpose(0, 1, 2, 4, 3, 5)
    return g.reshape(n, c, ho * 2, wo * 2)


def window_max(x, k, pad_value):
    """Stride-1 k x k sliding-window max of a 2-D grid with constant padding.

    Returns (out, argcode) where argcode[i, j] = ki*k + kj is the winning
    window offset; a code pointing outside the unpadded grid means the pad
    value won and carries no gradient.
    """
    h, w = x.shape
    r = k // 2
    xp = np.pad(x, r, constant_values=pad_value)
    best = xp[0:h, 0:w].copy()
    arg = np.zeros((h, w), dtype=np.int16)
    for ki in range(k):
        for kj in range(k):
            if ki == 0 and kj == 0:
                continue
            cand = xp[ki:ki + h, kj:kj + w]
            better = cand > best
            best[better] = cand[better]
            arg[better] = ki * k + kj
    return best, arg


def window_max_backward(grad_out, arg, k):
    """Scatter-add sliding-window-max gradients back to input positions."""
    h, w = grad_out.shape
    r = k // 2
    ki = (arg // k).astype(np.intp)
    kj = (arg % k).astype(np.intp)
    ii, jj = np.indices((h, w))
    si = ii + ki - r
    sj = jj + kj - r
    inside = (si >= 0) & (si < h) & (sj >= 0) & (sj < w)
    grad_in = np.zeros((h, w), dtype=grad_out.dtype)
    np.add.at(grad_in, (si[inside], sj[inside]), grad_out[inside])
    return grad_in
