"""Fixed-weight and self-learned combinations of dice and boundary losses.

The self-learning variant scales each component by 1/(2*alpha_i^2) and adds
|ln(alpha1*alpha2)|; the alphas start at 1 and are optimized jointly with the
network.  Without the log regularizer, inflating the alphas sends the
objective to zero without improving either component, which is exactly the
failure the regularizer exists to block.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import InvalidWeightError


def _sign(x):
    # subgradient 0 exactly at the |ln| kink
    return 0.0 if x == 0.0 else math.copysign(1.0, x)


@dataclass
class LossWeights:
    """Fixed mixing weight plus the two learnable component scales.

    alpha1/alpha2 are stored as log-parameters so they stay positive under
    unconstrained gradient steps; the exposed values are their exponentials.
    """

    alpha: float = 0.5
    log_alpha1: np.ndarray = field(default_factory=lambda: np.zeros(1, dtype=np.float64))
    log_alpha2: np.ndarray = field(default_factory=lambda: np.zeros(1, dtype=np.float64))

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise InvalidWeightError(f"alpha must lie in [0,1], got {self.alpha}")
        self.log_alpha1 = np.atleast_1d(np.asarray(self.log_alpha1, dtype=np.float64))
        self.log_alpha2 = np.atleast_1d(np.asarray(self.log_alpha2, dtype=np.float64))

    @property
    def alpha1(self):
        return float(np.exp(self.log_alpha1[0]))

    @property
    def alpha2(self):
        return float(np.exp(self.log_alpha2[0]))

    @property
    def w_dice(self):
        return 1.0 / (2.0 * self.alpha1 ** 2)

    @property
    def w_boundary(self):
        return 1.0 / (2.0 * self.alpha2 ** 2)


def combined_loss(l_dice, l_boundary, alpha):
    """alpha * dice + (1 - alpha) * boundary; endpoints return the component bitwise."""
    if not 0.0 <= alpha <= 1.0:
        raise InvalidWeightError(f"alpha must lie in [0,1], got {alpha}")
    if alpha == 1.0:
        return l_dice
    if alpha == 0.0:
        return l_boundary
    return alpha * l_dice + (1.0 - alpha) * l_boundary


@dataclass
class SlbaResult:
    value: float
    d_l_dice: float  # also the effective dice weight 1/(2*alpha1^2)
    d_l_boundary: float
    d_alpha1: float
    d_alpha2: float
    d_log_alpha1: float
    d_log_alpha2: float


def slba_loss(l_dice, l_boundary, weights):
    """Self-learning combination: see module docstring for the shape.

    Returns the value and all partials needed to update both the network
    (through the component-loss weights) and the log-alphas.
    """
    a1, a2 = weights.alpha1, weights.alpha2
    if a1 <= 0 or a2 <= 0:
        raise InvalidWeightError(f"alphas must be positive, got ({a1}, {a2})")
    w1 = 1.0 / (2.0 * a1 * a1)
    w2 = 1.0 / (2.0 * a2 * a2)
    ln_prod = math.log(a1 * a2)
    s = _sign(ln_prod)
    value = w1 * l_dice + w2 * l_boundary + abs(ln_prod)
    d_a1 = -l_dice / a1 ** 3 + s / a1
    d_a2 = -l_boundary / a2 ** 3 + s / a2
    return SlbaResult(
        value=value,
        d_l_dice=w1,
        d_l_boundary=w2,
        d_alpha1=d_a1,
        d_alpha2=d_a2,
        d_log_alpha1=d_a1 * a1,
        d_log_alpha2=d_a2 * a2,
    )


def fit_alpha_weights(l_dice, l_boundary, steps=2000, lr=0.03, stages=3,
                      regularizer=True, init=(1.0, 1.0)):
    """Gradient descent on (alpha1, alpha2) for *fixed* component losses.

    Staged step-size decay so the iterate settles onto the |ln| kink where
    the constrained optimum usually lives.  With ``regularizer=False`` this
    reproduces the runaway behaviour: the alphas only ever grow.
    """
    u = math.log(init[0])
    v = math.log(init[1])
    for stage in range(stages):
        step = lr * 0.1 ** stage
        for _ in range(steps):
            a1 = math.exp(u)
            a2 = math.exp(v)
            s = _sign(u + v) if regularizer else 0.0
            gu = -l_dice / a1 ** 2 + s
            gv = -l_boundary / a2 ** 2 + s
            u -= step * gu
            v -= step * gv
    return math.exp(u), math.exp(v)


def slba_objective(l_dice, l_boundary, alpha1, alpha2, regularizer=True):
    """The raw objective value at a given weight pair (used by grid searches)."""
    value = l_dice / (2 * alpha1 ** 2) + l_boundary / (2 * alpha2 ** 2)
    if regularizer:
        value += abs(math.log(alpha1 * alpha2))
    return value
