"""The Poisson-channel estimation loss and its mean-loss decomposition.

All logarithms are natural; losses are reported in nats.  Infinity is an
ordinary, propagatable value: no loss operation raises on infinite results.
"""

from __future__ import annotations

import math

import numpy as np

from .priors import DiscretePrior, moments

__all__ = ["loss", "loss0", "min_mean_loss", "loss_vec"]


def loss(x: float, xhat: float) -> float:
    """Estimation loss x*log(x/xhat) - x + xhat for non-negative x, xhat.

    Conventions: loss(0, xhat) = xhat, loss(x, 0) = inf for x > 0, and
    loss(0, 0) = 0.  Non-negative, zero iff x == xhat.
    """
    if x < 0.0 or xhat < 0.0:
        raise ValueError(f"loss requires non-negative arguments, got ({x}, {xhat})")
    if x == 0.0:
        # 0*log(0/xhat) = 0 by convention, computed by explicit branch because
        # IEEE 0*(-inf) would be NaN.
        return float(xhat)
    if xhat == 0.0:
        return math.inf
    return x * math.log(x / xhat) - x + xhat


def loss0(x: float) -> float:
    """Normalized loss x*log(x) - x + 1; equals loss(x, 1)."""
    if x < 0.0:
        raise ValueError(f"loss0 requires a non-negative argument, got {x}")
    if x == 0.0:
        return 1.0
    return x * math.log(x) - x + 1.0


def loss_vec(x, xhat) -> np.ndarray:
    """Broadcasting version of :func:`loss` for ndarray arguments."""
    x = np.asarray(x, dtype=float)
    xhat = np.asarray(xhat, dtype=float)
    if np.any(x < 0.0) or np.any(xhat < 0.0):
        raise ValueError("loss requires non-negative arguments")
    x, xhat = np.broadcast_arrays(x, xhat)
    zero_x = x == 0.0
    zero_hat = xhat == 0.0
    with np.errstate(divide="ignore", invalid="ignore"):
        body = x * np.log(np.where(zero_x | zero_hat, 1.0, x / np.where(zero_hat, 1.0, xhat)))
        body = body - x + xhat
    out = np.where(zero_x, xhat, np.where(zero_hat, np.inf, body))
    return out


def min_mean_loss(p: DiscretePrior) -> float:
    """Mean loss of the prior-mean estimator: E[X log X] - E[X] log E[X].

    This is the variance analogue under the estimation loss; it vanishes
    exactly on degenerate priors.
    """
    mean, mean_xlogx = moments(p)
    if mean == 0.0:
        return 0.0
    return mean_xlogx - mean * math.log(mean)
