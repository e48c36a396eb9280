"""Closed-form continuous-time quantities for constant ("DC") signals.

For a constant signal the total event count is a sufficient statistic (the
arrival positions of a constant-intensity process carry no information about
the amplitude), so every cumulative loss over [0, T] reduces to scalar-channel
quantities evaluated at rescaled SNR.  Closed forms are cross-validated
against quadrature on first use; quadrature is the source of truth on any
disagreement.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass

from .errors import TranscriptionError
from .loss import loss
from .priors import DiscretePrior
from .quadrature import integrate
from .scalar_channel import DEFAULT_POLICY, SeriesPolicy, mle

__all__ = [
    "DcModel",
    "ct_mle",
    "ct_cmle",
    "binary_dc_g",
    "binary_dc_cmle_closed",
    "halfdc_f",
    "halfdc_cmle_closed",
    "special_gudermannian",
    "special_dilog",
]

_LN2 = math.log(2.0)
_PI2_6 = math.pi**2 / 6.0

_CLOSED_FORM_TOL = 1e-8
_HALFDC_TOL = 1e-6

# First-use self-check results; filling is idempotent, so concurrent first
# calls are safe.
_checked_binary: set[tuple[float, float]] = set()
_checked_halfdc = threading.Event()


@dataclass(frozen=True)
class DcModel:
    """Constant signal with a random amplitude drawn from `prior`, on [0, horizon]."""

    prior: DiscretePrior
    horizon: float = 1.0

    def __post_init__(self):
        if not self.horizon > 0.0:
            raise ValueError("horizon must be positive")


def _check_same_horizon(p: DcModel, q: DcModel) -> float:
    if p.horizon != q.horizon:
        raise ValueError("models must share one horizon")
    return p.horizon


def ct_mle(p: DcModel, q: DcModel, gamma: float, policy: SeriesPolicy = DEFAULT_POLICY) -> float:
    """Cumulative smoothing loss over [0, T] with the q-optimal non-causal filter.

    Equals T times the scalar mean loss at SNR gamma*T: the full-path
    estimator depends on the observation only through the total count.
    """
    t = _check_same_horizon(p, q)
    return t * mle(p.prior, q.prior, gamma * t, policy)


def ct_cmle(
    p: DcModel,
    q: DcModel,
    gamma: float,
    policy: SeriesPolicy = DEFAULT_POLICY,
    tol: float = 1e-9,
) -> float:
    """Cumulative filtering loss over [0, T] with the q-optimal causal filter.

    The causal estimator at time t sees a count with parameter gamma*t, so
    the cumulative loss is the integral of the scalar mean loss over [0, T].
    """
    t = _check_same_horizon(p, q)
    if gamma == 0.0:
        return t * mle(p.prior, q.prior, 0.0, policy)
    res = integrate(lambda s: mle(p.prior, q.prior, gamma * s, policy), 0.0, t, tol=tol)
    return res.value


def _softplus(x: float) -> float:
    """log(1 + e^x), stable for large |x|."""
    return max(x, 0.0) + math.log1p(math.exp(-abs(x)))


def binary_dc_g(p: float, q: float, gamma: float) -> float:
    """Instantaneous mean loss for the binary DC signal under a mismatched belief.

    The truth puts mass p on amplitude 1 (else 0); the filter believes q.
    """
    if not 0.0 <= p <= 1.0 or not 0.0 <= q <= 1.0:
        raise ValueError("p and q must lie in [0, 1]")
    if gamma < 0.0:
        raise ValueError("gamma must be non-negative")
    if q == 0.0:
        # The believer expects a dead signal and estimates 0 forever.
        return math.inf if p > 0.0 else 0.0
    e = math.exp(-gamma)
    denom = 1.0 - q + q * e
    first = q * e * (1.0 - p) / denom
    # log(denom / (q e)) = log(denom) - log(q) + gamma, safe for large gamma
    bracket = math.log(denom) - math.log(q) + gamma - (1.0 - q) / denom
    return first + p * e * bracket


def binary_dc_cmle_closed(p: float, q: float, gamma: float) -> float:
    """Closed-form causal cumulative loss for the binary DC signal, T = 1.

    Self-checks against quadrature of :func:`binary_dc_g` on the first call
    for each (p, q); raises TranscriptionError (pointing at the quadrature
    path) on disagreement.
    """
    if not 0.0 <= p <= 1.0 or not 0.0 <= q <= 1.0:
        raise ValueError("p and q must lie in [0, 1]")
    if gamma < 0.0:
        raise ValueError("gamma must be non-negative")
    if gamma == 0.0:
        return binary_dc_g(p, q, 0.0)
    if q == 0.0:
        return math.inf if p > 0.0 else 0.0
    value = _binary_dc_cmle_formula(p, q, gamma)
    key = (float(p), float(q))
    if key not in _checked_binary:
        ref = integrate(lambda s: binary_dc_g(p, q, s), 0.0, gamma, tol=1e-11 * max(1.0, gamma))
        ref_value = ref.value / gamma
        if abs(value - ref_value) > _CLOSED_FORM_TOL * max(1.0, abs(ref_value)):
            raise TranscriptionError(
                f"binary DC closed form {value!r} disagrees with quadrature {ref_value!r} "
                f"at (p={p}, q={q}, gamma={gamma}); use ct_cmle (quadrature) instead",
                partial=ref_value,
            )
        _checked_binary.add(key)
    return value


def _binary_dc_cmle_formula(p: float, q: float, gamma: float) -> float:
    e = math.exp(-gamma)
    if q == 1.0:
        l1 = 0.0
    else:
        l1 = _softplus(gamma + math.log(1.0 / q - 1.0))  # log(1 + e^gamma (1/q - 1))
    l2 = math.log(1.0 - q + q * e)
    return (-p * e * l1 + p * math.log(1.0 / q) + (p - 1.0) * l2) / gamma


def halfdc_f(gamma: float) -> float:
    """Instantaneous mean loss for a deterministic amplitude 1/2 filtered under
    a fifty-fifty binary belief.

    Equals loss(1/2, 1) * P(some event) + loss(1/2, m(gamma)) * P(no event),
    with m the no-event believer estimate.
    """
    if gamma < 0.0:
        raise ValueError("gamma must be non-negative")
    a = loss(0.5, 1.0)
    sp = _softplus(gamma)
    m = math.exp(-sp)  # e^{-gamma} / (1 + e^{-gamma})
    # loss(1/2, m) written through softplus so it stays finite for large gamma
    loss_no_event = 0.5 * (math.log(0.5) + sp) - 0.5 + m
    e_half = math.exp(-0.5 * gamma)
    return a * (-math.expm1(-0.5 * gamma)) + loss_no_event * e_half


def halfdc_cmle_closed(gamma: float) -> float:
    """Closed-form causal cumulative loss matching quadrature of :func:`halfdc_f`.

    Assembled from the antiderivative pieces of the defining integral (the two
    Gudermannian terms cancel in the sum); self-checked against quadrature on
    first use, which is authoritative on disagreement.
    """
    if gamma < 0.0:
        raise ValueError("gamma must be non-negative")
    if gamma == 0.0:
        return 0.0
    value = _halfdc_cmle_formula(gamma)
    if not _checked_halfdc.is_set():
        ref = integrate(halfdc_f, 0.0, gamma, tol=1e-10 * max(1.0, gamma))
        ref_value = ref.value / gamma
        if abs(value - ref_value) > _HALFDC_TOL * max(1.0, abs(ref_value)):
            raise TranscriptionError(
                f"closed form {value!r} disagrees with quadrature {ref_value!r} at "
                f"gamma={gamma}; use ct_cmle (quadrature of halfdc_f) instead",
                partial=ref_value,
            )
        _checked_halfdc.set()
    return value


def _halfdc_cmle_formula(gamma: float) -> float:
    a = loss(0.5, 1.0)
    e = math.exp(-0.5 * gamma)
    sp = _softplus(gamma)
    gd = special_gudermannian(0.5 * gamma)
    base = a * gamma - (2.0 * a + _LN2 + 1.0) * (1.0 - e)
    piece_log = 2.0 * _LN2 - 2.0 * e * sp + 2.0 * gd  # int e^{-s/2} log(1+e^s) ds
    piece_rat = 2.0 - 2.0 * e - gd  # int e^{-s/2} / (1+e^s) ds
    return (base + 0.5 * piece_log + piece_rat) / gamma


def special_gudermannian(x: float) -> float:
    """Gudermannian function 2*arctan(e^x) - pi/2."""
    if x >= 0.0:
        return 0.5 * math.pi - 2.0 * math.atan(math.exp(-x))
    return 2.0 * math.atan(math.exp(x)) - 0.5 * math.pi


def _dilog_series(x: float) -> float:
    """Direct series sum_k x^k / k^2 for |x| <= 1/2."""
    total = 0.0
    term = x
    k = 1
    while abs(term) / (k * k) > 1e-18:
        total += term / (k * k)
        k += 1
        term *= x
        if k > 200:  # unreachable for |x| <= 1/2
            break
    return total


def special_dilog(x: float) -> float:
    """Real dilogarithm sum_{k>=1} x^k / k^2, defined for x <= 1.

    Arguments are reduced into |x| <= 1/2 (where the series converges
    geometrically) through the reflection, Landen, and inversion identities;
    accuracy is about 1e-15 absolute.
    """
    if x > 1.0:
        raise ValueError(f"dilogarithm is real only for x <= 1, got {x}")
    if x == 1.0:
        return _PI2_6
    if x < -1.0:
        # Li2(x) + Li2(1/x) = -pi^2/6 - log^2(-x)/2 for x < -1
        return -_PI2_6 - 0.5 * math.log(-x) ** 2 - special_dilog(1.0 / x)
    if x > 0.5:
        # reflection: Li2(x) + Li2(1-x) = pi^2/6 - log(x) log(1-x)
        return _PI2_6 - math.log(x) * math.log1p(-x) - _dilog_series(1.0 - x)
    if x < -0.5:
        # Landen: Li2(x) = -Li2(x/(x-1)) - log^2(1-x)/2
        return -_dilog_series(x / (x - 1.0)) - 0.5 * math.log1p(-x) ** 2
    return _dilog_series(x)
