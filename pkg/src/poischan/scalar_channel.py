"""Exact series computations for the scalar channel Y | X ~ Poisson(gamma * X).

All sums over the output alphabet run in log-space per atom (log-gamma for
factorials, max-subtraction for normalization) and are truncated by a
SeriesPolicy: stop at the smallest y covering all but tail_epsilon of the
output mass, no earlier than the mean plus ten standard deviations, then add
safety_terms extra terms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln, logsumexp

from .errors import ConsistencyError, SeriesConvergenceError
from .loss import loss_vec, min_mean_loss
from .priors import DiscretePrior, JointPrior, moments

__all__ = [
    "SeriesPolicy",
    "DEFAULT_POLICY",
    "output_pmf",
    "posterior_mean",
    "mle",
    "mmle",
    "output_kl",
    "mutual_information",
    "cond_output_entropy",
    "vec_output_kl",
    "vec_mle",
    "pair_merge_kl",
    "VEC_MAX_DIMENSION",
]

VEC_MAX_DIMENSION = 3

_MMLE_REL_TOL = 1e-9


@dataclass(frozen=True)
class SeriesPolicy:
    """Truncation policy for output-alphabet sums."""

    tail_epsilon: float = 1e-12
    max_terms: int = 10**6
    safety_terms: int = 20

    def __post_init__(self):
        if not 0.0 < self.tail_epsilon < 1.0:
            raise ValueError("tail_epsilon must lie in (0, 1)")
        if self.max_terms < 1:
            raise ValueError("max_terms must be at least 1")
        if self.safety_terms < 0:
            raise ValueError("safety_terms must be non-negative")


DEFAULT_POLICY = SeriesPolicy()


def _check_gamma(gamma: float) -> float:
    gamma = float(gamma)
    if gamma < 0.0 or not math.isfinite(gamma):
        raise ValueError(f"gamma must be finite and non-negative, got {gamma}")
    return gamma


def _log_joint(xs: np.ndarray, ws: np.ndarray, gamma: float, ys: np.ndarray) -> np.ndarray:
    """Matrix of log(w_i * Poisson(y; gamma*x_i)), shape (atoms, len(ys))."""
    gx = gamma * xs
    lw = np.log(ws)
    loggx = np.where(gx > 0.0, np.log(np.where(gx > 0.0, gx, 1.0)), -np.inf)
    # y * log(gx) with the 0 * (-inf) = 0 convention for the y = 0 column.
    with np.errstate(invalid="ignore"):
        ylog = np.where(ys[None, :] == 0.0, 0.0, ys[None, :] * loggx[:, None])
    return lw[:, None] + ylog - gx[:, None] - gammaln(ys + 1.0)[None, :]


def _y_grid(xs, ws, gamma, policy):
    """Truncated output grid for the law with atoms (xs, ws) at SNR gamma.

    Returns (ys, log_joint, log_pmf, converged).
    """
    gx_max = gamma * float(xs.max())
    floor_y = int(math.ceil(gx_max + 10.0 * math.sqrt(gx_max)))
    n = max(16, floor_y + policy.safety_terms + 4)
    while True:
        n = min(n, policy.max_terms)
        ys = np.arange(n + 1, dtype=float)
        lj = _log_joint(xs, ws, gamma, ys)
        lp = logsumexp(lj, axis=0)
        cum = np.cumsum(np.exp(lp))
        hit = np.nonzero(cum >= 1.0 - policy.tail_epsilon)[0]
        if hit.size:
            y_stop = max(int(hit[0]), floor_y) + policy.safety_terms
            if y_stop <= n:
                sl = slice(0, y_stop + 1)
                return ys[sl], lj[:, sl], lp[sl], True
        if n >= policy.max_terms:
            return ys, lj, lp, False
        n *= 2


def _posterior_means(xs: np.ndarray, lj: np.ndarray) -> np.ndarray:
    """Posterior mean of the atom location for each output column of lj."""
    z = lj.max(axis=0)
    w = np.exp(lj - np.where(np.isfinite(z), z, 0.0)[None, :])
    norm = w.sum(axis=0)
    means = np.where(norm > 0.0, (w * xs[:, None]).sum(axis=0) / np.where(norm > 0.0, norm, 1.0), 0.0)
    return means


def output_pmf(p: DiscretePrior, gamma: float, y: int) -> float:
    """P(Y = y) = sum_i w_i e^{-gamma x_i} (gamma x_i)^y / y!."""
    gamma = _check_gamma(gamma)
    y = int(y)
    if y < 0:
        raise ValueError("y must be a non-negative integer")
    lj = _log_joint(p.xs, p.ws, gamma, np.array([float(y)]))
    return float(np.exp(logsumexp(lj[:, 0])))


def posterior_mean(p: DiscretePrior, gamma: float, y: int) -> float:
    """E[X | Y = y] under prior p at SNR gamma."""
    gamma = _check_gamma(gamma)
    y = int(y)
    if y < 0:
        raise ValueError("y must be a non-negative integer")
    if gamma == 0.0:
        if y != 0:
            raise ValueError("conditioning on a zero-probability outcome")
        return p.mean()
    lj = _log_joint(p.xs, p.ws, gamma, np.array([float(y)]))[:, 0]
    z = float(lj.max())
    if not math.isfinite(z):
        raise ValueError(f"conditioning on a zero-probability outcome y={y}")
    w = np.exp(lj - z)
    return float((w @ p.xs) / w.sum())


def _estimator_table(q: DiscretePrior, gamma: float, ys: np.ndarray) -> np.ndarray:
    """E_q[X | Y = y] for every y in ys; identically 0 for the all-zero prior."""
    if float(q.xs.max()) == 0.0:
        return np.zeros(ys.size)
    ljq = _log_joint(q.xs, q.ws, gamma, ys)
    return _posterior_means(q.xs, ljq)


def _masked_expectation(joint: np.ndarray, values: np.ndarray) -> float:
    """sum(joint * values) treating 0 * inf as 0; inf with positive mass wins."""
    pos = joint > 0.0
    if np.any(pos & np.isinf(values)):
        return math.inf
    return float(np.where(pos, joint * np.where(np.isfinite(values), values, 0.0), 0.0).sum())


def mle(p: DiscretePrior, q: DiscretePrior, gamma: float, policy: SeriesPolicy = DEFAULT_POLICY) -> float:
    """Mean loss using the estimator optimal under q when the truth follows p.

    Returns inf when the q-estimator is 0 on an outcome where p puts
    posterior mass on positive locations.
    """
    gamma = _check_gamma(gamma)
    if gamma == 0.0:
        xhat = q.mean()
        return _masked_expectation(p.ws, loss_vec(p.xs, xhat))
    ys, ljp, _, converged = _y_grid(p.xs, p.ws, gamma, policy)
    qhat = _estimator_table(q, gamma, ys)
    losses = loss_vec(p.xs[:, None], qhat[None, :])
    value = _masked_expectation(np.exp(ljp), losses)
    if not converged:
        raise SeriesConvergenceError(
            f"series cap {policy.max_terms} hit before tail bound; partial sum {value!r}",
            partial=value,
        )
    return value


def mmle(p: DiscretePrior, gamma: float, policy: SeriesPolicy = DEFAULT_POLICY) -> float:
    """Minimum mean loss in estimating X from Y at SNR gamma (matched prior).

    Computed twice, as the matched mean loss and as
    E[X log X] - E[Xhat log Xhat]; the two routes must agree to 1e-9
    relative or a ConsistencyError is raised.
    """
    gamma = _check_gamma(gamma)
    direct = mle(p, p, gamma, policy)
    if gamma == 0.0:
        alt = min_mean_loss(p)
    else:
        _, mean_xlogx = moments(p)
        ys, ljp, lp, converged = _y_grid(p.xs, p.ws, gamma, policy)
        phat = _posterior_means(p.xs, ljp)
        with np.errstate(divide="ignore", invalid="ignore"):
            xlogx = np.where(phat > 0.0, phat * np.log(np.where(phat > 0.0, phat, 1.0)), 0.0)
        alt = mean_xlogx - float(np.exp(lp) @ xlogx)
        if not converged:
            raise SeriesConvergenceError(
                f"series cap {policy.max_terms} hit before tail bound; partial sum {alt!r}",
                partial=alt,
            )
    gap = abs(direct - alt)
    if gap > _MMLE_REL_TOL * max(abs(direct), abs(alt)) + 1e-12:
        raise ConsistencyError(
            f"minimum-mean-loss routes disagree: {direct!r} vs {alt!r} at gamma={gamma}",
            partial=direct,
        )
    return direct


def output_kl(p: DiscretePrior, q: DiscretePrior, gamma: float, policy: SeriesPolicy = DEFAULT_POLICY) -> float:
    """Relative entropy between the output laws of p and q at SNR gamma."""
    gamma = _check_gamma(gamma)
    if gamma == 0.0:
        return 0.0
    if float(q.xs.max()) == 0.0:
        # Output under q is identically 0; any positive p-location escapes it.
        return math.inf if float(p.xs.max()) > 0.0 else 0.0
    ys, _, lp, converged = _y_grid(p.xs, p.ws, gamma, policy)
    lq = logsumexp(_log_joint(q.xs, q.ws, gamma, ys), axis=0)
    pmf = np.exp(lp)
    value = _masked_expectation(pmf, lp - lq)
    if not converged:
        raise SeriesConvergenceError(
            f"series cap {policy.max_terms} hit before tail bound; partial sum {value!r}",
            partial=value,
        )
    return value


def mutual_information(p: DiscretePrior, gamma: float, policy: SeriesPolicy = DEFAULT_POLICY) -> float:
    """I(X; Y) = sum_i w_i D(output law given X=x_i || output law under p)."""
    gamma = _check_gamma(gamma)
    if gamma == 0.0:
        return 0.0
    total = 0.0
    for x, w in zip(p.xs, p.ws):
        total += float(w) * output_kl(DiscretePrior.delta(float(x)), p, gamma, policy)
    return total


def cond_output_entropy(p: DiscretePrior, gamma: float, policy: SeriesPolicy = DEFAULT_POLICY) -> float:
    """H(Y | X) = E[gamma X (1 - log(gamma X))] + E[sum_k Poisson(k; gamma X) log k!].

    The term for an atom at zero is zero.
    """
    gamma = _check_gamma(gamma)
    if gamma == 0.0:
        return 0.0
    total = 0.0
    for x, w in zip(p.xs, p.ws):
        lam = gamma * float(x)
        if lam == 0.0:
            continue
        xs = np.array([float(x)])
        ws = np.array([1.0])
        ys, _, lp, converged = _y_grid(xs, ws, gamma, policy)
        series = float(np.exp(lp) @ gammaln(ys + 1.0))
        if not converged:
            raise SeriesConvergenceError(
                f"series cap {policy.max_terms} hit before tail bound; partial sum {series!r}",
                partial=series,
            )
        total += float(w) * (lam * (1.0 - math.log(lam)) + series)
    return total


# -- vector channel (conditionally independent coordinates) -------------------


def _check_joint_pair(p: JointPrior, q: JointPrior) -> int:
    if p.dimension != q.dimension:
        raise ValueError("joint priors must share one dimension")
    n = p.dimension
    if n > VEC_MAX_DIMENSION:
        raise ValueError(f"vector channel supports dimension <= {VEC_MAX_DIMENSION}, got {n}")
    return n


def _axis_stop(values: np.ndarray, ws: np.ndarray, gamma: float, policy: SeriesPolicy) -> int:
    """Truncation point for one output coordinate with marginal intensity values."""
    ys, _, _, converged = _y_grid(values, ws, gamma, policy)
    if not converged:
        raise SeriesConvergenceError(f"series cap {policy.max_terms} hit on a coordinate grid")
    return int(ys[-1])


def _vec_log_joint(prior: JointPrior, gamma: float, ygrid: np.ndarray) -> np.ndarray:
    """log(w_a * prod_i Poisson(y_i; gamma a_i)) over a flat grid of y-tuples."""
    m, n = prior.vectors.shape
    k = ygrid.shape[0]
    base = -gammaln(ygrid + 1.0).sum(axis=1)
    out = np.empty((m, k))
    for a in range(m):
        row = np.full(k, math.log(prior.ws[a])) + base
        for i in range(n):
            lam = gamma * prior.vectors[a, i]
            yi = ygrid[:, i]
            if lam > 0.0:
                row += yi * math.log(lam) - lam
            else:
                row = np.where(yi == 0.0, row, -np.inf)
        out[a] = row
    return out


def _vec_grid(p: JointPrior, gamma: float, policy: SeriesPolicy) -> np.ndarray:
    stops = [
        _axis_stop(p.vectors[:, i].copy(), p.ws, gamma, policy)
        for i in range(p.dimension)
    ]
    axes = [np.arange(s + 1, dtype=float) for s in stops]
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1)


def vec_output_kl(p: JointPrior, q: JointPrior, gamma: float, policy: SeriesPolicy = DEFAULT_POLICY) -> float:
    """Relative entropy between the vector output laws of p and q."""
    gamma = _check_gamma(gamma)
    _check_joint_pair(p, q)
    if gamma == 0.0:
        return 0.0
    ygrid = _vec_grid(p, gamma, policy)
    lp = logsumexp(_vec_log_joint(p, gamma, ygrid), axis=0)
    lq = logsumexp(_vec_log_joint(q, gamma, ygrid), axis=0)
    return _masked_expectation(np.exp(lp), lp - lq)


def vec_mle(p: JointPrior, q: JointPrior, gamma: float, policy: SeriesPolicy = DEFAULT_POLICY) -> float:
    """Summed per-coordinate mean loss using the q-optimal vector estimator."""
    gamma = _check_gamma(gamma)
    n = _check_joint_pair(p, q)
    if gamma == 0.0:
        xhat = q.mean()
        per_atom = loss_vec(p.vectors, xhat[None, :]).sum(axis=1)
        return _masked_expectation(p.ws, per_atom)
    ygrid = _vec_grid(p, gamma, policy)
    ljp = _vec_log_joint(p, gamma, ygrid)
    ljq = _vec_log_joint(q, gamma, ygrid)
    zq = ljq.max(axis=0)
    wq = np.exp(ljq - np.where(np.isfinite(zq), zq, 0.0)[None, :])
    norm = wq.sum(axis=0)
    safe = norm > 0.0
    qhat = (wq.T @ q.vectors) / np.where(safe, norm, 1.0)[:, None]
    qhat[~safe] = 0.0  # q-impossible outcome: estimator degenerates to 0
    total = 0.0
    for a in range(p.n_atoms):
        per_y = loss_vec(p.vectors[a][None, :], qhat).sum(axis=1)
        contrib = _masked_expectation(np.exp(ljp[a]), per_y)
        if math.isinf(contrib):
            return math.inf
        total += contrib
    return total


def pair_merge_kl(
    p: DiscretePrior, q: DiscretePrior, gamma: float, policy: SeriesPolicy = DEFAULT_POLICY
) -> tuple[float, float]:
    """KL for two conditionally independent looks versus one merged look.

    Returns (pair_kl, sum_kl): the divergence between the joint laws of
    (Y1, Y2), both Poisson(gamma X) given X, via two-dimensional enumeration,
    and the divergence between the laws of Y1 + Y2, i.e. a single look at SNR
    2*gamma.  The two agree.
    """
    gamma = _check_gamma(gamma)
    lift_p = JointPrior([((x, x), w) for x, w in p.atoms])
    lift_q = JointPrior([((x, x), w) for x, w in q.atoms])
    pair_kl = vec_output_kl(lift_p, lift_q, gamma, policy)
    sum_kl = output_kl(p, q, 2.0 * gamma, policy)
    return pair_kl, sum_kl
