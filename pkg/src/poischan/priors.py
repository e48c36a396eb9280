"""Finite atomic input distributions (scalar and vector) and their information measures."""

from __future__ import annotations

import math
from typing import Callable, Iterable, Sequence

import numpy as np

__all__ = [
    "MAX_ATOMS",
    "DiscretePrior",
    "JointPrior",
    "kl_divergence",
    "entropy",
    "transform",
    "moments",
]

# Soft cap keeping vector-channel enumeration desk-scale.
MAX_ATOMS = 64

_WEIGHT_SUM_TOL = 1e-12


def _check_weights(ws: np.ndarray, max_atoms: int) -> None:
    if ws.size == 0:
        raise ValueError("prior needs at least one atom")
    if ws.size > max_atoms:
        raise ValueError(f"too many atoms ({ws.size} > {max_atoms})")
    if np.any(ws <= 0.0):
        raise ValueError("atom weights must be strictly positive")
    if abs(float(ws.sum()) - 1.0) > _WEIGHT_SUM_TOL:
        raise ValueError(f"atom weights must sum to 1, got {ws.sum()!r}")


class DiscretePrior:
    """Finite atomic distribution on the non-negative reals.

    Atoms are stored sorted by location.  Instances are immutable after
    construction and safe to share across threads.
    """

    __slots__ = ("xs", "ws")

    def __init__(self, atoms: Iterable[tuple[float, float]], *, max_atoms: int = MAX_ATOMS):
        pairs = sorted((float(x), float(w)) for x, w in atoms)
        xs = np.array([x for x, _ in pairs], dtype=float)
        ws = np.array([w for _, w in pairs], dtype=float)
        if np.any(xs < 0.0):
            raise ValueError("atom locations must be non-negative")
        if xs.size > 1 and np.any(np.diff(xs) == 0.0):
            raise ValueError("atom locations must be pairwise distinct")
        _check_weights(ws, max_atoms)
        xs.setflags(write=False)
        ws.setflags(write=False)
        self.xs = xs
        self.ws = ws

    @classmethod
    def delta(cls, x: float) -> "DiscretePrior":
        return cls([(x, 1.0)])

    @classmethod
    def uniform(cls, locations: Sequence[float]) -> "DiscretePrior":
        n = len(locations)
        return cls((x, 1.0 / n) for x in locations)

    @classmethod
    def from_weights(cls, locations: Sequence[float], weights: Sequence[float]) -> "DiscretePrior":
        return cls(zip(locations, weights))

    @property
    def n_atoms(self) -> int:
        return int(self.xs.size)

    @property
    def strictly_positive(self) -> bool:
        """Whether the support lies in (0, inf), i.e. no atom sits at zero."""
        return bool(self.xs[0] > 0.0)

    @property
    def atoms(self) -> list[tuple[float, float]]:
        return list(zip(self.xs.tolist(), self.ws.tolist()))

    def mean(self) -> float:
        return float(self.xs @ self.ws)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DiscretePrior):
            return NotImplemented
        return bool(
            self.xs.shape == other.xs.shape
            and np.array_equal(self.xs, other.xs)
            and np.array_equal(self.ws, other.ws)
        )

    def __hash__(self):
        return hash((self.xs.tobytes(), self.ws.tobytes()))

    def __repr__(self) -> str:
        pairs = ", ".join(f"({x:g}, {w:g})" for x, w in self.atoms)
        return f"DiscretePrior([{pairs}])"


class JointPrior:
    """Finite atomic distribution on non-negative vectors of a fixed dimension."""

    __slots__ = ("vectors", "ws")

    def __init__(self, atoms: Iterable[tuple[Sequence[float], float]], *, max_atoms: int = MAX_ATOMS):
        pairs = [(np.asarray(v, dtype=float), float(w)) for v, w in atoms]
        if not pairs:
            raise ValueError("prior needs at least one atom")
        dim = pairs[0][0].size
        if any(v.ndim != 1 or v.size != dim for v, _ in pairs):
            raise ValueError("all atom vectors must share one dimension")
        order = sorted(range(len(pairs)), key=lambda i: tuple(pairs[i][0]))
        vectors = np.stack([pairs[i][0] for i in order])
        ws = np.array([pairs[i][1] for i in order], dtype=float)
        if np.any(vectors < 0.0):
            raise ValueError("atom vectors must have non-negative entries")
        for a, b in zip(vectors[:-1], vectors[1:]):
            if np.array_equal(a, b):
                raise ValueError("atom vectors must be pairwise distinct")
        _check_weights(ws, max_atoms)
        vectors.setflags(write=False)
        ws.setflags(write=False)
        self.vectors = vectors
        self.ws = ws

    @classmethod
    def delta(cls, vector: Sequence[float]) -> "JointPrior":
        return cls([(vector, 1.0)])

    @property
    def dimension(self) -> int:
        return int(self.vectors.shape[1])

    @property
    def n_atoms(self) -> int:
        return int(self.ws.size)

    @property
    def atoms(self) -> list[tuple[list[float], float]]:
        return [(v.tolist(), float(w)) for v, w in zip(self.vectors, self.ws)]

    def mean(self) -> np.ndarray:
        return self.ws @ self.vectors

    def as_scalar(self) -> DiscretePrior:
        """View a one-dimensional joint prior as a scalar prior."""
        if self.dimension != 1:
            raise ValueError("as_scalar requires dimension 1")
        return DiscretePrior(zip(self.vectors[:, 0].tolist(), self.ws.tolist()))

    def __eq__(self, other) -> bool:
        if not isinstance(other, JointPrior):
            return NotImplemented
        return bool(
            self.vectors.shape == other.vectors.shape
            and np.array_equal(self.vectors, other.vectors)
            and np.array_equal(self.ws, other.ws)
        )

    def __hash__(self):
        return hash((self.vectors.tobytes(), self.ws.tobytes()))

    def __repr__(self) -> str:
        return f"JointPrior(dim={self.dimension}, atoms={self.n_atoms})"


def kl_divergence(p: DiscretePrior, q: DiscretePrior) -> float:
    """Relative entropy sum(p_i log(p_i / q_i)) with atoms matched by location.

    Atoms are matched by exact location equality (priors meant to be compared
    must share a location grid).  Returns inf when some p-atom has no q-atom
    at the same location.
    """
    q_by_loc = {float(x): float(w) for x, w in zip(q.xs, q.ws)}
    total = 0.0
    for x, w in zip(p.xs, p.ws):
        qw = q_by_loc.get(float(x))
        if qw is None:
            return math.inf
        total += float(w) * math.log(float(w) / qw)
    return total


def entropy(p: DiscretePrior) -> float:
    """Shannon entropy of the atom weights, in nats."""
    return float(-(p.ws @ np.log(p.ws)))


def transform(p: DiscretePrior, g: Callable[[float], float]) -> DiscretePrior:
    """Relocate atoms through a map that is one-to-one on the support.

    Weights are preserved, so the entropy is invariant.  Raises when two atom
    images collide (g not one-to-one on the support) or an image is negative.
    """
    images = [float(g(float(x))) for x in p.xs]
    if len(set(images)) != len(images):
        raise ValueError("map is not one-to-one on the support")
    return DiscretePrior(zip(images, p.ws.tolist()))


def moments(p: DiscretePrior) -> tuple[float, float]:
    """Return (E[X], E[X log X]), with the 0*log(0) = 0 convention."""
    mean = float(p.xs @ p.ws)
    pos = p.xs > 0.0
    mean_xlogx = float((p.ws[pos] * p.xs[pos] * np.log(p.xs[pos])).sum())
    return mean, mean_xlogx
