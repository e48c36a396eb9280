"""Shared construction helpers for randomized test instances."""

import numpy as np

from poischan.priors import DiscretePrior


def random_prior(rng, n_atoms=None, min_loc=0.05, max_loc=4.0):
    """Random atomic prior with distinct locations and normalized weights."""
    k = int(n_atoms) if n_atoms is not None else int(rng.integers(2, 6))
    while True:
        xs = np.sort(rng.uniform(min_loc, max_loc, size=k))
        if np.all(np.diff(xs) > 1e-6):
            break
    ws = rng.random(k) + 0.05
    ws /= ws.sum()
    return DiscretePrior(zip(xs.tolist(), ws.tolist()))


def random_prior_pair(rng, n_atoms=None, min_loc=0.05, max_loc=4.0):
    """Two priors over one shared location grid (so divergences are finite)."""
    p = random_prior(rng, n_atoms, min_loc, max_loc)
    ws = rng.random(p.n_atoms) + 0.05
    ws /= ws.sum()
    q = DiscretePrior(zip(p.xs.tolist(), ws.tolist()))
    return p, q
