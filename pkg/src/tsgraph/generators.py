"""Seeded random ts-DAG templates and observation schemes for test corpora."""

from __future__ import annotations

import numpy as np

from .errors import GraphError
from .graph import ObservationScheme, TsDagTemplate


def random_ts_dag(n_vars: int, p: int, edge_density: float, seed=None) -> TsDagTemplate:
    """Draw a template with independent edge inclusion.

    Every lagged candidate ``(i, j, lag)`` with ``1 <= lag <= p`` (self lags
    included) is kept with probability ``edge_density``. Contemporaneous
    candidates only run forward along a random permutation of the variables,
    which keeps the contemporaneous part acyclic.

    Parameters
    ----------
    n_vars : int
    p : int
        Largest admissible lag.
    edge_density : float
        Inclusion probability in ``[0, 1]``.
    seed : int or numpy Generator, optional

    Returns
    -------
    TsDagTemplate
    """
    if not 0.0 <= edge_density <= 1.0:
        raise GraphError("edge_density must lie in [0, 1]")
    if n_vars < 1 or p < 0:
        raise GraphError("need n_vars >= 1 and p >= 0")
    rng = np.random.default_rng(seed)
    order = rng.permutation(n_vars)
    candidates = []
    for a in range(n_vars):
        for b in range(a + 1, n_vars):
            candidates.append((int(order[a]), int(order[b]), 0))
    for lag in range(1, p + 1):
        for i in range(n_vars):
            for j in range(n_vars):
                candidates.append((i, j, lag))
    keep = rng.random(len(candidates)) < edge_density
    edges = [c for c, k in zip(candidates, keep) if k]
    return TsDagTemplate(n_vars, frozenset(edges))


def random_instance(rng, max_vars=4, max_p=2, max_tau=3, max_latent=2, density=None):
    """One corpus entry: a template plus an observation scheme.

    At least one variable always stays observed.
    """
    rng = np.random.default_rng(rng)
    n_vars = int(rng.integers(1, max_vars + 1))
    p = int(rng.integers(0, max_p + 1))
    if density is None:
        density = float(rng.uniform(0.15, 0.6))
    template = random_ts_dag(n_vars, p, density, rng)
    n_latent = int(rng.integers(0, min(max_latent, n_vars - 1) + 1))
    latent = set(int(v) for v in rng.choice(n_vars, size=n_latent, replace=False))
    observed = tuple(i for i in range(n_vars) if i not in latent)
    tau_max = int(rng.integers(0, max_tau + 1))
    return template, ObservationScheme(observed, tau_max)


def random_corpus(size: int, seed=0, **kwargs):
    """``size`` reproducible ``(template, scheme)`` pairs."""
    rng = np.random.default_rng(seed)
    return [random_instance(rng, **kwargs) for _ in range(size)]
