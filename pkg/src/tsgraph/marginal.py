"""Marginalizing ts-DAGs onto observed windows, and the sampling-scheme maps.

The marginal over an observed set ``O`` is built pair by pair. Two observed
vertices ``u`` and ``w`` are adjacent iff they are d-connected given
``S* = (an(u) | an(w)) & O - {u, w}``; if any observed set separates them,
this one does. The mark at ``u`` is a tail iff ``u`` is an ancestor of
``w`` in the underlying DAG, otherwise a head.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import GraphError, InvariantViolation
from .graph import (
    HEAD,
    TAIL,
    GraphKind,
    ObservationScheme,
    TsDagTemplate,
    Vertex,
    WindowGraph,
    ancestor_map,
    scale_times,
    unroll,
)
from .properties import stationarify
from .separation import d_separated_finite, oracle_for

__all__ = [
    "ts_dmag",
    "stationarify",
    "marginalize_window",
    "subsample_to_regular",
    "regular_to_subsample",
    "no_unobservable_window",
    "relabel_subsampled",
]


def ts_dmag(template: TsDagTemplate, scheme: ObservationScheme) -> WindowGraph:
    """ts-DMAG of ``template`` on the observed window described by ``scheme``.

    Observed variables are renumbered ``0 .. k-1`` in increasing order of
    their template index; display names are carried over.

    Parameters
    ----------
    template : TsDagTemplate
    scheme : ObservationScheme

    Returns
    -------
    WindowGraph
        Kind ``DMAG``, times ``scheme.times``.
    """
    obs = scheme.observed_vars
    if not obs:
        raise GraphError("the observed set is empty")
    if obs[-1] >= template.n_vars:
        raise GraphError(f"observed variable {obs[-1]} is not in the template")
    oracle = oracle_for(template)
    times = scheme.times
    verts = [Vertex(i, t) for t in times for i in obs]
    renum = {i: k for k, i in enumerate(obs)}
    anc = {w: frozenset(v for v in verts if oracle.is_ancestor(v, w)) for w in verts}
    edges = {}
    for a_idx, u in enumerate(verts):
        for w in verts[a_idx + 1:]:
            sep = (anc[u] | anc[w]) - {u, w}
            if oracle.d_separated(u, w, sep):
                continue
            mu = TAIL if u in anc[w] else HEAD
            mw = TAIL if w in anc[u] else HEAD
            edges[(Vertex(renum[u.var], u.time), Vertex(renum[w.var], w.time))] = (mu, mw)
    names = tuple(template.names[i] for i in obs)
    return WindowGraph(len(obs), times, edges, kind=GraphKind.DMAG, names=names)


def marginalize_window(dag: WindowGraph, keep_vars) -> WindowGraph:
    """Marginal DMAG of a finite DAG over all its vertices of ``keep_vars``.

    Kept variables are renumbered in increasing order.
    """
    keep_vars = sorted(set(keep_vars))
    if dag.has_circles():
        raise GraphError("marginalization needs a graph without circle marks")
    anc = ancestor_map(dag)
    renum = {i: k for k, i in enumerate(keep_vars)}
    verts = [Vertex(i, t) for t in dag.times for i in keep_vars]
    vset = set(verts)
    edges = {}
    for a_idx, u in enumerate(verts):
        for w in verts[a_idx + 1:]:
            sep = ((anc[u] | anc[w]) & vset) - {u, w}
            if d_separated_finite(dag, u, w, sep):
                continue
            mu = TAIL if u in anc[w] else HEAD
            mw = TAIL if w in anc[u] else HEAD
            edges[(Vertex(renum[u.var], u.time), Vertex(renum[w.var], w.time))] = (mu, mw)
    names = tuple(dag.names[i] for i in keep_vars)
    return WindowGraph(len(keep_vars), dag.times, edges, kind=GraphKind.DMAG, names=names)


def subsample_to_regular(template: TsDagTemplate, n: int) -> TsDagTemplate:
    """Template whose regularly sampled marginals match the stride-``n`` ones.

    Vertex ``(i, s)`` with ``s = q*n + r`` (``0 <= r < n``) becomes
    ``(i, q)`` when ``r == 0`` and ``(v(i, r), q)`` otherwise, where the new
    variable ``v(i, r)`` stands for the unobserved residue ``r`` copy of
    ``i``. Observed time steps are the multiples of ``n``, so compressing time
    by ``n`` keeps the observed part intact.
    """
    if n < 2:
        raise GraphError("stride must be at least 2")
    k = template.n_vars

    def var(i, r):
        return i if r == 0 else k + i * (n - 1) + (r - 1)

    edges = set()
    for i, j, lag in template.lagged_edges:
        for r_to in range(n):
            q_from, r_from = divmod(r_to - lag, n)
            edges.add((var(i, r_from), var(j, r_to), -q_from))
    names = list(template.names)
    for i in range(k):
        for r in range(1, n):
            names.append(f"({template.names[i]},{r})")
    return TsDagTemplate(k * n, frozenset(edges), tuple(names))


def regular_to_subsample(template: TsDagTemplate, n: int) -> TsDagTemplate:
    """Stretch every lag by ``n``; the stride-``n`` marginal of the result
    equals the regular marginal of ``template`` after dividing times by ``n``."""
    if n < 2:
        raise GraphError("stride must be at least 2")
    edges = frozenset((i, j, lag * n) for i, j, lag in template.lagged_edges)
    return TsDagTemplate(template.n_vars, edges, template.names)


def relabel_subsampled(g: WindowGraph, n: int) -> WindowGraph:
    """Map a stride-``n`` window ``{0, -n, ...}`` onto ``{0, -1, ...}``."""
    return scale_times(g, Fraction(1, n))


def no_unobservable_window(template: TsDagTemplate, tau_max: int) -> WindowGraph:
    """Stationarified ts-DMAG of a fully observed template.

    With nothing unobserved and ``tau_max >= p`` this must equal the plain
    unrolled window; a mismatch raises :class:`InvariantViolation`.
    """
    if tau_max < template.order:
        raise GraphError(f"tau_max={tau_max} is below the template order {template.order}")
    scheme = ObservationScheme.full(template, tau_max)
    result = stationarify(ts_dmag(template, scheme))
    if result != unroll(template, tau_max):
        raise InvariantViolation("stationarified marginal differs from the unrolled window")
    return result
