"""Canonical DAGs, canonical ts-DAGs and the membership tests built on them."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import GraphError
from .graph import (
    HEAD,
    TAIL,
    GraphKind,
    ObservationScheme,
    TsDagTemplate,
    Vertex,
    WindowGraph,
    edge_difference,
    find_directed_cycle,
    validate_dmag,
)
from .marginal import ts_dmag
from .properties import stationarify

__all__ = [
    "canonical_dag",
    "canonical_ts_dag",
    "latent_labels",
    "is_ts_dmag",
    "is_stat_ts_dmag",
    "recover_from_stat",
    "MembershipReport",
]


def _require_directed(g: WindowGraph):
    if g.has_circles():
        raise GraphError("input has circle marks; only directed and bidirected edges are allowed")


def _regular_tau_max(g: WindowGraph) -> int:
    tau_max = -g.times[0]
    if g.times != tuple(range(-tau_max, 1)):
        raise GraphError(f"time set {list(g.times)} is not a regular window ending at 0")
    return tau_max


def canonical_dag(m: WindowGraph) -> WindowGraph:
    """Replace every ``a <-> b`` by ``a <- l -> b`` with a fresh latent ``l``.

    Latents become extra variables ``n_vars, n_vars+1, ...`` (one per
    bidirected edge, in canonical edge order) living at the earlier
    endpoint's time.
    """
    _require_directed(m)
    cyc = find_directed_cycle(m)
    if cyc:
        raise GraphError(f"input has a directed cycle: {cyc}")
    n = m.n_vars
    directed = []
    latent = 0
    for (a, b), (ma, mb) in m.edges.items():
        if ma is HEAD and mb is HEAD:
            lv = Vertex(n + latent, a.time)
            directed.append((lv, a, TAIL, HEAD))
            directed.append((lv, b, TAIL, HEAD))
            latent += 1
        else:
            directed.append((a, b, ma, mb))
    names = tuple(m.names) + tuple(f"l{k}" for k in range(latent))
    return WindowGraph(n + latent, m.times, directed, kind=GraphKind.DAG, names=names)


def latent_labels(g: WindowGraph):
    """Sorted ``(i, j, lag)`` patterns of the bidirected edges of ``stat(g)``."""
    out = set()
    for (a, b), (ma, mb) in stationarify(g).edges.items():
        if ma is HEAD and mb is HEAD:
            out.add((a.var, b.var, b.time - a.time))
    return sorted(out)


def canonical_ts_dag(g: WindowGraph, tau_max=None) -> TsDagTemplate:
    """Canonical ts-DAG of an acyclic directed mixed graph with a regular window.

    Directed edges of ``stat(g)`` become lagged edges. Each bidirected pattern
    ``(i, j, lag)`` becomes a latent series with edges to ``i`` at lag 0 and to
    ``j`` at lag ``lag``. Directed edges pointing backwards in time have no
    ts-DAG counterpart and are left out, so membership tests simply fail on
    such graphs.
    """
    _require_directed(g)
    window = _regular_tau_max(g)
    if tau_max is not None and tau_max != window:
        raise GraphError(f"graph window has tau_max={window}, not {tau_max}")
    cyc = find_directed_cycle(g)
    if cyc:
        raise GraphError(f"input has a directed cycle: {cyc}")
    st = stationarify(g)
    k = g.n_vars
    edges = set()
    for (a, b), (ma, mb) in st.edges.items():
        if ma is TAIL:
            edges.add((a.var, b.var, b.time - a.time))
        elif mb is TAIL and a.time == b.time:
            edges.add((b.var, a.var, 0))
    labels = latent_labels(g)
    names = list(g.names)
    for idx, (i, j, lag) in enumerate(labels):
        lv = k + idx
        edges.add((lv, i, 0))
        edges.add((lv, j, lag))
        names.append(f"L({g.names[i]},{g.names[j]},{lag})")
    return TsDagTemplate(k + len(labels), frozenset(edges), tuple(names))


@dataclass(frozen=True)
class MembershipReport:
    """Result of a ts-DMAG membership test.

    ``only_in_graph`` and ``only_in_marginal`` list typed edges ``(a, b,
    symbol)`` found on exactly one side. ``direction`` states how the
    canonical marginal relates to the graph: ``"equal"``,
    ``"proper_subgraph"``, ``"proper_supergraph"`` or ``"incomparable"``.
    """

    verdict: bool
    only_in_graph: tuple = ()
    only_in_marginal: tuple = ()
    direction: str = "equal"
    reason: str = ""
    template: TsDagTemplate = None
    marginal: WindowGraph = None

    def __bool__(self):
        return self.verdict


def _direction(only_g, only_m):
    if not only_g and not only_m:
        return "equal"
    if not only_m:
        return "proper_subgraph"
    if not only_g:
        return "proper_supergraph"
    return "incomparable"


@lru_cache(maxsize=4096)
def _marginal_of_stat(stat_graph: WindowGraph, names, tau_max: int):
    template = canonical_ts_dag(stat_graph.replace(names=names), tau_max)
    scheme = ObservationScheme(tuple(range(stat_graph.n_vars)), tau_max)
    return template, ts_dmag(template, scheme)


def _canonical_marginal(g: WindowGraph, tau_max: int):
    # the canonical ts-DAG only depends on stat(g), and class enumeration
    # produces many candidates sharing one stationarification
    if find_directed_cycle(g):
        raise GraphError("input has a directed cycle")
    return _marginal_of_stat(stationarify(g), g.names, tau_max)


def is_ts_dmag(m: WindowGraph, mode: str = "dmag") -> MembershipReport:
    """Decide whether ``m`` is the ts-DMAG of some ts-DAG.

    Parameters
    ----------
    m : WindowGraph
        Directed mixed graph on a regular window ``[-tau_max, 0]``.
    mode : {"dmag", "mixed"}
        ``"dmag"`` first checks that ``m`` is ancestral and maximal.
        ``"mixed"`` accepts any directed mixed graph and only requires
        acyclicity. The verdict is the same in both modes whenever both
        apply; the modes differ in the reported reason.

    Returns
    -------
    MembershipReport
    """
    _require_directed(m)
    tau_max = _regular_tau_max(m)
    if mode not in ("dmag", "mixed"):
        raise GraphError(f"unknown mode {mode!r}")
    if mode == "dmag":
        report = validate_dmag(m)
        if not report.valid:
            return MembershipReport(False, reason=f"not a DMAG: {report.violations[0][0]}")
    elif find_directed_cycle(m):
        return MembershipReport(False, reason="graph has a directed cycle")
    template, marginal = _canonical_marginal(m, tau_max)
    only_g = tuple(edge_difference(m, marginal))
    only_m = tuple(edge_difference(marginal, m))
    verdict = not only_g and not only_m
    return MembershipReport(
        verdict,
        only_g,
        only_m,
        _direction(only_g, only_m),
        "" if verdict else "graph differs from the marginal of its canonical ts-DAG",
        template,
        marginal,
    )


def is_stat_ts_dmag(m: WindowGraph) -> bool:
    """Is ``m`` the stationarification of some ts-DMAG?"""
    _require_directed(m)
    tau_max = _regular_tau_max(m)
    if find_directed_cycle(m):
        return False
    _, marginal = _canonical_marginal(m, tau_max)
    return stationarify(marginal) == m


def recover_from_stat(m_stat: WindowGraph) -> WindowGraph:
    """The unique ts-DMAG whose stationarification is ``m_stat``."""
    if not is_stat_ts_dmag(m_stat):
        raise GraphError("input is not a stationarified ts-DMAG")
    _, marginal = _canonical_marginal(m_stat, _regular_tau_max(m_stat))
    return marginal.replace(names=m_stat.names)
