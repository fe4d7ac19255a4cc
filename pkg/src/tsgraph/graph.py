"""Vertices, edge marks, window graphs and ts-DAG templates.

A :class:`WindowGraph` is a finite directed partial mixed graph whose vertex
set is ``range(n_vars) x times``. Times are non-positive offsets from the
reference step 0. Each unordered vertex pair carries at most one edge, stored
once with its endpoints in canonical order (by ``(time, var)``), so two graphs
with the same edges compare equal regardless of how they were built.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

from .errors import GraphError


class Vertex(NamedTuple):
    var: int
    time: int

    def shifted(self, dt: int) -> "Vertex":
        return Vertex(self.var, self.time + dt)

    def __str__(self):
        return f"({self.var},{self.time})"


def vertex_key(v):
    """Canonical sort key: earlier first, then by variable index."""
    return (v[1], v[0])


class Mark(enum.Enum):
    TAIL = "tail"
    HEAD = "head"
    CIRCLE = "circle"


TAIL, HEAD, CIRCLE = Mark.TAIL, Mark.HEAD, Mark.CIRCLE

_LEFT = {TAIL: "-", HEAD: "<", CIRCLE: "o"}
_RIGHT = {TAIL: "-", HEAD: ">", CIRCLE: "o"}

EDGE_TYPES = {
    "-->": (TAIL, HEAD),
    "<--": (HEAD, TAIL),
    "<->": (HEAD, HEAD),
    "o->": (CIRCLE, HEAD),
    "<-o": (HEAD, CIRCLE),
    "o-o": (CIRCLE, CIRCLE),
}


def edge_symbol(mark_a: Mark, mark_b: Mark) -> str:
    """Render the marks of an edge ``a *-* b`` as a three character symbol."""
    return _LEFT[mark_a] + "-" + _RIGHT[mark_b]


def _check_marks(mark_a, mark_b):
    if mark_a is TAIL and mark_b is not HEAD or mark_b is TAIL and mark_a is not HEAD:
        raise GraphError(
            f"edge type {edge_symbol(mark_a, mark_b)!r} is not allowed in a directed "
            "partial mixed graph"
        )


class GraphKind(enum.Enum):
    DAG = "dag"
    MIXED = "mixed"
    DMAG = "dmag"
    DPAG = "dpag"


class WindowGraph:
    """Finite directed partial mixed graph over ``(variable, time)`` vertices.

    Parameters
    ----------
    n_vars : int
        Number of component time series; variables are ``0 .. n_vars-1``.
    times : iterable of int
        Time offsets of the window (regular or subsampled).
    edges : iterable
        Either ``(a, b, symbol)`` triples with ``symbol`` a key of
        :data:`EDGE_TYPES`, or ``(a, b, mark_at_a, mark_at_b)`` quadruples.
        A mapping ``{(a, b): (mark_at_a, mark_at_b)}`` is also accepted.
    kind : GraphKind
        Advisory tag. ``GraphKind.DAG`` is validated on construction.
    names : sequence of str, optional
        Display names of the variables. Not part of graph equality.

    Instances are immutable; all derived graphs are new objects.
    """

    __slots__ = ("n_vars", "times", "kind", "names", "_edges", "_adj", "_time_set", "_hash")

    def __init__(self, n_vars, times, edges=(), kind=GraphKind.MIXED, names=None):
        self.n_vars = int(n_vars)
        if self.n_vars < 1:
            raise GraphError("a window graph needs at least one variable")
        self.times = tuple(sorted({int(t) for t in times}))
        if not self.times:
            raise GraphError("a window graph needs at least one time step")
        self._time_set = frozenset(self.times)
        self.kind = kind
        if names is None:
            names = tuple(f"X{i}" for i in range(self.n_vars))
        self.names = tuple(names)
        if len(self.names) != self.n_vars:
            raise GraphError("names must have one entry per variable")

        if hasattr(edges, "items"):
            edges = [(a, b, ma, mb) for (a, b), (ma, mb) in edges.items()]
        store = {}
        for item in edges:
            if len(item) == 3:
                a, b, sym = item
                try:
                    ma, mb = EDGE_TYPES[sym]
                except KeyError:
                    raise GraphError(f"unknown edge type {sym!r}") from None
            else:
                a, b, ma, mb = item
            a, b = Vertex(*a), Vertex(*b)
            if a == b:
                raise GraphError(f"self-loop at {a}")
            for v in (a, b):
                if not self.has_vertex(v):
                    raise GraphError(f"edge endpoint {v} is not a vertex of the window")
            if vertex_key(a) > vertex_key(b):
                a, b, ma, mb = b, a, mb, ma
            _check_marks(ma, mb)
            if (a, b) in store and store[(a, b)] != (ma, mb):
                raise GraphError(f"conflicting edges between {a} and {b}")
            store[(a, b)] = (ma, mb)
        self._edges = dict(sorted(store.items(), key=lambda kv: (vertex_key(kv[0][0]), vertex_key(kv[0][1]))))

        adj = {}
        for (a, b), (ma, mb) in self._edges.items():
            adj.setdefault(a, []).append((b, ma, mb))
            adj.setdefault(b, []).append((a, mb, ma))
        self._adj = {v: tuple(nb) for v, nb in adj.items()}
        self._hash = None

        if kind is GraphKind.DAG:
            if self.has_circles() or any(ma is HEAD and mb is HEAD for ma, mb in self._edges.values()):
                raise GraphError("a DAG may only contain directed edges")
            cycle = find_directed_cycle(self)
            if cycle:
                raise GraphError(f"DAG contains a directed cycle: {cycle}")

    # -- basic queries -------------------------------------------------------

    def has_vertex(self, v) -> bool:
        return 0 <= v[0] < self.n_vars and v[1] in self._time_set

    @property
    def vertices(self):
        return tuple(Vertex(i, t) for t in self.times for i in range(self.n_vars))

    @property
    def edges(self):
        """Mapping ``{(a, b): (mark_at_a, mark_at_b)}`` in canonical order."""
        return dict(self._edges)

    def edge_list(self):
        return [(a, b, ma, mb) for (a, b), (ma, mb) in self._edges.items()]

    def __len__(self):
        return len(self._edges)

    def marks(self, a, b):
        """Marks ``(at a, at b)`` of the edge between ``a`` and ``b``, or None."""
        a, b = Vertex(*a), Vertex(*b)
        if vertex_key(a) <= vertex_key(b):
            return self._edges.get((a, b))
        m = self._edges.get((b, a))
        return None if m is None else (m[1], m[0])

    def adjacent(self, a, b) -> bool:
        return self.marks(a, b) is not None

    def edge_type(self, a, b):
        m = self.marks(a, b)
        return None if m is None else edge_symbol(*m)

    def neighbors(self, v):
        """Tuple of ``(w, mark_at_v, mark_at_w)`` for every edge at ``v``."""
        return self._adj.get(Vertex(*v), ())

    def parents(self, v):
        return [w for w, mv, mw in self.neighbors(v) if mw is TAIL and mv is HEAD]

    def children(self, v):
        return [w for w, mv, mw in self.neighbors(v) if mv is TAIL and mw is HEAD]

    def spouses(self, v):
        return [w for w, mv, mw in self.neighbors(v) if mv is HEAD and mw is HEAD]

    def has_circles(self) -> bool:
        return any(CIRCLE in m for m in self._edges.values())

    def skeleton(self):
        return frozenset(self._edges)

    def time_set(self):
        return self._time_set

    def replace(self, edges=None, kind=None, names=None) -> "WindowGraph":
        return WindowGraph(
            self.n_vars,
            self.times,
            self._edges if edges is None else edges,
            kind=self.kind if kind is None else kind,
            names=self.names if names is None else names,
        )

    # -- equality ------------------------------------------------------------

    def _key(self):
        return (self.n_vars, self.times, tuple(self._edges.items()))

    def __eq__(self, other):
        if not isinstance(other, WindowGraph):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._key())
        return self._hash

    def __repr__(self):
        body = ", ".join(f"{a}{edge_symbol(ma, mb)}{b}" for (a, b), (ma, mb) in self._edges.items())
        return f"WindowGraph(n_vars={self.n_vars}, times={list(self.times)}, edges=[{body}])"


def is_subgraph(small: WindowGraph, big: WindowGraph) -> bool:
    """True if every vertex and every typed edge of ``small`` is in ``big``."""
    if small.n_vars > big.n_vars or not set(small.times) <= set(big.times):
        return False
    return all(big.marks(a, b) == m for (a, b), m in small.edges.items())


def edge_difference(g1: WindowGraph, g2: WindowGraph):
    """Typed edges present in ``g1`` but not (with the same type) in ``g2``."""
    out = []
    for (a, b), (ma, mb) in g1.edges.items():
        if g2.marks(a, b) != (ma, mb):
            out.append((a, b, edge_symbol(ma, mb)))
    return out


# -- ancestry --------------------------------------------------------------


def _require_directed_mixed(g, what):
    if g.has_circles():
        raise GraphError(f"{what} is undefined for graphs with circle marks")


def ancestors_in(g: WindowGraph, v) -> frozenset:
    """Ancestors of ``v`` (including ``v``) along directed edges of ``g``."""
    _require_directed_mixed(g, "ancestry")
    v = Vertex(*v)
    if not g.has_vertex(v):
        raise GraphError(f"{v} is not a vertex of the graph")
    seen = {v}
    queue = deque([v])
    while queue:
        u = queue.popleft()
        for w in g.parents(u):
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return frozenset(seen)


def ancestor_map(g: WindowGraph):
    """``{v: an(v)}`` for every vertex of a graph without circle marks."""
    _require_directed_mixed(g, "ancestry")
    return {v: ancestors_in(g, v) for v in g.vertices}


def ancestors_of_set(g: WindowGraph, vs) -> frozenset:
    out = set()
    for v in vs:
        out |= ancestors_in(g, v)
    return frozenset(out)


def find_directed_cycle(g: WindowGraph):
    """Return a directed cycle as a vertex list, or None."""
    color = {}
    for root in g.vertices:
        if root in color:
            continue
        stack = [(root, iter(g.children(root)))]
        color[root] = 1
        path = [root]
        while stack:
            v, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                color[v] = 2
                stack.pop()
                path.pop()
                continue
            c = color.get(nxt)
            if c == 1:
                return path[path.index(nxt):] + [nxt]
            if c is None:
                color[nxt] = 1
                stack.append((nxt, iter(g.children(nxt))))
                path.append(nxt)
    return None


@dataclass(frozen=True)
class DmagReport:
    """Outcome of :func:`validate_dmag`.

    ``violations`` holds ``(kind, witness)`` pairs where ``kind`` is one of
    ``"directed_cycle"``, ``"almost_directed_cycle"`` or ``"inducing_path"``
    and ``witness`` is a vertex sequence.
    """

    ancestral: bool
    maximal: bool
    violations: tuple = ()

    @property
    def valid(self) -> bool:
        return self.ancestral and self.maximal

    def __bool__(self):
        return self.valid


def inducing_path(g: WindowGraph, x, y, anc=None):
    """Find an inducing path between ``x`` and ``y`` (relative to the empty set).

    Every non-endpoint vertex of the returned path is a collider on it and an
    ancestor of ``x`` or ``y``. Returns None if no such path exists.
    """
    x, y = Vertex(*x), Vertex(*y)
    if anc is None:
        anc = ancestor_map(g)
    allowed = (anc[x] | anc[y]) - {x, y}
    parent = {}
    queue = deque()
    for w, mx, mw in g.neighbors(x):
        if w in allowed and mw is HEAD:
            parent[w] = x
            queue.append(w)
    while queue:
        v = queue.popleft()
        m = g.marks(v, y)
        if m is not None and m[0] is HEAD:
            path = [y, v]
            while path[-1] != x:
                path.append(parent[path[-1]])
            return path[::-1]
        for w in g.spouses(v):
            if w in allowed and w not in parent:
                parent[w] = v
                queue.append(w)
    return None


def validate_dmag(g: WindowGraph) -> DmagReport:
    """Check that ``g`` is ancestral and maximal.

    Ancestral means no directed cycle and no bidirected edge between a vertex
    and one of its ancestors. Maximal means no inducing path between
    non-adjacent vertices.
    """
    if g.has_circles():
        raise GraphError("DMAG validation requires a graph without circle marks")
    anc = ancestor_map(g)
    violations = []
    for (a, b), (ma, mb) in g.edges.items():
        if ma is TAIL and a in anc[a] and b in anc[a]:
            cyc = find_directed_cycle(g)
            violations.append(("directed_cycle", tuple(cyc or (a, b))))
        elif mb is TAIL and a in anc[b]:
            cyc = find_directed_cycle(g)
            violations.append(("directed_cycle", tuple(cyc or (b, a))))
        elif ma is HEAD and mb is HEAD and (a in anc[b] or b in anc[a]):
            violations.append(("almost_directed_cycle", (a, b)))
    # dedupe cycle witnesses reported from several edges
    seen = set()
    violations = [v for v in violations if not (v in seen or seen.add(v))]
    ancestral = not violations
    maximal = True
    verts = g.vertices
    for i, x in enumerate(verts):
        for y in verts[i + 1:]:
            if g.adjacent(x, y):
                continue
            path = inducing_path(g, x, y, anc)
            if path is not None:
                maximal = False
                violations.append(("inducing_path", tuple(path)))
    return DmagReport(ancestral, maximal, tuple(violations))


# -- windows and time shifts -----------------------------------------------


def induced_window(g: WindowGraph, t1: int, t2: int) -> WindowGraph:
    """Induced subgraph on the vertices with ``t1 <= time <= t2``."""
    if t1 > t2:
        raise GraphError(f"empty window [{t1}, {t2}]")
    times = [t for t in g.times if t1 <= t <= t2]
    if not times:
        raise GraphError(f"window [{t1}, {t2}] contains no time step of the graph")
    keep = set(times)
    edges = {(a, b): m for (a, b), m in g.edges.items() if a.time in keep and b.time in keep}
    return WindowGraph(g.n_vars, times, edges, kind=g.kind, names=g.names)


def shift_times(g: WindowGraph, dt: int) -> WindowGraph:
    """Translate every vertex by ``dt`` time steps."""
    edges = {(a.shifted(dt), b.shifted(dt)): m for (a, b), m in g.edges.items()}
    return WindowGraph(g.n_vars, [t + dt for t in g.times], edges, kind=g.kind, names=g.names)


def scale_times(g: WindowGraph, factor) -> WindowGraph:
    """Relabel time ``t`` as ``t * factor``; ``factor`` may be a Fraction.

    Used to compare a subsampled window ``{0, -n, -2n, ...}`` with a regular
    window ``{0, -1, -2, ...}``.
    """

    def conv(t):
        s = t * factor
        if s != int(s):
            raise GraphError(f"time {t} does not scale to an integer by {factor}")
        return int(s)

    edges = {(Vertex(a.var, conv(a.time)), Vertex(b.var, conv(b.time))): m for (a, b), m in g.edges.items()}
    return WindowGraph(g.n_vars, [conv(t) for t in g.times], edges, kind=g.kind, names=g.names)


def valid_shifts(g: WindowGraph, vertices):
    """All non-zero ``dt`` such that every shifted vertex lies in ``g``."""
    vertices = list(vertices)
    lo = min(v.time for v in vertices)
    hi = max(v.time for v in vertices)
    ts = g.time_set()
    out = []
    for dt in range(g.times[0] - lo, g.times[-1] - hi + 1):
        if dt and all((v.time + dt) in ts for v in vertices):
            out.append(dt)
    return out


# -- templates and observation schemes -------------------------------------


@dataclass(frozen=True)
class TsDagTemplate:
    """Finite generator of an infinite ts-DAG.

    ``lagged_edges`` holds triples ``(i, j, lag)`` meaning
    ``(i, t - lag) -> (j, t)`` for every ``t``.
    """

    n_vars: int
    lagged_edges: frozenset = frozenset()
    names: tuple = field(default=None, compare=False)

    def __post_init__(self):
        edges = frozenset((int(i), int(j), int(lag)) for i, j, lag in self.lagged_edges)
        object.__setattr__(self, "lagged_edges", edges)
        if self.n_vars < 1:
            raise GraphError("a template needs at least one variable")
        names = self.names
        if names is None:
            names = tuple(f"X{i}" for i in range(self.n_vars))
        names = tuple(names)
        if len(names) != self.n_vars:
            raise GraphError("names must have one entry per variable")
        object.__setattr__(self, "names", names)
        for i, j, lag in edges:
            if not (0 <= i < self.n_vars and 0 <= j < self.n_vars):
                raise GraphError(f"edge {(i, j, lag)} refers to an unknown variable")
            if lag < 0:
                raise GraphError(f"edge {(i, j, lag)} points backwards in time")
            if lag == 0 and i == j:
                raise GraphError(f"contemporaneous self-loop on variable {i}")
        if self._contemporaneous_cycle():
            raise GraphError("contemporaneous edges contain a directed cycle")

    def _contemporaneous_cycle(self):
        succ = {i: [j for a, j, lag in self.lagged_edges if lag == 0 and a == i] for i in range(self.n_vars)}
        indeg = {i: 0 for i in range(self.n_vars)}
        for i in succ:
            for j in succ[i]:
                indeg[j] += 1
        queue = [i for i, d in indeg.items() if d == 0]
        done = 0
        while queue:
            i = queue.pop()
            done += 1
            for j in succ[i]:
                indeg[j] -= 1
                if indeg[j] == 0:
                    queue.append(j)
        return done != self.n_vars

    @property
    def order(self) -> int:
        """Largest lag of any edge (0 for an edgeless template)."""
        return max((lag for _, _, lag in self.lagged_edges), default=0)

    def sorted_edges(self):
        return sorted(self.lagged_edges, key=lambda e: (e[2], e[0], e[1]))

    def parents(self, j):
        return sorted((i, lag) for i, jj, lag in self.lagged_edges if jj == j)


@dataclass(frozen=True)
class ObservationScheme:
    """Observed variables plus a regular (``stride=1``) or subsampled window."""

    observed_vars: tuple
    tau_max: int
    stride: int = 1

    def __post_init__(self):
        obs = tuple(sorted({int(i) for i in self.observed_vars}))
        object.__setattr__(self, "observed_vars", obs)
        if not obs:
            raise GraphError("at least one variable must be observed")
        if self.tau_max < 0:
            raise GraphError("tau_max must be non-negative")
        if self.stride < 1:
            raise GraphError("stride must be a positive integer")

    @property
    def times(self):
        """Observed offsets ``-m * stride`` with ``0 <= m * stride <= tau_max``."""
        return tuple(sorted(-m for m in range(0, self.tau_max + 1, self.stride)))

    @classmethod
    def full(cls, template: TsDagTemplate, tau_max: int, stride: int = 1):
        return cls(tuple(range(template.n_vars)), tau_max, stride)


def unroll(template: TsDagTemplate, depth: int) -> WindowGraph:
    """Finite segment of the ts-DAG on offsets ``[-depth, 0]``."""
    if depth < 0:
        raise GraphError("depth must be non-negative")
    edges = []
    for i, j, lag in template.lagged_edges:
        for s in range(-depth + lag, 1):
            edges.append((Vertex(i, s - lag), Vertex(j, s), TAIL, HEAD))
    return WindowGraph(template.n_vars, range(-depth, 1), edges, kind=GraphKind.DAG, names=template.names)
