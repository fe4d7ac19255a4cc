"""d-separation and m-separation, on finite windows and on infinite ts-DAGs.

All finite tests use walk reachability over states ``(vertex, mark at the
vertex on the edge used to arrive)``. A vertex is a collider on a walk when
both the arriving and the departing edge carry an arrowhead at it. Colliders
must be conditioned on and non-colliders must not be. On acyclic directed
mixed graphs this is equivalent to the existence of a connecting path.

For an infinite ts-DAG the past below every query vertex holds no
conditioned vertex, so any walk segment that dips into the deep past is a
collider-free trek. Whether two vertices near the boundary are joined by such
a trek reduces to a common-ancestor question, which is answered with
eventually periodic ancestor lag sets.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

from .errors import QueryError
from .graph import HEAD, TAIL, Vertex, TsDagTemplate, WindowGraph

_START = None


class SepQuery(NamedTuple):
    """A separation statement ``x _||_ y | cond``."""

    x: Vertex
    y: Vertex
    cond: frozenset = frozenset()

    @classmethod
    def make(cls, x, y, cond=()):
        x, y = Vertex(*x), Vertex(*y)
        cond = frozenset(Vertex(*c) for c in cond)
        if x == y:
            raise QueryError("query endpoints must differ")
        if x in cond or y in cond:
            raise QueryError("query endpoints may not be conditioned on")
        return cls(x, y, cond)


def walk_reachable(neighbors, x, cond, extra=None):
    """Vertices reachable from ``x`` by a connecting walk given ``cond``.

    Parameters
    ----------
    neighbors : callable
        ``neighbors(v)`` yields ``(w, mark_at_v, mark_at_w)``.
    x : Vertex
    cond : set of Vertex
    extra : callable, optional
        ``extra(v, arrival_mark)`` yields additional ``(w, arrival_mark_at_w)``
        transitions (used for deep-past shortcuts).

    Returns
    -------
    set of Vertex
    """
    seen = {(x, _START)}
    queue = deque(seen)
    reached = {x}
    while queue:
        v, arr = queue.popleft()
        in_cond = v in cond
        for w, mv, mw in neighbors(v):
            collider = arr is HEAD and mv is HEAD
            if collider != in_cond:
                continue
            state = (w, mw)
            if state not in seen:
                seen.add(state)
                reached.add(w)
                queue.append(state)
        if extra is not None and not in_cond:
            for w, mw in extra(v, arr):
                state = (w, mw)
                if state not in seen:
                    seen.add(state)
                    reached.add(w)
                    queue.append(state)
    return reached


def _check_query(g: WindowGraph, x, y, cond):
    q = SepQuery.make(x, y, cond)
    for v in (q.x, q.y, *q.cond):
        if not g.has_vertex(v):
            raise QueryError(f"{v} is not a vertex of the graph")
    return q


def d_separated_finite(g: WindowGraph, x, y, cond=()) -> bool:
    """d-separation in a finite DAG (or any acyclic directed mixed graph)."""
    q = _check_query(g, x, y, cond)
    if g.has_circles():
        raise QueryError("d-separation needs a graph without circle marks")
    return q.y not in walk_reachable(g.neighbors, q.x, q.cond)


def m_separated(g: WindowGraph, x, y, cond=()) -> bool:
    """m-separation in a DMAG.

    A vertex with arrowheads on both incident path edges is a collider; the
    walk formulation used here is equivalent to the usual path criterion
    where colliders must be ancestors of ``cond``.
    """
    q = _check_query(g, x, y, cond)
    if g.has_circles():
        raise QueryError("m-separation needs a graph without circle marks")
    return q.y not in walk_reachable(g.neighbors, q.x, q.cond)


# -- eventually periodic lag sets --------------------------------------------


@dataclass(frozen=True)
class LagSet:
    """Eventually periodic set of non-negative integers.

    ``x`` belongs to the set if ``x <= threshold`` and ``x in explicit``, or if
    ``x > threshold`` and ``x % period in residues``. A finite set has an
    empty ``residues``.
    """

    explicit: frozenset
    threshold: int
    period: int = 1
    residues: frozenset = frozenset()

    def __contains__(self, x) -> bool:
        if x < 0:
            return False
        if x <= self.threshold:
            return x in self.explicit
        return x % self.period in self.residues

    @property
    def is_finite(self) -> bool:
        return not self.residues

    def members(self, upto: int):
        """Sorted members not exceeding ``upto``."""
        return [x for x in range(upto + 1) if x in self]

    def __repr__(self):
        head = sorted(self.explicit)
        return (
            f"LagSet(explicit={head}, threshold={self.threshold}, "
            f"period={self.period}, residues={sorted(self.residues)})"
        )


def _lag_sets_for_target(n_vars, preds, j):
    """Lag sets ``L(i, j)`` for every source ``i`` and a fixed target ``j``.

    ``R[tau]`` is the bitmask of variables ``i`` with ``(i, -tau)`` an
    ancestor of ``(j, 0)``. It obeys a linear recurrence over the last ``p``
    masks, so the state sequence is eventually periodic and a repeated state
    pins down threshold and period exactly.
    """
    p = max((lag for lag in preds), default=0)
    contemp = preds.get(0, [0] * n_vars)

    def close0(mask):
        # backward closure along contemporaneous edges
        frontier = mask
        while frontier:
            new = 0
            k = 0
            f = frontier
            while f:
                if f & 1:
                    new |= contemp[k]
                f >>= 1
                k += 1
            new &= ~mask
            mask |= new
            frontier = new
        return mask

    def pred(lag, mask):
        table = preds.get(lag)
        if table is None:
            return 0
        out = 0
        k = 0
        while mask:
            if mask & 1:
                out |= table[k]
            mask >>= 1
            k += 1
        return out

    masks = [close0(1 << j)]
    if p == 0:
        return masks, 0, 1
    window = max(p, 1)
    state_index = {}
    tau = 0
    while True:
        state = tuple(masks[tau - window + 1 + k] if tau - window + 1 + k >= 0 else 0 for k in range(window))
        if state in state_index:
            first = state_index[state]
            return masks, tau, tau - first
        state_index[state] = tau
        tau += 1
        new = 0
        for lag in range(1, p + 1):
            if tau - lag >= 0:
                new |= pred(lag, masks[tau - lag])
        masks.append(close0(new))


class TsDagOracle:
    """Separation and ancestry queries on the infinite ts-DAG of a template.

    Caches lag sets and explicit windows; each instance owns its caches, so
    separate oracles never share mutable state.
    """

    def __init__(self, template: TsDagTemplate):
        self.template = template
        self.n = template.n_vars
        self.p = template.order
        preds = {}
        for i, j, lag in template.lagged_edges:
            table = preds.setdefault(lag, [0] * self.n)
            table[j] |= 1 << i
        self._preds = preds
        self._lags = {}
        self._common = {}
        self._zones = {}
        self._deep = None

    # ancestry ---------------------------------------------------------------

    def lag_set(self, i: int, j: int) -> LagSet:
        key = (i, j)
        if key not in self._lags:
            masks, thr, period = _lag_sets_for_target(self.n, self._preds, j)
            for src in range(self.n):
                explicit = frozenset(t for t in range(thr + 1) if masks[t] >> src & 1)
                if thr == 0 and self.p == 0:
                    residues = frozenset()
                else:
                    residues = frozenset(
                        t % period for t in range(thr - period + 1, thr + 1) if masks[t] >> src & 1
                    )
                self._lags[(src, j)] = LagSet(explicit, thr, period, residues)
        return self._lags[key]

    def is_ancestor(self, u, w) -> bool:
        """True if vertex ``u`` is an ancestor of vertex ``w`` (reflexive)."""
        d = w[1] - u[1]
        return d >= 0 and d in self.lag_set(u[0], w[0])

    def common_ancestor_delta(self, a: int, b: int, d: int) -> bool:
        """Do ``(a, d)`` and ``(b, 0)`` share an ancestor?"""
        key = (a, b, d)
        if key not in self._common:
            found = False
            for c in range(self.n):
                la, lb = self.lag_set(c, a), self.lag_set(c, b)
                bound = max(la.threshold, lb.threshold) + abs(d) + math.lcm(la.period, lb.period) + 1
                # ancestor (c, x): d - x in la and -x in lb, write s = -x >= max(0, -d)
                for s in range(max(0, -d), bound + 1):
                    if s in lb and d + s in la:
                        found = True
                        break
                if found:
                    break
            self._common[key] = found
        return self._common[key]

    def common_ancestor(self, u, w) -> bool:
        u, w = Vertex(*u), Vertex(*w)
        d = u.time - w.time
        if abs(d) > self.p:
            raise QueryError(f"vertices {u} and {w} are more than p={self.p} steps apart")
        return self.common_ancestor_delta(u.var, w.var, d)

    # separation ---------------------------------------------------------------

    def _zone(self, depth):
        zone = self._zones.get(depth)
        if zone is None:
            adj = {}
            for i, j, lag in self.template.lagged_edges:
                for s in range(-depth + lag, 1):
                    a, b = Vertex(i, s - lag), Vertex(j, s)
                    adj.setdefault(a, []).append((b, TAIL, HEAD))
                    adj.setdefault(b, []).append((a, HEAD, TAIL))
            zone = {v: tuple(nb) for v, nb in adj.items()}
            self._zones[depth] = zone
        return zone

    def _shortcuts(self):
        """Band partners reachable through the deep past, relative to the boundary.

        Band offsets run over ``-p .. -1``; the table is translation invariant
        and therefore computed once per oracle.
        """
        if self._deep is None:
            offsets = range(-self.p, 0)
            self._deep = {
                (a, oa): [(b, ob) for ob in offsets for b in range(self.n) if self.common_ancestor_delta(a, b, oa - ob)]
                for oa in offsets
                for a in range(self.n)
            }
        return self._deep

    def d_separated(self, x, y, cond=()) -> bool:
        q = SepQuery.make(x, y, cond)
        for v in (q.x, q.y, *q.cond):
            if v.time > 0:
                raise QueryError(f"{v} lies in the future of the reference time")
            if not 0 <= v.var < self.n:
                raise QueryError(f"{v} refers to an unknown variable")
        boundary = min(v.time for v in (q.x, q.y, *q.cond)) - 1
        low = boundary - self.p
        zone = self._zone(-low)
        empty = ()

        def neighbors(v):
            return zone.get(v, empty)

        shortcuts = self._shortcuts()

        def extra(v, arr):
            # leave a band vertex towards the deep past, which is only possible
            # as a non-collider, i.e. after arriving through a tail
            if arr is HEAD or not (low <= v.time < boundary):
                return ()
            return [(Vertex(w, boundary + off), HEAD) for w, off in shortcuts[(v.var, v.time - boundary)]]

        return q.y not in walk_reachable(neighbors, q.x, q.cond, extra)


@lru_cache(maxsize=256)
def oracle_for(template: TsDagTemplate) -> TsDagOracle:
    """Shared oracle per template (the cache itself is thread safe)."""
    return TsDagOracle(template)


def ancestor_lag_set(template: TsDagTemplate, i: int, j: int) -> LagSet:
    """Lags ``tau`` with ``(i, -tau)`` an ancestor of ``(j, 0)`` in the infinite ts-DAG."""
    return TsDagOracle(template).lag_set(i, j)


def common_ancestor(template: TsDagTemplate, u, w) -> bool:
    """Whether two vertices at most ``p`` steps apart share an ancestor."""
    return TsDagOracle(template).common_ancestor(u, w)


def d_separated_tsdag(template: TsDagTemplate, x, y, cond=()) -> bool:
    """Exact d-separation in the infinite ts-DAG generated by ``template``."""
    return oracle_for(template).d_separated(x, y, cond)
