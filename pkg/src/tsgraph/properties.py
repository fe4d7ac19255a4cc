"""Time-shift persistent properties of graphs with time series structure."""

from __future__ import annotations

import enum
from itertools import combinations

from .errors import GraphError
from .graph import HEAD, TAIL, Vertex, WindowGraph, ancestor_map, validate_dmag


class Property(enum.Enum):
    TIME_ORDERED = "TimeOrdered"
    REPEATING_EDGES = "RepeatingEdges"
    REPEATING_ADJACENCIES = "RepeatingAdjacencies"
    REPEATING_ORIENTATIONS = "RepeatingOrientations"
    REPEATING_ANCESTRAL = "RepeatingAncestral"
    PAST_REPEATING_ADJACENCIES = "PastRepeatingAdjacencies"
    REPEATING_SEPARATING_SETS = "RepeatingSeparatingSets"


def _as_property(prop):
    if isinstance(prop, Property):
        return prop
    for p in Property:
        if prop in (p.value, p.name):
            return p
    raise GraphError(f"unknown property {prop!r}")


def pair_pattern(a: Vertex, b: Vertex):
    """Translation-invariant pattern of a canonically ordered vertex pair."""
    return (a.var, b.var, b.time - a.time)


def _shift_pairs(g: WindowGraph, a: Vertex, b: Vertex, past_only=False):
    ts = g.time_set()
    for dt in range(g.times[0] - a.time, g.times[-1] - b.time + 1):
        if dt == 0 or (past_only and dt > 0):
            continue
        if a.time + dt in ts and b.time + dt in ts:
            yield a.shifted(dt), b.shifted(dt)


def is_time_ordered(g: WindowGraph) -> bool:
    """No edge with a tail at its later endpoint and a head at its earlier one."""
    for (a, b), (ma, mb) in g.edges.items():
        # canonical order puts a no later than b
        if a.time < b.time and mb is TAIL and ma is HEAD:
            return False
    return True


def _repeating(g, *, adjacency, orientation, past_only=False):
    for (a, b), m in g.edges.items():
        for a2, b2 in _shift_pairs(g, a, b, past_only):
            m2 = g.marks(a2, b2)
            if m2 is None:
                if adjacency:
                    return False
            elif orientation and m2 != m:
                return False
    return True


def has_repeating_ancestral(g: WindowGraph) -> bool:
    if g.has_circles():
        raise GraphError("RepeatingAncestral is undefined for graphs with circle marks")
    anc = ancestor_map(g)
    ts = g.time_set()
    for w, an_w in anc.items():
        for v in an_w:
            if v == w:
                continue
            for dt in range(g.times[0] - min(v.time, w.time), g.times[-1] - max(v.time, w.time) + 1):
                if dt and v.time + dt in ts and w.time + dt in ts:
                    if v.shifted(dt) not in anc[w.shifted(dt)]:
                        return False
    return True


def separation_classes(g: WindowGraph):
    """Group every ``(x, y, S)`` triple by translation.

    Yields lists of triples that are time shifts of one another and lie inside
    the window. Only classes with at least two members are yielded.
    """
    verts = g.vertices
    index = {v: k for k, v in enumerate(verts)}
    ts = g.time_set()
    seen = set()
    for x, y in combinations(verts, 2):
        rest = [v for v in verts if v != x and v != y]
        for r in range(len(rest) + 1):
            for s in combinations(rest, r):
                key = (x, y, s)
                if key in seen:
                    continue
                members = [(x, y, frozenset(s))]
                allv = (x, y) + s
                lo = min(v.time for v in allv)
                hi = max(v.time for v in allv)
                for dt in range(g.times[0] - lo, g.times[-1] - hi + 1):
                    if dt == 0 or not all(v.time + dt in ts for v in allv):
                        continue
                    x2, y2 = x.shifted(dt), y.shifted(dt)
                    s2 = tuple(sorted((v.shifted(dt) for v in s), key=index.__getitem__))
                    if index[x2] > index[y2]:
                        x2, y2 = y2, x2
                    seen.add((x2, y2, s2))
                    members.append((x2, y2, frozenset(s2)))
                if len(members) > 1:
                    yield members


def has_repeating_separating_sets(g: WindowGraph) -> bool:
    from .separation import m_separated

    if not validate_dmag(g).valid:
        raise GraphError("RepeatingSeparatingSets requires a valid DMAG")
    for members in separation_classes(g):
        answers = {m_separated(g, x, y, s) for x, y, s in members}
        if len(answers) > 1:
            return False
    return True


def check_property(g: WindowGraph, prop) -> bool:
    """Evaluate a time-shift persistent property on ``g``.

    Parameters
    ----------
    g : WindowGraph
    prop : Property or str
        Either a :class:`Property` member or its value, e.g. ``"RepeatingEdges"``.

    Returns
    -------
    bool
    """
    prop = _as_property(prop)
    if prop is Property.TIME_ORDERED:
        return is_time_ordered(g)
    if prop is Property.REPEATING_EDGES:
        return _repeating(g, adjacency=True, orientation=True)
    if prop is Property.REPEATING_ADJACENCIES:
        return _repeating(g, adjacency=True, orientation=False)
    if prop is Property.REPEATING_ORIENTATIONS:
        return _repeating(g, adjacency=False, orientation=True)
    if prop is Property.PAST_REPEATING_ADJACENCIES:
        return _repeating(g, adjacency=True, orientation=False, past_only=True)
    if prop is Property.REPEATING_ANCESTRAL:
        return has_repeating_ancestral(g)
    return has_repeating_separating_sets(g)


def stationarify(g: WindowGraph) -> WindowGraph:
    """Keep exactly the edges whose in-window time shifts all exist with the same type."""
    kept = {}
    for (a, b), m in g.edges.items():
        if all(g.marks(a2, b2) == m for a2, b2 in _shift_pairs(g, a, b)):
            kept[(a, b)] = m
    return g.replace(edges=kept)


__all__ = [
    "Property",
    "check_property",
    "stationarify",
    "pair_pattern",
    "is_time_ordered",
    "has_repeating_ancestral",
    "separation_classes",
]
